#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "auav/common/rng.hpp"

namespace auav::integration {

struct NetworkParams {
  double latency_s = 0.05;  // base one-way latency
  double jitter_s = 0.0;    // uniform extra in [0, jitter_s)
  double drop_prob = 0.0;

  void validate() const;
};

struct Delivery {
  std::string from;
  std::string to;
  std::string bytes;
  double sent_at = 0.0;
  double arrives_at = 0.0;
  std::uint64_t seq = 0;
};

// Single scheduler owning all in-flight messages. Latency and drops are seeded.
// Among delivered messages, each (from, to) pair is FIFO: a message never arrives
// before one sent earlier on the same pair.
class NetworkSimulator {
 public:
  NetworkSimulator(NetworkParams params, Rng rng);

  // Returns the scheduled arrival time, or nullopt if the message was dropped.
  std::optional<double> send(const std::string& from, const std::string& to, std::string bytes,
                             double now);
  // Removes and returns messages for `to` that have arrived by `now`, in arrival order.
  std::vector<Delivery> poll(const std::string& to, double now);

  std::uint64_t sent() const { return sent_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t delivered() const { return delivered_; }
  std::size_t in_flight() const { return queue_.size(); }
  const NetworkParams& params() const { return params_; }

 private:
  NetworkParams params_;
  Rng rng_;
  std::vector<Delivery> queue_;
  std::map<std::pair<std::string, std::string>, double> last_arrival_;
  std::uint64_t seq_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t delivered_ = 0;
};

}  // namespace auav::integration
