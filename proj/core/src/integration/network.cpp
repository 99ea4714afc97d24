#include "auav/integration/network.hpp"

#include <algorithm>
#include <cmath>

#include "auav/common/error.hpp"

namespace auav::integration {

void NetworkParams::validate() const {
  if (!(latency_s >= 0.0) || !std::isfinite(latency_s)) {
    throw Error(ErrorCode::invalid_argument, "network latency must be >= 0");
  }
  if (!(jitter_s >= 0.0) || !std::isfinite(jitter_s)) {
    throw Error(ErrorCode::invalid_argument, "network jitter must be >= 0");
  }
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "drop probability must be in [0,1]");
  }
}

NetworkSimulator::NetworkSimulator(NetworkParams params, Rng rng)
    : params_(params), rng_(rng) {
  params_.validate();
}

std::optional<double> NetworkSimulator::send(const std::string& from, const std::string& to,
                                             std::string bytes, double now) {
  ++sent_;
  // Both draws happen for every message so the stream does not depend on outcomes.
  const double u_drop = rng_.uniform();
  const double jitter = params_.jitter_s * rng_.uniform();
  if (u_drop < params_.drop_prob) {
    ++dropped_;
    return std::nullopt;
  }
  double arrival = now + params_.latency_s + jitter;
  auto& last = last_arrival_[{from, to}];
  arrival = std::max(arrival, last);
  last = arrival;
  queue_.push_back({from, to, std::move(bytes), now, arrival, seq_++});
  return arrival;
}

std::vector<Delivery> NetworkSimulator::poll(const std::string& to, double now) {
  std::vector<Delivery> out;
  auto keep = std::stable_partition(queue_.begin(), queue_.end(), [&](const Delivery& d) {
    return !(d.to == to && d.arrives_at <= now);
  });
  out.assign(std::make_move_iterator(keep), std::make_move_iterator(queue_.end()));
  queue_.erase(keep, queue_.end());
  std::sort(out.begin(), out.end(), [](const Delivery& a, const Delivery& b) {
    return a.arrives_at != b.arrives_at ? a.arrives_at < b.arrives_at : a.seq < b.seq;
  });
  delivered_ += out.size();
  return out;
}

}  // namespace auav::integration
