#pragma once

#include <map>
#include <string>
#include <vector>

#include "auav/common/vec.hpp"
#include "auav/integration/network.hpp"
#include "auav/integration/protocol.hpp"

namespace auav::integration {

struct Bidder {
  std::string agent_id;
  Vec3 position;
  double battery_fraction = 1.0;
  double cruise_speed = 10.0;  // m/s
  bool responsive = true;      // an unresponsive peer never answers a cfp
};

struct AuctionParams {
  double deadline_s = 1.0;       // proposals must arrive within this window after the cfp
  double battery_weight_s = 10.0;
};

// Estimated travel time plus a penalty for a depleted battery.
double bid_cost(const Bidder& b, const Vec3& task_location, double battery_weight_s);

struct AuctionResult {
  bool awarded = false;
  std::string conversation_id;
  std::string winner;
  double winning_bid = 0.0;
  std::map<std::string, double> bids;  // proposals received before the deadline
  std::vector<std::string> excluded;   // peers with no proposal in time
  std::vector<A2aMessage> transcript;  // every message sent, in send order
  std::string failure;                 // set when !awarded
};

// Contract-net round: broadcast the cfp, collect proposals until the deadline, award the
// lowest bid (ties to the lowest agent id), reject the rest. All traffic goes through the
// network simulator as encoded messages. The cfp task must carry "location" as [x,y,z].
// Throws Error(invalid_argument) if there are no peers or the message is not a cfp.
AuctionResult run_task_auction(const A2aMessage& cfp, const std::vector<Bidder>& peers,
                               NetworkSimulator& network, const AuctionParams& params, double now);

}  // namespace auav::integration
