#include "auav/integration/auction.hpp"

#include <algorithm>
#include <set>

#include "auav/common/error.hpp"

namespace auav::integration {

double bid_cost(const Bidder& b, const Vec3& task_location, double battery_weight_s) {
  if (!(b.cruise_speed > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "bidder " + b.agent_id + " has no cruise speed");
  }
  const double battery = std::clamp(b.battery_fraction, 0.0, 1.0);
  return distance(b.position, task_location) / b.cruise_speed + (1.0 - battery) * battery_weight_s;
}

AuctionResult run_task_auction(const A2aMessage& cfp, const std::vector<Bidder>& peers,
                               NetworkSimulator& network, const AuctionParams& params, double now) {
  if (peers.empty()) throw Error(ErrorCode::invalid_argument, "auction needs at least one peer");
  if (cfp.performative != A2aMessage::Performative::cfp) {
    throw Error(ErrorCode::invalid_argument, "auction must start with a cfp");
  }
  validate(cfp);
  Vec3 location;
  try {
    location = cfp.task.at("location").get<Vec3>();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("cfp task needs a location: ") + e.what());
  }

  AuctionResult result;
  result.conversation_id = cfp.conversation_id;
  const std::string& manager = cfp.sender;
  const double deadline = now + params.deadline_s;
  int counter = 0;
  auto next_id = [&] { return cfp.conversation_id + "-" + std::to_string(++counter); };
  auto send = [&](const A2aMessage& m, const std::string& to, double at) {
    result.transcript.push_back(m);
    return network.send(m.sender, to, encode_message(m), at);
  };

  for (const auto& p : peers) send(cfp, p.agent_id, now);

  // Each peer answers when its cfp arrives. Anything arriving after the deadline is
  // ignored; the manager reads its inbox once, at the deadline.
  for (const auto& p : peers) {
    for (const auto& d : network.poll(p.agent_id, deadline)) {
      const Message m = decode_message(d.bytes);
      const auto* in = std::get_if<A2aMessage>(&m);
      if (in == nullptr || in->performative != A2aMessage::Performative::cfp ||
          in->conversation_id != cfp.conversation_id || !p.responsive) {
        continue;
      }
      A2aMessage propose;
      propose.msg_id = next_id();
      propose.conversation_id = cfp.conversation_id;
      propose.performative = A2aMessage::Performative::propose;
      propose.task = cfp.task;
      propose.bid_cost = bid_cost(p, location, params.battery_weight_s);
      propose.sender = p.agent_id;
      send(propose, manager, d.arrives_at);
    }
  }

  std::set<std::string> peer_ids;
  for (const auto& p : peers) peer_ids.insert(p.agent_id);
  for (const auto& d : network.poll(manager, deadline)) {
    const Message m = decode_message(d.bytes);
    const auto* in = std::get_if<A2aMessage>(&m);
    if (in == nullptr || in->performative != A2aMessage::Performative::propose ||
        in->conversation_id != cfp.conversation_id || !peer_ids.contains(in->sender)) {
      continue;
    }
    result.bids.emplace(in->sender, *in->bid_cost);
  }
  for (const auto& id : peer_ids) {
    if (!result.bids.contains(id)) result.excluded.push_back(id);
  }
  if (result.bids.empty()) {
    result.failure = "no proposals before the deadline";
    return result;
  }

  // std::map iterates ids in ascending order, so strict < keeps the lowest id on ties.
  auto best = result.bids.begin();
  for (auto it = result.bids.begin(); it != result.bids.end(); ++it) {
    if (it->second < best->second) best = it;
  }
  result.awarded = true;
  result.winner = best->first;
  result.winning_bid = best->second;
  for (const auto& [id, bid] : result.bids) {
    A2aMessage reply;
    reply.msg_id = next_id();
    reply.conversation_id = cfp.conversation_id;
    reply.performative =
        id == result.winner ? A2aMessage::Performative::accept : A2aMessage::Performative::reject;
    reply.task = cfp.task;
    reply.sender = manager;
    send(reply, id, deadline);
  }
  return result;
}

}  // namespace auav::integration
