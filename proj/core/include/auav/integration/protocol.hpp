#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

namespace auav::integration {

inline constexpr std::string_view kProtocolVersion = "1.0";

// Agent-to-operator/cloud messages.
struct AcpMessage {
  enum class Kind { status, alert, command_ack };

  std::string msg_id;
  std::string from;  // agent id, "operator" or "cloud"
  std::string to;
  Kind kind = Kind::status;
  nlohmann::json payload = nlohmann::json::object();
  std::string version{kProtocolVersion};

  friend bool operator==(const AcpMessage&, const AcpMessage&) = default;
};

// Peer-to-peer contract-net messages.
struct A2aMessage {
  enum class Performative { cfp, propose, accept, reject, inform };

  std::string msg_id;
  std::string conversation_id;
  Performative performative = Performative::cfp;
  nlohmann::json task = nlohmann::json::object();  // location, type
  std::optional<double> bid_cost;
  std::string sender;
  std::string version{kProtocolVersion};

  friend bool operator==(const A2aMessage&, const A2aMessage&) = default;
};

using Message = std::variant<AcpMessage, A2aMessage>;

const char* to_string(AcpMessage::Kind k);
const char* to_string(A2aMessage::Performative p);
AcpMessage::Kind acp_kind_from_string(const std::string& s);
A2aMessage::Performative performative_from_string(const std::string& s);

// Throws Error(validation_error) when an invariant does not hold: alerts need gps and
// image_ref in the payload, proposals need a non-negative finite bid_cost.
void validate(const AcpMessage& m);
void validate(const A2aMessage& m);

// Canonical JSON with sorted keys, a "protocol" discriminator ("acp" or "a2a") and a
// top-level "version".
std::string encode_message(const Message& m);
// Throws Error(parse_error) on malformed bytes and Error(version_mismatch) on an
// unrecognized version.
Message decode_message(std::string_view bytes);

}  // namespace auav::integration
