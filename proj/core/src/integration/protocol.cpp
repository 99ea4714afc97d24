#include "auav/integration/protocol.hpp"

#include <cmath>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"

namespace auav::integration {

const char* to_string(AcpMessage::Kind k) {
  switch (k) {
    case AcpMessage::Kind::status: return "status";
    case AcpMessage::Kind::alert: return "alert";
    case AcpMessage::Kind::command_ack: return "command_ack";
  }
  return "?";
}

const char* to_string(A2aMessage::Performative p) {
  switch (p) {
    case A2aMessage::Performative::cfp: return "cfp";
    case A2aMessage::Performative::propose: return "propose";
    case A2aMessage::Performative::accept: return "accept";
    case A2aMessage::Performative::reject: return "reject";
    case A2aMessage::Performative::inform: return "inform";
  }
  return "?";
}

AcpMessage::Kind acp_kind_from_string(const std::string& s) {
  for (auto k : {AcpMessage::Kind::status, AcpMessage::Kind::alert, AcpMessage::Kind::command_ack}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::parse_error, "unknown ACP kind '" + s + "'");
}

A2aMessage::Performative performative_from_string(const std::string& s) {
  using P = A2aMessage::Performative;
  for (auto p : {P::cfp, P::propose, P::accept, P::reject, P::inform}) {
    if (s == to_string(p)) return p;
  }
  throw Error(ErrorCode::parse_error, "unknown performative '" + s + "'");
}

namespace {

void check_version(const std::string& v) {
  if (v != kProtocolVersion) {
    throw Error(ErrorCode::version_mismatch, "unsupported protocol version '" + v + "'");
  }
}

}  // namespace

void validate(const AcpMessage& m) {
  check_version(m.version);
  if (m.msg_id.empty()) throw Error(ErrorCode::validation_error, "ACP message without msg_id");
  if (!m.payload.is_object()) throw Error(ErrorCode::validation_error, "ACP payload must be an object");
  if (m.kind == AcpMessage::Kind::alert &&
      (!m.payload.contains("gps") || !m.payload.contains("image_ref"))) {
    throw Error(ErrorCode::validation_error, "alert payload needs gps and image_ref");
  }
}

void validate(const A2aMessage& m) {
  check_version(m.version);
  if (m.msg_id.empty()) throw Error(ErrorCode::validation_error, "A2A message without msg_id");
  if (!m.task.is_object()) throw Error(ErrorCode::validation_error, "A2A task must be an object");
  if (m.bid_cost && (!std::isfinite(*m.bid_cost) || *m.bid_cost < 0.0)) {
    throw Error(ErrorCode::validation_error, "bid_cost must be a non-negative number");
  }
  if (m.performative == A2aMessage::Performative::propose && !m.bid_cost) {
    throw Error(ErrorCode::validation_error, "propose without bid_cost");
  }
}

std::string encode_message(const Message& m) {
  json j;
  if (const auto* acp = std::get_if<AcpMessage>(&m)) {
    validate(*acp);
    j = {{"protocol", "acp"},        {"version", acp->version}, {"msg_id", acp->msg_id},
         {"from", acp->from},        {"to", acp->to},           {"kind", to_string(acp->kind)},
         {"payload", acp->payload}};
  } else {
    const auto& a2a = std::get<A2aMessage>(m);
    validate(a2a);
    j = {{"protocol", "a2a"},
         {"version", a2a.version},
         {"msg_id", a2a.msg_id},
         {"conversation_id", a2a.conversation_id},
         {"performative", to_string(a2a.performative)},
         {"task", a2a.task},
         {"sender", a2a.sender}};
    if (a2a.bid_cost) j["bid_cost"] = *a2a.bid_cost;
  }
  return canonical_dump(j);
}

Message decode_message(std::string_view bytes) {
  const json j = parse_json_text(bytes, "protocol message");
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "protocol message must be an object");
  try {
    check_version(j.at("version").get<std::string>());
    const std::string protocol = j.at("protocol").get<std::string>();
    if (protocol == "acp") {
      AcpMessage m;
      m.msg_id = j.at("msg_id").get<std::string>();
      m.from = j.at("from").get<std::string>();
      m.to = j.at("to").get<std::string>();
      m.kind = acp_kind_from_string(j.at("kind").get<std::string>());
      m.payload = j.at("payload");
      m.version = j.at("version").get<std::string>();
      validate(m);
      return m;
    }
    if (protocol == "a2a") {
      A2aMessage m;
      m.msg_id = j.at("msg_id").get<std::string>();
      m.conversation_id = j.at("conversation_id").get<std::string>();
      m.performative = performative_from_string(j.at("performative").get<std::string>());
      m.task = j.at("task");
      if (j.contains("bid_cost")) m.bid_cost = j.at("bid_cost").get<double>();
      m.sender = j.at("sender").get<std::string>();
      m.version = j.at("version").get<std::string>();
      validate(m);
      return m;
    }
    throw Error(ErrorCode::parse_error, "unknown protocol '" + protocol + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("protocol message: ") + e.what());
  }
}

}  // namespace auav::integration
