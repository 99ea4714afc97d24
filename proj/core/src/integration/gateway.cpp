#include "auav/integration/gateway.hpp"

#include <chrono>

namespace auav::integration {

nlohmann::json to_json(const ToolCallEnvelope& e) {
  return {{"call_id", e.call_id},     {"tool_name", e.tool_name},
          {"args", e.args},           {"issued_by", e.issued_by},
          {"issued_at", e.issued_at}, {"context_scope", e.context_scope}};
}

nlohmann::json to_json(const ToolResult& r) {
  nlohmann::json j = {{"call_id", r.call_id},
                      {"status", r.ok() ? "ok" : "error"},
                      {"outputs", r.outputs},
                      {"latency", r.latency}};
  if (r.error_detail) j["error_detail"] = *r.error_detail;
  if (r.error_code) j["error_code"] = std::string(to_string(*r.error_code));
  return j;
}

nlohmann::json scope_context(const nlohmann::json& world_context,
                             const std::vector<std::string>& scope) {
  nlohmann::json out = nlohmann::json::object();
  if (!world_context.is_object()) return out;
  for (const auto& key : scope) {
    if (world_context.contains(key)) out[key] = world_context.at(key);
  }
  return out;
}

void ToolGateway::register_tool(ToolDescriptor descriptor, ToolFn fn) {
  std::lock_guard lock(mutex_);
  if (descriptor.name.empty()) throw Error(ErrorCode::invalid_argument, "tool name is empty");
  if (!fn) throw Error(ErrorCode::invalid_argument, "tool " + descriptor.name + " has no implementation");
  if (tools_.contains(descriptor.name)) {
    throw Error(ErrorCode::duplicate, "tool '" + descriptor.name + "' already registered");
  }
  const std::string name = descriptor.name;
  tools_.emplace(name, Entry{std::move(descriptor), std::move(fn)});
}

std::vector<ToolDescriptor> ToolGateway::catalog() const {
  std::lock_guard lock(mutex_);
  std::vector<ToolDescriptor> out;
  for (const auto& [name, e] : tools_) out.push_back(e.descriptor);
  return out;
}

std::set<std::string> ToolGateway::names() const {
  std::lock_guard lock(mutex_);
  std::set<std::string> out;
  for (const auto& [name, e] : tools_) out.insert(name);
  return out;
}

bool ToolGateway::has(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return tools_.contains(name);
}

std::string ToolGateway::next_call_id() {
  std::lock_guard lock(mutex_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "call-%04llu", static_cast<unsigned long long>(++call_counter_));
  return buf;
}

ToolResult ToolGateway::call(const ToolCallEnvelope& envelope, const nlohmann::json& world_context) {
  const auto start = std::chrono::steady_clock::now();
  ToolResult result;
  result.call_id = envelope.call_id;
  auto fail = [&](ErrorCode code, std::string detail) {
    result.status = ToolStatus::error;
    result.error_code = code;
    result.error_detail = std::move(detail);
    result.outputs = nlohmann::json::object();
  };

  ToolFn fn;
  {
    std::lock_guard lock(mutex_);
    auto it = tools_.find(envelope.tool_name);
    if (envelope.call_id.empty()) {
      fail(ErrorCode::invalid_argument, "call_id is empty");
    } else if (seen_call_ids_.contains(envelope.call_id)) {
      fail(ErrorCode::duplicate, "call_id '" + envelope.call_id + "' already used");
    } else if (it == tools_.end()) {
      fail(ErrorCode::not_found, "unknown tool '" + envelope.tool_name + "'");
    } else if (const std::string problem = it->second.descriptor.check_args(envelope.args);
               !problem.empty()) {
      fail(ErrorCode::validation_error, envelope.tool_name + ": " + problem);
    } else {
      fn = it->second.fn;
    }
    if (!envelope.call_id.empty()) seen_call_ids_.insert(envelope.call_id);
  }
  if (fn) {
    try {
      result.outputs = fn(envelope, scope_context(world_context, envelope.context_scope));
      if (!result.outputs.is_object()) {
        fail(ErrorCode::tool_failure, envelope.tool_name + " returned non-object outputs");
      }
    } catch (const std::exception& e) {
      fail(ErrorCode::tool_failure, envelope.tool_name + ": " + e.what());
    }
  }
  result.latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::lock_guard lock(mutex_);
  audit_.push_back({envelope, result});
  if (sink_) sink_->write({{"envelope", to_json(envelope)}, {"result", to_json(result)}});
  return result;
}

std::vector<AuditEntry> ToolGateway::audit_log() const {
  std::lock_guard lock(mutex_);
  return audit_;
}

std::size_t ToolGateway::audit_size() const {
  std::lock_guard lock(mutex_);
  return audit_.size();
}

void ToolGateway::attach_audit_sink(const std::filesystem::path& path) {
  std::lock_guard lock(mutex_);
  sink_ = std::make_unique<JsonlWriter>(path);
}

}  // namespace auav::integration
