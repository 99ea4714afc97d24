#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/integration/tool.hpp"

namespace auav::integration {

struct ToolCallEnvelope {
  std::string call_id;
  std::string tool_name;
  nlohmann::json args = nlohmann::json::object();
  std::string issued_by;
  double issued_at = 0.0;
  std::vector<std::string> context_scope;  // world-model keys the tool may read

  friend bool operator==(const ToolCallEnvelope&, const ToolCallEnvelope&) = default;
};

enum class ToolStatus { ok, error };

struct ToolResult {
  std::string call_id;
  ToolStatus status = ToolStatus::ok;
  nlohmann::json outputs = nlohmann::json::object();
  std::optional<std::string> error_detail;
  std::optional<ErrorCode> error_code;  // not_found, validation_error, duplicate, tool_failure
  double latency = 0.0;                 // seconds, wall clock

  bool ok() const { return status == ToolStatus::ok; }
};

nlohmann::json to_json(const ToolCallEnvelope& e);
nlohmann::json to_json(const ToolResult& r);

// A tool sees its envelope and only the scoped slice of the world model. Throwing
// anything maps to a tool_failure result.
using ToolFn = std::function<nlohmann::json(const ToolCallEnvelope&, const nlohmann::json& scoped)>;

struct AuditEntry {
  ToolCallEnvelope envelope;
  ToolResult result;
};

// Registry plus dispatcher. Every call, including rejected ones, is audited.
class ToolGateway {
 public:
  ToolGateway() = default;

  // Throws Error(duplicate) for a second registration under the same name.
  void register_tool(ToolDescriptor descriptor, ToolFn fn);

  std::vector<ToolDescriptor> catalog() const;
  std::set<std::string> names() const;
  bool has(const std::string& name) const;

  // Sequential ids "call-0001", ... unique within this gateway.
  std::string next_call_id();

  ToolResult call(const ToolCallEnvelope& envelope, const nlohmann::json& world_context);

  std::vector<AuditEntry> audit_log() const;
  std::size_t audit_size() const;
  // Mirrors audit entries to a JSON Lines file as they happen.
  void attach_audit_sink(const std::filesystem::path& path);

 private:
  struct Entry {
    ToolDescriptor descriptor;
    ToolFn fn;
  };
  mutable std::mutex mutex_;
  std::map<std::string, Entry> tools_;
  std::vector<AuditEntry> audit_;
  std::set<std::string> seen_call_ids_;
  std::uint64_t call_counter_ = 0;
  std::unique_ptr<JsonlWriter> sink_;
};

// Copies only the listed top-level keys of the world context.
nlohmann::json scope_context(const nlohmann::json& world_context, const std::vector<std::string>& scope);

}  // namespace auav::integration
