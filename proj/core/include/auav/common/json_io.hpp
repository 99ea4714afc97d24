#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace auav {

using nlohmann::json;

// Canonical encoding: sorted keys (nlohmann objects are ordered maps), compact separators.
std::string canonical_dump(const json& j);

json parse_json_text(std::string_view text, std::string_view what);
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j, int indent = 2);

// Writes to a temporary sibling and renames, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::vector<json> read_jsonl(const std::filesystem::path& path);

// Append-only JSON Lines sink. Lines are serialized through one mutex.
class JsonlWriter {
 public:
  JsonlWriter() = default;
  explicit JsonlWriter(const std::filesystem::path& path, bool truncate = true);

  void open(const std::filesystem::path& path, bool truncate = true);
  bool is_open() const { return out_.is_open(); }
  void write(const json& record);  // one line, flushed
  void flush();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

// Field access with a dotted path in error messages, e.g. "entities[2].behavior.tick".
namespace field {

const json& require(const json& j, std::string_view key, std::string_view path);
std::string join(std::string_view path, std::string_view key);
std::string index(std::string_view path, std::size_t i);
[[noreturn]] void throw_type_error(const std::string& where, const char* detail);

template <typename T>
T get(const json& j, std::string_view key, std::string_view path) {
  const json& v = require(j, key, path);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw_type_error(join(path, key), e.what());
  }
}

template <typename T>
T get_or(const json& j, std::string_view key, std::string_view path, T fallback) {
  if (!j.contains(key)) return fallback;
  return get<T>(j, key, path);
}

}  // namespace field

}  // namespace auav
