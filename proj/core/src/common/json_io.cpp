#include "auav/common/json_io.hpp"

#include <sstream>

#include "auav/common/error.hpp"

namespace auav {

std::string canonical_dump(const json& j) { return j.dump(); }

json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j, int indent) {
  write_file_atomic(path, j.dump(indent) + "\n");
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse_error,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path, bool truncate) { open(path, truncate); }

void JsonlWriter::open(const std::filesystem::path& path, bool truncate) {
  std::scoped_lock lock(mutex_);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.close();
  out_.open(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
  if (!out_) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  path_ = path;
}

void JsonlWriter::write(const json& record) {
  std::scoped_lock lock(mutex_);
  if (!out_.is_open()) throw Error(ErrorCode::io_error, "jsonl writer not open");
  out_ << record.dump() << '\n';
  out_.flush();
}

void JsonlWriter::flush() {
  std::scoped_lock lock(mutex_);
  out_.flush();
}

namespace field {

std::string join(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return std::string(path) + "." + std::string(key);
}

std::string index(std::string_view path, std::size_t i) {
  return std::string(path) + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, std::string_view key, std::string_view path) {
  if (!j.is_object()) {
    throw Error(ErrorCode::parse_error,
                (path.empty() ? std::string("document") : std::string(path)) + ": expected object");
  }
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::parse_error, join(path, key) + ": missing field");
  return *it;
}

void throw_type_error(const std::string& where, const char* detail) {
  throw Error(ErrorCode::parse_error, where + ": " + detail);
}

}  // namespace field

}  // namespace auav
