#pragma once

// Append-only session record. On disk each entry is one JSON line:
//   {"at_ms": <active clock>, "kind": "<kind>", ...payload}

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maple/assets.hpp"
#include "maple/errors.hpp"
#include "maple/json_document.hpp"

namespace maple {

namespace log_kind {
inline constexpr std::string_view session_started = "session_started";
inline constexpr std::string_view state_entered = "state_entered";
inline constexpr std::string_view quiz_shown = "quiz_shown";
inline constexpr std::string_view quiz_answered = "quiz_answered";
inline constexpr std::string_view quiz_timeout = "quiz_timeout";
inline constexpr std::string_view pause = "pause";
inline constexpr std::string_view resume = "resume";
inline constexpr std::string_view word_exposure = "word_exposure";
inline constexpr std::string_view protocol_error = "protocol_error";
inline constexpr std::string_view session_finished = "session_finished";
}  // namespace log_kind

struct LogEntry {
  TimeMs at_ms = 0;
  std::string kind;
  Json payload = Json::object();

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

using SessionLog = std::vector<LogEntry>;

inline Json to_json(const LogEntry& e) {
  Json j = Json::object();
  j["at_ms"] = e.at_ms;
  j["kind"] = e.kind;
  for (auto it = e.payload.begin(); it != e.payload.end(); ++it) j[it.key()] = it.value();
  return j;
}

inline std::string to_ndjson(const SessionLog& log) {
  std::string out;
  for (const auto& e : log) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

// Throws ParseError; field paths read "line 3.at_ms".
inline SessionLog parse_ndjson_log(std::string_view text) {
  SessionLog log;
  std::size_t line_start = 0;
  std::size_t line_no = 0;
  while (line_start < text.size()) {
    std::size_t end = text.find('\n', line_start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(line_start, end - line_start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      try {
        auto doc = JsonDocument::parse(line);
        auto r = FieldReader::root(doc);
        r.expect_object();
        LogEntry e;
        e.at_ms = r.field("at_ms").as_int();
        e.kind = r.field("kind").as_string();
        for (auto it = r.node().begin(); it != r.node().end(); ++it)
          if (it.key() != "at_ms" && it.key() != "kind") e.payload[it.key()] = it.value();
        log.push_back(std::move(e));
      } catch (const ParseError& err) {
        throw ParseError(err.code(), "line " + std::to_string(line_no) +
                                         (err.field_path().empty() ? "" : "." + err.field_path()),
                         line_start + err.byte_offset(), err.what());
      }
    }
    line_start = end + 1;
  }
  return log;
}

inline SessionLog load_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot open log file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ndjson_log(ss.str());
}

}  // namespace maple
