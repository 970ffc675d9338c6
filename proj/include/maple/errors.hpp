#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace maple {

// Base of every error the engine raises. `code()` is a stable, machine
// readable identifier (UPPER_SNAKE_CASE); what() is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed document: bad syntax, missing field, wrong type, bad value.
// `field_path` uses dotted/indexed notation, e.g. "states[0].correct_index".
class ParseError : public Error {
 public:
  ParseError(std::string code, std::string field_path, std::size_t byte_offset,
             const std::string& message)
      : Error(std::move(code), format(field_path, byte_offset, message)),
        field_path_(std::move(field_path)),
        byte_offset_(byte_offset) {}

  const std::string& field_path() const noexcept { return field_path_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  static std::string format(const std::string& path, std::size_t offset,
                            const std::string& message) {
    std::string out = "byte " + std::to_string(offset);
    if (!path.empty()) out += " (" + path + ")";
    return out + ": " + message;
  }

  std::string field_path_;
  std::size_t byte_offset_;
};

class UnknownMotion : public Error {
 public:
  explicit UnknownMotion(const std::string& name)
      : Error("UNKNOWN_MOTION", "unknown motion '" + name + "'") {}
};

class MissingDuration : public Error {
 public:
  explicit MissingDuration(const std::string& asset_id)
      : Error("MISSING_DURATION",
              "audio asset '" + asset_id + "' has no positive duration") {}
};

class UnknownPreset : public Error {
 public:
  explicit UnknownPreset(const std::string& name)
      : Error("UNKNOWN_PRESET", "unknown expression preset '" + name + "'") {}
};

class NotAudio : public Error {
 public:
  explicit NotAudio(const std::string& asset_id)
      : Error("NOT_AUDIO", "asset '" + asset_id + "' is not an audio asset") {}
};

class OverlapError : public Error {
 public:
  OverlapError(int motor, long long at_ms)
      : Error("OVERLAP", "motor " + std::to_string(motor) +
                             " commanded twice at t=" + std::to_string(at_ms)),
        motor_(motor),
        at_ms_(at_ms) {}

  int motor() const noexcept { return motor_; }
  long long at_ms() const noexcept { return at_ms_; }

 private:
  int motor_;
  long long at_ms_;
};

class MissingWordAudio : public Error {
 public:
  explicit MissingWordAudio(const std::string& word)
      : Error("MISSING_WORD_AUDIO",
              "no audio asset 'word_" + word + "' for target word") {}
};

class ScenarioMismatch : public Error {
 public:
  explicit ScenarioMismatch(const std::string& state_id)
      : Error("SCENARIO_MISMATCH",
              "log references quiz state '" + state_id +
                  "' which is not a quiz in the scenario") {}
};

}  // namespace maple
