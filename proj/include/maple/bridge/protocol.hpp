#pragma once

// Console wire protocol. Every frame is one UTF-8 JSON object with keys in
// the fixed order op, seq, payload:
//   {"op":"action","seq":7,"payload":{"type":"pause_toggle"}}

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "maple/errors.hpp"
#include "maple/json_document.hpp"
#include "maple/session.hpp"

namespace maple::bridge {

namespace op {
// console -> engine
inline constexpr std::string_view hello = "hello";
inline constexpr std::string_view action = "action";
// engine -> console
inline constexpr std::string_view welcome = "welcome";
inline constexpr std::string_view state = "state";
inline constexpr std::string_view effect = "effect";
inline constexpr std::string_view summary = "summary";
inline constexpr std::string_view error = "error";
inline constexpr std::string_view status = "status";
}  // namespace op

inline constexpr std::array<std::string_view, 8> kKnownOps{
    op::hello, op::action, op::welcome, op::state, op::effect, op::summary, op::error, op::status};

inline bool is_known_op(std::string_view s) {
  for (auto k : kKnownOps)
    if (k == s) return true;
  return false;
}

struct WireMessage {
  std::string op;
  std::int64_t seq = 0;
  Json payload = Json::object();

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

class ProtocolError : public Error {
 public:
  enum class Code { malformed, unknown_op, bad_seq };

  ProtocolError(Code code, const std::string& message)
      : Error(name(code), message), kind_(code) {}

  Code kind() const { return kind_; }

  static std::string name(Code c) {
    switch (c) {
      case Code::malformed: return "MALFORMED";
      case Code::unknown_op: return "UNKNOWN_OP";
      case Code::bad_seq: return "BAD_SEQ";
    }
    return "MALFORMED";
  }

 private:
  Code kind_;
};

inline std::string encode_message(const WireMessage& msg) {
  Json j = Json::object();
  j["op"] = msg.op;
  j["seq"] = msg.seq;
  j["payload"] = msg.payload;
  return j.dump();
}

// Strict, stateless parse. Unknown payload keys are kept. Never throws
// anything but ProtocolError, whatever the input bytes.
inline WireMessage decode_message(std::string_view frame) {
  using C = ProtocolError::Code;
  Json j;
  try {
    j = Json::parse(frame.begin(), frame.end());
  } catch (const std::exception& e) {
    throw ProtocolError(C::malformed, std::string("not JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError(C::malformed, "frame is not a JSON object");
  auto op_it = j.find("op");
  if (op_it == j.end() || !op_it->is_string()) throw ProtocolError(C::malformed, "missing string 'op'");
  auto seq_it = j.find("seq");
  if (seq_it == j.end() || !seq_it->is_number_integer())
    throw ProtocolError(C::malformed, "missing integer 'seq'");
  if (seq_it->is_number_unsigned() && seq_it->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ProtocolError(C::malformed, "'seq' out of range");
  auto payload_it = j.find("payload");
  if (payload_it == j.end() || !payload_it->is_object())
    throw ProtocolError(C::malformed, "missing object 'payload'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "op" && it.key() != "seq" && it.key() != "payload")
      throw ProtocolError(C::malformed, "unexpected top-level key '" + it.key() + "'");

  WireMessage m;
  m.op = op_it->get<std::string>();
  m.seq = seq_it->get<std::int64_t>();
  if (m.seq < 0) throw ProtocolError(C::malformed, "'seq' must be non-negative");
  m.payload = *payload_it;
  if (!is_known_op(m.op)) throw ProtocolError(C::unknown_op, "unknown op '" + m.op + "'");

  if (m.op == op::action) {
    auto type = m.payload.find("type");
    if (type == m.payload.end() || !type->is_string())
      throw ProtocolError(C::malformed, "action needs a string 'type'");
    const auto t = type->get<std::string>();
    if (t == "answer") {
      auto choice = m.payload.find("choice");
      if (choice == m.payload.end() || !choice->is_number_integer())
        throw ProtocolError(C::malformed, "answer needs an integer 'choice'");
    } else if (t != "pause_toggle" && t != "shutdown") {
      throw ProtocolError(C::malformed, "unknown action type '" + t + "'");
    }
  }
  if (m.op == op::hello) {
    if (auto role = m.payload.find("role"); role != m.payload.end()) {
      if (!role->is_string()) throw ProtocolError(C::malformed, "'role' must be a string");
      const auto r = role->get<std::string>();
      if (r != "tutor" && r != "learner" && r != "observer")
        throw ProtocolError(C::malformed, "unknown role '" + r + "'");
    }
  }
  return m;
}

// Per-connection inbound decoder enforcing strictly increasing seq.
class InboundChannel {
 public:
  WireMessage decode(std::string_view frame) {
    WireMessage m = decode_message(frame);
    if (last_seq_ && m.seq <= *last_seq_)
      throw ProtocolError(ProtocolError::Code::bad_seq,
                          "seq " + std::to_string(m.seq) + " after " + std::to_string(*last_seq_));
    last_seq_ = m.seq;
    return m;
  }

  std::optional<std::int64_t> last_seq() const { return last_seq_; }

 private:
  std::optional<std::int64_t> last_seq_;
};

// Per-connection outbound sequencing (first message has seq 1).
class OutboundChannel {
 public:
  WireMessage make(std::string_view op, Json payload) {
    return WireMessage{std::string(op), ++last_seq_, std::move(payload)};
  }
  std::int64_t last_seq() const { return last_seq_; }

 private:
  std::int64_t last_seq_ = 0;
};

// Maps a decoded action to a session event. Answers are stamped with the
// engine-side receipt time.
inline Event action_event(const WireMessage& m, TimeMs receipt_wall_ms) {
  const auto type = m.payload.at("type").get<std::string>();
  if (type == "answer") return AnswerSelected{m.payload.at("choice").get<std::int64_t>(), receipt_wall_ms};
  if (type == "pause_toggle") return PauseToggled{};
  return Shutdown{};
}

// Payload of a "state" message describing what the console should show.
inline Json state_payload(const Session& s) {
  Json j = Json::object();
  const State* st = s.current_state();
  if (st == nullptr) {
    j["state_id"] = nullptr;
    j["kind"] = "finished";
  } else if (const auto* story = std::get_if<StoryState>(st)) {
    j["state_id"] = story->id;
    j["kind"] = "story";
    j["text"] = story->text;
    j["media"] = story->media ? Json(story->media->id) : Json(nullptr);
  } else {
    const auto& q = std::get<QuizState>(*st);
    j["state_id"] = q.id;
    j["kind"] = "quiz";
    j["prompt"] = q.prompt;
    j["options"] = q.options;
  }
  j["phase"] = std::string(to_string(s.phase()));
  j["paused"] = s.phase() == Phase::paused;
  j["clock_ms"] = s.clock_ms();
  return j;
}

}  // namespace maple::bridge
