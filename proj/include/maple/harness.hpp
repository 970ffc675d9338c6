#pragma once

// Headless replay: feeds a time-stamped script of events into a session,
// with synthetic 10 ms ticks in between.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maple/session.hpp"

namespace maple {

inline constexpr TimeMs kHarnessTickMs = 10;
// Upper bound on simulated wall time after the last script event.
inline constexpr TimeMs kHarnessIdleLimitMs = 24LL * 60 * 60 * 1000;

struct ScriptedEvent {
  TimeMs at_ms = 0;  // wall time
  Event event;
  friend bool operator==(const ScriptedEvent&, const ScriptedEvent&) = default;
};

using Script = std::vector<ScriptedEvent>;

struct StepRecord {
  TimeMs wall_ms = 0;
  Event event;
  std::vector<Effect> effects;
  bool rejected = false;
};

class ScriptRunner {
 public:
  ScriptRunner(const Scenario& scenario, const MotionLibrary& motions, const PresetTable& presets)
      : session_(init(scenario, motions, presets)) {}

  const Session& session() const { return session_; }
  Session& session() { return session_; }
  const std::vector<StepRecord>& records() const { return records_; }
  std::vector<Effect> all_effects() const {
    std::vector<Effect> out = initial_effects_;
    for (const auto& r : records_) out.insert(out.end(), r.effects.begin(), r.effects.end());
    return out;
  }

  // Ticks forward until the session's wall clock reaches `wall_ms`.
  void advance_to(TimeMs wall_ms) {
    while (session_.wall_ms() < wall_ms) {
      TimeMs dt = std::min(kHarnessTickMs, wall_ms - session_.wall_ms());
      if (session_.finished()) dt = wall_ms - session_.wall_ms();
      deliver(Tick{dt});
    }
  }

  // Steps the session; an illegal event becomes a protocol_error entry.
  void deliver(const Event& event) {
    StepRecord rec{session_.wall_ms(), event, {}, false};
    try {
      rec.effects = session_.step(event);
    } catch (const IllegalEvent& err) {
      rec.effects = session_.record_protocol_error(err);
      rec.rejected = true;
    }
    records_.push_back(std::move(rec));
  }

  void play(const Script& script) {
    for (const auto& item : script) {
      advance_to(item.at_ms);
      deliver(item.event);
    }
  }

  // Runs until the session finishes or can no longer progress on its own.
  void run_to_end() {
    const TimeMs limit = session_.wall_ms() + kHarnessIdleLimitMs;
    while (!session_.finished() && !session_.stalled() && session_.wall_ms() < limit)
      deliver(Tick{kHarnessTickMs});
  }

 private:
  Session init(const Scenario& scenario, const MotionLibrary& motions, const PresetTable& presets) {
    auto [s, effects] = init_session(scenario, motions, presets);
    initial_effects_ = std::move(effects);
    return std::move(s);
  }

  std::vector<Effect> initial_effects_;
  Session session_;
  std::vector<StepRecord> records_;
};

// Replays `script` (sorted by time) and returns the final log.
inline SessionLog run_scripted(const Scenario& scenario, const MotionLibrary& motions,
                               const PresetTable& presets, const Script& script) {
  ScriptRunner runner(scenario, motions, presets);
  runner.play(script);
  runner.run_to_end();
  return runner.session().log();
}

// Script file: a JSON array of
//   {"at_ms": 1200, "type": "answer", "option": 1}
//   {"at_ms": 3000, "type": "pause_toggle"}
//   {"at_ms": 9000, "type": "shutdown"}
//   {"at_ms": 9100, "type": "element_done", "element": 3}
// sorted by at_ms. Answers are stamped with their at_ms as wall time.
inline Script parse_script(std::string_view text) {
  auto doc = JsonDocument::parse(text);
  auto root = FieldReader::root(doc);
  Script script;
  TimeMs last = 0;
  for (std::size_t i = 0, n = root.array_size(); i < n; ++i) {
    auto item = root.element(i);
    item.expect_object();
    item.reject_unknown({"at_ms", "type", "option", "element"});
    auto at = item.field("at_ms");
    const TimeMs t = at.as_int();
    if (t < 0) at.fail("BAD_VALUE", "at_ms must be >= 0");
    if (t < last) at.fail("BAD_VALUE", "script must be sorted by at_ms");
    last = t;
    auto type = item.field("type");
    const std::string ty = type.as_string();
    Event ev;
    if (ty == "answer")
      ev = AnswerSelected{item.field("option").as_int(), t};
    else if (ty == "pause_toggle")
      ev = PauseToggled{};
    else if (ty == "shutdown")
      ev = Shutdown{};
    else if (ty == "element_done")
      ev = ElementDone{item.field("element").as_int()};
    else
      type.fail("BAD_VALUE", "unknown event type '" + ty + "'");
    script.push_back({t, ev});
  }
  return script;
}

inline Json to_json(const Script& script) {
  Json arr = Json::array();
  for (const auto& s : script) {
    Json j{{"at_ms", s.at_ms}, {"type", std::string(event_name(s.event))}};
    if (const auto* a = std::get_if<AnswerSelected>(&s.event)) j["option"] = a->option_index;
    if (const auto* d = std::get_if<ElementDone>(&s.event)) j["element"] = d->element_id;
    arr.push_back(j);
  }
  return arr;
}

inline Script load_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot open script file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str());
}

}  // namespace maple
