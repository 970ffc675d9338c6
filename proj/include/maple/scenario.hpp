#pragma once

// Scenario files: the ordered story/quiz states a session walks through.
//
// parse_scenario() only checks per-field syntax and types; graph and
// cross-reference checks live in validate_scenario() and come back as data.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "maple/assets.hpp"
#include "maple/behavior.hpp"
#include "maple/errors.hpp"
#include "maple/face.hpp"
#include "maple/json_document.hpp"

namespace maple {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr const char* kSupportiveFeedbackAudio = "feedback_try_again";
inline constexpr const char* kPointGesture = "point_at_screen";
inline constexpr const char* kNodGesture = "affirmative_nod";

struct TimedTransition {
  TimeMs duration_ms = 0;
  std::optional<std::string> next;
  friend bool operator==(const TimedTransition&, const TimedTransition&) = default;
};

// Next state decided by quiz resolution; legal on quiz states only.
struct AwaitInputTransition {
  friend bool operator==(const AwaitInputTransition&, const AwaitInputTransition&) = default;
};

using Transition = std::variant<TimedTransition, AwaitInputTransition>;

struct RepetitionPoint {
  std::string word;
  std::int64_t count = 3;
  bool deictic = false;
  friend bool operator==(const RepetitionPoint&, const RepetitionPoint&) = default;
};

struct StoryState {
  std::string id;
  std::optional<AssetRef> media;
  std::string text;
  std::optional<AssetRef> audio;
  std::optional<BehaviorSpec> behavior;
  std::optional<RepetitionPoint> repetition;
  Transition transition;
  friend bool operator==(const StoryState&, const StoryState&) = default;
};

enum class IncorrectPolicy { advance, retry_once };

inline BehaviorSpec default_correct_feedback() {
  BehaviorSpec b;
  b.face = PresetExpression{"happy"};
  b.gesture = kNodGesture;
  b.policy = SchedulingPolicy::parallel;
  return b;
}

inline BehaviorSpec default_incorrect_feedback() {
  BehaviorSpec b;
  b.face = PresetExpression{"frown"};
  b.speech = AssetRef{kSupportiveFeedbackAudio, AssetKind::audio, std::nullopt, std::nullopt};
  b.policy = SchedulingPolicy::parallel;
  return b;
}

struct QuizState {
  std::string id;
  std::string prompt;
  std::vector<std::string> options;
  std::int64_t correct_index = 0;
  std::optional<std::string> target_word;
  BehaviorSpec on_correct = default_correct_feedback();
  BehaviorSpec on_incorrect = default_incorrect_feedback();
  IncorrectPolicy incorrect_policy = IncorrectPolicy::advance;
  std::optional<TimeMs> timeout_ms;
  std::optional<std::string> next;
  friend bool operator==(const QuizState&, const QuizState&) = default;
};

using State = std::variant<StoryState, QuizState>;

inline const std::string& state_id(const State& s) {
  return std::visit([](const auto& st) -> const std::string& { return st.id; }, s);
}

inline bool is_quiz(const State& s) { return std::holds_alternative<QuizState>(s); }

// Successor ids named by a state (zero or one in this schema).
inline std::vector<std::string> successors(const State& s) {
  std::vector<std::string> out;
  if (const auto* story = std::get_if<StoryState>(&s)) {
    if (const auto* t = std::get_if<TimedTransition>(&story->transition))
      if (t->next) out.push_back(*t->next);
  } else {
    const auto& quiz = std::get<QuizState>(s);
    if (quiz.next) out.push_back(*quiz.next);
  }
  return out;
}

struct Scenario {
  std::string id;
  std::int64_t schema_version = kScenarioSchemaVersion;
  std::string title;
  std::vector<std::string> target_words;
  std::vector<State> states;
  std::string initial_state;
  std::vector<AssetRef> asset_manifest;

  const State* find_state(const std::string& sid) const {
    for (const auto& s : states)
      if (state_id(s) == sid) return &s;
    return nullptr;
  }

  std::optional<std::size_t> index_of(const std::string& sid) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (state_id(states[i]) == sid) return i;
    return std::nullopt;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
// Parsing

namespace scenario_detail {

inline AssetRef parse_asset(const FieldReader& r) {
  r.expect_object();
  r.reject_unknown({"id", "kind", "duration_ms", "visemes"});
  AssetRef a;
  a.id = r.field("id").as_string();
  auto kind_field = r.field("kind");
  auto kind = asset_kind_from_string(kind_field.as_string());
  if (!kind) kind_field.fail("BAD_VALUE", "kind must be image, audio or motion");
  a.kind = *kind;
  a.duration_ms = r.optional_int("duration_ms");
  if (r.has("visemes")) {
    auto vis = r.field("visemes");
    std::vector<VisemeEvent> events;
    for (std::size_t i = 0, n = vis.array_size(); i < n; ++i) {
      auto ev = vis.element(i);
      if (ev.array_size() != 2) ev.fail("WRONG_TYPE", "viseme event must be [at_ms, openness]");
      events.push_back({ev.element(0).as_int(), ev.element(1).as_number()});
    }
    a.visemes = std::move(events);
  }
  return a;
}

inline AssetRef asset_id_ref(const FieldReader& r, AssetKind kind) {
  return AssetRef{r.as_string(), kind, std::nullopt, std::nullopt};
}

inline ExpressionSpec parse_face(const FieldReader& r) {
  if (r.node().is_string()) return PresetExpression{r.as_string()};
  if (!r.node().is_object()) r.fail("WRONG_TYPE", "face must be a preset name or an AU object");
  ExplicitExpression e;
  for (auto it = r.node().begin(); it != r.node().end(); ++it) {
    auto v = r.field(it.key());
    int au = 0;
    try {
      std::size_t used = 0;
      au = std::stoi(it.key(), &used);
      if (used != it.key().size()) au = -1;
    } catch (const std::exception&) {
      au = -1;
    }
    if (!action_unit_slot(au)) v.fail("BAD_VALUE", "unsupported action unit '" + it.key() + "'");
    e.intensities[au] = v.as_number();
  }
  return e;
}

inline BehaviorSpec parse_behavior(const FieldReader& r) {
  r.expect_object();
  r.reject_unknown({"gesture", "speech", "face", "policy"});
  BehaviorSpec b;
  b.gesture = r.optional_string("gesture");
  if (r.has("speech")) b.speech = asset_id_ref(r.field("speech"), AssetKind::audio);
  if (r.has("face")) b.face = parse_face(r.field("face"));
  if (r.has("policy")) {
    auto p = r.field("policy");
    auto policy = policy_from_string(p.as_string());
    if (!policy) p.fail("BAD_VALUE", "unknown scheduling policy");
    b.policy = *policy;
  }
  return b;
}

inline Transition parse_transition(const FieldReader& r) {
  r.expect_object();
  auto type = r.field("type");
  const std::string t = type.as_string();
  if (t == "timed") {
    r.reject_unknown({"type", "duration_ms", "next"});
    return TimedTransition{r.field("duration_ms").as_int(), r.optional_string("next")};
  }
  if (t == "await_input") {
    r.reject_unknown({"type"});
    return AwaitInputTransition{};
  }
  type.fail("BAD_VALUE", "transition type must be 'timed' or 'await_input'");
}

inline StoryState parse_story(const FieldReader& r) {
  r.reject_unknown({"kind", "id", "media", "text", "audio", "behavior", "repetition", "transition"});
  StoryState s;
  s.id = r.field("id").as_string();
  if (r.has("media")) s.media = asset_id_ref(r.field("media"), AssetKind::image);
  if (r.has("text")) s.text = r.field("text").as_string();
  if (r.has("audio")) s.audio = asset_id_ref(r.field("audio"), AssetKind::audio);
  if (r.has("behavior")) s.behavior = parse_behavior(r.field("behavior"));
  if (r.has("repetition")) {
    auto rep = r.field("repetition");
    rep.expect_object();
    rep.reject_unknown({"word", "count", "deictic"});
    RepetitionPoint p;
    p.word = rep.field("word").as_string();
    if (rep.has("count")) p.count = rep.field("count").as_int();
    if (rep.has("deictic")) p.deictic = rep.field("deictic").as_bool();
    s.repetition = std::move(p);
  }
  s.transition = parse_transition(r.field("transition"));
  return s;
}

inline QuizState parse_quiz(const FieldReader& r) {
  r.reject_unknown({"kind", "id", "prompt", "options", "correct_index", "target_word", "on_correct",
                    "on_incorrect", "incorrect_policy", "timeout_ms", "next"});
  QuizState q;
  q.id = r.field("id").as_string();
  q.prompt = r.field("prompt").as_string();
  q.options = r.field("options").string_list();
  q.correct_index = r.field("correct_index").as_int();
  q.target_word = r.optional_string("target_word");
  if (r.has("on_correct")) q.on_correct = parse_behavior(r.field("on_correct"));
  if (r.has("on_incorrect")) q.on_incorrect = parse_behavior(r.field("on_incorrect"));
  if (r.has("incorrect_policy")) {
    auto p = r.field("incorrect_policy");
    const std::string v = p.as_string();
    if (v == "advance")
      q.incorrect_policy = IncorrectPolicy::advance;
    else if (v == "retry_once")
      q.incorrect_policy = IncorrectPolicy::retry_once;
    else
      p.fail("BAD_VALUE", "incorrect_policy must be 'advance' or 'retry_once'");
  }
  q.timeout_ms = r.optional_int("timeout_ms");
  q.next = r.optional_string("next");
  return q;
}

}  // namespace scenario_detail

// Throws ParseError (SYNTAX, MISSING_FIELD, WRONG_TYPE, UNKNOWN_FIELD,
// BAD_VALUE, UNSUPPORTED_SCHEMA_VERSION).
inline Scenario parse_scenario(std::string_view document) {
  using namespace scenario_detail;
  auto doc = JsonDocument::parse(document);
  auto root = FieldReader::root(doc);
  root.expect_object();
  root.reject_unknown(
      {"schema_version", "id", "title", "target_words", "initial_state", "assets", "states"});

  Scenario sc;
  auto version = root.field("schema_version");
  sc.schema_version = version.as_int();
  if (sc.schema_version != kScenarioSchemaVersion)
    version.fail("UNSUPPORTED_SCHEMA_VERSION",
                 "schema_version " + std::to_string(sc.schema_version) + " is not supported");
  sc.id = root.field("id").as_string();
  sc.title = root.has("title") ? root.field("title").as_string() : std::string{};
  if (root.has("target_words")) sc.target_words = root.field("target_words").string_list();
  sc.initial_state = root.field("initial_state").as_string();
  if (root.has("assets")) {
    auto assets = root.field("assets");
    for (std::size_t i = 0, n = assets.array_size(); i < n; ++i)
      sc.asset_manifest.push_back(parse_asset(assets.element(i)));
  }
  auto states = root.field("states");
  for (std::size_t i = 0, n = states.array_size(); i < n; ++i) {
    auto st = states.element(i);
    st.expect_object();
    auto kind = st.field("kind");
    const std::string k = kind.as_string();
    if (k == "story")
      sc.states.emplace_back(parse_story(st));
    else if (k == "quiz")
      sc.states.emplace_back(parse_quiz(st));
    else
      kind.fail("BAD_VALUE", "state kind must be 'story' or 'quiz'");
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization (inverse of parse_scenario for every parsed Scenario)

inline Json to_json(const ExpressionSpec& face) {
  if (const auto* p = std::get_if<PresetExpression>(&face)) return p->name;
  Json j = Json::object();
  for (const auto& [au, x] : std::get<ExplicitExpression>(face).intensities) j[std::to_string(au)] = x;
  return j;
}

inline Json to_json(const BehaviorSpec& b) {
  Json j = Json::object();
  if (b.gesture) j["gesture"] = *b.gesture;
  if (b.speech) j["speech"] = b.speech->id;
  if (b.face) j["face"] = to_json(*b.face);
  j["policy"] = std::string(to_string(b.policy));
  return j;
}

inline Json to_json(const AssetRef& a) {
  Json j = Json::object();
  j["id"] = a.id;
  j["kind"] = std::string(to_string(a.kind));
  if (a.duration_ms) j["duration_ms"] = *a.duration_ms;
  if (a.visemes) {
    Json v = Json::array();
    for (const auto& e : *a.visemes) v.push_back(Json::array({e.at_ms, e.mouth_openness}));
    j["visemes"] = v;
  }
  return j;
}

inline Json to_json(const State& state) {
  Json j = Json::object();
  if (const auto* s = std::get_if<StoryState>(&state)) {
    j["kind"] = "story";
    j["id"] = s->id;
    if (s->media) j["media"] = s->media->id;
    j["text"] = s->text;
    if (s->audio) j["audio"] = s->audio->id;
    if (s->behavior) j["behavior"] = to_json(*s->behavior);
    if (s->repetition)
      j["repetition"] = Json{{"word", s->repetition->word},
                             {"count", s->repetition->count},
                             {"deictic", s->repetition->deictic}};
    if (const auto* t = std::get_if<TimedTransition>(&s->transition)) {
      Json tj{{"type", "timed"}, {"duration_ms", t->duration_ms}};
      if (t->next) tj["next"] = *t->next;
      j["transition"] = tj;
    } else {
      j["transition"] = Json{{"type", "await_input"}};
    }
    return j;
  }
  const auto& q = std::get<QuizState>(state);
  j["kind"] = "quiz";
  j["id"] = q.id;
  j["prompt"] = q.prompt;
  j["options"] = q.options;
  j["correct_index"] = q.correct_index;
  if (q.target_word) j["target_word"] = *q.target_word;
  j["on_correct"] = to_json(q.on_correct);
  j["on_incorrect"] = to_json(q.on_incorrect);
  j["incorrect_policy"] = q.incorrect_policy == IncorrectPolicy::advance ? "advance" : "retry_once";
  if (q.timeout_ms) j["timeout_ms"] = *q.timeout_ms;
  if (q.next) j["next"] = *q.next;
  return j;
}

inline Json to_json(const Scenario& sc) {
  Json j = Json::object();
  j["schema_version"] = sc.schema_version;
  j["id"] = sc.id;
  j["title"] = sc.title;
  j["target_words"] = sc.target_words;
  j["initial_state"] = sc.initial_state;
  Json assets = Json::array();
  for (const auto& a : sc.asset_manifest) assets.push_back(to_json(a));
  j["assets"] = assets;
  Json states = Json::array();
  for (const auto& s : sc.states) states.push_back(to_json(s));
  j["states"] = states;
  return j;
}

inline std::string serialize_scenario(const Scenario& sc) { return to_json(sc).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  std::string code;
  std::optional<std::string> state_id;
  std::string message;
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool accepted() const { return errors.empty(); }

  bool has_error(std::string_view code, std::optional<std::string> state = std::nullopt) const {
    return std::any_of(errors.begin(), errors.end(), [&](const Finding& f) {
      return f.code == code && (!state || f.state_id == state);
    });
  }

  bool has_warning(std::string_view code) const {
    return std::any_of(warnings.begin(), warnings.end(),
                       [&](const Finding& f) { return f.code == code; });
  }

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

namespace scenario_detail {

class Collector {
 public:
  void error(std::string code, std::optional<std::size_t> state, std::optional<std::string> sid,
             std::string msg) {
    errors_.push_back({state, Finding{std::move(code), std::move(sid), std::move(msg)}});
  }
  void warning(std::string code, std::optional<std::size_t> state, std::optional<std::string> sid,
               std::string msg) {
    warnings_.push_back({state, Finding{std::move(code), std::move(sid), std::move(msg)}});
  }

  // Scenario-level findings first, then by state order, then by code;
  // discovery order breaks remaining ties.
  ValidationReport finish() {
    ValidationReport r;
    r.errors = sorted(errors_);
    r.warnings = sorted(warnings_);
    return r;
  }

 private:
  using Entry = std::pair<std::optional<std::size_t>, Finding>;

  static std::vector<Finding> sorted(std::vector<Entry> v) {
    std::stable_sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) {
      const long ka = a.first ? static_cast<long>(*a.first) : -1;
      const long kb = b.first ? static_cast<long>(*b.first) : -1;
      if (ka != kb) return ka < kb;
      return a.second.code < b.second.code;
    });
    std::vector<Finding> out;
    for (auto& e : v) out.push_back(std::move(e.second));
    return out;
  }

  std::vector<Entry> errors_;
  std::vector<Entry> warnings_;
};

}  // namespace scenario_detail

// Lists every violated invariant. Assets referenced by states are looked up
// in `assets`; the scenario's own manifest is not consulted implicitly.
inline ValidationReport validate_scenario(const Scenario& sc, const AssetIndex& assets) {
  scenario_detail::Collector c;
  const std::set<std::string> words(sc.target_words.begin(), sc.target_words.end());

  // Scenario-level.
  if (sc.states.empty()) c.error("EMPTY_SCENARIO", std::nullopt, std::nullopt, "scenario has no states");
  if (!sc.index_of(sc.initial_state))
    c.error("INITIAL_STATE_MISSING", std::nullopt, std::nullopt,
            "initial_state '" + sc.initial_state + "' is not a state");
  {
    std::set<std::string> seen;
    for (const auto& a : sc.asset_manifest) {
      if (!seen.insert(a.id).second)
        c.error("DUPLICATE_ASSET_ID", std::nullopt, std::nullopt, "asset '" + a.id + "' declared twice");
      if (a.kind == AssetKind::audio && (!a.duration_ms || *a.duration_ms <= 0))
        c.error("ASSET_MISSING_DURATION", std::nullopt, std::nullopt,
                "audio asset '" + a.id + "' needs a positive duration_ms");
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& w : sc.target_words)
      if (!seen.insert(w).second)
        c.warning("DUPLICATE_TARGET_WORD", std::nullopt, std::nullopt, "target word '" + w + "' listed twice");
  }
  const bool has_terminal = std::any_of(sc.states.begin(), sc.states.end(),
                                        [](const State& s) { return successors(s).empty(); });
  if (!sc.states.empty() && !has_terminal)
    c.error("NO_TERMINAL_STATE", std::nullopt, std::nullopt, "no state ends the scenario");

  // Reachability (BFS from the initial state).
  std::set<std::string> reachable;
  if (sc.index_of(sc.initial_state)) {
    std::deque<std::string> queue{sc.initial_state};
    reachable.insert(sc.initial_state);
    while (!queue.empty()) {
      const State* s = sc.find_state(queue.front());
      queue.pop_front();
      if (s == nullptr) continue;
      for (const auto& n : successors(*s))
        if (sc.find_state(n) && reachable.insert(n).second) queue.push_back(n);
    }
  }

  auto check_asset = [&](std::size_t idx, const std::string& sid, const AssetRef& ref,
                         AssetKind expected, const std::string& what) {
    const AssetRef* a = assets.find(ref.id);
    if (a == nullptr) {
      c.error("MISSING_ASSET", idx, sid, what + " asset '" + ref.id + "' is not in the asset index");
      return;
    }
    if (a->kind != expected)
      c.error("WRONG_ASSET_KIND", idx, sid,
              what + " asset '" + ref.id + "' must be " + std::string(to_string(expected)));
  };
  auto check_behavior = [&](std::size_t idx, const std::string& sid, const BehaviorSpec& b,
                            const std::string& what) {
    if (b.empty()) c.error("EMPTY_BEHAVIOR", idx, sid, what + " has no gesture, speech or face");
    if (b.speech) check_asset(idx, sid, *b.speech, AssetKind::audio, what + " speech");
  };

  std::set<std::string> seen_ids;
  std::set<std::string> used_words;
  for (std::size_t i = 0; i < sc.states.size(); ++i) {
    const State& st = sc.states[i];
    const std::string& sid = state_id(st);
    if (sid.empty()) c.error("EMPTY_STATE_ID", i, sid, "state id must not be empty");
    if (!seen_ids.insert(sid).second) c.error("DUPLICATE_STATE_ID", i, sid, "state id '" + sid + "' repeats");
    for (const auto& n : successors(st))
      if (!sc.find_state(n))
        c.error("UNKNOWN_TRANSITION_TARGET", i, sid, "transition to unknown state '" + n + "'");
    if (!reachable.count(sid))
      c.error("UNREACHABLE_STATE", i, sid, "state '" + sid + "' is not reachable from initial_state");

    if (const auto* s = std::get_if<StoryState>(&st)) {
      if (const auto* t = std::get_if<TimedTransition>(&s->transition)) {
        if (t->duration_ms <= 0) c.error("NONPOSITIVE_DURATION", i, sid, "timed duration must be > 0");
        if (s->audio) {
          const AssetRef* a = assets.find(s->audio->id);
          if (a && a->duration_ms && *a->duration_ms > t->duration_ms)
            c.warning("TIMER_SHORTER_THAN_AUDIO", i, sid,
                      "narration outlasts the state timer and will be cut by the transition");
        }
      } else {
        c.error("AWAIT_INPUT_ON_STORY", i, sid, "await_input transitions are only legal on quiz states");
      }
      if (s->text.empty() && !s->audio)
        c.error("EMPTY_TEXT_WITHOUT_AUDIO", i, sid, "story text may be empty only when audio is present");
      if (s->media) check_asset(i, sid, *s->media, AssetKind::image, "media");
      if (s->audio) check_asset(i, sid, *s->audio, AssetKind::audio, "narration");
      if (s->behavior) check_behavior(i, sid, *s->behavior, "behavior");
      if (s->repetition) {
        const auto& rep = *s->repetition;
        used_words.insert(rep.word);
        if (rep.count < 1) c.error("INVALID_REPETITION_COUNT", i, sid, "repetition count must be >= 1");
        if (!words.count(rep.word))
          c.error("UNKNOWN_TARGET_WORD", i, sid, "repetition word '" + rep.word + "' is not a target word");
        const AssetRef* a = assets.find(word_audio_id(rep.word));
        if (a == nullptr || a->kind != AssetKind::audio)
          c.error("MISSING_WORD_AUDIO", i, sid, "no audio asset '" + word_audio_id(rep.word) + "'");
      }
    } else {
      const auto& q = std::get<QuizState>(st);
      if (q.options.size() < 2) c.error("TOO_FEW_OPTIONS", i, sid, "a quiz needs at least two options");
      if (q.correct_index < 0 || q.correct_index >= static_cast<std::int64_t>(q.options.size()))
        c.error("CORRECT_INDEX_OUT_OF_RANGE", i, sid,
                "correct_index " + std::to_string(q.correct_index) + " is outside the options");
      if (q.timeout_ms && *q.timeout_ms <= 0)
        c.error("NONPOSITIVE_TIMEOUT", i, sid, "timeout_ms must be > 0 when present");
      if (q.target_word) {
        used_words.insert(*q.target_word);
        if (!words.count(*q.target_word))
          c.error("UNKNOWN_TARGET_WORD", i, sid, "quiz word '" + *q.target_word + "' is not a target word");
      }
      check_behavior(i, sid, q.on_correct, "on_correct");
      check_behavior(i, sid, q.on_incorrect, "on_incorrect");
    }
  }
  for (const auto& w : sc.target_words)
    if (!used_words.count(w))
      c.warning("UNUSED_TARGET_WORD", std::nullopt, std::nullopt,
                "target word '" + w + "' is never repeated or quizzed");
  return c.finish();
}

inline ValidationReport validate_scenario(const Scenario& sc) {
  return validate_scenario(sc, AssetIndex(sc.asset_manifest));
}

inline Json to_json(const ValidationReport& r) {
  auto list = [](const std::vector<Finding>& fs) {
    Json a = Json::array();
    for (const auto& f : fs)
      a.push_back(Json{{"code", f.code},
                       {"state", f.state_id ? Json(*f.state_id) : Json(nullptr)},
                       {"message", f.message}});
    return a;
  };
  return Json{{"accepted", r.accepted()}, {"errors", list(r.errors)}, {"warnings", list(r.warnings)}};
}

// One word per line; blank lines and '#' comments skipped.
inline std::set<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IO", "cannot open word list " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

}  // namespace maple
