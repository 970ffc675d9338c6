#pragma once

// Deterministic scenario execution.
//
// A Session is a single-owner state machine driven by Events. Ticks advance
// two clocks: wall time (always) and active time (only while not paused).
// Log timestamps are active time. A Tick is processed as a series of exact
// sub-steps ending at each internal deadline (element start/end, story timer,
// quiz timeout), so outcomes do not depend on tick granularity.
//
// Pausing takes effect at the next element boundary: in-flight speech or
// gesture elements finish, nothing new starts. Effects produced by one
// occurrence (entering a state, answering, a plan step) are emitted in the
// fixed order Log, ShowMedia, ShowText, ShowOptions, PlayAudio, SetFace,
// StartGesture, EmitSummary.

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maple/errors.hpp"
#include "maple/motion.hpp"
#include "maple/orchestrator.hpp"
#include "maple/report.hpp"
#include "maple/scenario.hpp"
#include "maple/session_log.hpp"

namespace maple {

enum class Phase { presenting, awaiting_input, paused, finished };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::presenting: return "presenting";
    case Phase::awaiting_input: return "awaiting_input";
    case Phase::paused: return "paused";
    case Phase::finished: return "finished";
  }
  return "presenting";
}

// ---------------------------------------------------------------------------
// Events

struct Tick {
  TimeMs delta_ms = 0;
  friend bool operator==(const Tick&, const Tick&) = default;
};
struct AnswerSelected {
  std::int64_t option_index = 0;
  TimeMs at_wall_ms = 0;
  friend bool operator==(const AnswerSelected&, const AnswerSelected&) = default;
};
struct PauseToggled {
  friend bool operator==(const PauseToggled&, const PauseToggled&) = default;
};
struct ElementDone {
  std::int64_t element_id = 0;
  friend bool operator==(const ElementDone&, const ElementDone&) = default;
};
struct Shutdown {
  friend bool operator==(const Shutdown&, const Shutdown&) = default;
};

using Event = std::variant<Tick, AnswerSelected, PauseToggled, ElementDone, Shutdown>;

inline std::string_view event_name(const Event& e) {
  static constexpr std::string_view names[] = {"tick", "answer", "pause_toggle", "element_done",
                                               "shutdown"};
  return names[e.index()];
}

// ---------------------------------------------------------------------------
// Effects (variant order is the emission order within an occurrence)

struct LogEffect {
  LogEntry entry;
  friend bool operator==(const LogEffect&, const LogEffect&) = default;
};
struct ShowMedia {
  AssetRef asset;
  friend bool operator==(const ShowMedia&, const ShowMedia&) = default;
};
struct ShowText {
  std::string text;
  friend bool operator==(const ShowText&, const ShowText&) = default;
};
struct ShowOptions {
  std::string state_id;
  std::vector<std::string> options;
  friend bool operator==(const ShowOptions&, const ShowOptions&) = default;
};
// Narration carries no visemes (played by the console); robot speech does.
struct PlayAudio {
  std::int64_t element_id = 0;
  AssetRef asset;
  std::optional<VisemeTrack> visemes;
  friend bool operator==(const PlayAudio&, const PlayAudio&) = default;
};
struct SetFace {
  AUVector face;
  friend bool operator==(const SetFace&, const SetFace&) = default;
};
struct StartGesture {
  std::int64_t element_id = 0;
  std::string motion;
  MotionTimeline timeline;  // absolute, on the active clock
  friend bool operator==(const StartGesture&, const StartGesture&) = default;
};
struct EmitSummary {
  TutorSummary summary;
  friend bool operator==(const EmitSummary&, const EmitSummary&) = default;
};

using Effect = std::variant<LogEffect, ShowMedia, ShowText, ShowOptions, PlayAudio, SetFace,
                            StartGesture, EmitSummary>;

// ---------------------------------------------------------------------------
// Errors

class IllegalEvent : public Error {
 public:
  IllegalEvent(Phase phase, const Event& event, const std::string& reason)
      : Error("ILLEGAL_EVENT", "illegal " + std::string(event_name(event)) + " in phase " +
                                   std::string(to_string(phase)) + ": " + reason),
        phase_(phase),
        event_(event),
        reason_(reason) {}

  Phase phase() const { return phase_; }
  const Event& event() const { return event_; }
  const std::string& reason() const { return reason_; }

 private:
  Phase phase_;
  Event event_;
  std::string reason_;
};

class InvalidScenario : public Error {
 public:
  explicit InvalidScenario(ValidationReport report)
      : Error("INVALID_SCENARIO", describe(report)), report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  static std::string describe(const ValidationReport& r) {
    std::string s = "scenario failed validation (" + std::to_string(r.errors.size()) + " errors)";
    if (!r.errors.empty()) s += ": " + r.errors.front().code + " " + r.errors.front().message;
    return s;
  }
  ValidationReport report_;
};

// ---------------------------------------------------------------------------
// Repetition scaffold

// `count` utterances of the word's audio. A deictic point puts the pointing
// gesture on the first utterance only (parallel), and the pose is held
// across the remaining repetitions.
inline std::vector<BehaviorSpec> schedule_repetitions(const StoryState& state,
                                                      const MotionLibrary& motions,
                                                      const AssetIndex& assets) {
  if (!state.repetition) return {};
  const RepetitionPoint& rep = *state.repetition;
  const AssetRef* audio = assets.find(word_audio_id(rep.word));
  if (audio == nullptr || audio->kind != AssetKind::audio) throw MissingWordAudio(rep.word);
  if (rep.deictic && !motions.contains(kPointGesture)) throw UnknownMotion(kPointGesture);

  std::vector<BehaviorSpec> specs;
  for (std::int64_t i = 0; i < rep.count; ++i) {
    BehaviorSpec b;
    b.speech = *audio;
    b.policy = SchedulingPolicy::parallel;
    if (rep.deictic && i == 0) b.gesture = kPointGesture;
    specs.push_back(std::move(b));
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Session

class Session;
std::pair<Session, std::vector<Effect>> init_session(const Scenario&, const MotionLibrary&,
                                                     const PresetTable&);

class Session {
 public:
  // The plan currently executing and where it stands.
  struct ActivePlan {
    BehaviorPlan plan;
    TimeMs offset_ms = 0;
    std::vector<bool> started;
    std::optional<std::int64_t> repetition_index;
  };

  Phase phase() const { return phase_; }
  bool finished() const { return phase_ == Phase::finished; }
  bool pause_pending() const { return pause_pending_; }
  TimeMs clock_ms() const { return clock_ms_; }
  TimeMs wall_ms() const { return wall_ms_; }
  const SessionLog& log() const { return log_; }
  const Scenario& scenario() const { return *scenario_; }
  const AssetIndex& assets() const { return *assets_; }
  const std::optional<ActivePlan>& active_plan() const { return active_; }
  TimeMs plan_offset_ms() const { return active_ ? active_->offset_ms : 0; }
  TimeMs state_entered_at() const { return state_entered_at_; }
  std::optional<TimeMs> quiz_shown_at() const { return quiz_shown_wall_; }
  bool retry_used() const { return retry_used_; }

  const State* current_state() const {
    return current_ ? &scenario_->states[*current_] : nullptr;
  }
  std::optional<std::string> current_state_id() const {
    if (!current_) return std::nullopt;
    return state_id(scenario_->states[*current_]);
  }

  // Presets are read when a plan is dispatched; edits affect later plans only.
  PresetTable& presets() { return presets_; }
  const PresetTable& presets() const { return presets_; }

  // True when no speech or gesture element is mid-flight.
  bool at_element_boundary() const { return !inflight(); }

  // Nothing will happen without outside input (paused, or waiting for an
  // answer with no timeout).
  bool stalled() const {
    if (phase_ == Phase::paused) return true;
    if (phase_ != Phase::awaiting_input) return false;
    return !std::get<QuizState>(*current_state()).timeout_ms.has_value();
  }

  // Throws IllegalEvent and leaves the session untouched when `event` is not
  // legal in the current phase.
  std::vector<Effect> step(const Event& event) {
    check_legal(event);
    Output out;
    std::visit([&](const auto& e) { handle(e, out); }, event);
    return std::move(out.effects);
  }

  // Records a rejected event as a protocol_error log entry.
  std::vector<Effect> record_protocol_error(const IllegalEvent& err) {
    Output out;
    Batch b;
    append_log(b, log_kind::protocol_error,
               Json{{"event", std::string(event_name(err.event()))},
                    {"phase", std::string(to_string(err.phase()))},
                    {"reason", err.reason()}});
    out.flush(b);
    return std::move(out.effects);
  }

 private:
  friend std::pair<Session, std::vector<Effect>> init_session(const Scenario&,
                                                              const MotionLibrary&,
                                                              const PresetTable&);

  struct QueuedBehavior {
    BehaviorSpec spec;
    std::optional<std::int64_t> repetition_index;
  };

  enum class AfterFeedback { advance, retry };

  using Batch = std::vector<Effect>;

  struct Output {
    std::vector<Effect> effects;
    void flush(Batch& b) {
      std::stable_sort(b.begin(), b.end(),
                       [](const Effect& x, const Effect& y) { return x.index() < y.index(); });
      for (auto& e : b) effects.push_back(std::move(e));
      b.clear();
    }
  };

  Session() = default;

  // -- legality -------------------------------------------------------------

  void check_legal(const Event& event) const {
    auto illegal = [&](const std::string& why) { throw IllegalEvent(phase_, event, why); };
    if (const auto* t = std::get_if<Tick>(&event)) {
      if (t->delta_ms <= 0) illegal("tick delta must be positive");
      return;
    }
    if (const auto* d = std::get_if<ElementDone>(&event)) {
      if (d->element_id < 1 || d->element_id >= next_element_id_) illegal("unknown element id");
      return;
    }
    if (phase_ == Phase::finished) illegal("session has finished");
    if (const auto* a = std::get_if<AnswerSelected>(&event)) {
      if (phase_ != Phase::awaiting_input) illegal("no quiz is awaiting an answer");
      const auto& q = std::get<QuizState>(*current_state());
      if (a->option_index < 0 || a->option_index >= static_cast<std::int64_t>(q.options.size()))
        illegal("option index out of range");
      if (a->at_wall_ms < *quiz_shown_wall_) illegal("answer predates the quiz");
    }
  }

  // -- event handlers -------------------------------------------------------

  void handle(const Tick& t, Output& out) { advance(t.delta_ms, out); }

  void handle(const ElementDone&, Output&) {}

  void handle(const Shutdown&, Output& out) {
    Batch b;
    finish(b, "shutdown");
    out.flush(b);
  }

  void handle(const PauseToggled&, Output& out) {
    Batch b;
    if (phase_ == Phase::paused) {
      phase_ = prior_phase_;
      append_log(b, log_kind::resume, Json{{"wall_ms", wall_ms_}});
      out.flush(b);
      process_due(out);
      return;
    }
    if (pause_pending_) {
      pause_pending_ = false;
      return;
    }
    pause_pending_ = true;
    if (!inflight()) enter_pause(b);
    out.flush(b);
  }

  void handle(const AnswerSelected& a, Output& out) {
    const auto& q = std::get<QuizState>(*current_state());
    const bool correct = a.option_index == q.correct_index;
    Batch b;
    append_log(b, log_kind::quiz_answered,
               Json{{"state", q.id},
                    {"word", q.target_word ? Json(*q.target_word) : Json(nullptr)},
                    {"option", a.option_index},
                    {"correct", correct},
                    {"response_time_ms", a.at_wall_ms - *quiz_shown_wall_}});
    if (!correct && q.incorrect_policy == IncorrectPolicy::retry_once && !retry_used_) {
      retry_used_ = true;
      after_feedback_ = AfterFeedback::retry;
    } else {
      after_feedback_ = AfterFeedback::advance;
    }
    phase_ = Phase::presenting;
    start_behavior(b, QueuedBehavior{correct ? q.on_correct : q.on_incorrect, std::nullopt});
    out.flush(b);
    process_due(out);
  }

  // -- time -----------------------------------------------------------------

  void advance(TimeMs delta, Output& out) {
    TimeMs remaining = delta;
    for (;;) {
      process_due(out);
      if (phase_ == Phase::paused || phase_ == Phase::finished) {
        wall_ms_ += remaining;
        return;
      }
      if (remaining == 0) return;
      const TimeMs dt = std::min(remaining, time_to_next_deadline());
      clock_ms_ += dt;
      wall_ms_ += dt;
      remaining -= dt;
      if (active_) active_->offset_ms += dt;
    }
  }

  TimeMs time_to_next_deadline() const {
    TimeMs best = std::numeric_limits<TimeMs>::max();
    auto consider = [&](TimeMs d) {
      if (d > 0) best = std::min(best, d);
    };
    if (active_) {
      const TimeMs off = active_->offset_ms;
      for (std::size_t i = 0; i < active_->plan.elements.size(); ++i) {
        const auto& e = active_->plan.elements[i];
        consider(e.start_ms - off);
        consider(e.end_ms() - off);
      }
      consider(active_->plan.total_duration_ms - off);
    }
    if (held_until_) consider(*held_until_ - clock_ms_);
    if (const State* st = current_state()) {
      if (const auto* s = std::get_if<StoryState>(st)) {
        if (const auto* t = std::get_if<TimedTransition>(&s->transition))
          consider(state_entered_at_ + t->duration_ms - clock_ms_);
      } else if (phase_ == Phase::awaiting_input) {
        const auto& q = std::get<QuizState>(*st);
        if (q.timeout_ms) consider(quiz_shown_active_ + *q.timeout_ms - clock_ms_);
      }
    }
    return best;
  }

  bool inflight() const { return (held_until_ && *held_until_ > clock_ms_) || plan_inflight(); }

  bool plan_inflight() const {
    if (!active_) return false;
    for (std::size_t i = 0; i < active_->plan.elements.size(); ++i) {
      if (active_->started[i] && active_->plan.elements[i].end_ms() > active_->offset_ms) return true;
    }
    return false;
  }

  // Handles everything due at the current instant, one occurrence at a time.
  void process_due(Output& out) {
    for (int guard = 0; guard < 10000; ++guard) {
      if (phase_ == Phase::paused || phase_ == Phase::finished) return;
      Batch b;
      if (pause_pending_) {
        // Nothing new starts; pause once the running elements finish.
        if (inflight()) return;
        enter_pause(b);
        out.flush(b);
        return;
      }
      bool progressed = false;
      if (active_) {
        progressed = start_due_elements(b);
        if (active_->offset_ms >= active_->plan.total_duration_ms && !plan_inflight()) {
          active_.reset();
          progressed = true;
        }
      } else if (!queue_.empty()) {
        QueuedBehavior next = std::move(queue_.front());
        queue_.pop_front();
        start_behavior(b, std::move(next));
        progressed = true;
      } else {
        progressed = state_step(b);
      }
      out.flush(b);
      if (!progressed) return;
    }
  }

  // State-level progress once no behavior is running or queued.
  bool state_step(Batch& b) {
    const State* st = current_state();
    if (st == nullptr) return false;
    if (const auto* s = std::get_if<StoryState>(st)) {
      const auto* t = std::get_if<TimedTransition>(&s->transition);
      if (t == nullptr) return false;
      if (clock_ms_ - state_entered_at_ < t->duration_ms) return false;
      if (held_until_ && *held_until_ > clock_ms_) return false;
      go_to(b, t->next);
      return true;
    }
    const auto& q = std::get<QuizState>(*st);
    if (phase_ == Phase::awaiting_input) {
      if (!q.timeout_ms || clock_ms_ - quiz_shown_active_ < *q.timeout_ms) return false;
      append_log(b, log_kind::quiz_timeout,
                 Json{{"state", q.id}, {"word", q.target_word ? Json(*q.target_word) : Json(nullptr)}});
      go_to(b, q.next);
      return true;
    }
    // Feedback finished.
    if (after_feedback_ == AfterFeedback::retry) {
      after_feedback_ = AfterFeedback::advance;
      show_quiz(b, q, 2);
      return true;
    }
    go_to(b, q.next);
    return true;
  }

  // -- transitions ----------------------------------------------------------

  void go_to(Batch& b, const std::optional<std::string>& next) {
    if (!next) {
      finish(b, "completed");
      return;
    }
    enter_state(b, *scenario_->index_of(*next));
  }

  void enter_state(Batch& b, std::size_t index) {
    current_ = index;
    state_entered_at_ = clock_ms_;
    retry_used_ = false;
    after_feedback_ = AfterFeedback::advance;
    quiz_shown_wall_.reset();
    active_.reset();
    held_until_.reset();
    queue_.clear();
    const State& st = scenario_->states[index];
    append_log(b, log_kind::state_entered,
               Json{{"state", state_id(st)}, {"state_kind", is_quiz(st) ? "quiz" : "story"}});

    if (const auto* q = std::get_if<QuizState>(&st)) {
      show_quiz(b, *q, 1);
      return;
    }
    const auto& s = std::get<StoryState>(st);
    phase_ = Phase::presenting;
    if (s.media) b.push_back(ShowMedia{resolve(*s.media)});
    b.push_back(ShowText{s.text});
    if (s.audio) b.push_back(PlayAudio{next_element_id_++, resolve(*s.audio), std::nullopt});
    if (s.behavior) queue_.push_back({*s.behavior, std::nullopt});
    std::int64_t index_in_point = 0;
    for (auto& spec : schedule_repetitions(s, *motions_, *assets_))
      queue_.push_back({std::move(spec), ++index_in_point});
    if (!queue_.empty() && !pause_pending_) {
      QueuedBehavior first = std::move(queue_.front());
      queue_.pop_front();
      start_behavior(b, std::move(first));
    }
  }

  void show_quiz(Batch& b, const QuizState& q, int attempt) {
    phase_ = Phase::awaiting_input;
    quiz_shown_wall_ = wall_ms_;
    quiz_shown_active_ = clock_ms_;
    append_log(b, log_kind::quiz_shown,
               Json{{"state", q.id},
                    {"word", q.target_word ? Json(*q.target_word) : Json(nullptr)},
                    {"attempt", attempt}});
    b.push_back(ShowText{q.prompt});
    b.push_back(ShowOptions{q.id, q.options});
  }

  void start_behavior(Batch& b, QueuedBehavior item) {
    ActivePlan ap;
    ap.plan = plan_behavior(resolve_assets(item.spec, *assets_), *motions_, presets_, 0);
    // A repetition's pointing gesture is held while the following
    // repetitions play, so it runs outside the plan.
    std::vector<std::string> held;
    if (item.repetition_index) {
      auto& els = ap.plan.elements;
      for (auto it = els.begin(); it != els.end();) {
        if (const auto* g = std::get_if<GestureElement>(&it->element)) {
          held.push_back(g->timeline.motion);
          it = els.erase(it);
        } else {
          ++it;
        }
      }
      ap.plan.total_duration_ms = 0;
      for (const auto& e : els) ap.plan.total_duration_ms = std::max(ap.plan.total_duration_ms, e.end_ms());
    }
    ap.started.assign(ap.plan.elements.size(), false);
    ap.repetition_index = item.repetition_index;
    active_ = std::move(ap);
    if (item.repetition_index) {
      const auto& s = std::get<StoryState>(*current_state());
      append_log(b, log_kind::word_exposure,
                 Json{{"state", s.id},
                      {"word", s.repetition->word},
                      {"repetition_index", *item.repetition_index},
                      {"deictic", s.repetition->deictic}});
    }
    start_due_elements(b);
    for (const auto& name : held) {
      MotionTimeline tl = compile_motion(motions_->at(name), clock_ms_);
      held_until_ = std::max(held_until_.value_or(0), clock_ms_ + tl.total_duration_ms);
      b.push_back(StartGesture{next_element_id_++, name, std::move(tl)});
    }
  }

  bool start_due_elements(Batch& b) {
    bool any = false;
    for (std::size_t i = 0; i < active_->plan.elements.size(); ++i) {
      const auto& e = active_->plan.elements[i];
      if (active_->started[i] || e.start_ms > active_->offset_ms) continue;
      active_->started[i] = true;
      any = true;
      std::visit(
          [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, FaceElement>)
              b.push_back(SetFace{body.face});
            else if constexpr (std::is_same_v<T, SpeechElement>)
              b.push_back(PlayAudio{next_element_id_++, body.utterance, body.visemes});
            else
              b.push_back(StartGesture{next_element_id_++, body.timeline.motion,
                                       compile_motion(motions_->at(body.timeline.motion), clock_ms_)});
          },
          e.element);
    }
    return any;
  }

  void enter_pause(Batch& b) {
    pause_pending_ = false;
    prior_phase_ = phase_;
    phase_ = Phase::paused;
    append_log(b, log_kind::pause, Json{{"wall_ms", wall_ms_}});
  }

  void finish(Batch& b, const char* reason) {
    phase_ = Phase::finished;
    pause_pending_ = false;
    current_.reset();
    active_.reset();
    held_until_.reset();
    queue_.clear();
    append_log(b, log_kind::session_finished, Json{{"reason", reason}});
    b.push_back(EmitSummary{summarize(log_, *scenario_)});
  }

  // -- helpers --------------------------------------------------------------

  AssetRef resolve(const AssetRef& ref) const {
    const AssetRef* a = assets_->find(ref.id);
    return a ? *a : ref;
  }

  void append_log(Batch& b, std::string_view kind, Json payload) {
    LogEntry e{clock_ms_, std::string(kind), std::move(payload)};
    log_.push_back(e);
    b.push_back(LogEffect{std::move(e)});
  }

  std::shared_ptr<const Scenario> scenario_;
  std::shared_ptr<const MotionLibrary> motions_;
  std::shared_ptr<const AssetIndex> assets_;
  PresetTable presets_;

  std::optional<std::size_t> current_;
  Phase phase_ = Phase::presenting;
  Phase prior_phase_ = Phase::presenting;
  bool pause_pending_ = false;
  std::optional<ActivePlan> active_;
  std::deque<QueuedBehavior> queue_;
  std::optional<TimeMs> held_until_;  // end of a held repetition gesture
  TimeMs state_entered_at_ = 0;
  std::optional<TimeMs> quiz_shown_wall_;
  TimeMs quiz_shown_active_ = 0;
  bool retry_used_ = false;
  AfterFeedback after_feedback_ = AfterFeedback::advance;
  TimeMs clock_ms_ = 0;
  TimeMs wall_ms_ = 0;
  std::int64_t next_element_id_ = 1;
  SessionLog log_;
};

namespace session_detail {

inline void check_expression(const ExpressionSpec& face, const PresetTable& presets,
                             const std::string& sid, std::vector<Finding>& errors) {
  if (const auto* p = std::get_if<PresetExpression>(&face))
    if (!presets.contains(p->name))
      errors.push_back({"UNKNOWN_PRESET", sid, "unknown expression preset '" + p->name + "'"});
}

inline void check_behavior(const BehaviorSpec& b, const MotionLibrary& motions,
                           const PresetTable& presets, const std::string& sid,
                           std::vector<Finding>& errors) {
  if (b.gesture && !motions.contains(*b.gesture))
    errors.push_back({"UNKNOWN_MOTION", sid, "unknown motion '" + *b.gesture + "'"});
  if (b.face) check_expression(*b.face, presets, sid, errors);
}

}  // namespace session_detail

// Starts a session at the scenario's initial state. Throws InvalidScenario
// when validation reports errors or a behavior names a motion or preset that
// is not loaded.
inline std::pair<Session, std::vector<Effect>> init_session(const Scenario& scenario,
                                                            const MotionLibrary& motions,
                                                            const PresetTable& presets) {
  ValidationReport report = validate_scenario(scenario);
  if (report.accepted()) {
    for (const auto& st : scenario.states) {
      const std::string& sid = state_id(st);
      if (const auto* s = std::get_if<StoryState>(&st)) {
        if (s->behavior) session_detail::check_behavior(*s->behavior, motions, presets, sid, report.errors);
        if (s->repetition && s->repetition->deictic && !motions.contains(kPointGesture))
          report.errors.push_back({"UNKNOWN_MOTION", sid, "deictic repetition needs motion 'point_at_screen'"});
      } else {
        const auto& q = std::get<QuizState>(st);
        session_detail::check_behavior(q.on_correct, motions, presets, sid, report.errors);
        session_detail::check_behavior(q.on_incorrect, motions, presets, sid, report.errors);
      }
    }
  }
  if (!report.accepted()) throw InvalidScenario(std::move(report));

  Session s;
  s.scenario_ = std::make_shared<const Scenario>(scenario);
  s.motions_ = std::make_shared<const MotionLibrary>(motions);
  s.assets_ = std::make_shared<const AssetIndex>(scenario.asset_manifest);
  s.presets_ = presets;

  Session::Output out;
  Session::Batch b;
  s.append_log(b, log_kind::session_started,
               Json{{"scenario", scenario.id}, {"target_words", scenario.target_words}});
  s.enter_state(b, *scenario.index_of(scenario.initial_state));
  out.flush(b);
  s.process_due(out);
  return {std::move(s), std::move(out.effects)};
}

// Value-style step: returns the successor session and its effects.
inline std::pair<Session, std::vector<Effect>> step(Session session, const Event& event) {
  auto effects = session.step(event);
  return {std::move(session), std::move(effects)};
}

// ---------------------------------------------------------------------------
// Serialization of events and effects

inline Json to_json(const Effect& effect) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, LogEffect>) {
          return Json{{"kind", "log"}, {"entry", to_json(e.entry)}};
        } else if constexpr (std::is_same_v<T, ShowMedia>) {
          return Json{{"kind", "media"}, {"asset", e.asset.id}, {"asset_kind", std::string(to_string(e.asset.kind))}};
        } else if constexpr (std::is_same_v<T, ShowText>) {
          return Json{{"kind", "text"}, {"text", e.text}};
        } else if constexpr (std::is_same_v<T, ShowOptions>) {
          return Json{{"kind", "options"}, {"state_id", e.state_id}, {"options", e.options}};
        } else if constexpr (std::is_same_v<T, PlayAudio>) {
          Json j{{"kind", "audio"}, {"element", e.element_id}, {"asset", e.asset.id}};
          j["duration_ms"] = e.asset.duration_ms ? Json(*e.asset.duration_ms) : Json(nullptr);
          if (e.visemes) j["visemes"] = to_json(*e.visemes);
          return j;
        } else if constexpr (std::is_same_v<T, SetFace>) {
          return Json{{"kind", "face"}, {"au", e.face.to_json()}};
        } else if constexpr (std::is_same_v<T, StartGesture>) {
          return Json{{"kind", "gesture"}, {"element", e.element_id}, {"motion", e.motion},
                      {"timeline", to_json(e.timeline)}};
        } else {
          return Json{{"kind", "summary"}, {"summary", to_json(e.summary)}};
        }
      },
      effect);
}

}  // namespace maple
