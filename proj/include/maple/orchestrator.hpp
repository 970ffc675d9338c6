#pragma once

// Turns a BehaviorSpec into an absolute-time plan. This is the only place
// that assigns times to speech, gesture and face elements; the motion and
// face modules stay time-relative.

#include <algorithm>
#include <variant>
#include <vector>

#include "maple/behavior.hpp"
#include "maple/errors.hpp"
#include "maple/face.hpp"
#include "maple/motion.hpp"

namespace maple {

struct SpeechElement {
  AssetRef utterance;
  VisemeTrack visemes;
  friend bool operator==(const SpeechElement&, const SpeechElement&) = default;
};

// Timeline is compiled relative to the element start (first command at 0).
struct GestureElement {
  MotionTimeline timeline;
  friend bool operator==(const GestureElement&, const GestureElement&) = default;
};

// Instantaneous; the expression persists until the next face element.
struct FaceElement {
  AUVector face;
  friend bool operator==(const FaceElement&, const FaceElement&) = default;
};

using ElementBody = std::variant<FaceElement, SpeechElement, GestureElement>;

struct PlannedElement {
  TimeMs start_ms = 0;
  ElementBody element;

  TimeMs duration_ms() const {
    return std::visit(
        [](const auto& e) -> TimeMs {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, SpeechElement>)
            return *e.utterance.duration_ms;
          else if constexpr (std::is_same_v<T, GestureElement>)
            return e.timeline.total_duration_ms;
          else
            return 0;
        },
        element);
  }
  TimeMs end_ms() const { return start_ms + duration_ms(); }

  friend bool operator==(const PlannedElement&, const PlannedElement&) = default;
};

struct BehaviorPlan {
  std::vector<PlannedElement> elements;  // by start_ms, then face/speech/gesture
  TimeMs total_duration_ms = 0;          // max(start + duration) over elements

  friend bool operator==(const BehaviorPlan&, const BehaviorPlan&) = default;
};

// Throws UnknownMotion, MissingDuration, NotAudio, UnknownPreset, or
// Error{EMPTY_BEHAVIOR}.
inline BehaviorPlan plan_behavior(const BehaviorSpec& spec, const MotionLibrary& motions,
                                  const PresetTable& presets, TimeMs start_ms) {
  if (spec.empty()) throw Error("EMPTY_BEHAVIOR", "behavior has no gesture, speech or face");

  std::optional<SpeechElement> speech;
  if (spec.speech) {
    if (spec.speech->kind != AssetKind::audio) throw NotAudio(spec.speech->id);
    if (!spec.speech->duration_ms || *spec.speech->duration_ms <= 0)
      throw MissingDuration(spec.speech->id);
    speech = SpeechElement{*spec.speech, build_viseme_track(*spec.speech)};
  }
  std::optional<GestureElement> gesture;
  if (spec.gesture) gesture = GestureElement{compile_motion(motions.at(*spec.gesture), 0)};
  std::optional<FaceElement> face;
  if (spec.face) face = FaceElement{resolve_expression(*spec.face, presets)};

  TimeMs speech_at = start_ms;
  TimeMs gesture_at = start_ms;
  if (speech && gesture) {
    if (spec.policy == SchedulingPolicy::speech_then_gesture)
      gesture_at = start_ms + *speech->utterance.duration_ms;
    else if (spec.policy == SchedulingPolicy::gesture_then_speech)
      speech_at = start_ms + gesture->timeline.total_duration_ms;
  }

  BehaviorPlan plan;
  if (face) plan.elements.push_back({start_ms, std::move(*face)});
  if (speech) plan.elements.push_back({speech_at, std::move(*speech)});
  if (gesture) plan.elements.push_back({gesture_at, std::move(*gesture)});
  std::stable_sort(plan.elements.begin(), plan.elements.end(),
                   [](const PlannedElement& a, const PlannedElement& b) {
                     if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
                     return a.element.index() < b.element.index();
                   });
  plan.total_duration_ms = start_ms;
  for (const auto& e : plan.elements) plan.total_duration_ms = std::max(plan.total_duration_ms, e.end_ms());
  return plan;
}

inline Json to_json(const VisemeTrack& t) {
  Json events = Json::array();
  for (const auto& e : t.events) events.push_back(Json::array({e.at_ms, e.mouth_openness}));
  return Json{{"utterance", t.utterance_id}, {"events", events}};
}

inline Json to_json(const PlannedElement& e) {
  Json j = Json::object();
  j["start_ms"] = e.start_ms;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, SpeechElement>) {
          j["type"] = "speech";
          j["asset"] = body.utterance.id;
          j["duration_ms"] = *body.utterance.duration_ms;
          j["visemes"] = to_json(body.visemes);
        } else if constexpr (std::is_same_v<T, GestureElement>) {
          j["type"] = "gesture";
          j["timeline"] = to_json(body.timeline);
        } else {
          j["type"] = "face";
          j["au"] = body.face.to_json();
        }
      },
      e.element);
  return j;
}

inline Json to_json(const BehaviorPlan& p) {
  Json elements = Json::array();
  for (const auto& e : p.elements) elements.push_back(to_json(e));
  return Json{{"elements", elements}, {"total_duration_ms", p.total_duration_ms}};
}

}  // namespace maple
