#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "maple/assets.hpp"
#include "maple/face.hpp"

namespace maple {

enum class SchedulingPolicy { speech_then_gesture, gesture_then_speech, parallel };

inline std::string_view to_string(SchedulingPolicy p) {
  switch (p) {
    case SchedulingPolicy::speech_then_gesture: return "speech_then_gesture";
    case SchedulingPolicy::gesture_then_speech: return "gesture_then_speech";
    case SchedulingPolicy::parallel: return "parallel";
  }
  return "parallel";
}

inline std::optional<SchedulingPolicy> policy_from_string(std::string_view s) {
  if (s == "speech_then_gesture") return SchedulingPolicy::speech_then_gesture;
  if (s == "gesture_then_speech") return SchedulingPolicy::gesture_then_speech;
  if (s == "parallel") return SchedulingPolicy::parallel;
  return std::nullopt;
}

// High-level request: any combination of a gesture, an utterance and a face
// update, plus how speech and gesture are sequenced.
struct BehaviorSpec {
  std::optional<std::string> gesture;  // motion name
  std::optional<AssetRef> speech;      // audio asset
  std::optional<ExpressionSpec> face;
  SchedulingPolicy policy = SchedulingPolicy::parallel;

  bool empty() const { return !gesture && !speech && !face; }
  std::size_t element_count() const {
    return (gesture ? 1u : 0u) + (speech ? 1u : 0u) + (face ? 1u : 0u);
  }

  friend bool operator==(const BehaviorSpec&, const BehaviorSpec&) = default;
};

// Replaces a by-id speech reference with the indexed asset (duration and
// viseme sidecar included). Unknown ids are left as they are.
inline BehaviorSpec resolve_assets(BehaviorSpec spec, const AssetIndex& assets) {
  if (spec.speech) {
    if (const AssetRef* a = assets.find(spec.speech->id)) spec.speech = *a;
  }
  return spec;
}

}  // namespace maple
