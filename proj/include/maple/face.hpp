#pragma once

// Facial expression command layer: Action Unit vectors, the named preset
// registry, and viseme (mouth) tracks for utterances.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "maple/assets.hpp"
#include "maple/errors.hpp"
#include "maple/json_document.hpp"

namespace maple {

inline constexpr std::array<int, 8> kSupportedActionUnits{1, 2, 4, 6, 12, 15, 25, 26};

inline std::optional<std::size_t> action_unit_slot(int au) {
  for (std::size_t i = 0; i < kSupportedActionUnits.size(); ++i)
    if (kSupportedActionUnits[i] == au) return i;
  return std::nullopt;
}

inline double clamp_unit(double x) {
  if (std::isnan(x)) return 0.0;
  return std::clamp(x, 0.0, 1.0);
}

// Dense intensity vector over the supported Action Units. Every write is
// clamped to [0,1]; unspecified units are 0.
class AUVector {
 public:
  AUVector() = default;

  // Throws Error{UNSUPPORTED_AU} for ids outside kSupportedActionUnits.
  static AUVector from_map(const std::map<int, double>& values) {
    AUVector v;
    for (const auto& [au, x] : values) v.set(au, x);
    return v;
  }

  void set(int au, double intensity) {
    auto slot = action_unit_slot(au);
    if (!slot) throw Error("UNSUPPORTED_AU", "unsupported action unit " + std::to_string(au));
    values_[*slot] = clamp_unit(intensity);
  }

  double get(int au) const {
    auto slot = action_unit_slot(au);
    return slot ? values_[*slot] : 0.0;
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
  }

  std::map<int, double> to_map() const {
    std::map<int, double> out;
    for (std::size_t i = 0; i < values_.size(); ++i) out[kSupportedActionUnits[i]] = values_[i];
    return out;
  }

  // {"1":0.0,"2":0.0,...} in AU order.
  Json to_json() const {
    Json j = Json::object();
    for (std::size_t i = 0; i < values_.size(); ++i)
      j[std::to_string(kSupportedActionUnits[i])] = values_[i];
    return j;
  }

  friend bool operator==(const AUVector&, const AUVector&) = default;

 private:
  std::array<double, kSupportedActionUnits.size()> values_{};
};

struct PresetExpression {
  std::string name;
  friend bool operator==(const PresetExpression&, const PresetExpression&) = default;
};

// Raw author-supplied intensities; clamped when resolved.
struct ExplicitExpression {
  std::map<int, double> intensities;
  friend bool operator==(const ExplicitExpression&, const ExplicitExpression&) = default;
};

using ExpressionSpec = std::variant<PresetExpression, ExplicitExpression>;

// Named expressions, mutable at runtime. Resolution copies entries out, so
// later edits never reach vectors that were already resolved.
class PresetTable {
 public:
  static PresetTable defaults() {
    PresetTable t;
    t.set("neutral", AUVector{});
    t.set("happy", AUVector::from_map({{6, 0.6}, {12, 0.9}, {25, 0.3}}));
    t.set("frown", AUVector::from_map({{1, 0.3}, {4, 0.7}, {15, 0.6}}));
    t.set("surprised", AUVector::from_map({{1, 0.8}, {2, 0.8}, {25, 0.6}, {26, 0.7}}));
    return t;
  }

  // Preset file: {"name": {"<AU id>": intensity, ...}, ...}. Built-ins missing
  // from the file are kept from defaults().
  static PresetTable parse(std::string_view text) {
    auto doc = JsonDocument::parse(text);
    auto root = FieldReader::root(doc);
    root.expect_object();
    PresetTable table = defaults();
    for (auto it = root.node().begin(); it != root.node().end(); ++it) {
      auto entry = root.field(it.key());
      table.set(it.key(), parse_vector(entry));
    }
    return table;
  }

  static PresetTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO", "cannot open preset file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static AUVector parse_vector(const FieldReader& entry) {
    entry.expect_object();
    AUVector v;
    for (auto it = entry.node().begin(); it != entry.node().end(); ++it) {
      auto value = entry.field(it.key());
      int au = 0;
      try {
        std::size_t used = 0;
        au = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        value.fail("BAD_VALUE", "action unit key must be an integer");
      }
      if (!action_unit_slot(au)) value.fail("BAD_VALUE", "unsupported action unit " + it.key());
      v.set(au, value.as_number());
    }
    return v;
  }

  void set(const std::string& name, AUVector v) { presets_.insert_or_assign(name, v); }

  const AUVector* find(const std::string& name) const {
    auto it = presets_.find(name);
    return it == presets_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& name) const { return presets_.count(name) != 0; }
  const std::map<std::string, AUVector>& entries() const { return presets_; }

 private:
  std::map<std::string, AUVector> presets_;
};

// Throws UnknownPreset or Error{UNSUPPORTED_AU}.
inline AUVector resolve_expression(const ExpressionSpec& spec, const PresetTable& presets) {
  if (const auto* p = std::get_if<PresetExpression>(&spec)) {
    const AUVector* v = presets.find(p->name);
    if (v == nullptr) throw UnknownPreset(p->name);
    return *v;
  }
  return AUVector::from_map(std::get<ExplicitExpression>(spec).intensities);
}

struct VisemeTrack {
  std::string utterance_id;
  std::vector<VisemeEvent> events;

  friend bool operator==(const VisemeTrack&, const VisemeTrack&) = default;
};

inline constexpr TimeMs kVisemeIntervalMs = 125;  // 8 Hz
inline constexpr double kVisemeOpen = 1.0;

// Mouth track for an utterance. An explicit sidecar is normalized (clamped,
// starts at 0, trimmed to the duration, closed at the end); otherwise the
// mouth alternates open/closed at 8 Hz and closes at `duration_ms`.
inline VisemeTrack build_viseme_track(const AssetRef& utterance) {
  if (utterance.kind != AssetKind::audio) throw NotAudio(utterance.id);
  if (!utterance.duration_ms || *utterance.duration_ms <= 0) throw MissingDuration(utterance.id);
  const TimeMs duration = *utterance.duration_ms;

  VisemeTrack track{utterance.id, {}};
  if (utterance.visemes && !utterance.visemes->empty()) {
    std::vector<VisemeEvent> events = *utterance.visemes;
    std::stable_sort(events.begin(), events.end(),
                     [](const VisemeEvent& a, const VisemeEvent& b) { return a.at_ms < b.at_ms; });
    std::vector<VisemeEvent> kept;
    for (const auto& e : events) {
      if (e.at_ms < 0 || e.at_ms > duration) continue;
      kept.push_back({e.at_ms, clamp_unit(e.mouth_openness)});
    }
    if (kept.empty() || kept.front().at_ms > 0) track.events.push_back({0, 0.0});
    track.events.insert(track.events.end(), kept.begin(), kept.end());
    if (track.events.empty() || track.events.back().mouth_openness != 0.0)
      track.events.push_back({duration, 0.0});
    return track;
  }

  bool open = true;
  for (TimeMs t = 0; t < duration; t += kVisemeIntervalMs) {
    track.events.push_back({t, open ? kVisemeOpen : 0.0});
    open = !open;
  }
  track.events.push_back({duration, 0.0});
  return track;
}

}  // namespace maple
