#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maple {

// Milliseconds. Session, plan and timeline times all use this unit.
using TimeMs = std::int64_t;

enum class AssetKind { image, audio, motion };

inline std::string_view to_string(AssetKind kind) {
  switch (kind) {
    case AssetKind::image: return "image";
    case AssetKind::audio: return "audio";
    case AssetKind::motion: return "motion";
  }
  return "image";
}

inline std::optional<AssetKind> asset_kind_from_string(std::string_view s) {
  if (s == "image") return AssetKind::image;
  if (s == "audio") return AssetKind::audio;
  if (s == "motion") return AssetKind::motion;
  return std::nullopt;
}

struct VisemeEvent {
  TimeMs at_ms = 0;
  double mouth_openness = 0.0;

  friend bool operator==(const VisemeEvent&, const VisemeEvent&) = default;
};

// A pre-generated media file. Audio assets carry their playback duration and
// optionally an explicit viseme sidecar (mouth openness over time).
struct AssetRef {
  std::string id;
  AssetKind kind = AssetKind::image;
  std::optional<TimeMs> duration_ms;
  std::optional<std::vector<VisemeEvent>> visemes;

  friend bool operator==(const AssetRef&, const AssetRef&) = default;
};

// Asset id -> metadata. Built from a scenario's manifest.
class AssetIndex {
 public:
  AssetIndex() = default;
  explicit AssetIndex(const std::vector<AssetRef>& manifest) {
    for (const auto& a : manifest) assets_.emplace(a.id, a);
  }

  void insert(AssetRef asset) { assets_.insert_or_assign(asset.id, std::move(asset)); }

  const AssetRef* find(const std::string& id) const {
    auto it = assets_.find(id);
    return it == assets_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& id) const { return assets_.count(id) != 0; }
  std::size_t size() const { return assets_.size(); }

 private:
  std::map<std::string, AssetRef> assets_;
};

// Audio asset id holding the spoken form of a target word.
inline std::string word_audio_id(std::string_view word) {
  return "word_" + std::string(word);
}

}  // namespace maple
