#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"

namespace maple {
namespace {

MotionLibrary library() {
  MotionLibrary lib;
  lib.add(parse_motion(R"({"name": "wave", "motors": [1], "keyframes": [
    {"pose": {"1": 30}, "hold_ms": 250}, {"pose": {"1": 0}, "hold_ms": 250}]})"));
  lib.add(parse_motion(R"({"name": "nod", "motors": [8], "keyframes": [{"pose": {"8": 10}, "hold_ms": 600}]})"));
  return lib;
}

AssetRef speech(TimeMs ms) { return AssetRef{"line", AssetKind::audio, ms, std::nullopt}; }

std::string kind_of(const PlannedElement& e) {
  switch (e.element.index()) {
    case 0: return "face";
    case 1: return "speech";
    default: return "gesture";
  }
}

TEST(Plan, SpeechThenGesture) {
  BehaviorSpec s{"wave", speech(800), std::nullopt, SchedulingPolicy::speech_then_gesture};
  auto p = plan_behavior(s, library(), PresetTable::defaults(), 0);
  ASSERT_EQ(p.elements.size(), 2u);
  EXPECT_EQ(kind_of(p.elements[0]), "speech");
  EXPECT_EQ(p.elements[0].start_ms, 0);
  EXPECT_EQ(kind_of(p.elements[1]), "gesture");
  EXPECT_EQ(p.elements[1].start_ms, 800);
  EXPECT_EQ(p.total_duration_ms, 1300);
}

TEST(Plan, FaceOnly) {
  BehaviorSpec s{std::nullopt, std::nullopt, PresetExpression{"happy"}, SchedulingPolicy::parallel};
  auto p = plan_behavior(s, library(), PresetTable::defaults(), 0);
  ASSERT_EQ(p.elements.size(), 1u);
  EXPECT_EQ(kind_of(p.elements[0]), "face");
  EXPECT_EQ(p.total_duration_ms, 0);
}

TEST(Plan, ParallelSharesStart) {
  BehaviorSpec s{"wave", speech(800), std::nullopt, SchedulingPolicy::parallel};
  auto p = plan_behavior(s, library(), PresetTable::defaults(), 100);
  for (const auto& e : p.elements) EXPECT_EQ(e.start_ms, 100);
  EXPECT_EQ(p.total_duration_ms, 900);
}

TEST(Plan, GestureThenSpeechWithFace) {
  BehaviorSpec s{"wave", speech(800), PresetExpression{"surprised"}, SchedulingPolicy::gesture_then_speech};
  auto p = plan_behavior(s, library(), PresetTable::defaults(), 0);
  ASSERT_EQ(p.elements.size(), 3u);
  EXPECT_EQ(kind_of(p.elements[0]), "face");
  EXPECT_EQ(kind_of(p.elements[1]), "gesture");
  EXPECT_EQ(kind_of(p.elements[2]), "speech");
  EXPECT_EQ(p.elements[2].start_ms, 500);
  EXPECT_EQ(p.total_duration_ms, 1300);
}

TEST(Plan, SpeechCarriesVisemes) {
  BehaviorSpec s{std::nullopt, speech(400), std::nullopt, SchedulingPolicy::parallel};
  auto p = plan_behavior(s, library(), PresetTable::defaults(), 0);
  const auto& sp = std::get<SpeechElement>(p.elements[0].element);
  EXPECT_EQ(sp.visemes, build_viseme_track(speech(400)));
}

TEST(Plan, Errors) {
  const auto lib = library();
  const auto presets = PresetTable::defaults();
  EXPECT_THROW(plan_behavior({"dance", std::nullopt, std::nullopt, {}}, lib, presets, 0), UnknownMotion);
  EXPECT_THROW(plan_behavior({std::nullopt, AssetRef{"x", AssetKind::audio, std::nullopt, std::nullopt}, std::nullopt, {}},
                             lib, presets, 0),
               MissingDuration);
  EXPECT_THROW(plan_behavior({std::nullopt, std::nullopt, PresetExpression{"smirk"}, {}}, lib, presets, 0), UnknownPreset);
  EXPECT_THROW(plan_behavior({}, lib, presets, 0), Error);
}

TEST(Plan, RandomSpecsAgreeWithOracles) {
  const auto lib = library();
  const auto presets = PresetTable::defaults();
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    testing::Rng rng(seed);
    BehaviorSpec s;
    if (testing::coin(rng)) s.gesture = testing::coin(rng) ? "wave" : "nod";
    if (testing::coin(rng)) s.speech = speech(testing::uniform(rng, 1, 3000));
    if (testing::coin(rng)) s.face = testing::random_face(rng);
    s.policy = static_cast<SchedulingPolicy>(testing::uniform(rng, 0, 2));
    if (s.empty()) continue;
    const TimeMs start = testing::uniform(rng, 0, 5000);

    auto p = plan_behavior(s, lib, presets, start);
    const TimeMs speech_ms = s.speech ? *s.speech->duration_ms : 0;
    const TimeMs gesture_ms = s.gesture ? compile_motion(lib.at(*s.gesture), 0).total_duration_ms : 0;
    auto expected = oracle::expected_plan(s, speech_ms, gesture_ms, start);
    ASSERT_EQ(p.elements.size(), s.element_count());
    ASSERT_EQ(p.elements.size(), expected.size());
    for (const auto& want : expected) {
      auto it = std::find_if(p.elements.begin(), p.elements.end(),
                             [&](const PlannedElement& e) { return kind_of(e) == want.kind; });
      ASSERT_NE(it, p.elements.end());
      ASSERT_EQ(it->start_ms, want.start);
      ASSERT_EQ(it->duration_ms(), want.duration);
    }
    ASSERT_EQ(p.total_duration_ms, oracle::replay_total(expected, start)) << "seed " << seed;
    const bool sequential = s.speech && s.gesture && s.policy != SchedulingPolicy::parallel;
    ASSERT_EQ(p.total_duration_ms - start, sequential ? speech_ms + gesture_ms : std::max(speech_ms, gesture_ms));

    // Translation equivariance and purity.
    auto shifted = plan_behavior(s, lib, presets, start + 250);
    for (std::size_t i = 0; i < p.elements.size(); ++i)
      ASSERT_EQ(shifted.elements[i].start_ms, p.elements[i].start_ms + 250);
    ASSERT_EQ(to_json(plan_behavior(s, lib, presets, start)).dump(), to_json(p).dump());
  }
}

}  // namespace
}  // namespace maple
