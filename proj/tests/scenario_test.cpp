#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"

namespace maple {
namespace {

using testing::Rng;

const char* kMinimal = R"({
  "schema_version": 1,
  "id": "tiny",
  "initial_state": "only",
  "states": [
    {"kind": "story", "id": "only", "text": "Hi.",
     "transition": {"type": "timed", "duration_ms": 2000}}
  ]
})";

std::string quiz_doc(const std::string& correct_index) {
  return R"({
  "schema_version": 1,
  "id": "q",
  "target_words": ["fox"],
  "initial_state": "q1",
  "states": [
    {"kind": "quiz", "id": "q1", "prompt": "Who?", "options": ["fox", "bear", "owl"],
     "correct_index": )" +
         correct_index + R"(, "target_word": "fox"}
  ]
})";
}

TEST(ParseScenario, MinimalStory) {
  auto sc = parse_scenario(kMinimal);
  ASSERT_EQ(sc.states.size(), 1u);
  EXPECT_TRUE(sc.target_words.empty());
  const auto& s = std::get<StoryState>(sc.states[0]);
  const auto& t = std::get<TimedTransition>(s.transition);
  EXPECT_EQ(t.duration_ms, 2000);
  EXPECT_FALSE(t.next.has_value());
}

TEST(ParseScenario, QuizOptionsKeepOrder) {
  auto sc = parse_scenario(quiz_doc("1"));
  const auto& q = std::get<QuizState>(sc.states[0]);
  EXPECT_EQ(q.options, (std::vector<std::string>{"fox", "bear", "owl"}));
  EXPECT_EQ(q.correct_index, 1);
}

TEST(ParseScenario, QuizDefaultsFeedbackAndPolicy) {
  auto sc = parse_scenario(quiz_doc("0"));
  const auto& q = std::get<QuizState>(sc.states[0]);
  EXPECT_EQ(q.on_correct, default_correct_feedback());
  EXPECT_EQ(q.on_incorrect, default_incorrect_feedback());
  EXPECT_EQ(q.incorrect_policy, IncorrectPolicy::advance);
  EXPECT_FALSE(q.timeout_ms);
  ASSERT_TRUE(std::holds_alternative<PresetExpression>(*q.on_correct.face));
  EXPECT_EQ(std::get<PresetExpression>(*q.on_correct.face).name, "happy");
  EXPECT_EQ(std::get<PresetExpression>(*q.on_incorrect.face).name, "frown");
}

TEST(ParseScenario, StringIndexIsTypeError) {
  const std::string doc = quiz_doc("\"1\"");
  try {
    parse_scenario(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "WRONG_TYPE");
    EXPECT_EQ(e.field_path(), "states[0].correct_index");
    EXPECT_EQ(e.byte_offset(), doc.find("\"1\""));
  }
}

TEST(ParseScenario, SyntaxErrorHasOffset) {
  const std::string doc = "{\"schema_version\": 1,, }";
  try {
    parse_scenario(doc);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "SYNTAX");
    EXPECT_GE(e.byte_offset(), 20u);
    EXPECT_LE(e.byte_offset(), 22u);
  }
}

TEST(ParseScenario, MissingFieldNamesPath) {
  try {
    parse_scenario(R"({"schema_version": 1, "id": "x", "initial_state": "a",
      "states": [{"kind": "story", "id": "a", "text": "t"}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "MISSING_FIELD");
    EXPECT_EQ(e.field_path(), "states[0].transition");
  }
}

TEST(ParseScenario, UnknownSchemaVersion) {
  try {
    parse_scenario(R"({"schema_version": 2, "id": "x", "initial_state": "a", "states": []})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "UNSUPPORTED_SCHEMA_VERSION");
    EXPECT_EQ(e.field_path(), "schema_version");
  }
}

TEST(ParseScenario, UnknownFieldRejected) {
  try {
    parse_scenario(R"({"schema_version": 1, "id": "x", "initial_state": "a", "states": [], "colour": 1})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "UNKNOWN_FIELD");
    EXPECT_EQ(e.field_path(), "colour");
  }
}

TEST(ParseScenario, ExplicitFaceAndPolicy) {
  auto sc = parse_scenario(R"({"schema_version": 1, "id": "x", "initial_state": "a",
    "assets": [{"id": "hi", "kind": "audio", "duration_ms": 800}],
    "states": [{"kind": "story", "id": "a", "text": "t",
      "behavior": {"speech": "hi", "gesture": "wave", "face": {"12": 0.5}, "policy": "gesture_then_speech"},
      "transition": {"type": "timed", "duration_ms": 10}}]})");
  const auto& b = *std::get<StoryState>(sc.states[0]).behavior;
  EXPECT_EQ(b.policy, SchedulingPolicy::gesture_then_speech);
  EXPECT_EQ(b.speech->id, "hi");
  EXPECT_EQ(std::get<ExplicitExpression>(*b.face).intensities.at(12), 0.5);
}

TEST(ParseScenario, BundledSampleIsValid) {
  auto sc = load_scenario(MAPLE_DATA_DIR "/samples/fox_story.json");
  auto r = validate_scenario(sc);
  EXPECT_TRUE(r.accepted()) << to_json(r).dump();
  EXPECT_TRUE(r.warnings.empty()) << to_json(r).dump();
}

TEST(RoundTrip, BundledSample) {
  auto sc = load_scenario(MAPLE_DATA_DIR "/samples/fox_story.json");
  EXPECT_EQ(parse_scenario(serialize_scenario(sc)), sc);
}

TEST(RoundTrip, RandomScenarios) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    auto sc = testing::random_scenario(rng);
    ASSERT_EQ(parse_scenario(serialize_scenario(sc)), sc) << "seed " << seed;
  }
}

// -- validation -------------------------------------------------------------

Scenario two_story(const std::string& next_of_a) {
  Scenario sc;
  sc.id = "two";
  sc.initial_state = "A";
  StoryState a{"A", std::nullopt, "a", std::nullopt, std::nullopt, std::nullopt,
               TimedTransition{1000, next_of_a.empty() ? std::nullopt : std::optional<std::string>(next_of_a)}};
  StoryState b{"B", std::nullopt, "b", std::nullopt, std::nullopt, std::nullopt, TimedTransition{1000, std::nullopt}};
  sc.states = {a, b};
  return sc;
}

TEST(Validate, CorrectIndexOutOfRange) {
  auto sc = parse_scenario(quiz_doc("5"));
  auto r = validate_scenario(sc);
  EXPECT_TRUE(r.has_error("CORRECT_INDEX_OUT_OF_RANGE", "q1"));
  EXPECT_FALSE(r.accepted());
}

TEST(Validate, MissingAsset) {
  auto sc = two_story("B");
  std::get<StoryState>(sc.states[0]).audio = AssetRef{"narration", AssetKind::audio, std::nullopt, std::nullopt};
  auto r = validate_scenario(sc, AssetIndex{});
  EXPECT_TRUE(r.has_error("MISSING_ASSET", "A"));
}

TEST(Validate, UnreachableStateMatchesOracle) {
  auto sc = two_story("");
  auto r = validate_scenario(sc);
  EXPECT_TRUE(r.has_error("UNREACHABLE_STATE", "B"));
  EXPECT_FALSE(oracle::reachable_fixpoint(sc).count("B"));
  EXPECT_EQ(oracle::error_keys(r), oracle::brute_force_errors(sc, AssetIndex(sc.asset_manifest)));
}

TEST(Validate, NoTerminalAndDanglingTarget) {
  auto sc = two_story("B");
  std::get<TimedTransition>(std::get<StoryState>(sc.states[1]).transition).next = "A";
  EXPECT_TRUE(validate_scenario(sc).has_error("NO_TERMINAL_STATE"));
  std::get<TimedTransition>(std::get<StoryState>(sc.states[1]).transition).next = "nowhere";
  auto r = validate_scenario(sc);
  EXPECT_TRUE(r.has_error("UNKNOWN_TRANSITION_TARGET", "B"));
}

TEST(Validate, StoryInvariants) {
  auto sc = two_story("B");
  auto& a = std::get<StoryState>(sc.states[0]);
  a.text = "";
  a.transition = AwaitInputTransition{};
  auto& b = std::get<StoryState>(sc.states[1]);
  std::get<TimedTransition>(b.transition).duration_ms = 0;
  b.repetition = RepetitionPoint{"ghost", 0, false};
  auto r = validate_scenario(sc);
  EXPECT_TRUE(r.has_error("EMPTY_TEXT_WITHOUT_AUDIO", "A"));
  EXPECT_TRUE(r.has_error("AWAIT_INPUT_ON_STORY", "A"));
  EXPECT_TRUE(r.has_error("NONPOSITIVE_DURATION", "B"));
  EXPECT_TRUE(r.has_error("INVALID_REPETITION_COUNT", "B"));
  EXPECT_TRUE(r.has_error("UNKNOWN_TARGET_WORD", "B"));
  EXPECT_TRUE(r.has_error("MISSING_WORD_AUDIO", "B"));
}

TEST(Validate, FindingsOrderedScenarioThenStateThenCode) {
  auto sc = two_story("B");
  sc.initial_state = "Z";
  std::get<StoryState>(sc.states[1]).text = "";
  std::get<TimedTransition>(std::get<StoryState>(sc.states[1]).transition).duration_ms = -1;
  auto r = validate_scenario(sc);
  ASSERT_GE(r.errors.size(), 4u);
  EXPECT_EQ(r.errors[0].code, "INITIAL_STATE_MISSING");
  EXPECT_FALSE(r.errors[0].state_id);
  std::vector<std::string> b_codes;
  for (const auto& f : r.errors)
    if (f.state_id == "B") b_codes.push_back(f.code);
  EXPECT_TRUE(std::is_sorted(b_codes.begin(), b_codes.end()));
  EXPECT_EQ(validate_scenario(sc), r);
}

TEST(Validate, Warnings) {
  auto sc = two_story("B");
  sc.target_words = {"said", "said"};
  sc.asset_manifest.push_back({"long", AssetKind::audio, 5000, std::nullopt});
  std::get<StoryState>(sc.states[0]).audio = AssetRef{"long", AssetKind::audio, std::nullopt, std::nullopt};
  auto r = validate_scenario(sc);
  EXPECT_TRUE(r.accepted());
  EXPECT_TRUE(r.has_warning("DUPLICATE_TARGET_WORD"));
  EXPECT_TRUE(r.has_warning("UNUSED_TARGET_WORD"));
  EXPECT_TRUE(r.has_warning("TIMER_SHORTER_THAN_AUDIO"));
}

TEST(Validate, GeneratedScenariosAreAccepted) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    auto sc = testing::random_scenario(rng);
    auto r = validate_scenario(sc);
    ASSERT_TRUE(r.accepted()) << "seed " << seed << " " << to_json(r).dump();
  }
}

// Breaks a valid scenario in one or more random ways.
void mutate(Rng& rng, Scenario& sc) {
  using testing::uniform;
  const int n = static_cast<int>(uniform(rng, 1, 3));
  for (int i = 0; i < n; ++i) {
    if (sc.states.empty()) return;
    auto& st = sc.states[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(sc.states.size()) - 1))];
    switch (uniform(rng, 0, 11)) {
      case 0: sc.states.erase(sc.states.begin() + uniform(rng, 0, static_cast<std::int64_t>(sc.states.size()) - 1)); break;
      case 1: sc.initial_state = "missing"; break;
      case 2:
        if (auto* s = std::get_if<StoryState>(&st)) std::get<TimedTransition>(s->transition).next = "s0";
        else std::get<QuizState>(st).next = "s0";
        break;
      case 3:
        if (auto* s = std::get_if<StoryState>(&st)) std::get<TimedTransition>(s->transition).next = "ghost";
        else std::get<QuizState>(st).next = "ghost";
        break;
      case 4:
        if (auto* q = std::get_if<QuizState>(&st)) q->correct_index = static_cast<std::int64_t>(q->options.size()) + uniform(rng, 0, 2);
        break;
      case 5:
        if (auto* q = std::get_if<QuizState>(&st)) q->options.resize(1);
        break;
      case 6: sc.states.push_back(sc.states.front()); break;
      case 7:
        if (auto* s = std::get_if<StoryState>(&st)) {
          s->text.clear();
          s->audio.reset();
        }
        break;
      case 8:
        if (!sc.asset_manifest.empty()) sc.asset_manifest.erase(sc.asset_manifest.begin());
        break;
      case 9:
        if (auto* s = std::get_if<StoryState>(&st)) std::get<TimedTransition>(s->transition).duration_ms = -uniform(rng, 0, 5);
        else std::get<QuizState>(st).timeout_ms = 0;
        break;
      case 10:
        if (auto* s = std::get_if<StoryState>(&st)) s->behavior = BehaviorSpec{};
        else std::get<QuizState>(st).on_incorrect = BehaviorSpec{};
        break;
      default:
        if (auto* s = std::get_if<StoryState>(&st)) s->repetition = RepetitionPoint{"nope", uniform(rng, -1, 2), true};
        else std::get<QuizState>(st).target_word = "nope";
        break;
    }
  }
}

TEST(Validate, AgreesWithBruteForceChecker) {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    auto sc = testing::random_scenario(rng);
    if (seed % 5 != 0) mutate(rng, sc);
    const AssetIndex assets(sc.asset_manifest);
    auto r = validate_scenario(sc, assets);
    const auto expected = oracle::brute_force_errors(sc, assets);
    ASSERT_EQ(oracle::error_keys(r), expected) << "seed " << seed;
    ASSERT_EQ(r.accepted(), expected.empty());
    rejected += r.accepted() ? 0 : 1;
  }
  EXPECT_GT(rejected, 200);
}

TEST(WordList, BundledDolch) {
  auto words = load_word_list(MAPLE_DATA_DIR "/dolch.txt");
  EXPECT_EQ(words.size(), 220u);
  EXPECT_TRUE(words.count("said"));
  EXPECT_TRUE(words.count("look"));
}

}  // namespace
}  // namespace maple
