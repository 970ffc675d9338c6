// Acceptance runner: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "e2e.hpp"

namespace {

using namespace maple;
using maple::testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome deterministic_replay() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t entries = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    auto sc = testing::random_scenario(rng);
    if (sc.states.size() > 10) return fail("generator exceeded 10 states");
    auto script = testing::random_script(rng, 20, 40000, true);
    if (script.size() > 20) return fail("generator exceeded 20 events");
    const auto a = testing::ndjson_of(sc, script);
    const auto b = testing::ndjson_of(parse_scenario(serialize_scenario(sc)), parse_script(to_json(script).dump()));
    if (a != b) return fail("seed " + std::to_string(seed) + ": logs differ");
    entries += static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n'));
  }
  const double secs = seconds_since(t0);
  if (secs >= 10.0) return fail("took " + fmt("%.2f", secs) + " s");
  return {true, "100 pairs, " + std::to_string(entries) + " log entries byte-identical in " + fmt("%.2f", secs) + " s"};
}

Outcome pause_invariance() {
  int cases = 0, pairs = 0;
  for (std::uint64_t seed = 0; cases < 50 && seed < 1000; ++seed) {
    auto c = testing::make_pause_case(seed);
    if (!c) continue;
    if (auto err = testing::check_pause_case(*c); !err.empty())
      return fail("seed " + std::to_string(seed) + ": " + err);
    ++cases;
    pairs += static_cast<int>(c->insertions.size());
  }
  if (cases < 50) return fail("only " + std::to_string(cases) + " scripts had an element boundary");
  return {true, "50 scripts, " + std::to_string(pairs) + " pause/resume pairs, timestamps unchanged"};
}

Outcome motion_compiler() {
  std::size_t writes = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    auto m = testing::random_motion(rng, 8, 12);
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    if (m.motor_ids.size() > 8 || m.keyframes.size() > 12) return fail(tag + "generator out of bounds");
    const TimeMs start = testing::uniform(rng, 0, 10000);
    auto tl = compile_motion(m, start);
    std::vector<TimeMs> times;
    for (const auto& c : tl.commands) times.push_back(c.at_ms);
    if (times != oracle::prefix_sum_times(m, start)) return fail(tag + "command times differ from prefix sums");
    if (tl.commands.size() != m.keyframes.size()) return fail(tag + "not one command per keyframe");

    std::set<MotorId> motors(m.motor_ids.begin(), m.motor_ids.end());
    auto trace = simulate_bus({tl}, motors);
    std::size_t group_writes = 0;
    for (const auto& ev : trace) group_writes += std::holds_alternative<GroupWrite>(ev);
    if (group_writes != m.keyframes.size()) return fail(tag + "not one GroupWrite per keyframe");
    if (trace.size() != group_writes + 3 || !std::holds_alternative<TorqueOn>(trace.front()) ||
        !std::holds_alternative<TorqueOff>(trace[trace.size() - 2]) || !std::holds_alternative<BusClose>(trace.back()))
      return fail(tag + "bus lifecycle out of order");
    for (std::size_t i = 0; i < group_writes; ++i)
      if (std::get<GroupWrite>(trace[i + 1]).command.at_ms != times[i]) return fail(tag + "bus write order");
    writes += group_writes;
  }
  return {true, "200 motion files, " + std::to_string(writes) + " group writes match the oracle"};
}

Outcome quiz_bookkeeping() {
  testing::QuizStats stats;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    if (auto err = testing::check_quiz_bookkeeping(seed, stats); !err.empty()) return fail(err);
  if (stats.correct == 0 || stats.incorrect == 0) return fail("generator produced no correct or no incorrect answers");
  return {true, std::to_string(stats.sessions) + " sessions, " + std::to_string(stats.answers) + " answers (" +
                    std::to_string(stats.correct) + " correct, " + std::to_string(stats.incorrect) +
                    " incorrect) with matching feedback, " + std::to_string(stats.timeouts) + " timeouts"};
}

Outcome repetition_scaffold() {
  auto sc = load_scenario(MAPLE_DATA_DIR "/samples/fox_story.json");
  ScriptRunner r(sc, testing::bundled_motions(), PresetTable::load(MAPLE_DATA_DIR "/presets.json"));
  r.play(load_script(MAPLE_DATA_DIR "/samples/fox_story_script.json"));
  r.run_to_end();
  if (!r.session().finished()) return fail("sample session did not finish");

  std::map<std::string, int> exposures, points;
  std::string state;
  for (const auto& e : r.all_effects()) {
    if (const auto* l = std::get_if<LogEffect>(&e)) {
      if (l->entry.kind == "state_entered") state = l->entry.payload.at("state").get<std::string>();
      if (l->entry.kind == "word_exposure") ++exposures[l->entry.payload.at("state").get<std::string>()];
    }
    if (const auto* g = std::get_if<StartGesture>(&e); g && g->motion == kPointGesture) ++points[state];
  }
  int checked = 0;
  for (const auto& st : sc.states) {
    const auto* s = std::get_if<StoryState>(&st);
    if (!s || !s->repetition) continue;
    ++checked;
    if (exposures[s->id] != s->repetition->count)
      return fail(s->id + ": " + std::to_string(exposures[s->id]) + " word_exposure entries");
    if (s->repetition->count == 3 && exposures[s->id] != 3) return fail(s->id + ": not three exposures");
    if (points[s->id] != (s->repetition->deictic ? 1 : 0))
      return fail(s->id + ": " + std::to_string(points[s->id]) + " point_at_screen gestures");
  }
  if (checked == 0) return fail("sample has no repetition points");
  return {true, std::to_string(checked) + " repetition points, 3 exposures and one held point each"};
}

Outcome summary_oracle() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    auto sc = testing::random_scenario(rng);
    auto log = testing::random_log(rng, sc);
    if (summarize(log, sc) != oracle::brute_force_summary(log, sc))
      return fail("seed " + std::to_string(seed) + ": summary differs from brute force");
  }
  auto sc = load_scenario(MAPLE_DATA_DIR "/samples/fox_story.json");
  auto log = load_log(MAPLE_DATA_DIR "/samples/fox_story_session.ndjson");
  const auto text = render_report(summarize(log, sc), ReportFormat::text);
  if (text != read_file(MAPLE_GOLDEN_DIR "/fox_story_report.txt")) return fail("golden report mismatch");
  return {true, "100 logs field-exact, golden report byte-identical"};
}

Outcome protocol_robustness() {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const auto frame = testing::fuzz_frame(rng);
    try {
      bridge::decode_message(frame);
    } catch (const bridge::ProtocolError&) {
    } catch (const std::exception& e) {
      return fail(std::string("decode threw ") + e.what());
    }
  }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng r(seed);
    auto m = testing::random_wire_message(r);
    if (bridge::decode_message(bridge::encode_message(m)) != m)
      return fail("round trip failed for seed " + std::to_string(seed));
  }
  auto e2e = testing::run_three_client_e2e();
  if (!e2e.failure.empty()) return fail("end to end: " + e2e.failure);
  return {true, "10000 fuzz frames, 1000 round trips, " + std::to_string(e2e.effects_delivered) + " effects to " +
                    std::to_string(e2e.clients) + " clients in order"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"deterministic replay", deterministic_replay},
      {"pause invariance", pause_invariance},
      {"motion compiler oracle", motion_compiler},
      {"quiz bookkeeping", quiz_bookkeeping},
      {"repetition scaffold", repetition_scaffold},
      {"summary oracle equivalence", summary_oracle},
      {"protocol robustness", protocol_robustness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
