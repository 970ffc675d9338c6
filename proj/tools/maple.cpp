// maple: validate, replay, report on and serve tutoring scenarios.

#include <atomic>
#include <charconv>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "maple/bridge/server.hpp"
#include "maple/harness.hpp"
#include "maple/report.hpp"
#include "maple/scenario.hpp"

#ifndef MAPLE_DATA_DIR
#define MAPLE_DATA_DIR "data"
#endif

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct Resources {
  std::string motions_dir = std::string(MAPLE_DATA_DIR) + "/motions";
  std::string presets_file = std::string(MAPLE_DATA_DIR) + "/presets.json";
};

void add_resource_options(CLI::App* cmd, Resources& r) {
  cmd->add_option("--motions", r.motions_dir, "directory of motion files")->capture_default_str();
  cmd->add_option("--presets", r.presets_file, "expression preset file")->capture_default_str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw maple::Error("IO", "cannot write " + path);
  out << content;
}

void print_parse_error(const maple::ParseError& e) {
  std::cerr << "parse error " << e.code() << " at " << (e.field_path().empty() ? "<root>" : e.field_path())
            << " (byte " << e.byte_offset() << "): " << e.what() << "\n";
}

void print_findings(const maple::ValidationReport& report) {
  auto line = [](const char* level, const maple::Finding& f) {
    std::cout << level << " " << f.code;
    if (f.state_id) std::cout << " [" << *f.state_id << "]";
    std::cout << ": " << f.message << "\n";
  };
  for (const auto& f : report.errors) line("error", f);
  for (const auto& f : report.warnings) line("warning", f);
}

int cmd_validate(const std::string& file, const std::string& dolch_file) {
  maple::Scenario sc;
  try {
    sc = maple::load_scenario(file);
  } catch (const maple::ParseError& e) {
    print_parse_error(e);
    return 2;
  }
  auto report = maple::validate_scenario(sc);
  print_findings(report);
  if (!dolch_file.empty()) {
    try {
      const auto dolch = maple::load_word_list(dolch_file);
      for (const auto& w : sc.target_words)
        if (!dolch.count(w)) std::cout << "note: target word '" << w << "' is not on the Dolch list\n";
    } catch (const maple::Error&) {
      std::cout << "note: word list " << dolch_file << " not found\n";
    }
  }
  std::cout << sc.id << ": " << (report.accepted() ? "ok" : "invalid") << " (" << report.errors.size()
            << " errors, " << report.warnings.size() << " warnings)\n";
  return report.accepted() ? 0 : 1;
}

int cmd_run(const std::string& file, const std::string& script_file, const std::string& log_file,
            const std::string& summary_file, const std::string& trace_file, const Resources& res) {
  auto sc = maple::load_scenario(file);
  auto motions = maple::MotionLibrary::load_directory(res.motions_dir);
  auto presets = maple::PresetTable::load(res.presets_file);
  maple::Script script;
  if (!script_file.empty()) script = maple::load_script(script_file);

  maple::ScriptRunner runner(sc, motions, presets);
  runner.play(script);
  runner.run_to_end();
  const auto& session = runner.session();
  write_file(log_file, maple::to_ndjson(session.log()));

  if (!summary_file.empty())
    write_file(summary_file,
               maple::render_report(maple::summarize(session.log(), sc), maple::ReportFormat::structured));

  if (!trace_file.empty()) {
    std::vector<maple::MotionTimeline> timelines;
    for (const auto& e : runner.all_effects())
      if (const auto* g = std::get_if<maple::StartGesture>(&e)) timelines.push_back(g->timeline);
    const auto trace = maple::simulate_bus(timelines, motions.motor_ids());
    maple::Json arr = maple::Json::array();
    for (const auto& ev : trace) arr.push_back(maple::to_json(ev));
    write_file(trace_file, arr.dump(2) + "\n");
  }

  std::cout << sc.id << ": " << std::string(maple::to_string(session.phase())) << " at clock "
            << session.clock_ms() << " ms, " << session.log().size() << " log entries\n";
  return session.finished() ? 0 : 1;
}

int cmd_report(const std::string& log_file, const std::string& format, const std::string& scenario_file) {
  auto log = maple::load_log(log_file);
  auto sc = scenario_file.empty() ? maple::scenario_from_log(log) : maple::load_scenario(scenario_file);
  auto summary = maple::summarize(log, sc);
  std::cout << maple::render_report(summary, format == "structured" ? maple::ReportFormat::structured
                                                                    : maple::ReportFormat::text);
  return 0;
}

int cmd_serve(const std::string& file, int port, int heartbeat_ms, const std::string& log_file,
              const Resources& res) {
  if (const char* env = std::getenv("MAPLE_PORT")) {
    const std::string_view v(env);
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), port);
    if (ec != std::errc{} || end != v.data() + v.size() || port < 0 || port > 65535)
      throw maple::Error("BAD_PORT", "MAPLE_PORT is not a port number: " + std::string(v));
  }
  auto sc = maple::load_scenario(file);
  auto motions = maple::MotionLibrary::load_directory(res.motions_dir);
  auto presets = maple::PresetTable::load(res.presets_file);

  maple::bridge::ServiceOptions opts;
  opts.heartbeat = std::chrono::milliseconds(heartbeat_ms);
  auto service = maple::bridge::serve([&] { return maple::init_session(sc, motions, presets); },
                                      static_cast<unsigned short>(port), opts);
  std::cout << "serving " << sc.id << " on ws://127.0.0.1:" << service->port() << "/ws" << std::endl;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));

  const auto log = service->log();
  service->stop();
  if (!log_file.empty()) write_file(log_file, maple::to_ndjson(log));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maple: tutor-in-the-loop scenario engine"};
  app.require_subcommand(1);

  std::string file, script_file, log_file, summary_file, trace_file, format = "text", scenario_file;
  std::string dolch_file = std::string(MAPLE_DATA_DIR) + "/dolch.txt";
  int port = 8765;
  int heartbeat_ms = 5000;
  Resources res;

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("file", file, "scenario file")->required();
  validate->add_option("--dolch", dolch_file, "reference word list")->capture_default_str();

  auto* run = app.add_subcommand("run", "replay a scenario headlessly");
  run->add_option("file", file, "scenario file")->required();
  run->add_option("--script", script_file, "event script (JSON array)");
  run->add_option("--log", log_file, "session log output (NDJSON)")->required();
  run->add_option("--summary", summary_file, "structured summary output");
  run->add_option("--bus-trace", trace_file, "simulated motor bus trace output");
  add_resource_options(run, res);

  auto* report = app.add_subcommand("report", "summarize a session log");
  report->add_option("log", log_file, "session log (NDJSON)")->required();
  report->add_option("--format", format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  report->add_option("--scenario", scenario_file, "scenario the log came from");

  auto* serve = app.add_subcommand("serve", "run a live session over websockets");
  serve->add_option("--scenario", file, "scenario file")->required();
  serve->add_option("--port", port, "listen port (MAPLE_PORT overrides)")->capture_default_str();
  serve->add_option("--heartbeat-ms", heartbeat_ms, "status heartbeat period")->capture_default_str();
  serve->add_option("--log", log_file, "write the session log here on exit");
  add_resource_options(serve, res);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file, dolch_file);
    if (*run) return cmd_run(file, script_file, log_file, summary_file, trace_file, res);
    if (*report) return cmd_report(log_file, format, scenario_file);
    if (*serve) return cmd_serve(file, port, heartbeat_ms, log_file, res);
  } catch (const maple::ParseError& e) {
    print_parse_error(e);
    return 2;
  } catch (const maple::InvalidScenario& e) {
    print_findings(e.report());
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const maple::Error& e) {
    std::cerr << "error " << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
