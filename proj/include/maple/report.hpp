#pragma once

// Tutor-facing formative summary of one session: target-word exposures,
// quiz outcomes, response times and attention flags.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "maple/errors.hpp"
#include "maple/scenario.hpp"
#include "maple/session_log.hpp"

namespace maple {

struct WordStats {
  std::int64_t exposures = 0;
  std::int64_t quiz_attempts = 0;
  std::int64_t quiz_correct = 0;
  std::optional<double> mean_response_time_ms;

  friend bool operator==(const WordStats&, const WordStats&) = default;
};

enum class FlagReason { timeout, response_time_outlier };

inline std::string_view to_string(FlagReason r) {
  return r == FlagReason::timeout ? "timeout" : "response_time_outlier";
}

struct AttentionFlag {
  std::string state_id;
  FlagReason reason = FlagReason::timeout;
  friend bool operator==(const AttentionFlag&, const AttentionFlag&) = default;
};

struct SummaryTotals {
  std::int64_t quizzes_shown = 0;
  std::int64_t answered = 0;
  std::int64_t correct = 0;
  std::int64_t paused_count = 0;
  TimeMs active_duration_ms = 0;
  friend bool operator==(const SummaryTotals&, const SummaryTotals&) = default;
};

struct TutorSummary {
  std::string scenario_id;
  std::map<std::string, WordStats> per_word;
  std::vector<AttentionFlag> attention_flags;  // log order
  SummaryTotals totals;

  // Nothing happened: no exposures, quizzes, pauses, flags or active time.
  bool is_empty() const {
    const bool words_zero = std::all_of(per_word.begin(), per_word.end(), [](const auto& kv) {
      return kv.second == WordStats{};
    });
    return words_zero && attention_flags.empty() && totals == SummaryTotals{};
  }

  friend bool operator==(const TutorSummary&, const TutorSummary&) = default;
};

// A response time is an outlier when it exceeds twice the median of all
// response times in the session; only applied with at least 3 answers.
inline constexpr std::size_t kOutlierMinAnswers = 3;

namespace report_detail {

// 2 * median, kept integral: the median of an even count is a half-integer.
inline std::int64_t twice_median(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return 2 * v[n / 2];
  return v[n / 2 - 1] + v[n / 2];
}

inline std::string payload_string(const Json& payload, const char* key) {
  auto it = payload.find(key);
  return (it != payload.end() && it->is_string()) ? it->get<std::string>() : std::string{};
}

}  // namespace report_detail

// Aggregates the quiz_answered, quiz_timeout, word_exposure and pause
// entries of `log`. Words come from the scenario (quiz target_word), so the
// log must belong to it: throws ScenarioMismatch otherwise.
inline TutorSummary summarize(const SessionLog& log, const Scenario& scenario) {
  using report_detail::payload_string;
  TutorSummary s;
  s.scenario_id = scenario.id;
  for (const auto& w : scenario.target_words) s.per_word[w];

  auto quiz_word = [&](const std::string& sid) -> std::optional<std::string> {
    const State* st = scenario.find_state(sid);
    if (st == nullptr || !is_quiz(*st)) throw ScenarioMismatch(sid);
    return std::get<QuizState>(*st).target_word;
  };

  struct Answer {
    std::string state;
    std::int64_t rt;
  };
  std::vector<Answer> answers;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> rt_sum;  // word -> (sum, n)
  std::vector<std::pair<std::size_t, AttentionFlag>> flags;             // (log index, flag)

  for (std::size_t i = 0; i < log.size(); ++i) {
    const LogEntry& e = log[i];
    s.totals.active_duration_ms = std::max(s.totals.active_duration_ms, e.at_ms);
    if (e.kind == log_kind::quiz_shown) {
      quiz_word(payload_string(e.payload, "state"));
      ++s.totals.quizzes_shown;
    } else if (e.kind == log_kind::quiz_answered) {
      const std::string sid = payload_string(e.payload, "state");
      auto word = quiz_word(sid);
      const bool correct = e.payload.value("correct", false);
      const std::int64_t rt = e.payload.value("response_time_ms", std::int64_t{0});
      ++s.totals.answered;
      if (correct) ++s.totals.correct;
      if (word) {
        auto& ws = s.per_word[*word];
        ++ws.quiz_attempts;
        if (correct) ++ws.quiz_correct;
        auto& acc = rt_sum[*word];
        acc.first += rt;
        ++acc.second;
      }
      answers.push_back({sid, rt});
      flags.push_back({i, AttentionFlag{sid, FlagReason::response_time_outlier}});
    } else if (e.kind == log_kind::quiz_timeout) {
      const std::string sid = payload_string(e.payload, "state");
      quiz_word(sid);
      flags.push_back({i, AttentionFlag{sid, FlagReason::timeout}});
    } else if (e.kind == log_kind::word_exposure) {
      ++s.per_word[payload_string(e.payload, "word")].exposures;
    } else if (e.kind == log_kind::pause) {
      ++s.totals.paused_count;
    }
  }

  for (const auto& [word, acc] : rt_sum)
    s.per_word[word].mean_response_time_ms =
        static_cast<double>(acc.first) / static_cast<double>(acc.second);

  std::vector<std::int64_t> rts;
  for (const auto& a : answers) rts.push_back(a.rt);
  const bool outliers_apply = rts.size() >= kOutlierMinAnswers;
  const std::int64_t limit = outliers_apply ? report_detail::twice_median(rts) : 0;
  std::size_t answer_no = 0;
  for (const auto& [idx, flag] : flags) {
    (void)idx;
    if (flag.reason == FlagReason::timeout) {
      s.attention_flags.push_back(flag);
    } else {
      if (outliers_apply && answers[answer_no].rt > limit) s.attention_flags.push_back(flag);
      ++answer_no;
    }
  }
  return s;
}

// Minimal scenario reconstructed from the log alone (scenario id, target
// words, quiz ids and words), for reporting when the scenario file is absent.
inline Scenario scenario_from_log(const SessionLog& log) {
  using report_detail::payload_string;
  Scenario sc;
  std::set<std::string> quizzes;
  for (const auto& e : log) {
    if (e.kind == log_kind::session_started) {
      sc.id = payload_string(e.payload, "scenario");
      if (auto it = e.payload.find("target_words"); it != e.payload.end() && it->is_array())
        for (const auto& w : *it)
          if (w.is_string()) sc.target_words.push_back(w.get<std::string>());
    } else if (e.kind == log_kind::quiz_shown || e.kind == log_kind::quiz_answered ||
               e.kind == log_kind::quiz_timeout) {
      const std::string sid = payload_string(e.payload, "state");
      if (!quizzes.insert(sid).second) continue;
      QuizState q;
      q.id = sid;
      if (auto it = e.payload.find("word"); it != e.payload.end() && it->is_string())
        q.target_word = it->get<std::string>();
      sc.states.emplace_back(std::move(q));
    }
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Rendering

enum class ReportFormat { text, structured };

inline Json to_json(const TutorSummary& s) {
  Json words = Json::object();
  for (const auto& [w, ws] : s.per_word)
    words[w] = Json{{"exposures", ws.exposures},
                    {"quiz_attempts", ws.quiz_attempts},
                    {"quiz_correct", ws.quiz_correct},
                    {"mean_response_time_ms",
                     ws.mean_response_time_ms ? Json(*ws.mean_response_time_ms) : Json(nullptr)}};
  Json flags = Json::array();
  for (const auto& f : s.attention_flags)
    flags.push_back(Json{{"state_id", f.state_id}, {"reason", std::string(to_string(f.reason))}});
  return Json{{"scenario_id", s.scenario_id},
              {"per_word", words},
              {"attention_flags", flags},
              {"totals",
               Json{{"quizzes_shown", s.totals.quizzes_shown},
                    {"answered", s.totals.answered},
                    {"correct", s.totals.correct},
                    {"paused_count", s.totals.paused_count},
                    {"active_duration_ms", s.totals.active_duration_ms}}}};
}

inline TutorSummary summary_from_json(const FieldReader& r) {
  r.expect_object();
  TutorSummary s;
  s.scenario_id = r.field("scenario_id").as_string();
  auto words = r.field("per_word");
  words.expect_object();
  for (auto it = words.node().begin(); it != words.node().end(); ++it) {
    auto w = words.field(it.key());
    WordStats ws;
    ws.exposures = w.field("exposures").as_int();
    ws.quiz_attempts = w.field("quiz_attempts").as_int();
    ws.quiz_correct = w.field("quiz_correct").as_int();
    if (w.has("mean_response_time_ms"))
      ws.mean_response_time_ms = w.field("mean_response_time_ms").as_number();
    s.per_word[it.key()] = ws;
  }
  auto flags = r.field("attention_flags");
  for (std::size_t i = 0, n = flags.array_size(); i < n; ++i) {
    auto f = flags.element(i);
    AttentionFlag flag;
    flag.state_id = f.field("state_id").as_string();
    auto reason = f.field("reason");
    const std::string rs = reason.as_string();
    if (rs == "timeout")
      flag.reason = FlagReason::timeout;
    else if (rs == "response_time_outlier")
      flag.reason = FlagReason::response_time_outlier;
    else
      reason.fail("BAD_VALUE", "unknown flag reason");
    s.attention_flags.push_back(flag);
  }
  auto t = r.field("totals");
  s.totals.quizzes_shown = t.field("quizzes_shown").as_int();
  s.totals.answered = t.field("answered").as_int();
  s.totals.correct = t.field("correct").as_int();
  s.totals.paused_count = t.field("paused_count").as_int();
  s.totals.active_duration_ms = t.field("active_duration_ms").as_int();
  return s;
}

inline TutorSummary parse_report(std::string_view structured) {
  auto doc = JsonDocument::parse(structured);
  return summary_from_json(FieldReader::root(doc));
}

namespace report_detail {

inline std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}
inline std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}
inline std::string fixed1(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

}  // namespace report_detail

inline std::string render_report(const TutorSummary& s, ReportFormat format) {
  if (format == ReportFormat::structured) return to_json(s).dump(2) + "\n";

  using namespace report_detail;
  std::string out;
  const std::string title = "Tutor summary: " + s.scenario_id;
  out += title + "\n" + std::string(title.size(), '=') + "\n";
  if (s.is_empty()) {
    out += "no quiz activity recorded\n";
    return out;
  }

  if (!s.per_word.empty()) {
    std::size_t w = 4;
    for (const auto& [word, ws] : s.per_word) w = std::max(w, word.size());
    w += 2;
    out += pad_right("word", w) + pad_left("exposures", 10) + pad_left("attempts", 10) +
           pad_left("correct", 9) + pad_left("mean rt (ms)", 14) + "\n";
    for (const auto& [word, ws] : s.per_word) {
      out += pad_right(word, w) + pad_left(std::to_string(ws.exposures), 10) +
             pad_left(std::to_string(ws.quiz_attempts), 10) +
             pad_left(std::to_string(ws.quiz_correct), 9) +
             pad_left(ws.mean_response_time_ms ? fixed1(*ws.mean_response_time_ms) : "-", 14) + "\n";
    }
    out += "\n";
  }

  if (s.totals.quizzes_shown == 0) {
    out += "no quiz activity recorded\n";
  } else {
    out += "quizzes: " + std::to_string(s.totals.quizzes_shown) + " shown, " +
           std::to_string(s.totals.answered) + " answered, " + std::to_string(s.totals.correct) +
           " correct\n";
  }
  out += "pauses: " + std::to_string(s.totals.paused_count) + "\n";
  out += "active time: " + fixed1(static_cast<double>(s.totals.active_duration_ms) / 1000.0) + " s\n";
  if (s.attention_flags.empty()) {
    out += "attention flags: none\n";
  } else {
    out += "attention flags:\n";
    for (const auto& f : s.attention_flags)
      out += "  - " + f.state_id + ": " + std::string(to_string(f.reason)) + "\n";
  }
  return out;
}

}  // namespace maple
