#include "quasar/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "quasar/metrics.hpp"

namespace quasar {

namespace {

std::string fixed(double v, int precision = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string fixed_or_na(const std::optional<double>& v) { return v ? fixed(*v) : "n/a"; }

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

const EvidenceList& snapshot_for(const PipelineTrace& trace, const RerankSchedule& schedule,
                                 std::size_t k) {
  const EvidenceList* chosen = &trace.pool;
  const auto& stages = schedule.stages();
  for (std::size_t i = 0; i < trace.stage_outputs.size() && i < stages.size(); ++i) {
    if (stages[i].output_k >= k) chosen = &trace.stage_outputs[i];
  }
  return *chosen;
}

EvalRow evaluate_question(const Pipeline& pipeline, const Question& q,
                          const std::vector<std::size_t>& ks) {
  EvalRow row;
  row.id = q.id;
  for (std::size_t k : ks) {
    row.ap_at[k] = false;
    row.rr_at[k] = 0.0;
  }
  try {
    PipelineTrace trace = pipeline.run(q);
    const Catalog* catalog = &pipeline.catalog();
    row.predicted = trace.result.answer();
    row.refrained = trace.result.refrained();
    row.correct = p_at_1(row.predicted, q.gold_answers, catalog) == 1;
    row.answer_present = answer_presence(trace.final_evidence, q.gold_answers,
                                         trace.final_evidence.size(), catalog);
    for (std::size_t k : ks) {
      const EvidenceList& ranked = snapshot_for(trace, pipeline.schedule(), k);
      row.ap_at[k] = answer_presence(ranked, q.gold_answers, k, catalog);
      row.rr_at[k] = mrr_at_k(ranked, q.gold_answers, k, catalog);
    }
  } catch (const std::exception& e) {
    row.predicted.clear();
    row.correct = false;
    row.refrained = false;
    row.error = e.what();
  }
  return row;
}

EvalReport run_benchmark(const Pipeline& pipeline, const std::vector<Question>& questions,
                         std::vector<std::size_t> ks, int jobs) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  EvalReport report;
  report.ks = ks;
  report.rows.resize(questions.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < questions.size(); i = next++) {
      report.rows[i] = evaluate_question(pipeline, questions[i], ks);
    }
  };
  std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), questions.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const EvalRow& a, const EvalRow& b) { return a.id < b.id; });
  report.summarize();
  return report;
}

void EvalReport::summarize() {
  p_at_1 = 0.0;
  ap_at.clear();
  mrr_at.clear();
  for (std::size_t k : ks) {
    ap_at[k] = 0.0;
    mrr_at[k] = 0.0;
  }
  std::vector<RefrainRow> refrain_rows;
  refrain_rows.reserve(rows.size());
  std::size_t correct = 0;
  for (const auto& row : rows) {
    if (row.correct) ++correct;
    for (std::size_t k : ks) {
      auto ap = row.ap_at.find(k);
      if (ap != row.ap_at.end() && ap->second) ap_at[k] += 1.0;
      auto rr = row.rr_at.find(k);
      if (rr != row.rr_at.end()) mrr_at[k] += rr->second;
    }
    refrain_rows.push_back({row.refrained, row.answer_present, row.correct});
  }
  RefrainMetrics refrain = refrain_metrics(refrain_rows);
  refrain_rate = refrain.refrain_rate;
  refrain_accuracy = refrain.refrain_accuracy;
  p_at_1_answered = refrain.p_at_1_answered;
  if (rows.empty()) return;
  auto n = static_cast<double>(rows.size());
  p_at_1 = static_cast<double>(correct) / n;
  for (std::size_t k : ks) {
    ap_at[k] /= n;
    mrr_at[k] /= n;
  }
}

std::string EvalReport::to_jsonl() const {
  std::string out;
  for (const auto& row : rows) {
    Json ap = Json::object();
    Json rr = Json::object();
    for (const auto& [k, v] : row.ap_at) ap[std::to_string(k)] = v;
    for (const auto& [k, v] : row.rr_at) rr[std::to_string(k)] = v;
    Json j{{"id", row.id},
           {"predicted", row.predicted},
           {"correct", row.correct},
           {"refrained", row.refrained},
           {"answer_present", row.answer_present},
           {"ap_at", ap},
           {"rr_at", rr}};
    if (!row.error.empty()) j["error"] = row.error;
    out += j.dump();
    out += '\n';
  }
  Json ap = Json::object();
  Json mrr = Json::object();
  for (const auto& [k, v] : ap_at) ap[std::to_string(k)] = v;
  for (const auto& [k, v] : mrr_at) mrr[std::to_string(k)] = v;
  Json summary{{"questions", rows.size()},
               {"p_at_1", p_at_1},
               {"p_at_1_answered", optional_json(p_at_1_answered)},
               {"ap_at", ap},
               {"mrr_at", mrr},
               {"refrain_rate", refrain_rate},
               {"refrain_accuracy", optional_json(refrain_accuracy)},
               {"refrain_accuracy_denominator", "refrained questions"}};
  out += Json{{"summary", summary}}.dump();
  out += '\n';
  return out;
}

std::string EvalReport::to_table() const {
  std::vector<std::string> header{"id", "predicted", "correct", "refrained", "present"};
  for (std::size_t k : ks) header.push_back("AP@" + std::to_string(k));
  for (std::size_t k : ks) header.push_back("RR@" + std::to_string(k));

  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    std::vector<std::string> line{row.id, row.error.empty() ? row.predicted : "ERROR",
                                  row.correct ? "1" : "0", row.refrained ? "1" : "0",
                                  row.answer_present ? "1" : "0"};
    for (std::size_t k : ks) line.push_back(row.ap_at.at(k) ? "1" : "0");
    for (std::size_t k : ks) line.push_back(fixed(row.rr_at.at(k)));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) s += "  ";
      s += line[c];
      if (c + 1 < line.size()) s.append(width[c] - line[c].size(), ' ');
    }
    s += '\n';
    return s;
  };

  std::string out =
      "# refrain_accuracy = refrained questions without the answer in the evidence / "
      "refrained questions\n";
  out += emit(header);
  for (const auto& line : cells) out += emit(line);
  out += "\n";
  out += "questions         " + std::to_string(rows.size()) + "\n";
  out += "P@1               " + fixed(p_at_1) + "\n";
  out += "P@1 (answered)    " + fixed_or_na(p_at_1_answered) + "\n";
  for (std::size_t k : ks) {
    std::string label = "AP@" + std::to_string(k);
    label.resize(18, ' ');
    out += label + fixed(ap_at.at(k)) + "\n";
  }
  for (std::size_t k : ks) {
    std::string label = "MRR@" + std::to_string(k);
    label.resize(18, ' ');
    out += label + fixed(mrr_at.at(k)) + "\n";
  }
  out += "refrain rate      " + fixed(refrain_rate) + "\n";
  out += "refrain accuracy  " + fixed_or_na(refrain_accuracy) + "\n";
  return out;
}

}  // namespace quasar
