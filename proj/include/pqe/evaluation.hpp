#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pqe/corpus.hpp"
#include "pqe/diag.hpp"
#include "pqe/expansion.hpp"
#include "pqe/retrieval.hpp"

namespace pqe {

using QrelSet = std::map<int, std::set<int>>;  // query id -> relevant docs

// Whitespace-separated "query_id doc_id" lines; extra columns ignored.
QrelSet load_qrels(std::istream& in);
QrelSet load_qrels_file(const std::string& path);

// Ceiling-interpolated precision at recall 0.1 .. 1.0: at each level the
// maximum precision over ranks whose recall reaches the level, 0 when the
// level is unreachable. Expects the full ranking.
std::array<double, 10> interpolated_precision(
    const std::vector<ScoredDoc>& full_ranking, const std::set<int>& relevant);

struct FixedK {
  double recall = 0.0;
  double precision = 0.0;  // 0/0 := 0; denominator is the actual list length
};

FixedK fixed_k_metrics(const std::vector<ScoredDoc>& top_k,
                       const std::set<int>& relevant);

// Per-level means over the evaluated queries.
struct LevelStats {
  std::array<double, 10> levels{};
  double average = 0.0;  // mean of the ten level means
  double recall_at_k = 0.0;
  double precision_at_k = 0.0;
  int k = 0;
  int queries_evaluated = 0;
  std::set<int> query_ids;
};

LevelStats evaluate_run(const RankedRun& run, const QrelSet& qrels, int k,
                        Diag* diag = nullptr);

struct PctChange {
  bool defined = false;  // baseline value was positive
  double value = 0.0;    // 100 (exp - base) / base
};

struct EvalReport {
  LevelStats experiment;
  std::optional<LevelStats> baseline;
  std::array<PctChange, 10> level_pct{};
  // Mean of the per-level percent changes (not the percent change of the
  // level means), over the levels where the change is defined.
  PctChange average_pct;
  PctChange recall_pct;
  PctChange precision_pct;
  std::string significance;  // "", "not significant", "significant (>=5%)",
                             // "very significant (>=10%)"
};

// Percent-change bookkeeping given already-computed level statistics.
EvalReport make_report(const LevelStats& experiment,
                       const LevelStats* baseline);

// Evaluates both runs and compares; the evaluated query-id sets must match.
EvalReport report(const RankedRun& run, const QrelSet& qrels, int k,
                  const RankedRun* baseline_run = nullptr,
                  Diag* diag = nullptr);

// TSV mirroring the report: one row per recall level, then average and
// fixed-k rows.
void write_report_tsv(const EvalReport& r, std::ostream& out,
                      const std::vector<std::string>& comments = {});
void write_report_tsv_file(const EvalReport& r, const std::string& path,
                           const std::vector<std::string>& comments = {});

// Gnuplot-ready "recall TAB precision" pairs for the experiment column.
void write_recall_precision_data(const EvalReport& r, std::ostream& out,
                                 const std::vector<std::string>& comments = {});

struct BatteryCell {
  double confidence = 0.0;
  double threshold = 0.0;
  bool failed = false;
  std::string error;
  EvalReport report;
  double mean_added_terms = 0.0;
};

struct BatteryResult {
  LevelStats baseline;
  std::vector<BatteryCell> cells;
  int best_cell = -1;  // index of the best non-failed cell
};

struct BatteryOptions {
  std::vector<double> confidences{0.90, 0.95, 0.975, 0.99, 0.995};
  std::vector<double> thresholds{0.5, 0.6, 0.7, 0.8, 0.9};
  int k = 15;
  int parent_cap = 12;
  unsigned jobs = 1;
  Diag* diag = nullptr;
  std::string out_dir;  // empty = no files written
};

// One network per confidence, one expansion per (confidence, threshold)
// cell, each cell retrieved and evaluated against the shared unexpanded
// baseline. A failed cell is recorded without aborting the battery.
BatteryResult run_battery(const Vocabulary& vocab, const InvertedFile& inv,
                          const std::vector<QueryVector>& queries,
                          const QrelSet& qrels, const BatteryOptions& opt);

void write_battery_summary(const BatteryResult& result, std::ostream& out,
                           const std::vector<std::string>& comments = {});

}  // namespace pqe
