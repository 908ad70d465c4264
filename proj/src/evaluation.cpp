#include "pqe/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pqe/error.hpp"
#include "pqe/learner.hpp"
#include "pqe/util.hpp"
#include "pqe/version.hpp"

namespace pqe {

QrelSet load_qrels(std::istream& in) {
  QrelSet qrels;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cols = split_ws(t);
    long long qid = 0, doc = 0;
    if (cols.size() < 2 || !parse_i64(cols[0], &qid) ||
        !parse_i64(cols[1], &doc) || qid <= 0 || doc <= 0) {
      throw ParseError("bad relevance line \"" + t + "\"", line_no);
    }
    qrels[static_cast<int>(qid)].insert(static_cast<int>(doc));
  }
  return qrels;
}

QrelSet load_qrels_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open relevance file: " + path);
  try {
    return load_qrels(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::array<double, 10> interpolated_precision(
    const std::vector<ScoredDoc>& full_ranking,
    const std::set<int>& relevant) {
  if (relevant.empty()) {
    throw Error("interpolated_precision: empty relevant set");
  }
  const std::int64_t r_total = static_cast<std::int64_t>(relevant.size());

  // Precision and relevant-hits at every rank, then a suffix maximum so each
  // level reads off the best precision at or beyond the rank where its
  // recall is first reached.
  std::size_t ranks = full_ranking.size();
  std::vector<std::int64_t> hits(ranks);
  std::vector<double> prec(ranks);
  std::int64_t h = 0;
  for (std::size_t i = 0; i < ranks; ++i) {
    if (relevant.count(full_ranking[i].doc_id)) ++h;
    hits[i] = h;
    prec[i] = static_cast<double>(h) / static_cast<double>(i + 1);
  }
  std::vector<double> suffix_max(ranks);
  double running = 0.0;
  for (std::size_t i = ranks; i-- > 0;) {
    running = std::max(running, prec[i]);
    suffix_max[i] = running;
  }

  std::array<double, 10> out{};
  for (int level = 1; level <= 10; ++level) {
    // recall >= level/10  <=>  10 * hits >= level * |relevant|  (exact).
    double value = 0.0;
    for (std::size_t i = 0; i < ranks; ++i) {
      if (10 * hits[i] >= static_cast<std::int64_t>(level) * r_total) {
        value = suffix_max[i];
        break;
      }
    }
    out[static_cast<std::size_t>(level - 1)] = value;
  }
  return out;
}

FixedK fixed_k_metrics(const std::vector<ScoredDoc>& top_k,
                       const std::set<int>& relevant) {
  std::int64_t hits = 0;
  for (const ScoredDoc& d : top_k) {
    if (relevant.count(d.doc_id)) ++hits;
  }
  FixedK out;
  out.recall = relevant.empty()
                   ? 0.0
                   : static_cast<double>(hits) /
                         static_cast<double>(relevant.size());
  out.precision = top_k.empty() ? 0.0
                                : static_cast<double>(hits) /
                                      static_cast<double>(top_k.size());
  return out;
}

LevelStats evaluate_run(const RankedRun& run, const QrelSet& qrels, int k,
                        Diag* diag) {
  if (k < 1) throw Error("evaluate_run: k must be >= 1");
  LevelStats stats;
  stats.k = k;
  for (const auto& [qid, ranking] : run) {
    auto it = qrels.find(qid);
    if (it == qrels.end() || it->second.empty()) {
      if (diag) {
        diag->warn("query " + std::to_string(qid) +
                   " has no relevance judgments; skipped");
      }
      continue;
    }
    std::array<double, 10> levels = interpolated_precision(ranking, it->second);
    for (int i = 0; i < 10; ++i) {
      stats.levels[static_cast<std::size_t>(i)] +=
          levels[static_cast<std::size_t>(i)];
    }
    std::vector<ScoredDoc> top_k = ranking;
    if (static_cast<int>(top_k.size()) > k) {
      top_k.resize(static_cast<std::size_t>(k));
    }
    FixedK fk = fixed_k_metrics(top_k, it->second);
    stats.recall_at_k += fk.recall;
    stats.precision_at_k += fk.precision;
    ++stats.queries_evaluated;
    stats.query_ids.insert(qid);
  }
  if (stats.queries_evaluated == 0) {
    throw Error("no query could be evaluated (no overlap with judgments)");
  }
  double nq = static_cast<double>(stats.queries_evaluated);
  double level_sum = 0.0;
  for (double& v : stats.levels) {
    v /= nq;
    level_sum += v;
  }
  stats.average = level_sum / 10.0;
  stats.recall_at_k /= nq;
  stats.precision_at_k /= nq;
  return stats;
}

namespace {

PctChange pct_change(double base, double exp_value) {
  PctChange out;
  if (base > 0.0) {
    out.defined = true;
    out.value = 100.0 * (exp_value - base) / base;
  }
  return out;
}

}  // namespace

EvalReport make_report(const LevelStats& experiment,
                       const LevelStats* baseline) {
  EvalReport r;
  r.experiment = experiment;
  if (!baseline) return r;
  r.baseline = *baseline;

  double sum = 0.0;
  int defined = 0;
  for (int i = 0; i < 10; ++i) {
    r.level_pct[static_cast<std::size_t>(i)] =
        pct_change(baseline->levels[static_cast<std::size_t>(i)],
                   experiment.levels[static_cast<std::size_t>(i)]);
    if (r.level_pct[static_cast<std::size_t>(i)].defined) {
      sum += r.level_pct[static_cast<std::size_t>(i)].value;
      ++defined;
    }
  }
  if (defined > 0) {
    r.average_pct.defined = true;
    r.average_pct.value = sum / static_cast<double>(defined);
  }
  r.recall_pct = pct_change(baseline->recall_at_k, experiment.recall_at_k);
  r.precision_pct =
      pct_change(baseline->precision_at_k, experiment.precision_at_k);

  if (r.average_pct.defined) {
    double mag = std::abs(r.average_pct.value);
    if (mag >= 10.0) {
      r.significance = "very significant (>=10%)";
    } else if (mag >= 5.0) {
      r.significance = "significant (>=5%)";
    } else {
      r.significance = "not significant";
    }
  }
  return r;
}

EvalReport report(const RankedRun& run, const QrelSet& qrels, int k,
                  const RankedRun* baseline_run, Diag* diag) {
  LevelStats exp_stats = evaluate_run(run, qrels, k, diag);
  if (!baseline_run) return make_report(exp_stats, nullptr);
  LevelStats base_stats = evaluate_run(*baseline_run, qrels, k, diag);
  if (exp_stats.query_ids != base_stats.query_ids) {
    throw Error("baseline and experiment evaluate different query sets");
  }
  return make_report(exp_stats, &base_stats);
}

namespace {

std::string fmt_level(int level) {
  return level == 10 ? "1.0" : "0." + std::to_string(level);
}

std::string fmt_prec(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt_pct(const PctChange& p) {
  if (!p.defined) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", p.value);
  return buf;
}

}  // namespace

void write_report_tsv(const EvalReport& r, std::ostream& out,
                      const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  const bool with_base = r.baseline.has_value();
  if (with_base) {
    out << "level\tbaseline\texperiment\tpct_change\n";
  } else {
    out << "level\tprecision\n";
  }
  for (int i = 0; i < 10; ++i) {
    out << fmt_level(i + 1);
    if (with_base) {
      out << '\t' << fmt_prec(r.baseline->levels[static_cast<std::size_t>(i)]);
    }
    out << '\t' << fmt_prec(r.experiment.levels[static_cast<std::size_t>(i)]);
    if (with_base) {
      out << '\t' << fmt_pct(r.level_pct[static_cast<std::size_t>(i)]);
    }
    out << '\n';
  }
  out << "average";
  if (with_base) out << '\t' << fmt_prec(r.baseline->average);
  out << '\t' << fmt_prec(r.experiment.average);
  if (with_base) out << '\t' << fmt_pct(r.average_pct);
  out << '\n';

  std::string k_str = std::to_string(r.experiment.k);
  out << "recall@" << k_str;
  if (with_base) out << '\t' << fmt_prec(r.baseline->recall_at_k);
  out << '\t' << fmt_prec(r.experiment.recall_at_k);
  if (with_base) out << '\t' << fmt_pct(r.recall_pct);
  out << '\n';
  out << "precision@" << k_str;
  if (with_base) out << '\t' << fmt_prec(r.baseline->precision_at_k);
  out << '\t' << fmt_prec(r.experiment.precision_at_k);
  if (with_base) out << '\t' << fmt_pct(r.precision_pct);
  out << '\n';
  out << "# queries evaluated: " << r.experiment.queries_evaluated << '\n';
  if (!r.significance.empty()) {
    out << "# significance: " << r.significance << '\n';
  }
}

void write_report_tsv_file(const EvalReport& r, const std::string& path,
                           const std::vector<std::string>& comments) {
  std::ostringstream out;
  write_report_tsv(r, out, comments);
  write_text_file(path, out.str());
}

void write_recall_precision_data(const EvalReport& r, std::ostream& out,
                                 const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  for (int i = 0; i < 10; ++i) {
    out << fmt_level(i + 1) << '\t'
        << fmt_prec(r.experiment.levels[static_cast<std::size_t>(i)]) << '\n';
  }
}

namespace {

RankedRun prune_empty_rankings(const RankedRun& run, Diag* diag) {
  RankedRun pruned;
  for (const auto& [qid, ranking] : run) {
    if (ranking.empty()) {
      if (diag) {
        diag->warn("query " + std::to_string(qid) +
                   " retrieved no documents; excluded from evaluation");
      }
      continue;
    }
    pruned.emplace(qid, ranking);
  }
  return pruned;
}

std::string cell_tag(double confidence, double threshold) {
  return "c" + fmt_g(confidence) + "_t" + fmt_g(threshold);
}

}  // namespace

BatteryResult run_battery(const Vocabulary& vocab, const InvertedFile& inv,
                          const std::vector<QueryVector>& queries,
                          const QrelSet& qrels, const BatteryOptions& opt) {
  namespace fs = std::filesystem;
  Diag* diag = opt.diag;
  const bool writing = !opt.out_dir.empty();
  if (writing) fs::create_directories(opt.out_dir);
  auto path_in_out = [&](const std::string& name) {
    return (fs::path(opt.out_dir) / name).string();
  };

  BatteryResult result;
  RankedRun baseline_run =
      prune_empty_rankings(search_all(inv, vocab, queries, 0, opt.jobs), diag);
  result.baseline = evaluate_run(baseline_run, qrels, opt.k, diag);
  // File headers carry only parameters the standalone commands also know, so
  // a manually composed pipeline reproduces every cell byte for byte.
  if (writing) {
    write_run_file(baseline_run, path_in_out("baseline.run"),
                   {file_header("run", {{"k", "0"}})});
    EvalReport base_only = make_report(result.baseline, nullptr);
    write_report_tsv_file(
        base_only, path_in_out("baseline.tsv"),
        {file_header("report", {{"k", std::to_string(opt.k)}})});
  }

  for (double confidence : opt.confidences) {
    BayesNet net;
    bool net_ok = true;
    std::string net_error;
    try {
      LearnOptions lopt;
      lopt.parent_cap = opt.parent_cap;
      lopt.jobs = opt.jobs;
      lopt.diag = diag;
      net = learn(inv, vocab, confidence, lopt);
      if (writing) {
        save_network_file(
            net, path_in_out("net_c" + fmt_g(confidence) + ".net"),
            {file_header("network", {{"confidence", fmt_g(confidence)}})});
      }
      // Round-trip through the serialization format so every cell is exactly
      // reproducible from the saved network file.
      std::ostringstream normalized;
      save_network(net, normalized);
      std::istringstream reread(normalized.str());
      net = load_network(reread);
    } catch (const Error& e) {
      net_ok = false;
      net_error = e.what();
      if (diag) {
        diag->warn("learning at confidence " + fmt_g(confidence) +
                   " failed: " + net_error);
      }
    }
    std::optional<QueryExpander> expander;
    if (net_ok) expander.emplace(net);

    for (double threshold : opt.thresholds) {
      BatteryCell cell;
      cell.confidence = confidence;
      cell.threshold = threshold;
      if (!net_ok) {
        cell.failed = true;
        cell.error = net_error;
        result.cells.push_back(std::move(cell));
        continue;
      }
      try {
        ExpansionStats stats;
        std::vector<QueryVector> expanded = expand_query_file(
            queries, *expander, threshold, opt.jobs, diag, &stats);
        cell.mean_added_terms = stats.mean_added_terms;
        RankedRun cell_run = prune_empty_rankings(
            search_all(inv, vocab, expanded, 0, opt.jobs), diag);
        LevelStats cell_stats = evaluate_run(cell_run, qrels, opt.k, diag);
        if (cell_stats.query_ids != result.baseline.query_ids) {
          throw Error("expanded run evaluates a different query set");
        }
        cell.report = make_report(cell_stats, &result.baseline);
        if (writing) {
          std::string tag = cell_tag(confidence, threshold);
          auto params = std::vector<std::pair<std::string, std::string>>{
              {"confidence", fmt_g(confidence)},
              {"threshold", fmt_g(threshold)}};
          write_expanded_queries_file(expanded,
                                      path_in_out("queries_" + tag + ".exp"),
                                      {file_header("expanded-queries", params)});
          write_run_file(cell_run, path_in_out("run_" + tag + ".run"),
                         {file_header("run", {{"k", "0"}})});
          write_report_tsv_file(
              cell.report, path_in_out("report_" + tag + ".tsv"),
              {file_header("report", {{"k", std::to_string(opt.k)}})});
          std::ostringstream rp;
          write_recall_precision_data(cell.report, rp,
                                      {file_header("recall-precision", params)});
          write_text_file(path_in_out("rp_" + tag + ".dat"), rp.str());
        }
      } catch (const Error& e) {
        cell.failed = true;
        cell.error = e.what();
        if (diag) {
          diag->warn("cell " + cell_tag(confidence, threshold) +
                     " failed: " + cell.error);
        }
      }
      result.cells.push_back(std::move(cell));
    }
  }

  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const BatteryCell& cell = result.cells[i];
    if (cell.failed) continue;
    if (result.best_cell < 0 ||
        cell.report.experiment.average >
            result.cells[static_cast<std::size_t>(result.best_cell)]
                .report.experiment.average) {
      result.best_cell = static_cast<int>(i);
    }
  }

  if (writing) {
    std::ostringstream summary;
    write_battery_summary(
        result, summary,
        {file_header("battery-summary", {{"k", std::to_string(opt.k)}})});
    write_text_file(path_in_out("summary.tsv"), summary.str());
  }
  return result;
}

void write_battery_summary(const BatteryResult& result, std::ostream& out,
                           const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  out << "confidence\tthreshold\tavg_precision\tavg_pct_change\t"
         "mean_added_terms\tstatus\n";
  out << "baseline\t-\t" << fmt_prec(result.baseline.average)
      << "\t-\t-\tok\n";
  for (const BatteryCell& cell : result.cells) {
    out << fmt_g(cell.confidence) << '\t' << fmt_g(cell.threshold) << '\t';
    if (cell.failed) {
      out << "-\t-\t-\tfailed: " << cell.error << '\n';
    } else {
      out << fmt_prec(cell.report.experiment.average) << '\t'
          << fmt_pct(cell.report.average_pct) << '\t'
          << fmt_g(cell.mean_added_terms, 4) << "\tok\n";
    }
  }
  if (result.best_cell >= 0) {
    const BatteryCell& best =
        result.cells[static_cast<std::size_t>(result.best_cell)];
    out << "# best cell: confidence=" << fmt_g(best.confidence)
        << " threshold=" << fmt_g(best.threshold)
        << " avg_precision=" << fmt_prec(best.report.experiment.average)
        << '\n';
  }
}

}  // namespace pqe
