#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pqe/error.hpp"
#include "pqe/evaluation.hpp"
#include "support/netgen.hpp"

using namespace pqe;

namespace {

std::vector<ScoredDoc> ranking(std::vector<int> doc_ids) {
  std::vector<ScoredDoc> out;
  double s = static_cast<double>(doc_ids.size());
  for (int d : doc_ids) out.push_back(ScoredDoc{d, s--});
  return out;
}

LevelStats stats_from(const std::array<double, 10>& levels, double recall_k,
                      double precision_k) {
  LevelStats s;
  s.levels = levels;
  double sum = 0.0;
  for (double v : levels) sum += v;
  s.average = sum / 10.0;
  s.recall_at_k = recall_k;
  s.precision_at_k = precision_k;
  s.k = 15;
  s.queries_evaluated = 1;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("qrels: parsing ignores trailing columns") {
  std::istringstream in("1 17\n1 4 0.5 extra\n2 9\n\n# comment\n");
  QrelSet qrels = load_qrels(in);
  REQUIRE(qrels.size() == 2);
  CHECK(qrels[1] == std::set<int>{4, 17});
  CHECK(qrels[2] == std::set<int>{9});
  std::istringstream bad("1\n");
  CHECK_THROWS_AS(load_qrels(bad), ParseError);
}

TEST_CASE("interpolated precision: perfect ranking") {
  auto levels = interpolated_precision(ranking({1, 2, 3}), {1, 2, 3});
  for (double v : levels) CHECK(v == 1.0);
}

TEST_CASE("interpolated precision: no relevant retrieved") {
  auto levels = interpolated_precision(ranking({4, 5, 6}), {1, 2});
  for (double v : levels) CHECK(v == 0.0);
}

TEST_CASE("interpolated precision: worked three-document example") {
  // [rel, non, rel] with 2 relevant: precision 1/1 at recall .5, 2/3 at 1.0.
  auto levels = interpolated_precision(ranking({1, 9, 2}), {1, 2});
  for (int i = 0; i < 5; ++i) CHECK(levels[i] == 1.0);
  for (int i = 5; i < 10; ++i) {
    CHECK(levels[i] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("interpolated precision: unreachable levels are zero") {
  // Only 1 of 2 relevant docs in the ranking: levels above 0.5 unreachable.
  auto levels = interpolated_precision(ranking({1, 9}), {1, 2});
  for (int i = 0; i < 5; ++i) CHECK(levels[i] == 1.0);
  for (int i = 5; i < 10; ++i) CHECK(levels[i] == 0.0);
}

TEST_CASE("interpolated precision: non-increasing across levels") {
  auto levels =
      interpolated_precision(ranking({4, 1, 8, 2, 9, 3, 11, 12}), {1, 2, 3});
  for (int i = 1; i < 10; ++i) CHECK(levels[i] <= levels[i - 1]);
  CHECK_THROWS_AS(interpolated_precision(ranking({1}), {}), Error);
}

TEST_CASE("fixed k: boundary cases") {
  FixedK all = fixed_k_metrics(ranking({1, 2, 3}), {1, 2, 3});
  CHECK(all.recall == 1.0);
  CHECK(all.precision == 1.0);
  FixedK none = fixed_k_metrics(ranking({7, 8}), {1, 2});
  CHECK(none.recall == 0.0);
  CHECK(none.precision == 0.0);
  FixedK empty = fixed_k_metrics({}, {1});
  CHECK(empty.recall == 0.0);
  CHECK(empty.precision == 0.0);  // 0/0 defined as 0
}

TEST_CASE("fixed k: 3 of 15 retrieved relevant, 10 relevant overall") {
  std::vector<int> ids;
  for (int i = 0; i < 15; ++i) ids.push_back(100 + i);
  ids[0] = 1;
  ids[5] = 2;
  ids[9] = 3;
  std::set<int> rel;
  for (int i = 1; i <= 10; ++i) rel.insert(i);
  FixedK fk = fixed_k_metrics(ranking(ids), rel);
  CHECK(fk.recall == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fk.precision == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("fixed k: short list uses the actual length") {
  FixedK fk = fixed_k_metrics(ranking({1, 7}), {1, 2, 3, 4});
  CHECK(fk.recall == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fk.precision == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("report: published reference columns reproduce the changes") {
  // Ten-level baseline/experiment precision columns with their known
  // per-level changes and average change.
  const std::array<double, 10> base = {0.4824, 0.4343, 0.4203, 0.3640,
                                       0.3405, 0.2775, 0.2247, 0.2143,
                                       0.1874, 0.1863};
  const std::array<double, 10> exp = {0.5052, 0.4616, 0.4365, 0.3987,
                                      0.3878, 0.3392, 0.2761, 0.2653,
                                      0.2417, 0.2405};
  const double changes[10] = {4.73,  6.29,  3.85,  9.53,  13.89,
                              22.23, 22.87, 23.80, 28.98, 29.09};
  LevelStats base_stats = stats_from(base, 0.5036, 0.1524);
  LevelStats exp_stats = stats_from(exp, 0.5983, 0.1695);
  EvalReport r = make_report(exp_stats, &base_stats);
  for (int i = 0; i < 10; ++i) {
    REQUIRE(r.level_pct[i].defined);
    CHECK(std::abs(r.level_pct[i].value - changes[i]) <= 0.005);
  }
  REQUIRE(r.average_pct.defined);
  CHECK(std::abs(r.average_pct.value - 16.53) <= 0.01);
  CHECK(std::abs(r.recall_pct.value - 18.80) <= 0.005);
  CHECK(std::abs(r.precision_pct.value - 11.22) <= 0.005);
  CHECK(r.significance == "very significant (>=10%)");
}

TEST_CASE("report: second published reference set") {
  const std::array<double, 10> base = {0.6389, 0.5810, 0.5204, 0.4561,
                                       0.3725, 0.2887, 0.2403, 0.1956,
                                       0.1534, 0.0875};
  const std::array<double, 10> exp = {0.7042, 0.6110, 0.5598, 0.4938,
                                      0.3996, 0.3381, 0.2894, 0.2367,
                                      0.1752, 0.1115};
  const double changes[10] = {10.22, 5.16,  7.57,  8.27,  7.28,
                              17.11, 20.43, 21.01, 14.21, 27.43};
  LevelStats base_stats = stats_from(base, 0.3161, 0.4467);
  LevelStats exp_stats = stats_from(exp, 0.3406, 0.4800);
  EvalReport r = make_report(exp_stats, &base_stats);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(r.level_pct[i].value - changes[i]) <= 0.005);
  }
  CHECK(std::abs(r.average_pct.value - 13.87) <= 0.01);
}

TEST_CASE("report: run against itself changes by exactly zero") {
  RankedRun run;
  run[1] = ranking({1, 5, 2});
  run[2] = ranking({9, 3});
  QrelSet qrels;
  qrels[1] = {1, 2};
  qrels[2] = {3};
  EvalReport r = report(run, qrels, 15, &run);
  for (int i = 0; i < 10; ++i) {
    if (r.level_pct[i].defined) CHECK(r.level_pct[i].value == 0.0);
  }
  REQUIRE(r.average_pct.defined);
  CHECK(r.average_pct.value == 0.0);
  CHECK(r.significance == "not significant");
}

TEST_CASE("report: zero baseline level reports n/a") {
  std::array<double, 10> base{};
  std::array<double, 10> exp{};
  for (int i = 0; i < 10; ++i) exp[i] = 0.5;
  base[0] = 0.4;  // only level 0.1 defined
  LevelStats base_stats = stats_from(base, 0.0, 0.0);
  LevelStats exp_stats = stats_from(exp, 0.1, 0.1);
  EvalReport r = make_report(exp_stats, &base_stats);
  CHECK(r.level_pct[0].defined);
  for (int i = 1; i < 10; ++i) CHECK_FALSE(r.level_pct[i].defined);
  REQUIRE(r.average_pct.defined);  // mean over the defined levels only
  CHECK(r.average_pct.value == doctest::Approx(25.0).epsilon(1e-9));
  CHECK_FALSE(r.recall_pct.defined);
  std::ostringstream out;
  write_report_tsv(r, out);
  CHECK(out.str().find("n/a") != std::string::npos);
}

TEST_CASE("report: query-id mismatch is an error") {
  RankedRun run, base;
  run[1] = ranking({1});
  base[2] = ranking({3});
  QrelSet qrels;
  qrels[1] = {1};
  qrels[2] = {3};
  CHECK_THROWS_AS(report(run, qrels, 15, &base), Error);
}

TEST_CASE("evaluate_run: queries without judgments are skipped with warning") {
  RankedRun run;
  run[1] = ranking({1});
  run[5] = ranking({2});
  QrelSet qrels;
  qrels[1] = {1};
  Diag diag;
  LevelStats stats = evaluate_run(run, qrels, 15, &diag);
  CHECK(stats.queries_evaluated == 1);
  CHECK(diag.warnings.size() == 1);
  QrelSet empty;
  CHECK_THROWS_AS(evaluate_run(run, empty, 15), Error);
}

TEST_CASE("battery: single cell plus baseline on the fixture") {
  auto docs =
      parse_smart_file(std::string(PQE_FIXTURE_DIR) + "/corpus82.docs");
  tokenize_documents(docs, default_tokenizer_config());
  auto [vocab, inv] = build_inverted_file(docs);
  auto queries = parse_queries_smart(
      std::string(PQE_FIXTURE_DIR) + "/corpus82.qry",
      default_tokenizer_config());
  QrelSet qrels =
      load_qrels_file(std::string(PQE_FIXTURE_DIR) + "/corpus82.rel");

  BatteryOptions opt;
  opt.confidences = {0.95};
  opt.thresholds = {0.7};
  opt.jobs = 2;
  BatteryResult result = run_battery(vocab, inv, queries, qrels, opt);
  REQUIRE(result.cells.size() == 1);
  CHECK_FALSE(result.cells[0].failed);
  CHECK(result.best_cell == 0);
  CHECK(result.baseline.queries_evaluated == 35);
  CHECK(result.cells[0].report.experiment.queries_evaluated == 35);
  CHECK(result.cells[0].report.average_pct.defined);
}

TEST_CASE("battery: threshold high enough to add nothing equals baseline") {
  auto docs =
      parse_smart_file(std::string(PQE_FIXTURE_DIR) + "/corpus82.docs");
  tokenize_documents(docs, default_tokenizer_config());
  auto [vocab, inv] = build_inverted_file(docs);
  auto queries = parse_queries_smart(
      std::string(PQE_FIXTURE_DIR) + "/corpus82.qry",
      default_tokenizer_config());
  QrelSet qrels =
      load_qrels_file(std::string(PQE_FIXTURE_DIR) + "/corpus82.rel");

  BatteryOptions opt;
  opt.confidences = {0.95};
  opt.thresholds = {0.999999};
  opt.jobs = 2;
  BatteryResult result = run_battery(vocab, inv, queries, qrels, opt);
  REQUIRE(result.cells.size() == 1);
  const BatteryCell& cell = result.cells[0];
  REQUIRE_FALSE(cell.failed);
  CHECK(cell.mean_added_terms == 0.0);
  for (int i = 0; i < 10; ++i) {
    CHECK(cell.report.experiment.levels[i] == result.baseline.levels[i]);
    if (cell.report.level_pct[i].defined) {
      CHECK(cell.report.level_pct[i].value == 0.0);
    }
  }
}

TEST_SUITE_END();
