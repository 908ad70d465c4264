#include <doctest.h>

#include <random>
#include <sstream>

#include "pqe/error.hpp"
#include "pqe/expansion.hpp"
#include "pqe/learner.hpp"
#include "support/netgen.hpp"

using namespace pqe;

namespace {

// a -> b with p(b=1|a=1) = 0.9.
BayesNet chain_net() {
  BayesNet net;
  net.confidence = 0.95;
  net.nodes.resize(2);
  net.nodes[0].term = "alpha";
  net.nodes[0].prior = 0.5;
  net.nodes[1].term = "beta";
  net.nodes[1].parents = {0};
  net.nodes[1].cpt = {0.1, 0.9};
  net.validate();
  return net;
}

QueryVector make_query(int id,
                       std::vector<std::pair<std::string, double>> terms) {
  QueryVector q;
  q.query_id = id;
  for (auto& [t, w] : terms) q.terms.push_back(QueryTerm{t, w, false});
  return q;
}

std::set<std::string> added_terms(const QueryVector& q) {
  std::set<std::string> out;
  for (const QueryTerm& t : q.terms) {
    if (t.added) out.insert(t.term);
  }
  return out;
}

BayesNet learned_fixture_net() {
  std::mt19937_64 rng(70);
  BayesNet truth;
  truth.nodes.resize(7);
  for (int i = 0; i < 7; ++i) truth.nodes[i].term = netgen::term_name(i);
  truth.nodes[0].prior = 0.45;
  truth.nodes[5].prior = 0.55;
  for (int child : {1, 2, 3}) {
    truth.nodes[child].parents = {child - 1};
    truth.nodes[child].cpt = {0.2, 0.8};
  }
  truth.nodes[4].parents = {3, 5};
  truth.nodes[4].cpt = {0.1, 0.75, 0.75, 0.95};
  truth.nodes[6].parents = {5};
  truth.nodes[6].cpt = {0.25, 0.85};
  truth.validate();
  auto docs = netgen::sample_documents(truth, 4000, rng);
  auto ti = netgen::index_from_presence(7, docs);
  return learn(ti.inv, ti.vocab, 0.95);
}

}  // namespace

TEST_SUITE_BEGIN("expansion");

TEST_CASE("expand: chain example with hand-computed posterior") {
  BayesNet net = chain_net();
  QueryExpander expander(net);
  QueryVector q = make_query(1, {{"alpha", 2.0}});
  QueryVector out = expander.expand(q, 0.7);
  REQUIRE(out.terms.size() == 2);
  CHECK(out.terms[0].term == "alpha");
  CHECK(out.terms[0].weight == 2.0);
  CHECK_FALSE(out.terms[0].added);
  CHECK(out.terms[1].term == "beta");
  CHECK(out.terms[1].weight == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(out.terms[1].added);
}

TEST_CASE("expand: nothing clears the threshold") {
  BayesNet net = chain_net();
  QueryExpander expander(net);
  QueryVector q = make_query(1, {{"alpha", 1.0}});
  QueryVector out = expander.expand(q, 0.95);  // posterior of beta is 0.9
  REQUIRE(out.terms.size() == 1);
  CHECK(out.terms[0].term == "alpha");
}

TEST_CASE("expand: empty query is an error") {
  BayesNet net = chain_net();
  QueryExpander expander(net);
  QueryVector q;
  q.query_id = 9;
  CHECK_THROWS_AS(expander.expand(q, 0.5), Error);
  CHECK_THROWS_AS(expander.expand(make_query(1, {{"alpha", 1.0}}), 0.0),
                  Error);
  CHECK_THROWS_AS(expander.expand(make_query(1, {{"alpha", 1.0}}), 1.0),
                  Error);
}

TEST_CASE("expand: no query term in the network leaves it unchanged") {
  BayesNet net = chain_net();
  QueryExpander expander(net);
  Diag diag;
  QueryVector q = make_query(2, {{"missing", 3.0}, {"unknown", 1.0}});
  QueryVector out = expander.expand(q, 0.5, &diag);
  REQUIRE(out.terms.size() == 2);
  CHECK(out.terms[0].term == "missing");
  CHECK(out.terms[0].weight == 3.0);
  CHECK(diag.warnings.size() >= 1);
}

TEST_CASE("expand: out-of-network terms are kept, in-network ones expand") {
  BayesNet net = chain_net();
  QueryExpander expander(net);
  Diag diag;
  QueryVector q = make_query(3, {{"missing", 2.0}, {"alpha", 1.0}});
  QueryVector out = expander.expand(q, 0.7, &diag);
  REQUIRE(out.terms.size() == 3);
  CHECK(out.terms[0].term == "missing");
  CHECK(out.terms[1].term == "alpha");
  CHECK(out.terms[2].term == "beta");
  CHECK(out.terms[2].added);
}

TEST_CASE("expand: evidence terms never reappear as added") {
  BayesNet net = learned_fixture_net();
  QueryExpander expander(net);
  QueryVector q = make_query(1, {{netgen::term_name(0), 2.0},
                                 {netgen::term_name(3), 1.0}});
  QueryVector out = expander.expand(q, 0.5);
  std::set<std::string> original{netgen::term_name(0), netgen::term_name(3)};
  for (const QueryTerm& t : out.terms) {
    if (t.added) {
      CHECK(original.count(t.term) == 0);
      CHECK(t.weight > 0.5);
      CHECK(t.weight <= 1.0);
    }
  }
}

TEST_CASE("expand: added set shrinks as the threshold rises") {
  BayesNet net = learned_fixture_net();
  QueryExpander expander(net);
  QueryVector q = make_query(1, {{netgen::term_name(2), 1.0}});
  std::set<std::string> prev;
  bool first = true;
  for (double threshold : {0.9, 0.8, 0.7, 0.6, 0.5}) {
    std::set<std::string> cur = added_terms(expander.expand(q, threshold));
    if (!first) {
      for (const std::string& t : prev) CHECK(cur.count(t) == 1);
    }
    first = false;
    prev = cur;
  }
}

TEST_CASE("expand: added terms ordered by descending posterior") {
  BayesNet net = learned_fixture_net();
  QueryExpander expander(net);
  QueryVector q = make_query(1, {{netgen::term_name(4), 1.0}});
  QueryVector out = expander.expand(q, 0.3);
  double last = 2.0;
  for (const QueryTerm& t : out.terms) {
    if (!t.added) continue;
    CHECK(t.weight <= last);
    last = t.weight;
  }
}

TEST_CASE("expand: deterministic") {
  BayesNet net = learned_fixture_net();
  QueryExpander expander(net);
  QueryVector q = make_query(1, {{netgen::term_name(1), 1.0}});
  QueryVector a = expander.expand(q, 0.5);
  QueryVector b = expander.expand(q, 0.5);
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    CHECK(a.terms[i].term == b.terms[i].term);
    CHECK(a.terms[i].weight == b.terms[i].weight);
  }
}

TEST_CASE("expand_query_file: empty input, batch shapes, mean monotone") {
  BayesNet net = learned_fixture_net();
  QueryExpander expander(net);
  CHECK(expand_query_file({}, expander, 0.5).empty());

  std::vector<QueryVector> qs;
  for (int i = 0; i < 10; ++i) {
    qs.push_back(make_query(i + 1, {{netgen::term_name(i % 7), 1.0}}));
  }
  double prev_mean = 1e9;
  for (double threshold : {0.5, 0.6, 0.7, 0.8, 0.9}) {
    ExpansionStats stats;
    auto out = expand_query_file(qs, expander, threshold, 2, nullptr, &stats);
    CHECK(out.size() == qs.size());
    CHECK(stats.mean_added_terms <= prev_mean);
    prev_mean = stats.mean_added_terms;
  }
}

TEST_CASE("queries: SMART parsing keeps tf and first-occurrence order") {
  std::string path = std::string(PQE_FIXTURE_DIR) + "/corpus82.qry";
  TokenizerConfig cfg = default_tokenizer_config();
  std::vector<QueryVector> qs = parse_queries_smart(path, cfg);
  CHECK(qs.size() == 35);
  for (const QueryVector& q : qs) {
    CHECK(!q.terms.empty());
    std::set<std::string> seen;
    for (const QueryTerm& t : q.terms) {
      CHECK(seen.insert(t.term).second);  // each term once
      CHECK(t.weight >= 1.0);
      CHECK_FALSE(t.added);
    }
  }
}

TEST_CASE("expanded-query file: round trip") {
  BayesNet net = learned_fixture_net();
  QueryExpander expander(net);
  std::vector<QueryVector> qs;
  qs.push_back(make_query(1, {{netgen::term_name(0), 2.0}}));
  qs.push_back(make_query(2, {{netgen::term_name(5), 1.0},
                              {"offnet", 4.0}}));
  auto expanded = expand_query_file(qs, expander, 0.5);

  std::ostringstream out;
  write_expanded_queries(expanded, out, {"# pqe test expanded-queries"});
  std::istringstream in(out.str());
  auto back = read_expanded_queries(in);
  REQUIRE(back.size() == expanded.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].query_id == expanded[i].query_id);
    REQUIRE(back[i].terms.size() == expanded[i].terms.size());
    for (std::size_t j = 0; j < back[i].terms.size(); ++j) {
      CHECK(back[i].terms[j].term == expanded[i].terms[j].term);
      CHECK(back[i].terms[j].added == expanded[i].terms[j].added);
      CHECK(back[i].terms[j].weight ==
            doctest::Approx(expanded[i].terms[j].weight).epsilon(1e-11));
    }
  }
}

TEST_CASE("expanded-query file: parse errors") {
  auto expect_throw = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_expanded_queries(in), ParseError);
  };
  expect_throw("term\t1\toriginal\n");            // before any .I
  expect_throw(".I 1\nterm\t1\tmaybe\n");         // bad flag
  expect_throw(".I 1\nterm\tx\toriginal\n");      // bad weight
  expect_throw(".I 1\n.I 1\n");                   // duplicate id
}

TEST_SUITE_END();
