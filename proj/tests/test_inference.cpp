#include <doctest.h>

#include <cmath>
#include <random>

#include "pqe/error.hpp"
#include "pqe/inference.hpp"
#include "support/netgen.hpp"

using namespace pqe;

namespace {

// a -> b with p(a)=0.5, p(b|a=1)=0.9, p(b|a=0)=0.1.
BayesNet chain_ab() {
  BayesNet net;
  net.nodes.resize(2);
  net.nodes[0].term = "a";
  net.nodes[0].prior = 0.5;
  net.nodes[1].term = "b";
  net.nodes[1].parents = {0};
  net.nodes[1].cpt = {0.1, 0.9};
  net.validate();
  return net;
}

Evidence random_evidence(std::mt19937_64& rng, int n) {
  Evidence ev;
  for (int v = 0; v < n; ++v) {
    if (rng() % 5 == 0) ev.push_back(v);
  }
  return ev;
}

}  // namespace

TEST_SUITE_BEGIN("inference");

TEST_CASE("brute force: single root, no evidence") {
  BayesNet net;
  net.nodes.resize(1);
  net.nodes[0].term = "only";
  net.nodes[0].prior = 0.3;
  PosteriorVector post = brute_force_posteriors(net, {});
  CHECK(post[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("brute force: two-node chain, Bayes rule by hand") {
  BayesNet net = chain_ab();
  PosteriorVector post = brute_force_posteriors(net, {1});
  // p(a=1|b=1) = 0.9*0.5 / (0.9*0.5 + 0.1*0.5) = 0.9
  CHECK(post[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(post[1] == 1.0);
}

TEST_CASE("brute force: instantiating a collider couples its parents") {
  BayesNet net;
  net.nodes.resize(3);
  net.nodes[0].term = "a";
  net.nodes[0].prior = 0.4;
  net.nodes[1].term = "b";
  net.nodes[1].prior = 0.7;
  net.nodes[2].term = "c";
  net.nodes[2].parents = {0, 1};
  net.nodes[2].cpt = {0.05, 0.6, 0.3, 0.9};
  net.validate();

  // Marginally independent without evidence...
  PosteriorVector prior = brute_force_posteriors(net, {});
  CHECK(prior[0] == doctest::Approx(0.4).epsilon(1e-9));
  // ...dependent once the collider is observed: p(a|c) != p(a|c,b).
  PosteriorVector given_c = brute_force_posteriors(net, {2});
  PosteriorVector given_cb = brute_force_posteriors(net, {2, 1});
  CHECK(std::abs(given_c[0] - given_cb[0]) > 1e-3);
}

TEST_CASE("brute force: refuses oversized nets, rejects bad evidence") {
  std::mt19937_64 rng(60);
  BayesNet big = netgen::random_polytree(rng, 26);
  CHECK_THROWS_AS(brute_force_posteriors(big, {}), Error);
  BayesNet net = chain_ab();
  CHECK_THROWS_AS(brute_force_posteriors(net, {5}), Error);
}

TEST_CASE("propagate: no evidence gives prior marginals") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    BayesNet net = netgen::random_polytree(rng, 2 + static_cast<int>(rng() % 11));
    PosteriorVector got = propagate(net, {});
    PosteriorVector want = brute_force_posteriors(net, {});
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("propagate: evidence nodes report exactly one") {
  BayesNet net = chain_ab();
  PosteriorVector post = propagate(net, {0});
  CHECK(post[0] == 1.0);
  CHECK(post[1] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("propagate: agrees with joint enumeration on random polytrees") {
  std::mt19937_64 rng(62);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(rng() % 12);
    BayesNet net = netgen::random_polytree(rng, n);
    Evidence ev = random_evidence(rng, n);
    PosteriorVector got = propagate(net, ev);
    PosteriorVector want = brute_force_posteriors(net, ev);
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("propagate: components without evidence keep their priors") {
  std::mt19937_64 rng(63);
  // Sparse forest: many separate components.
  BayesNet net = netgen::random_polytree(rng, 12, 0.4);
  PosteriorVector priors = propagate(net, {});

  // Evidence on node 0 must leave every component not containing 0 bitwise
  // untouched.
  std::vector<int> comp(static_cast<std::size_t>(net.size()), -1);
  for (int round = 0; round < net.size(); ++round) {
    for (int c = 0; c < net.size(); ++c) {
      if (comp[c] < 0) comp[c] = c;
      for (int p : net.nodes[c].parents) {
        if (comp[p] < 0) comp[p] = p;
        int m = std::min(comp[c], comp[p]);
        comp[c] = comp[p] = m;
      }
    }
  }
  PosteriorVector with_ev = propagate(net, {0});
  CHECK(with_ev[0] == 1.0);
  for (int v = 1; v < net.size(); ++v) {
    if (comp[v] != comp[0]) CHECK(with_ev[v] == priors[v]);
  }
}

TEST_CASE("propagate: deterministic") {
  std::mt19937_64 rng(64);
  BayesNet net = netgen::random_polytree(rng, 10);
  Evidence ev = {2, 5};
  PosteriorVector a = propagate(net, ev);
  PosteriorVector b = propagate(net, ev);
  CHECK(a == b);
}

TEST_CASE("propagate: malformed net fails before any message") {
  BayesNet net = chain_ab();
  net.nodes[1].cpt.pop_back();  // CPT row missing
  CHECK_THROWS_AS(propagate(net, {}), Error);
}

TEST_CASE("propagate: posteriors stay within [0,1]") {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    BayesNet net = netgen::random_polytree(rng, 15, 0.9, 0.01, 0.99);
    Evidence ev = random_evidence(rng, 15);
    for (double p : propagate(net, ev)) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_SUITE_END();
