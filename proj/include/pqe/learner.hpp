#pragma once

#include <utility>
#include <vector>

#include "pqe/bayesnet.hpp"
#include "pqe/corpus.hpp"
#include "pqe/diag.hpp"
#include "pqe/graph.hpp"

namespace pqe {

// Structure after edge orientation: every skeleton edge directed once.
struct DirectedForest {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // (parent, child)
};

struct LearnOptions {
  int parent_cap = 12;       // max parents per node (CPT has 2^parents rows)
  unsigned jobs = 1;         // worker cap for the dependency sweep
  Diag* diag = nullptr;
};

// Pairwise-dependency sweep plus maximum-weight spanning forest. Each
// candidate edge must fail the one-degree-of-freedom independence test at
// `confidence` before it is adjoined, which is equivalent to zeroing the
// weight of every pair that passes the test.
Skeleton learn_skeleton(const InvertedFile& inv, double confidence,
                        unsigned jobs = 1, Diag* diag = nullptr);

// Collider detection and constraint propagation over the forest. For each
// triplet a-g-b (ascending (g, min, max) order) the pattern is directed
// a -> g <- b iff conditioning on g raises the dependency of (a, b) and the
// two-degree-of-freedom test rejects independence. Remaining edges are
// directed away from nodes that already have an incoming edge (to a
// fixpoint); untouched fragments are rooted at their smallest node and
// directed outward breadth-first. Conflicts never abort: the earlier
// orientation stands and a warning is recorded.
DirectedForest orient_edges(const Skeleton& sk, const InvertedFile& inv,
                            double confidence, Diag* diag = nullptr);

// Priors and CPTs from document presence counts with add-one smoothing:
// root prior (df+1)/(N+2); CPT row (hits+1)/(total+2). A node with more than
// parent_cap parents is an error.
BayesNet estimate_parameters(const DirectedForest& forest,
                             const InvertedFile& inv, const Vocabulary& vocab,
                             int parent_cap = 12, Diag* diag = nullptr);

// Full learning pipeline: sweep -> skeleton -> orientation -> parameters.
// Deterministic: identical inputs give a byte-identical serialized network.
BayesNet learn(const InvertedFile& inv, const Vocabulary& vocab,
               double confidence, const LearnOptions& opt = {});

}  // namespace pqe
