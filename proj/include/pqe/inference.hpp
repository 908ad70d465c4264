#pragma once

#include <vector>

#include "pqe/bayesnet.hpp"

namespace pqe {

// Node ids instantiated to state 1 ("the term is relevant").
using Evidence = std::vector<int>;

// p(node = 1 | evidence) per node id.
using PosteriorVector = std::vector<double>;

// Exact posteriors by message passing over each connected component,
// two-phase collect/distribute rooted at the component's smallest node.
// Components containing no evidence yield their prior marginals. Linear in
// the node count for a fixed maximum parent count.
PosteriorVector propagate(const BayesNet& net, const Evidence& ev);

// Joint enumeration over all 2^n configurations; the test oracle for
// propagate. Refuses nets with more than 25 nodes.
PosteriorVector brute_force_posteriors(const BayesNet& net,
                                       const Evidence& ev);

}  // namespace pqe
