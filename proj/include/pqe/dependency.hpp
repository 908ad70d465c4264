#pragma once

#include <cstdint>

#include "pqe/corpus.hpp"

namespace pqe {

// Mutual-information style dependency value in nats, together with the
// sample size it was estimated from (needed by the G-test).
struct DepScore {
  double value = 0.0;  // clamped to >= 0
  std::int64_t n = 0;
};

// Kullback-Leibler mutual information of the 2x2 presence table,
// sum_ij p_ij ln(p_ij / (p_i p_j)), with 0 ln 0 := 0.
DepScore marginal_dep(const Contingency2& ct);

// Conditional mutual information of the 2x2x2 table,
// sum_ijk p_ijk ln(p_ijk p_k / (p_ik p_jk)), with 0 ln 0 := 0.
DepScore conditional_dep(const Contingency3& ct);

// The five supported test levels: 0.90, 0.95, 0.975, 0.99, 0.995.
int confidence_index(double confidence);  // throws on anything else
bool is_supported_confidence(double confidence);

double chi_square_quantile(int df, double confidence);  // df 1 or 2

// G-test: statistic G = 2 N Dep compared against the chi-square quantile.
// Returns true when the variables look independent (G <= quantile).
bool independence_test(const DepScore& dep, int df, double confidence);

}  // namespace pqe
