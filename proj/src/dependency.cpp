#include "pqe/dependency.hpp"

#include <cmath>
#include <cstdlib>

#include "pqe/error.hpp"
#include "pqe/util.hpp"

namespace pqe {

namespace {

constexpr double kConfidences[5] = {0.90, 0.95, 0.975, 0.99, 0.995};
// Chi-square quantiles at the five levels.
constexpr double kChi1[5] = {2.705543454095404, 3.841458820694124,
                             5.023886187314888, 6.634896601021213,
                             7.879438576622417};
constexpr double kChi2[5] = {4.605170185988091, 5.991464547107982,
                             7.377758908227873, 9.210340371976182,
                             10.596634733096073};

// One term of the dependency sum. The log argument is formed from exact
// integer products so a product-form table yields ratio == 1.0 and a term of
// exactly 0.
double dep_term(std::int64_t joint, std::int64_t m1, std::int64_t m2,
                std::int64_t scale, std::int64_t n) {
  if (joint == 0) return 0.0;
  double ratio = (static_cast<double>(joint) * static_cast<double>(scale)) /
                 (static_cast<double>(m1) * static_cast<double>(m2));
  return (static_cast<double>(joint) / static_cast<double>(n)) *
         std::log(ratio);
}

}  // namespace

DepScore marginal_dep(const Contingency2& ct) {
  if (ct.n <= 0) throw Error("marginal_dep: empty sample");
  std::int64_t a1 = ct.n11 + ct.n10, a0 = ct.n01 + ct.n00;
  std::int64_t b1 = ct.n11 + ct.n01, b0 = ct.n10 + ct.n00;
  // Grouped so that swapping the two variables (n10 <-> n01) cannot change
  // the floating-point sum.
  double sum = (dep_term(ct.n11, a1, b1, ct.n, ct.n) +
                dep_term(ct.n00, a0, b0, ct.n, ct.n)) +
               (dep_term(ct.n10, a1, b0, ct.n, ct.n) +
                dep_term(ct.n01, a0, b1, ct.n, ct.n));
  return DepScore{sum < 0.0 ? 0.0 : sum, ct.n};
}

DepScore conditional_dep(const Contingency3& ct) {
  if (ct.n <= 0) throw Error("conditional_dep: empty sample");
  double sum = 0.0;
  // k = 1 first: when the conditioning variable is constant-present the k = 0
  // group contributes exactly 0 and the total equals the marginal sum.
  for (int k = 1; k >= 0; --k) {
    std::int64_t a1k = ct.at(1, 1, k) + ct.at(1, 0, k);
    std::int64_t a0k = ct.at(0, 1, k) + ct.at(0, 0, k);
    std::int64_t b1k = ct.at(1, 1, k) + ct.at(0, 1, k);
    std::int64_t b0k = ct.at(1, 0, k) + ct.at(0, 0, k);
    std::int64_t nk = a1k + a0k;
    sum += (dep_term(ct.at(1, 1, k), a1k, b1k, nk, ct.n) +
            dep_term(ct.at(0, 0, k), a0k, b0k, nk, ct.n)) +
           (dep_term(ct.at(1, 0, k), a1k, b0k, nk, ct.n) +
            dep_term(ct.at(0, 1, k), a0k, b1k, nk, ct.n));
  }
  return DepScore{sum < 0.0 ? 0.0 : sum, ct.n};
}

bool is_supported_confidence(double confidence) {
  for (double c : kConfidences) {
    if (std::abs(confidence - c) < 1e-9) return true;
  }
  return false;
}

int confidence_index(double confidence) {
  for (int i = 0; i < 5; ++i) {
    if (std::abs(confidence - kConfidences[i]) < 1e-9) return i;
  }
  throw Error("unsupported confidence level " + fmt_g(confidence) +
              " (supported: 0.9 0.95 0.975 0.99 0.995)");
}

double chi_square_quantile(int df, double confidence) {
  int idx = confidence_index(confidence);
  if (df == 1) return kChi1[idx];
  if (df == 2) return kChi2[idx];
  throw Error("chi_square_quantile: df must be 1 or 2");
}

bool independence_test(const DepScore& dep, int df, double confidence) {
  double g = 2.0 * static_cast<double>(dep.n) * dep.value;
  return g <= chi_square_quantile(df, confidence);
}

}  // namespace pqe
