#pragma once

// Independent test oracles. Everything here is deliberately implemented from
// first principles (no calls into the code paths under test).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// --- Kruskal maximum-weight spanning forest -------------------------------

struct WeightedEdge {
  int a, b;
  double w;
};

struct KruskalResult {
  std::set<std::pair<int, int>> edges;  // (min,max)
  double total = 0.0;
};

inline KruskalResult kruskal_forest(int n, std::vector<WeightedEdge> edges) {
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& x, const WeightedEdge& y) {
              if (x.w != y.w) return x.w > y.w;
              if (x.a != y.a) return x.a < y.a;
              return x.b < y.b;
            });
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  KruskalResult res;
  for (const WeightedEdge& e : edges) {
    if (e.w <= 0.0) continue;
    int ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    res.edges.emplace(std::min(e.a, e.b), std::max(e.a, e.b));
    res.total += e.w;
  }
  return res;
}

// --- chi-square quantiles by CDF bisection --------------------------------

// CDF of chi-square with 1 df: erf(sqrt(x/2)); with 2 df: 1 - exp(-x/2).
inline double chi2_cdf(int df, double x) {
  if (x <= 0.0) return 0.0;
  if (df == 1) return std::erf(std::sqrt(x / 2.0));
  return 1.0 - std::exp(-x / 2.0);
}

inline double chi2_quantile(int df, double p) {
  double lo = 0.0, hi = 200.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (chi2_cdf(df, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// --- dependency measures, direct term-by-term -----------------------------

inline double mutual_information(const std::int64_t c[2][2], std::int64_t n) {
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (c[i][j] == 0) continue;
      double pij = static_cast<double>(c[i][j]) / n;
      double pi = static_cast<double>(c[i][0] + c[i][1]) / n;
      double pj = static_cast<double>(c[0][j] + c[1][j]) / n;
      mi += pij * std::log(pij / (pi * pj));
    }
  }
  return mi;
}

inline double conditional_mutual_information(const std::int64_t c[2][2][2],
                                             std::int64_t n) {
  double cmi = 0.0;
  for (int k = 0; k < 2; ++k) {
    std::int64_t nk = 0;
    std::int64_t ak[2] = {0, 0}, bk[2] = {0, 0};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        nk += c[i][j][k];
        ak[i] += c[i][j][k];
        bk[j] += c[i][j][k];
      }
    }
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        if (c[i][j][k] == 0) continue;
        double pijk = static_cast<double>(c[i][j][k]) / n;
        double pk = static_cast<double>(nk) / n;
        double pik = static_cast<double>(ak[i]) / n;
        double pjk = static_cast<double>(bk[j]) / n;
        cmi += pijk * std::log(pijk * pk / (pik * pjk));
      }
    }
  }
  return cmi;
}

// --- per-document scans over explicit presence sets -----------------------

// docs[d] = set of term ids present in document d.
inline void scan_pair(const std::vector<std::set<int>>& docs, int a, int b,
                      std::int64_t c[2][2]) {
  c[0][0] = c[0][1] = c[1][0] = c[1][1] = 0;
  for (const auto& d : docs) {
    ++c[d.count(a) ? 1 : 0][d.count(b) ? 1 : 0];
  }
}

inline void scan_triple(const std::vector<std::set<int>>& docs, int a, int b,
                        int g, std::int64_t c[2][2][2]) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j][0] = c[i][j][1] = 0;
  for (const auto& d : docs) {
    ++c[d.count(a) ? 1 : 0][d.count(b) ? 1 : 0][d.count(g) ? 1 : 0];
  }
}

}  // namespace oracle
