#pragma once

#include <barrier>
#include <cstdint>
#include <functional>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pqe/diag.hpp"
#include "pqe/error.hpp"

namespace pqe {

// Symmetric non-negative edge weights over n nodes; weight 0 means "no edge"
// (a pair that passed the independence test).
class WeightedGraph {
 public:
  explicit WeightedGraph(int n) : n_(n) {
    if (n < 0) throw Error("WeightedGraph: negative node count");
  }

  int size() const { return n_; }

  void set_weight(int a, int b, double w) {
    check(a, b);
    if (w < 0.0) throw Error("WeightedGraph: negative weight");
    if (w == 0.0) {
      weights_.erase(key(a, b));
    } else {
      weights_[key(a, b)] = w;
    }
  }

  double weight(int a, int b) const {
    check(a, b);
    auto it = weights_.find(key(a, b));
    return it == weights_.end() ? 0.0 : it->second;
  }

 private:
  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }
  void check(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) {
      throw Error("WeightedGraph: node out of range");
    }
    if (a == b) throw Error("WeightedGraph: self-loop");
  }

  int n_;
  std::unordered_map<std::uint64_t, double> weights_;
};

// Undirected forest over term ids. Edges stored as (min, max), sorted.
struct Skeleton {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<int>> adjacency() const;
  int component_count() const;
  bool is_forest() const;  // acyclic: |E| == n - #components
};

namespace detail {

inline bool pair_before(int a1, int b1, int a2, int b2) {
  if (a1 > b1) std::swap(a1, b1);
  if (a2 > b2) std::swap(a2, b2);
  return a1 != a2 ? a1 < a2 : b1 < b2;
}

}  // namespace detail

struct PrimResult {
  Skeleton skeleton;
  double total_weight = 0.0;
};

// Maximum-weight spanning forest, Prim-style.
//
// Source requirements:
//   void begin_row(int u);         row u is about to be scanned (u just
//                                  joined the tree); may precompute state
//   double weight(int u, int v);   raw weight of (u, v), thread-safe const
//                                  after begin_row(u)
//
// `gate(u, v, w)` decides whether the selected candidate edge joins the
// forest. A rejected candidate closes the current component, which is valid
// as long as the gate is monotone in w: the candidate carries the maximum
// weight crossing the cut, so rejecting it rejects every crossing edge.
// Growth starts at node 0 and restarts from the smallest unvisited node;
// ties are broken toward the smallest (id, id) pair.
template <class Source, class Gate>
PrimResult prim_forest(int n, Source& src, Gate&& gate, unsigned jobs = 1,
                       Diag* diag = nullptr) {
  PrimResult res;
  res.skeleton.n = n;
  if (n <= 0) return res;

  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<double> best(static_cast<std::size_t>(n), -1.0);
  std::vector<int> from(static_cast<std::size_t>(n), -1);
  std::int64_t remaining = n;

  if (diag) {
    diag->pairs_total = static_cast<std::int64_t>(n) * (n - 1) / 2;
  }
  std::int64_t next_report = diag ? diag->pairs_total / 20 : 0;

  auto update_range = [&](int u, int lo, int hi) {
    for (int v = lo; v < hi; ++v) {
      if (visited[static_cast<std::size_t>(v)]) continue;
      double w = src.weight(u, v);
      double b = best[static_cast<std::size_t>(v)];
      if (w > b || (w == b && detail::pair_before(
                                  u, v, from[static_cast<std::size_t>(v)], v))) {
        best[static_cast<std::size_t>(v)] = w;
        from[static_cast<std::size_t>(v)] = u;
      }
    }
  };

  unsigned team = jobs > 1 ? std::min<unsigned>(
                                 jobs, std::thread::hardware_concurrency() > 0
                                           ? std::thread::hardware_concurrency()
                                           : jobs)
                           : 1;
  if (n < 256) team = 1;  // thread overhead dominates tiny graphs

  // Worker team for the row updates. Phase A publishes the row node, phase B
  // marks all range updates complete; the coordinator runs selection and
  // bookkeeping between B and the next A.
  std::barrier<> bar(team);
  std::vector<std::thread> workers;
  int cur_u = -1;
  bool done = false;
  auto range_of = [&](unsigned t) {
    std::size_t per = (static_cast<std::size_t>(n) + team - 1) / team;
    std::size_t lo = t * per;
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(n),
                                           lo + per);
    return std::pair<int, int>(static_cast<int>(lo),
                               static_cast<int>(std::max(lo, hi)));
  };
  for (unsigned t = 1; t < team; ++t) {
    workers.emplace_back([&, t] {
      while (true) {
        bar.arrive_and_wait();  // A
        if (done) return;
        auto [lo, hi] = range_of(t);
        update_range(cur_u, lo, hi);
        bar.arrive_and_wait();  // B
      }
    });
  }

  auto scan_row = [&](int u) {
    src.begin_row(u);
    if (team == 1) {
      update_range(u, 0, n);
    } else {
      cur_u = u;
      bar.arrive_and_wait();  // A
      auto [lo, hi] = range_of(0);
      update_range(u, lo, hi);
      bar.arrive_and_wait();  // B
    }
    if (diag) {
      diag->pairs_done += remaining;
      if (diag->pairs_done >= next_report) {
        diag->progress("dependency sweep: " + std::to_string(diag->pairs_done) +
                       "/" + std::to_string(diag->pairs_total) + " pairs");
        next_report += std::max<std::int64_t>(1, diag->pairs_total / 20);
      }
    }
  };

  auto select_candidate = [&]() {
    int sel = -1;
    for (int v = 0; v < n; ++v) {
      if (visited[static_cast<std::size_t>(v)] ||
          from[static_cast<std::size_t>(v)] < 0)
        continue;
      if (sel < 0) {
        sel = v;
        continue;
      }
      double wv = best[static_cast<std::size_t>(v)];
      double ws = best[static_cast<std::size_t>(sel)];
      if (wv > ws ||
          (wv == ws &&
           detail::pair_before(from[static_cast<std::size_t>(v)], v,
                               from[static_cast<std::size_t>(sel)], sel))) {
        sel = v;
      }
    }
    return sel;
  };

  for (int seed = 0; seed < n; ++seed) {
    if (visited[static_cast<std::size_t>(seed)]) continue;
    for (int v = 0; v < n; ++v) {
      if (!visited[static_cast<std::size_t>(v)]) {
        best[static_cast<std::size_t>(v)] = -1.0;
        from[static_cast<std::size_t>(v)] = -1;
      }
    }
    visited[static_cast<std::size_t>(seed)] = 1;
    --remaining;
    scan_row(seed);
    while (true) {
      int v = select_candidate();
      if (v < 0) break;
      int u = from[static_cast<std::size_t>(v)];
      if (!gate(u, v, best[static_cast<std::size_t>(v)])) break;
      visited[static_cast<std::size_t>(v)] = 1;
      --remaining;
      res.skeleton.edges.emplace_back(std::min(u, v), std::max(u, v));
      res.total_weight += best[static_cast<std::size_t>(v)];
      if (diag) ++diag->edges_adjoined;
      scan_row(v);
    }
  }

  if (team > 1) {
    done = true;
    bar.arrive_and_wait();  // release workers
    for (auto& t : workers) t.join();
  }

  std::sort(res.skeleton.edges.begin(), res.skeleton.edges.end());
  return res;
}

// Maximum-weight spanning forest of an explicit weighted graph; edges of
// weight 0 are never adjoined.
Skeleton build_skeleton(const WeightedGraph& g);

}  // namespace pqe
