#include "pqe/graph.hpp"

#include <algorithm>
#include <numeric>

namespace pqe {

std::vector<std::vector<int>> Skeleton::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

int Skeleton::component_count() const {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = n;
  for (const auto& [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --components;
    }
  }
  return components;
}

bool Skeleton::is_forest() const {
  return static_cast<int>(edges.size()) == n - component_count();
}

namespace {

struct GraphSource {
  const WeightedGraph& g;
  void begin_row(int) {}
  double weight(int u, int v) const { return g.weight(u, v); }
};

}  // namespace

Skeleton build_skeleton(const WeightedGraph& g) {
  GraphSource src{g};
  PrimResult res = prim_forest(
      g.size(), src, [](int, int, double w) { return w > 0.0; });
  return std::move(res.skeleton);
}

}  // namespace pqe
