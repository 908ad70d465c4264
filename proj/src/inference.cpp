#include "pqe/inference.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <cstdint>

#include "pqe/error.hpp"

namespace pqe {

namespace {

std::vector<char> evidence_flags(const BayesNet& net, const Evidence& ev) {
  std::vector<char> flag(static_cast<std::size_t>(net.size()), 0);
  for (int id : ev) {
    if (id < 0 || id >= net.size()) {
      throw Error("evidence node " + std::to_string(id) +
                  " is not in the network");
    }
    flag[static_cast<std::size_t>(id)] = 1;
  }
  return flag;
}

// The factor graph of a polytree is a tree: one factor per node covering the
// node and its parents; units 0..n-1 are variables, n..2n-1 factors.
struct FactorTree {
  const BayesNet& net;
  int n;
  // Bipartite edges (variable, factor, slot of the variable in the factor
  // scope); scope order is [child, parents...].
  struct Edge {
    int var;
    int factor;
    int slot;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> var_edges;     // per variable, edge ids
  std::vector<std::vector<int>> factor_edges;  // per factor, scope order

  explicit FactorTree(const BayesNet& net_in)
      : net(net_in), n(net_in.size()) {
    var_edges.resize(static_cast<std::size_t>(n));
    factor_edges.resize(static_cast<std::size_t>(n));
    for (int f = 0; f < n; ++f) {
      const BayesNode& node = net.nodes[static_cast<std::size_t>(f)];
      add_edge(f, f, 0);
      for (std::size_t i = 0; i < node.parents.size(); ++i) {
        add_edge(node.parents[i], f, static_cast<int>(i) + 1);
      }
    }
  }

  void add_edge(int var, int factor, int slot) {
    int id = static_cast<int>(edges.size());
    edges.push_back(Edge{var, factor, slot});
    var_edges[static_cast<std::size_t>(var)].push_back(id);
    factor_edges[static_cast<std::size_t>(factor)].push_back(id);
  }

  // Factor value at a scope assignment (bit s = value of scope slot s).
  double factor_value(int f, unsigned assign) const {
    const BayesNode& node = net.nodes[static_cast<std::size_t>(f)];
    bool child_on = (assign & 1u) != 0;
    double p = node.is_root() ? node.prior : node.cpt[assign >> 1];
    return child_on ? p : 1.0 - p;
  }
};

}  // namespace

PosteriorVector propagate(const BayesNet& net, const Evidence& ev) {
  net.validate();  // fail before any message is sent
  const int n = net.size();
  std::vector<char> is_ev = evidence_flags(net, ev);
  if (n == 0) return {};

  FactorTree ft(net);
  const int units = 2 * n;  // unit id: var v -> v, factor f -> n + f

  // Messages per bipartite edge, both directions, normalized after update.
  std::vector<std::array<double, 2>> msg_vf(
      ft.edges.size(), {1.0, 1.0});
  std::vector<std::array<double, 2>> msg_fv(
      ft.edges.size(), {1.0, 1.0});

  auto evidence_vec = [&](int v) {
    return is_ev[static_cast<std::size_t>(v)] ? std::array<double, 2>{0.0, 1.0}
                                              : std::array<double, 2>{1.0, 1.0};
  };
  auto normalize = [](std::array<double, 2>& m) {
    double s = m[0] + m[1];
    if (s <= 0.0) throw Error("propagation produced a zero message");
    m[0] /= s;
    m[1] /= s;
  };

  auto send_var_to_factor = [&](int v, int e) {
    std::array<double, 2> out = evidence_vec(v);
    for (int e2 : ft.var_edges[static_cast<std::size_t>(v)]) {
      if (e2 == e) continue;
      out[0] *= msg_fv[static_cast<std::size_t>(e2)][0];
      out[1] *= msg_fv[static_cast<std::size_t>(e2)][1];
    }
    normalize(out);
    msg_vf[static_cast<std::size_t>(e)] = out;
  };

  auto send_factor_to_var = [&](int f, int e) {
    const auto& scope = ft.factor_edges[static_cast<std::size_t>(f)];
    int target_slot = ft.edges[static_cast<std::size_t>(e)].slot;
    unsigned k = static_cast<unsigned>(scope.size());
    std::array<double, 2> out{0.0, 0.0};
    for (unsigned assign = 0; assign < (1u << k); ++assign) {
      double w = ft.factor_value(f, assign);
      for (unsigned s = 0; s < k; ++s) {
        if (static_cast<int>(s) == target_slot) continue;
        int e2 = scope[s];
        w *= msg_vf[static_cast<std::size_t>(e2)][(assign >> s) & 1u];
      }
      out[(assign >> static_cast<unsigned>(target_slot)) & 1u] += w;
    }
    normalize(out);
    msg_fv[static_cast<std::size_t>(e)] = out;
  };

  auto send = [&](int from_unit, int e) {
    if (from_unit < n) {
      send_var_to_factor(from_unit, e);
    } else {
      send_factor_to_var(from_unit - n, e);
    }
  };

  // Per component: BFS from the smallest variable id, collect along reverse
  // BFS order, then distribute along BFS order.
  std::vector<int> parent_unit(static_cast<std::size_t>(units), -2);
  std::vector<int> parent_edge(static_cast<std::size_t>(units), -1);
  auto unit_edges = [&](int unit) -> const std::vector<int>& {
    return unit < n ? ft.var_edges[static_cast<std::size_t>(unit)]
                    : ft.factor_edges[static_cast<std::size_t>(unit - n)];
  };
  auto other_unit = [&](int unit, int e) {
    const auto& edge = ft.edges[static_cast<std::size_t>(e)];
    return unit < n ? n + edge.factor : edge.var;
  };

  for (int root = 0; root < n; ++root) {
    if (parent_unit[static_cast<std::size_t>(root)] != -2) continue;
    std::vector<int> order;
    parent_unit[static_cast<std::size_t>(root)] = -1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (int e : unit_edges(u)) {
        int v = other_unit(u, e);
        if (parent_unit[static_cast<std::size_t>(v)] != -2) {
          if (v != parent_unit[static_cast<std::size_t>(u)]) {
            throw Error("network is not a polytree");
          }
          continue;
        }
        parent_unit[static_cast<std::size_t>(v)] = u;
        parent_edge[static_cast<std::size_t>(v)] = e;
        queue.push_back(v);
      }
    }
    // Collect: leaves toward the root.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int u = *it;
      if (parent_unit[static_cast<std::size_t>(u)] >= 0) {
        send(u, parent_edge[static_cast<std::size_t>(u)]);
      }
    }
    // Distribute: root toward the leaves.
    for (int u : order) {
      for (int e : unit_edges(u)) {
        int v = other_unit(u, e);
        if (parent_unit[static_cast<std::size_t>(v)] == u &&
            parent_edge[static_cast<std::size_t>(v)] == e) {
          send(u, e);
        }
      }
    }
  }

  PosteriorVector post(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    if (is_ev[static_cast<std::size_t>(v)]) {
      post[static_cast<std::size_t>(v)] = 1.0;
      continue;
    }
    std::array<double, 2> belief{1.0, 1.0};
    for (int e : ft.var_edges[static_cast<std::size_t>(v)]) {
      belief[0] *= msg_fv[static_cast<std::size_t>(e)][0];
      belief[1] *= msg_fv[static_cast<std::size_t>(e)][1];
    }
    double s = belief[0] + belief[1];
    if (s <= 0.0) throw Error("propagation produced a zero belief");
    double p = belief[1] / s;
    post[static_cast<std::size_t>(v)] = std::clamp(p, 0.0, 1.0);
  }
  return post;
}

PosteriorVector brute_force_posteriors(const BayesNet& net,
                                       const Evidence& ev) {
  const int n = net.size();
  if (n > 25) {
    throw Error("brute_force_posteriors: refusing " + std::to_string(n) +
                " nodes (2^n joint table)");
  }
  net.validate();
  std::vector<char> is_ev = evidence_flags(net, ev);
  if (n == 0) return {};

  std::uint32_t ev_mask = 0;
  for (int v = 0; v < n; ++v) {
    if (is_ev[static_cast<std::size_t>(v)]) ev_mask |= 1u << v;
  }

  std::vector<double> accum(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t config = 0; config < limit; ++config) {
    if ((config & ev_mask) != ev_mask) continue;  // contradicts evidence
    double w = 1.0;
    for (int v = 0; v < n; ++v) {
      const BayesNode& node = net.nodes[static_cast<std::size_t>(v)];
      double p;
      if (node.is_root()) {
        p = node.prior;
      } else {
        unsigned pmask = 0;
        for (std::size_t i = 0; i < node.parents.size(); ++i) {
          if (config >> node.parents[i] & 1u) pmask |= 1u << i;
        }
        p = node.cpt[pmask];
      }
      w *= (config >> v & 1u) ? p : 1.0 - p;
    }
    total += w;
    for (int v = 0; v < n; ++v) {
      if (config >> v & 1u) accum[static_cast<std::size_t>(v)] += w;
    }
  }
  if (total <= 0.0) throw Error("impossible evidence");

  PosteriorVector post(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    post[static_cast<std::size_t>(v)] =
        is_ev[static_cast<std::size_t>(v)]
            ? 1.0
            : std::clamp(accum[static_cast<std::size_t>(v)] / total, 0.0, 1.0);
  }
  return post;
}

}  // namespace pqe
