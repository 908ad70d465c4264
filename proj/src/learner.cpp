#include "pqe/learner.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "pqe/dependency.hpp"
#include "pqe/error.hpp"
#include "pqe/util.hpp"

namespace pqe {

namespace {

// Weight source for the Prim sweep. begin_row(u) fills co-occurrence counts
// for u against every term via a forward index (document -> terms), so a
// full row costs O(sum of the row documents' lengths) instead of one sorted
// intersection per pair.
class DepRowSource {
 public:
  explicit DepRowSource(const InvertedFile& inv) : inv_(inv) {
    std::unordered_map<int, int> slot_of;
    for (const auto& plist : inv_.postings) {
      for (const Posting& p : plist) {
        slot_of.emplace(p.doc_id, static_cast<int>(slot_of.size()));
      }
    }
    doc_terms_.resize(slot_of.size());
    for (int t = 0; t < inv_.num_terms(); ++t) {
      for (const Posting& p : inv_.postings[static_cast<std::size_t>(t)]) {
        doc_terms_[static_cast<std::size_t>(slot_of[p.doc_id])].push_back(t);
      }
    }
    slots_.reserve(slot_of.size());
    slot_of_ = std::move(slot_of);
    row_n11_.assign(static_cast<std::size_t>(inv_.num_terms()), 0);
  }

  void begin_row(int u) {
    std::fill(row_n11_.begin(), row_n11_.end(), 0);
    for (const Posting& p : inv_.postings[static_cast<std::size_t>(u)]) {
      for (int t : doc_terms_[static_cast<std::size_t>(slot_of_.at(p.doc_id))]) {
        ++row_n11_[static_cast<std::size_t>(t)];
      }
    }
    cur_ = u;
  }

  double weight(int u, int v) const {
    Contingency2 ct;
    ct.n = inv_.num_docs;
    ct.n11 = row_n11_[static_cast<std::size_t>(v)];
    ct.n10 = inv_.df[static_cast<std::size_t>(u)] - ct.n11;
    ct.n01 = inv_.df[static_cast<std::size_t>(v)] - ct.n11;
    ct.n00 = ct.n - ct.n11 - ct.n10 - ct.n01;
    return marginal_dep(ct).value;
  }

 private:
  const InvertedFile& inv_;
  std::unordered_map<int, int> slot_of_;
  std::vector<int> slots_;
  std::vector<std::vector<int>> doc_terms_;
  std::vector<std::int64_t> row_n11_;
  int cur_ = -1;
};

}  // namespace

Skeleton learn_skeleton(const InvertedFile& inv, double confidence,
                        unsigned jobs, Diag* diag) {
  confidence_index(confidence);  // validate early
  if (inv.num_docs <= 0) throw Error("learn_skeleton: empty inverted file");

  DepRowSource src(inv);
  std::int64_t n_docs = inv.num_docs;
  auto gate = [&](int, int, double w) {
    if (diag) ++diag->independence_tests;
    return !independence_test(DepScore{w, n_docs}, 1, confidence);
  };
  PrimResult res = prim_forest(inv.num_terms(), src, gate, jobs, diag);
  return std::move(res.skeleton);
}

DirectedForest orient_edges(const Skeleton& sk, const InvertedFile& inv,
                            double confidence, Diag* diag) {
  confidence_index(confidence);
  if (!sk.is_forest()) throw Error("orient_edges: skeleton is not a forest");

  const int n = sk.n;
  const auto adj = sk.adjacency();

  // Edge state: 0 undirected, +1 directed min->max, -1 directed max->min.
  std::vector<int> dir(sk.edges.size(), 0);
  std::unordered_map<std::uint64_t, int> edge_idx;
  edge_idx.reserve(sk.edges.size() * 2);
  auto ekey = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  for (std::size_t i = 0; i < sk.edges.size(); ++i) {
    edge_idx.emplace(ekey(sk.edges[i].first, sk.edges[i].second),
                     static_cast<int>(i));
  }

  std::vector<int> incoming(static_cast<std::size_t>(n), 0);
  std::vector<char> collider_ok(static_cast<std::size_t>(n), 0);

  auto set_direction = [&](int parent, int child) {
    int e = edge_idx.at(ekey(parent, child));
    dir[static_cast<std::size_t>(e)] = parent < child ? 1 : -1;
    ++incoming[static_cast<std::size_t>(child)];
  };
  auto direction = [&](int a, int b) {  // +1 a->b, -1 b->a, 0 undirected
    int e = edge_idx.at(ekey(a, b));
    int d = dir[static_cast<std::size_t>(e)];
    if (d == 0) return 0;
    return (a < b) == (d == 1) ? 1 : -1;
  };

  // Collider scan: triplets in ascending (g, min(a,b), max(a,b)) order.
  for (int g = 0; g < n; ++g) {
    const auto& nb = adj[static_cast<std::size_t>(g)];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        int a = nb[i], b = nb[j];
        DepScore dm = marginal_dep(pair_counts(inv, a, b));
        DepScore dc = conditional_dep(triple_counts(inv, a, b, g));
        if (diag) ++diag->independence_tests;
        if (!(dm.value < dc.value) || independence_test(dc, 2, confidence)) {
          continue;
        }
        if (diag) ++diag->collider_decisions;
        collider_ok[static_cast<std::size_t>(g)] = 1;
        for (int tail : {a, b}) {
          int d = direction(tail, g);
          if (d == 0) {
            set_direction(tail, g);
          } else if (d == -1) {
            // Earlier orientation stands.
            if (diag) {
              ++diag->orientation_conflicts;
              diag->warn("orientation conflict at edge " +
                         std::to_string(g) + "-" + std::to_string(tail) +
                         ": keeping earlier direction");
            }
          }
        }
      }
    }
  }

  // Constraint propagation: an undirected edge at a node with an incoming
  // edge points away from that node. Fixed sweep order keeps this
  // deterministic when both endpoints demand a direction.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < sk.edges.size(); ++e) {
      if (dir[e] != 0) continue;
      auto [a, b] = sk.edges[e];  // a < b
      bool a_in = incoming[static_cast<std::size_t>(a)] > 0;
      bool b_in = incoming[static_cast<std::size_t>(b)] > 0;
      if (a_in && b_in) {
        set_direction(a, b);
        collider_ok[static_cast<std::size_t>(b)] = 1;
        if (diag) {
          ++diag->structure_warnings;
          diag->warn("edge " + std::to_string(a) + "-" + std::to_string(b) +
                     " forced in both directions; directing " +
                     std::to_string(a) + "->" + std::to_string(b));
        }
        changed = true;
      } else if (a_in) {
        set_direction(a, b);
        changed = true;
      } else if (b_in) {
        set_direction(b, a);
        changed = true;
      }
    }
  }

  // Unconstrained fragments: breadth-first away from the smallest node.
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    seen[static_cast<std::size_t>(root)] = 1;
    bool touches_undirected = false;
    for (int nb2 : adj[static_cast<std::size_t>(root)]) {
      if (direction(root, nb2) == 0) {
        touches_undirected = true;
        break;
      }
    }
    if (!touches_undirected) continue;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (direction(u, v) != 0) continue;
        set_direction(u, v);
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          queue.push_back(v);
        }
      }
    }
  }

  // No head-to-head may exist unless the collider rule fired for that node
  // or a logged conflict forced it.
  for (int v = 0; v < n; ++v) {
    if (incoming[static_cast<std::size_t>(v)] > 1 &&
        !collider_ok[static_cast<std::size_t>(v)]) {
      throw Error("internal: unexplained head-to-head at node " +
                  std::to_string(v));
    }
  }

  DirectedForest forest;
  forest.n = n;
  forest.edges.reserve(sk.edges.size());
  for (std::size_t e = 0; e < sk.edges.size(); ++e) {
    auto [a, b] = sk.edges[e];
    if (dir[e] == 0) {
      throw Error("internal: edge left undirected");
    }
    forest.edges.emplace_back(dir[e] == 1 ? a : b, dir[e] == 1 ? b : a);
  }
  std::sort(forest.edges.begin(), forest.edges.end());
  if (diag) {
    diag->progress("orientation: " + std::to_string(forest.edges.size()) +
                   " edges directed, " +
                   std::to_string(diag->collider_decisions) +
                   " collider decisions");
  }
  return forest;
}

BayesNet estimate_parameters(const DirectedForest& forest,
                             const InvertedFile& inv, const Vocabulary& vocab,
                             int parent_cap, Diag* diag) {
  if (forest.n != vocab.size() || forest.n != inv.num_terms()) {
    throw Error("estimate_parameters: structure does not match index");
  }
  const std::int64_t n_docs = inv.num_docs;

  BayesNet net;
  net.nodes.resize(static_cast<std::size_t>(forest.n));
  for (int t = 0; t < forest.n; ++t) {
    net.nodes[static_cast<std::size_t>(t)].term = vocab.term(t);
  }
  for (const auto& [p, c] : forest.edges) {
    net.nodes[static_cast<std::size_t>(c)].parents.push_back(p);
  }

  for (int c = 0; c < forest.n; ++c) {
    BayesNode& node = net.nodes[static_cast<std::size_t>(c)];
    std::sort(node.parents.begin(), node.parents.end());
    if (node.is_root()) {
      node.prior = static_cast<double>(inv.df[static_cast<std::size_t>(c)] + 1) /
                   static_cast<double>(n_docs + 2);
      continue;
    }
    int m = static_cast<int>(node.parents.size());
    if (m > parent_cap) {
      throw Error("node " + std::to_string(c) + " (" + node.term + ") has " +
                  std::to_string(m) + " parents; cap is " +
                  std::to_string(parent_cap));
    }
    std::size_t rows = static_cast<std::size_t>(1) << m;
    std::vector<std::int64_t> total(rows, 0), hits(rows, 0);

    // Parent-presence mask per document over the union of parent postings;
    // documents outside the union sit in configuration 0.
    std::unordered_map<int, unsigned> mask_of;
    for (int i = 0; i < m; ++i) {
      for (const Posting& p :
           inv.postings[static_cast<std::size_t>(node.parents[i])]) {
        mask_of[p.doc_id] |= 1u << i;
      }
    }
    for (const auto& [doc, mask] : mask_of) ++total[mask];
    std::int64_t in_union = 0;
    for (std::size_t k = 1; k < rows; ++k) in_union += total[k];
    total[0] = n_docs - in_union;

    for (const Posting& p : inv.postings[static_cast<std::size_t>(c)]) {
      auto it = mask_of.find(p.doc_id);
      ++hits[it == mask_of.end() ? 0 : it->second];
    }

    node.cpt.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) {
      node.cpt[k] = static_cast<double>(hits[k] + 1) /
                    static_cast<double>(total[k] + 2);
    }
  }
  if (diag) diag->progress("parameters estimated for " +
                           std::to_string(forest.n) + " nodes");
  return net;
}

BayesNet learn(const InvertedFile& inv, const Vocabulary& vocab,
               double confidence, const LearnOptions& opt) {
  if (inv.num_terms() != vocab.size()) {
    throw Error("learn: vocabulary does not match inverted file");
  }
  Skeleton sk = learn_skeleton(inv, confidence, opt.jobs, opt.diag);
  DirectedForest forest = orient_edges(sk, inv, confidence, opt.diag);
  BayesNet net =
      estimate_parameters(forest, inv, vocab, opt.parent_cap, opt.diag);
  net.confidence = confidence;
  net.validate();
  return net;
}

}  // namespace pqe
