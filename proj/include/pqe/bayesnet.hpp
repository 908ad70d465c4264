#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pqe {

struct BayesNode {
  std::string term;
  std::vector<int> parents;  // ascending ids; empty for roots
  double prior = 0.0;        // p(node = 1), roots only
  std::vector<double> cpt;   // p(node = 1 | parent config), size 2^|parents|;
                             // config bit i = presence of parents[i]

  bool is_root() const { return parents.empty(); }
};

// Polytree over term nodes: the underlying undirected graph is a forest and
// every edge is directed exactly once (via the parents lists).
struct BayesNet {
  double confidence = 0.0;  // test level the structure was learned at
  std::vector<BayesNode> nodes;  // node id == index

  int size() const { return static_cast<int>(nodes.size()); }

  // (parent, child) pairs, sorted.
  std::vector<std::pair<int, int>> edges() const;

  // Throws on anything that would break propagation: bad parent ids, CPT row
  // counts != 2^parents, probabilities outside (0,1), cycles, or multiple
  // undirected paths between two nodes.
  void validate() const;
};

std::unordered_map<std::string, int> term_index(const BayesNet& net);

// "PQENET 1 <confidence>" line-oriented network format.
void save_network(const BayesNet& net, std::ostream& out,
                  const std::vector<std::string>& comments = {});
BayesNet load_network(std::istream& in);
void save_network_file(const BayesNet& net, const std::string& path,
                       const std::vector<std::string>& comments = {});
BayesNet load_network_file(const std::string& path);

}  // namespace pqe
