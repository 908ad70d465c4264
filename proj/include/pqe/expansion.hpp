#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "pqe/bayesnet.hpp"
#include "pqe/corpus.hpp"
#include "pqe/diag.hpp"

namespace pqe {

struct QueryTerm {
  std::string term;
  double weight = 0.0;  // raw tf for originals, posterior for added terms
  bool added = false;
};

struct QueryVector {
  int query_id = 0;
  std::vector<QueryTerm> terms;
};

// SMART query file -> tf-weighted query vectors (terms in first-occurrence
// order, weight = occurrence count).
std::vector<QueryVector> parse_queries_smart(const std::string& path,
                                             const TokenizerConfig& cfg);
std::vector<QueryVector> to_query_vectors(const std::vector<Document>& docs);

// Instantiates the query terms that exist as network nodes, propagates, and
// appends every other node whose posterior exceeds the threshold, weighted by
// that posterior. Originals are preserved verbatim; added terms follow in
// descending-posterior order (ties toward the smaller node id).
class QueryExpander {
 public:
  explicit QueryExpander(const BayesNet& net);

  QueryVector expand(const QueryVector& q, double threshold,
                     Diag* diag = nullptr) const;

  const BayesNet& net() const { return net_; }

 private:
  const BayesNet& net_;
  std::unordered_map<std::string, int> term_to_node_;
};

struct ExpansionStats {
  std::size_t queries = 0;
  double mean_added_terms = 0.0;
};

std::vector<QueryVector> expand_query_file(const std::vector<QueryVector>& qs,
                                           const QueryExpander& expander,
                                           double threshold, unsigned jobs = 1,
                                           Diag* diag = nullptr,
                                           ExpansionStats* stats = nullptr);

// ".I <id>" records followed by "term TAB weight TAB original|added" lines.
void write_expanded_queries(const std::vector<QueryVector>& qs,
                            std::ostream& out,
                            const std::vector<std::string>& comments = {});
std::vector<QueryVector> read_expanded_queries(std::istream& in);
void write_expanded_queries_file(const std::vector<QueryVector>& qs,
                                 const std::string& path,
                                 const std::vector<std::string>& comments = {});
std::vector<QueryVector> read_expanded_queries_file(const std::string& path);

}  // namespace pqe
