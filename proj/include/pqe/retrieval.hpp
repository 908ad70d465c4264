#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pqe/corpus.hpp"
#include "pqe/expansion.hpp"

namespace pqe {

// Sparse raw-tf document vector; the document-at-a-time counterpart of the
// inverted-file scorer.
struct DocVector {
  int doc_id = 0;
  std::map<std::string, int> tf;
};

DocVector doc_vector(const Document& d);

// Inner product of shared terms; tf times query weight, no normalization.
double score(const DocVector& d, const QueryVector& q);

struct ScoredDoc {
  int doc_id = 0;
  double score = 0.0;
};

// Term-at-a-time scoring over the inverted file. Documents ranked by
// (score desc, doc_id asc); zero-score documents never appear; k <= 0 keeps
// the full ranking.
std::vector<ScoredDoc> search(const InvertedFile& inv, const Vocabulary& vocab,
                              const QueryVector& q, int k);

using RankedRun = std::map<int, std::vector<ScoredDoc>>;  // by query id

RankedRun search_all(const InvertedFile& inv, const Vocabulary& vocab,
                     const std::vector<QueryVector>& queries, int k,
                     unsigned jobs = 1);

// Run file: "query_id TAB rank TAB doc_id TAB score", ranks from 1.
void write_run(const RankedRun& run, std::ostream& out,
               const std::vector<std::string>& comments = {});
RankedRun load_run(std::istream& in);
void write_run_file(const RankedRun& run, const std::string& path,
                    const std::vector<std::string>& comments = {});
RankedRun load_run_file(const std::string& path);

}  // namespace pqe
