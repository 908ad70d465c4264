#include "pqe/retrieval.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "pqe/error.hpp"
#include "pqe/parallel.hpp"
#include "pqe/util.hpp"

namespace pqe {

DocVector doc_vector(const Document& d) {
  DocVector dv;
  dv.doc_id = d.doc_id;
  for (const std::string& tok : d.tokens) ++dv.tf[tok];
  return dv;
}

double score(const DocVector& d, const QueryVector& q) {
  double s = 0.0;
  for (const QueryTerm& t : q.terms) {
    auto it = d.tf.find(t.term);
    if (it != d.tf.end()) s += static_cast<double>(it->second) * t.weight;
  }
  return s;
}

std::vector<ScoredDoc> search(const InvertedFile& inv, const Vocabulary& vocab,
                              const QueryVector& q, int k) {
  // Accumulate term-major so the per-document addition order matches the
  // document-at-a-time scorer exactly.
  std::unordered_map<int, double> acc;
  for (const QueryTerm& t : q.terms) {
    int tid = vocab.term_id(t.term);
    if (tid < 0) continue;
    for (const Posting& p : inv.postings[static_cast<std::size_t>(tid)]) {
      acc[p.doc_id] += static_cast<double>(p.tf) * t.weight;
    }
  }
  std::vector<ScoredDoc> ranked;
  ranked.reserve(acc.size());
  for (const auto& [doc, s] : acc) {
    if (s > 0.0) ranked.push_back(ScoredDoc{doc, s});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const ScoredDoc& a, const ScoredDoc& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.doc_id < b.doc_id;
            });
  if (k > 0 && static_cast<int>(ranked.size()) > k) {
    ranked.resize(static_cast<std::size_t>(k));
  }
  return ranked;
}

RankedRun search_all(const InvertedFile& inv, const Vocabulary& vocab,
                     const std::vector<QueryVector>& queries, int k,
                     unsigned jobs) {
  std::vector<std::vector<ScoredDoc>> results(queries.size());
  parallel_for(jobs, queries.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      results[i] = search(inv, vocab, queries[i], k);
    }
  });
  RankedRun run;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (!run.emplace(queries[i].query_id, std::move(results[i])).second) {
      throw Error("duplicate query id " +
                  std::to_string(queries[i].query_id) + " in query set");
    }
  }
  return run;
}

void write_run(const RankedRun& run, std::ostream& out,
               const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  for (const auto& [qid, ranked] : run) {
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      out << qid << '\t' << (r + 1) << '\t' << ranked[r].doc_id << '\t'
          << fmt_g(ranked[r].score) << '\n';
    }
  }
}

RankedRun load_run(std::istream& in) {
  RankedRun run;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cols = split_ws(t);
    long long qid = 0, rank = 0, doc = 0;
    double s = 0.0;
    if (cols.size() != 4 || !parse_i64(cols[0], &qid) ||
        !parse_i64(cols[1], &rank) || !parse_i64(cols[2], &doc) ||
        !parse_f64(cols[3], &s)) {
      throw ParseError("bad run line \"" + t + "\"", line_no);
    }
    auto& ranked = run[static_cast<int>(qid)];
    if (rank != static_cast<long long>(ranked.size()) + 1) {
      throw ParseError("ranks not consecutive for query " +
                           std::to_string(qid),
                       line_no);
    }
    ranked.push_back(ScoredDoc{static_cast<int>(doc), s});
  }
  return run;
}

void write_run_file(const RankedRun& run, const std::string& path,
                    const std::vector<std::string>& comments) {
  std::ostringstream out;
  write_run(run, out, comments);
  write_text_file(path, out.str());
}

RankedRun load_run_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open run file: " + path);
  try {
    return load_run(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace pqe
