#include "pqe/expansion.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "pqe/error.hpp"
#include "pqe/inference.hpp"
#include "pqe/parallel.hpp"
#include "pqe/util.hpp"

namespace pqe {

std::vector<QueryVector> to_query_vectors(const std::vector<Document>& docs) {
  std::vector<QueryVector> out;
  out.reserve(docs.size());
  for (const Document& d : docs) {
    QueryVector q;
    q.query_id = d.doc_id;
    std::unordered_map<std::string, std::size_t> pos;
    for (const std::string& tok : d.tokens) {
      auto [it, inserted] = pos.try_emplace(tok, q.terms.size());
      if (inserted) {
        q.terms.push_back(QueryTerm{tok, 1.0, false});
      } else {
        q.terms[it->second].weight += 1.0;
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QueryVector> parse_queries_smart(const std::string& path,
                                             const TokenizerConfig& cfg) {
  std::vector<Document> docs = parse_smart_file(path);
  tokenize_documents(docs, cfg);
  return to_query_vectors(docs);
}

QueryExpander::QueryExpander(const BayesNet& net)
    : net_(net), term_to_node_(term_index(net)) {}

QueryVector QueryExpander::expand(const QueryVector& q, double threshold,
                                  Diag* diag) const {
  if (q.terms.empty()) {
    throw Error("cannot expand empty query " + std::to_string(q.query_id));
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("threshold must lie in (0,1)");
  }

  Evidence ev;
  std::set<std::string> original_terms;
  for (const QueryTerm& t : q.terms) {
    original_terms.insert(t.term);
    auto it = term_to_node_.find(t.term);
    if (it == term_to_node_.end()) {
      if (diag) {
        diag->warn("query " + std::to_string(q.query_id) + ": term \"" +
                   t.term + "\" is not a network node; kept without evidence");
      }
      continue;
    }
    ev.push_back(it->second);
  }
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());

  QueryVector out;
  out.query_id = q.query_id;
  out.terms = q.terms;  // originals preserved verbatim

  if (ev.empty()) {
    if (diag) {
      diag->warn("query " + std::to_string(q.query_id) +
                 ": no term present in the network; query left unexpanded");
    }
    return out;
  }

  PosteriorVector post = propagate(net_, ev);

  struct Candidate {
    int node;
    double posterior;
  };
  std::vector<Candidate> picked;
  for (int v = 0; v < net_.size(); ++v) {
    if (post[static_cast<std::size_t>(v)] <= threshold) continue;
    if (original_terms.count(net_.nodes[static_cast<std::size_t>(v)].term)) {
      continue;  // evidence and other original terms are never re-added
    }
    picked.push_back(Candidate{v, post[static_cast<std::size_t>(v)]});
  }
  std::sort(picked.begin(), picked.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.posterior != b.posterior) return a.posterior > b.posterior;
              return a.node < b.node;
            });
  for (const Candidate& c : picked) {
    out.terms.push_back(QueryTerm{
        net_.nodes[static_cast<std::size_t>(c.node)].term, c.posterior, true});
  }
  return out;
}

std::vector<QueryVector> expand_query_file(const std::vector<QueryVector>& qs,
                                           const QueryExpander& expander,
                                           double threshold, unsigned jobs,
                                           Diag* diag,
                                           ExpansionStats* stats) {
  std::vector<QueryVector> out(qs.size());
  std::vector<Diag> local(qs.size());
  parallel_for(jobs, qs.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (qs[i].terms.empty()) {
        // File-level leniency: an empty query cannot be expanded but is kept
        // so retrieval and evaluation see the same query set.
        local[i].warn("query " + std::to_string(qs[i].query_id) +
                      " has no terms; left unexpanded");
        out[i] = qs[i];
        continue;
      }
      out[i] = expander.expand(qs[i], threshold, &local[i]);
    }
  });
  std::size_t added = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (diag) {
      for (const std::string& w : local[i].warnings) diag->warn(w);
    }
    added += out[i].terms.size() - qs[i].terms.size();
  }
  if (stats) {
    stats->queries = qs.size();
    stats->mean_added_terms =
        qs.empty() ? 0.0
                   : static_cast<double>(added) / static_cast<double>(qs.size());
  }
  if (diag) {
    diag->progress("expanded " + std::to_string(qs.size()) + " queries, " +
                   (qs.empty() ? std::string("0")
                               : fmt_g(static_cast<double>(added) /
                                           static_cast<double>(qs.size()),
                                       4)) +
                   " terms added per query on average");
  }
  return out;
}

void write_expanded_queries(const std::vector<QueryVector>& qs,
                            std::ostream& out,
                            const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  for (const QueryVector& q : qs) {
    out << ".I " << q.query_id << '\n';
    for (const QueryTerm& t : q.terms) {
      out << t.term << '\t';
      if (!t.added) {
        // Original weights are raw tf counts; keep them integral.
        out << static_cast<long long>(t.weight);
      } else {
        out << fmt_g(t.weight);
      }
      out << '\t' << (t.added ? "added" : "original") << '\n';
    }
  }
}

std::vector<QueryVector> read_expanded_queries(std::istream& in) {
  std::vector<QueryVector> out;
  std::set<int> seen;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind(".I", 0) == 0) {
      long long id = 0;
      if (!parse_i64(trim(t.substr(2)), &id) || id <= 0) {
        throw ParseError("bad query id line \"" + t + "\"", line_no);
      }
      if (!seen.insert(static_cast<int>(id)).second) {
        throw ParseError("duplicate query id " + std::to_string(id), line_no);
      }
      out.emplace_back();
      out.back().query_id = static_cast<int>(id);
      continue;
    }
    if (out.empty()) {
      throw ParseError("term line before first \".I\" record", line_no);
    }
    std::vector<std::string> cols = split_char(line, '\t');
    double w = 0.0;
    if (cols.size() != 3 || cols[0].empty() || !parse_f64(cols[1], &w)) {
      throw ParseError("bad term line \"" + line + "\"", line_no);
    }
    bool added;
    if (cols[2] == "original") {
      added = false;
    } else if (cols[2] == "added") {
      added = true;
    } else {
      throw ParseError("bad provenance flag \"" + cols[2] + "\"", line_no);
    }
    out.back().terms.push_back(QueryTerm{cols[0], w, added});
  }
  return out;
}

void write_expanded_queries_file(const std::vector<QueryVector>& qs,
                                 const std::string& path,
                                 const std::vector<std::string>& comments) {
  std::ostringstream out;
  write_expanded_queries(qs, out, comments);
  write_text_file(path, out.str());
}

std::vector<QueryVector> read_expanded_queries_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open expanded-query file: " + path);
  try {
    return read_expanded_queries(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace pqe
