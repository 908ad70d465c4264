#include "pqe/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "pqe/error.hpp"
#include "pqe/stem.hpp"
#include "pqe/stoplist.hpp"
#include "pqe/util.hpp"

namespace pqe {

TokenizerConfig default_tokenizer_config() {
  TokenizerConfig cfg;
  cfg.stoplist = builtin_stoplist();
  cfg.stem = true;
  cfg.min_len = 2;
  return cfg;
}

namespace {

bool is_section_marker(const std::string& line, char* marker) {
  if (line.size() < 2 || line[0] != '.') return false;
  char m = line[1];
  if (m < 'A' || m > 'Z') return false;
  if (m == 'I') return false;  // record start, handled separately
  // Marker lines are exactly ".X" (possibly with trailing whitespace).
  for (std::size_t i = 2; i < line.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(line[i]))) return false;
  }
  *marker = m;
  return true;
}

bool is_record_start(const std::string& line) {
  return line.size() >= 2 && line[0] == '.' && line[1] == 'I' &&
         (line.size() == 2 || std::isspace(static_cast<unsigned char>(line[2])));
}

}  // namespace

std::vector<Document> parse_smart_collection(std::istream& in) {
  std::vector<Document> docs;
  std::set<int> seen_ids;
  std::string line;
  long line_no = 0;
  bool in_record = false;
  char section = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (is_record_start(line)) {
      std::string rest = trim(line.substr(2));
      long long id = 0;
      if (!parse_i64(rest, &id) || id <= 0) {
        throw ParseError("malformed record id: \"" + line + "\"", line_no);
      }
      if (!seen_ids.insert(static_cast<int>(id)).second) {
        throw ParseError("duplicate document id " + std::to_string(id),
                         line_no);
      }
      docs.emplace_back();
      docs.back().doc_id = static_cast<int>(id);
      in_record = true;
      section = 0;
      continue;
    }

    char marker = 0;
    if (in_record && is_section_marker(line, &marker)) {
      section = marker;
      docs.back().fields[section];  // section may stay empty
      continue;
    }

    if (trim(line).empty() && !in_record) continue;
    if (!in_record) {
      throw ParseError("content before first \".I\" record", line_no);
    }
    if (section == 0) {
      // Text between ".I" and the first marker; SMART files do not produce
      // this, treat it as ".W" content for leniency.
      section = 'W';
    }
    std::string& text = docs.back().fields[section];
    if (!text.empty()) text += '\n';
    text += line;
  }
  return docs;
}

std::vector<Document> parse_smart_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open collection file: " + path);
  try {
    return parse_smart_collection(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<std::string> tokenize(const std::string& raw,
                                  const TokenizerConfig& cfg) {
  std::vector<std::string> out;
  std::string cur;
  bool has_alpha = false;
  auto flush = [&] {
    if (!cur.empty()) {
      if (has_alpha && static_cast<int>(cur.size()) >= cfg.min_len &&
          cfg.stoplist.find(cur) == cfg.stoplist.end()) {
        out.push_back(cfg.stem ? porter_stem(cur) : cur);
      }
      cur.clear();
    }
    has_alpha = false;
  };
  for (char ch : raw) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (std::isalpha(c)) has_alpha = true;
      cur += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

void tokenize_documents(std::vector<Document>& docs,
                        const TokenizerConfig& cfg) {
  for (Document& d : docs) {
    std::string text;
    if (auto it = d.fields.find('T'); it != d.fields.end()) text += it->second;
    if (auto it = d.fields.find('W'); it != d.fields.end()) {
      if (!text.empty()) text += '\n';
      text += it->second;
    }
    d.tokens = tokenize(text, cfg);
  }
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_terms)
    : terms_(std::move(sorted_terms)) {
  for (int i = 0; i < static_cast<int>(terms_.size()); ++i) {
    ids_.emplace(terms_[i], i);
  }
  if (ids_.size() != terms_.size()) {
    throw Error("vocabulary contains duplicate terms");
  }
}

int Vocabulary::term_id(const std::string& term) const {
  auto it = ids_.find(term);
  return it == ids_.end() ? -1 : it->second;
}

const std::string& Vocabulary::term(int id) const {
  if (id < 0 || id >= size()) throw Error("term id out of range");
  return terms_[id];
}

std::pair<Vocabulary, InvertedFile> build_inverted_file(
    const std::vector<Document>& docs) {
  if (docs.empty()) throw Error("cannot index an empty corpus");

  std::set<std::string> term_set;
  for (const Document& d : docs) {
    term_set.insert(d.tokens.begin(), d.tokens.end());
  }
  Vocabulary vocab(std::vector<std::string>(term_set.begin(), term_set.end()));

  InvertedFile inv;
  inv.num_docs = static_cast<std::int64_t>(docs.size());
  inv.postings.resize(vocab.size());
  inv.df.assign(vocab.size(), 0);

  // Per document: count occurrences, then append one posting per term.
  for (const Document& d : docs) {
    std::map<int, int> tf;
    for (const std::string& tok : d.tokens) ++tf[vocab.term_id(tok)];
    for (const auto& [tid, count] : tf) {
      inv.postings[tid].push_back(Posting{d.doc_id, count});
    }
  }
  for (int t = 0; t < vocab.size(); ++t) {
    auto& plist = inv.postings[t];
    std::sort(plist.begin(), plist.end(),
              [](const Posting& a, const Posting& b) {
                return a.doc_id < b.doc_id;
              });
    inv.df[t] = static_cast<std::int64_t>(plist.size());
  }
  return {std::move(vocab), std::move(inv)};
}

namespace {

std::int64_t intersection_size(const std::vector<Posting>& a,
                               const std::vector<Posting>& b) {
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].doc_id < b[j].doc_id) {
      ++i;
    } else if (a[i].doc_id > b[j].doc_id) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::int64_t intersection3_size(const std::vector<Posting>& a,
                                const std::vector<Posting>& b,
                                const std::vector<Posting>& c) {
  std::int64_t count = 0;
  std::size_t i = 0, j = 0, k = 0;
  while (i < a.size() && j < b.size() && k < c.size()) {
    int da = a[i].doc_id, db = b[j].doc_id, dc = c[k].doc_id;
    int m = std::min(da, std::min(db, dc));
    if (da == m && db == m && dc == m) {
      ++count;
      ++i;
      ++j;
      ++k;
    } else {
      if (da == m) ++i;
      if (db == m) ++j;
      if (dc == m) ++k;
    }
  }
  return count;
}

void check_term_id(const InvertedFile& inv, int t) {
  if (t < 0 || t >= inv.num_terms()) {
    throw Error("term id out of range: " + std::to_string(t));
  }
}

}  // namespace

Contingency2 pair_counts(const InvertedFile& inv, int a, int b) {
  check_term_id(inv, a);
  check_term_id(inv, b);
  if (a == b) throw Error("pair_counts: identical terms");

  Contingency2 ct;
  ct.n = inv.num_docs;
  ct.n11 = intersection_size(inv.postings[a], inv.postings[b]);
  ct.n10 = inv.df[a] - ct.n11;
  ct.n01 = inv.df[b] - ct.n11;
  ct.n00 = ct.n - ct.n11 - ct.n10 - ct.n01;
  return ct;
}

Contingency3 triple_counts(const InvertedFile& inv, int a, int b, int c) {
  check_term_id(inv, a);
  check_term_id(inv, b);
  check_term_id(inv, c);
  if (a == b || a == c || b == c) {
    throw Error("triple_counts: terms must be pairwise distinct");
  }

  const auto& pa = inv.postings[a];
  const auto& pb = inv.postings[b];
  const auto& pc = inv.postings[c];
  std::int64_t nab = intersection_size(pa, pb);
  std::int64_t nac = intersection_size(pa, pc);
  std::int64_t nbc = intersection_size(pb, pc);
  std::int64_t nabc = intersection3_size(pa, pb, pc);

  Contingency3 ct;
  ct.n = inv.num_docs;
  ct.at(1, 1, 1) = nabc;
  ct.at(1, 1, 0) = nab - nabc;
  ct.at(1, 0, 1) = nac - nabc;
  ct.at(0, 1, 1) = nbc - nabc;
  ct.at(1, 0, 0) = inv.df[a] - nab - nac + nabc;
  ct.at(0, 1, 0) = inv.df[b] - nab - nbc + nabc;
  ct.at(0, 0, 1) = inv.df[c] - nac - nbc + nabc;
  std::int64_t partial = 0;
  for (int i = 1; i < 8; ++i) partial += ct.cells[i];
  ct.at(0, 0, 0) = ct.n - partial;
  return ct;
}

Contingency2 marginalize_third(const Contingency3& ct) {
  Contingency2 out;
  out.n = ct.n;
  out.n11 = ct.at(1, 1, 0) + ct.at(1, 1, 1);
  out.n10 = ct.at(1, 0, 0) + ct.at(1, 0, 1);
  out.n01 = ct.at(0, 1, 0) + ct.at(0, 1, 1);
  out.n00 = ct.at(0, 0, 0) + ct.at(0, 0, 1);
  return out;
}

void save_index(const Vocabulary& vocab, const InvertedFile& inv,
                std::ostream& out, const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  out << "PQEIDX 1\n";
  out << inv.num_docs << '\n';
  out << vocab.size() << '\n';
  for (int t = 0; t < vocab.size(); ++t) {
    out << t << '\t' << vocab.term(t) << '\n';
  }
  for (int t = 0; t < vocab.size(); ++t) {
    out << t << '\t';
    const auto& plist = inv.postings[t];
    for (std::size_t i = 0; i < plist.size(); ++i) {
      if (i) out << ',';
      out << plist[i].doc_id << ':' << plist[i].tf;
    }
    out << '\n';
  }
}

namespace {

// Skips '#' comment lines and blank lines; false at end of stream.
bool next_data_line(std::istream& in, std::string* line, long* line_no) {
  while (std::getline(in, *line)) {
    ++*line_no;
    if (!line->empty() && line->back() == '\r') line->pop_back();
    std::string t = trim(*line);
    if (t.empty() || t[0] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

std::pair<Vocabulary, InvertedFile> load_index(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!next_data_line(in, &line, &line_no) || trim(line) != "PQEIDX 1") {
    throw ParseError("not a PQEIDX version 1 file", line_no);
  }
  long long n_docs = 0, n_terms = 0;
  if (!next_data_line(in, &line, &line_no) || !parse_i64(trim(line), &n_docs) ||
      n_docs <= 0) {
    throw ParseError("bad document count", line_no);
  }
  if (!next_data_line(in, &line, &line_no) ||
      !parse_i64(trim(line), &n_terms) || n_terms < 0) {
    throw ParseError("bad term count", line_no);
  }

  std::vector<std::string> terms(static_cast<std::size_t>(n_terms));
  for (long long t = 0; t < n_terms; ++t) {
    if (!next_data_line(in, &line, &line_no)) {
      throw ParseError("truncated vocabulary block", line_no);
    }
    std::size_t tab = line.find('\t');
    long long id = 0;
    if (tab == std::string::npos || !parse_i64(line.substr(0, tab), &id) ||
        id != t) {
      throw ParseError("bad vocabulary line", line_no);
    }
    terms[static_cast<std::size_t>(t)] = line.substr(tab + 1);
  }

  InvertedFile inv;
  inv.num_docs = n_docs;
  inv.postings.resize(static_cast<std::size_t>(n_terms));
  inv.df.assign(static_cast<std::size_t>(n_terms), 0);
  for (long long t = 0; t < n_terms; ++t) {
    if (!next_data_line(in, &line, &line_no)) {
      throw ParseError("truncated postings block", line_no);
    }
    std::size_t tab = line.find('\t');
    long long id = 0;
    if (tab == std::string::npos || !parse_i64(line.substr(0, tab), &id) ||
        id != t) {
      throw ParseError("bad postings line", line_no);
    }
    auto& plist = inv.postings[static_cast<std::size_t>(t)];
    for (const std::string& item : split_char(line.substr(tab + 1), ',')) {
      std::size_t colon = item.find(':');
      long long doc = 0, tf = 0;
      if (colon == std::string::npos ||
          !parse_i64(item.substr(0, colon), &doc) ||
          !parse_i64(item.substr(colon + 1), &tf) || doc <= 0 || tf <= 0) {
        throw ParseError("bad posting \"" + item + "\"", line_no);
      }
      if (!plist.empty() && plist.back().doc_id >= doc) {
        throw ParseError("postings not strictly ascending", line_no);
      }
      plist.push_back(Posting{static_cast<int>(doc), static_cast<int>(tf)});
    }
    if (plist.empty()) {
      throw ParseError("term with empty postings list", line_no);
    }
    if (static_cast<std::int64_t>(plist.size()) > n_docs) {
      throw ParseError("df exceeds document count", line_no);
    }
    inv.df[static_cast<std::size_t>(t)] =
        static_cast<std::int64_t>(plist.size());
  }
  return {Vocabulary(std::move(terms)), std::move(inv)};
}

void save_index_file(const Vocabulary& vocab, const InvertedFile& inv,
                     const std::string& path,
                     const std::vector<std::string>& comments) {
  std::ostringstream out;
  save_index(vocab, inv, out, comments);
  write_text_file(path, out.str());
}

std::pair<Vocabulary, InvertedFile> load_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index file: " + path);
  try {
    return load_index(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace pqe
