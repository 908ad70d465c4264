#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pqe {

// One record of a SMART-format collection file (".I <id>" followed by
// ".T/.A/.W/.B/.X" sections).
struct Document {
  int doc_id = 0;
  std::map<char, std::string> fields;  // section marker -> raw text
  std::vector<std::string> tokens;     // filled by tokenize_documents
};

struct TokenizerConfig {
  std::set<std::string> stoplist;  // empty = keep everything
  bool stem = true;
  int min_len = 2;
};

// Bundled stoplist, stemming on, minimum token length 2.
TokenizerConfig default_tokenizer_config();

std::vector<Document> parse_smart_collection(std::istream& in);
std::vector<Document> parse_smart_file(const std::string& path);

// Lowercase, split on non-alphanumeric runs, drop pure-digit tokens and
// tokens shorter than min_len, drop stoplist members, then stem.
std::vector<std::string> tokenize(const std::string& raw,
                                  const TokenizerConfig& cfg);

// Indexable content is the ".W" section plus ".T" when present.
void tokenize_documents(std::vector<Document>& docs,
                        const TokenizerConfig& cfg);

// Dense term ids in lexicographic term order, so re-indexing the same
// collection is reproducible.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> sorted_terms);

  int term_id(const std::string& term) const;  // -1 when absent
  const std::string& term(int id) const;
  int size() const { return static_cast<int>(terms_.size()); }

 private:
  std::vector<std::string> terms_;
  std::map<std::string, int> ids_;
};

struct Posting {
  int doc_id = 0;
  int tf = 0;
};

struct InvertedFile {
  std::int64_t num_docs = 0;                  // N
  std::vector<std::vector<Posting>> postings;  // per term, ascending doc_id
  std::vector<std::int64_t> df;                // df[t] == postings[t].size()

  int num_terms() const { return static_cast<int>(postings.size()); }
};

std::pair<Vocabulary, InvertedFile> build_inverted_file(
    const std::vector<Document>& docs);

// 2x2 presence table for a term pair.
struct Contingency2 {
  std::int64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  std::int64_t n = 0;  // N, total documents
};

// 2x2x2 presence table for a term triple; cell index bit2=a, bit1=b, bit0=c.
struct Contingency3 {
  std::array<std::int64_t, 8> cells{};
  std::int64_t n = 0;

  std::int64_t& at(int a, int b, int c) { return cells[(a << 2) | (b << 1) | c]; }
  std::int64_t at(int a, int b, int c) const {
    return cells[(a << 2) | (b << 1) | c];
  }
};

Contingency2 pair_counts(const InvertedFile& inv, int a, int b);
Contingency3 triple_counts(const InvertedFile& inv, int a, int b, int c);

// Marginalizing out the third variable must recover pair_counts(a, b).
Contingency2 marginalize_third(const Contingency3& ct);

// "PQEIDX 1" line-oriented index format.
void save_index(const Vocabulary& vocab, const InvertedFile& inv,
                std::ostream& out,
                const std::vector<std::string>& comments = {});
std::pair<Vocabulary, InvertedFile> load_index(std::istream& in);
void save_index_file(const Vocabulary& vocab, const InvertedFile& inv,
                     const std::string& path,
                     const std::vector<std::string>& comments = {});
std::pair<Vocabulary, InvertedFile> load_index_file(const std::string& path);

}  // namespace pqe
