#include "pqe/stoplist.hpp"

#include <fstream>

#include "pqe/error.hpp"
#include "pqe/util.hpp"

namespace pqe {

namespace {

const char* const kStopwords[] = {
    "a",          "about",   "above",    "after",   "again",    "against",
    "all",        "also",    "am",       "an",      "and",      "another",
    "any",        "are",     "as",       "at",      "back",     "be",
    "because",    "been",    "before",   "being",   "below",    "between",
    "both",       "but",     "by",       "came",    "can",      "cannot",
    "come",       "could",   "did",      "do",      "does",     "doing",
    "down",       "during",  "each",     "even",    "few",      "for",
    "from",       "further", "get",      "go",      "had",      "has",
    "have",       "having",  "he",       "her",     "here",     "hers",
    "herself",    "him",     "himself",  "his",     "how",      "however",
    "i",          "if",      "in",       "into",    "is",       "it",
    "its",        "itself",  "just",     "like",    "made",     "make",
    "many",       "may",     "me",       "might",   "more",     "most",
    "much",       "must",    "my",       "myself",  "never",    "no",
    "nor",        "not",     "now",      "of",      "off",      "on",
    "once",       "only",    "or",       "other",   "our",      "ours",
    "ourselves",  "out",     "over",     "own",     "said",     "same",
    "shall",      "she",     "should",   "since",   "so",       "some",
    "still",      "such",    "than",     "that",    "the",      "their",
    "theirs",     "them",    "themselves", "then",  "there",    "these",
    "they",       "this",    "those",    "through", "thus",     "to",
    "too",        "under",   "until",    "up",      "upon",     "us",
    "used",       "very",    "was",      "we",      "well",     "were",
    "what",       "when",    "where",    "whether", "which",    "while",
    "who",        "whom",    "why",      "will",    "with",     "within",
    "without",    "would",   "you",      "your",    "yours",    "yourself",
    "yourselves",
};

}  // namespace

const std::set<std::string>& builtin_stoplist() {
  static const std::set<std::string> words(std::begin(kStopwords),
                                           std::end(kStopwords));
  return words;
}

std::set<std::string> load_stoplist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open stoplist file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string w = trim(line);
    if (w.empty() || w[0] == '#') continue;
    words.insert(to_lower_ascii(w));
  }
  return words;
}

}  // namespace pqe
