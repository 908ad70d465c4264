// Generates the synthetic SMART-format test collection checked in under
// tests/fixtures/ (82 documents, 35 queries, relevance judgments). Documents
// draw most of their words from one or two topic vocabularies and the rest
// from a shared background vocabulary; each query asks about one topic and
// its relevant documents are the ones carrying that topic. Deterministic:
// same seed, same bytes on any platform.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace {

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next() % n);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

constexpr int kTopics = 10;
constexpr int kTermsPerTopic = 26;
constexpr int kBackground = 80;
constexpr int kDocs = 82;
constexpr int kQueries = 35;

std::string make_word(Rng& rng) {
  static const char* consonants = "bcdfghjklmnprstvz";
  static const char* vowels = "aeiou";
  int syllables = 2 + static_cast<int>(rng.below(2));
  std::string w;
  for (int i = 0; i < syllables; ++i) {
    w += consonants[rng.below(17)];
    w += vowels[rng.below(5)];
  }
  if (rng.unit() < 0.5) w += consonants[rng.below(17)];
  return w;
}

// Head-biased pick: low indices far more likely.
int zipfish(Rng& rng, int n) {
  double u = rng.unit();
  return static_cast<int>(u * u * n);
}

std::string wrap(const std::vector<std::string>& words) {
  std::string out;
  std::size_t col = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (col > 0 && col + words[i].size() + 1 > 70) {
      out += '\n';
      col = 0;
    } else if (col > 0) {
      out += ' ';
      ++col;
    }
    out += words[i];
    col += words[i].size();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_collection <output-dir>\n";
    return 1;
  }
  std::string dir = argv[1];
  Rng rng(20260810);

  // Distinct vocabulary: per-topic words plus shared background words.
  std::set<std::string> used;
  auto fresh_word = [&] {
    while (true) {
      std::string w = make_word(rng);
      if (w.size() >= 4 && used.insert(w).second) return w;
    }
  };
  std::vector<std::vector<std::string>> topic(kTopics);
  for (auto& t : topic) {
    for (int i = 0; i < kTermsPerTopic; ++i) t.push_back(fresh_word());
  }
  std::vector<std::string> background;
  for (int i = 0; i < kBackground; ++i) background.push_back(fresh_word());

  struct Doc {
    int primary;
    int secondary;  // -1 = none
    std::vector<std::string> words;
  };
  std::vector<Doc> docs(kDocs);
  for (int d = 0; d < kDocs; ++d) {
    Doc& doc = docs[d];
    doc.primary = d % kTopics;
    doc.secondary = -1;
    if (rng.unit() < 0.45) {
      doc.secondary = static_cast<int>(rng.below(kTopics));
      if (doc.secondary == doc.primary) doc.secondary = -1;
    }
    int len = 30 + static_cast<int>(rng.below(40));
    for (int i = 0; i < len; ++i) {
      double u = rng.unit();
      if (u < 0.33) {
        doc.words.push_back(topic[doc.primary][zipfish(rng, kTermsPerTopic)]);
      } else if (u < 0.50 && doc.secondary >= 0) {
        doc.words.push_back(topic[doc.secondary][zipfish(rng, kTermsPerTopic)]);
      } else if (u < 0.58) {
        // Off-topic noise from a random other topic.
        doc.words.push_back(
            topic[rng.below(kTopics)][zipfish(rng, kTermsPerTopic)]);
      } else {
        doc.words.push_back(background[zipfish(rng, kBackground)]);
      }
    }
  }

  struct Query {
    int topic;
    std::vector<std::string> words;
  };
  std::vector<Query> queries(kQueries);
  for (int q = 0; q < kQueries; ++q) {
    Query& query = queries[q];
    query.topic = q % kTopics;
    // Uniform picks reach the topic's tail terms, so query terms only
    // partially cover the topic's documents.
    int n_terms = 2 + static_cast<int>(rng.below(3));
    std::set<int> picked;
    while (static_cast<int>(picked.size()) < n_terms) {
      picked.insert(static_cast<int>(rng.below(kTermsPerTopic)));
    }
    for (int idx : picked) query.words.push_back(topic[query.topic][idx]);
    if (rng.unit() < 0.25) {
      query.words.push_back(background[zipfish(rng, kBackground)]);
    }
    if (rng.unit() < 0.4) {
      // Repeat one term so some queries carry tf 2.
      query.words.push_back(query.words[rng.below(
          static_cast<std::uint32_t>(query.words.size()))]);
    }
  }

  {
    std::ofstream out(dir + "/corpus82.docs", std::ios::binary);
    for (int d = 0; d < kDocs; ++d) {
      out << ".I " << (d + 1) << "\n.T\n";
      std::vector<std::string> title;
      for (int i = 0; i < 4; ++i) {
        title.push_back(topic[docs[d].primary][zipfish(rng, kTermsPerTopic)]);
      }
      out << wrap(title) << "\n.W\n" << wrap(docs[d].words) << "\n";
    }
  }
  {
    std::ofstream out(dir + "/corpus82.qry", std::ios::binary);
    for (int q = 0; q < kQueries; ++q) {
      out << ".I " << (q + 1) << "\n.W\n" << wrap(queries[q].words) << "\n";
    }
  }
  {
    std::ofstream out(dir + "/corpus82.rel", std::ios::binary);
    for (int q = 0; q < kQueries; ++q) {
      for (int d = 0; d < kDocs; ++d) {
        bool rel = docs[d].primary == queries[q].topic ||
                   (docs[d].secondary == queries[q].topic && rng.unit() < 0.6);
        if (rel) out << (q + 1) << " " << (d + 1) << "\n";
      }
    }
  }
  std::cout << "wrote corpus82.{docs,qry,rel} to " << dir << "\n";
  return 0;
}
