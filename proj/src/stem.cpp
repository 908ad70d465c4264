#include "pqe/stem.hpp"

#include <cstring>

namespace pqe {
namespace {

// w[i] is a consonant; 'y' counts as a vowel when preceded by a consonant.
bool cons(const std::string& w, int i) {
  switch (w[static_cast<std::size_t>(i)]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !cons(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in w[0, end).
int measure(const std::string& w, int end) {
  int m = 0, i = 0;
  while (i < end && cons(w, i)) ++i;
  while (i < end) {
    while (i < end && !cons(w, i)) ++i;
    if (i >= end) break;
    ++m;
    while (i < end && cons(w, i)) ++i;
  }
  return m;
}

bool has_vowel(const std::string& w, int end) {
  for (int i = 0; i < end; ++i) {
    if (!cons(w, i)) return true;
  }
  return false;
}

bool double_cons(const std::string& w, int end) {
  if (end < 2) return false;
  if (w[static_cast<std::size_t>(end - 1)] !=
      w[static_cast<std::size_t>(end - 2)])
    return false;
  return cons(w, end - 1);
}

// *o condition: stem ends consonant-vowel-consonant, final not w, x or y.
bool ends_cvc(const std::string& w, int end) {
  if (end < 3) return false;
  if (!cons(w, end - 1) || cons(w, end - 2) || !cons(w, end - 3)) return false;
  char c = w[static_cast<std::size_t>(end - 1)];
  return c != 'w' && c != 'x' && c != 'y';
}

struct Stemmer {
  std::string w;
  int len;   // current word length
  int stem;  // length of the stem for a matched suffix

  bool ends(const char* s) {
    int sl = static_cast<int>(std::strlen(s));
    if (sl > len) return false;
    if (w.compare(static_cast<std::size_t>(len - sl),
                  static_cast<std::size_t>(sl), s) != 0)
      return false;
    stem = len - sl;
    return true;
  }

  void set_to(const char* s) {
    w.resize(static_cast<std::size_t>(stem));
    w += s;
    len = static_cast<int>(w.size());
  }

  int m() const { return measure(w, stem); }

  void step1a() {
    if (ends("sses")) {
      set_to("ss");
    } else if (ends("ies")) {
      set_to("i");
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      set_to("");
    }
  }

  void step1b() {
    if (ends("eed")) {
      if (m() > 0) set_to("ee");
      return;
    }
    bool stripped = false;
    if (ends("ed") && has_vowel(w, stem)) {
      set_to("");
      stripped = true;
    } else if (ends("ing") && has_vowel(w, stem)) {
      set_to("");
      stripped = true;
    }
    if (!stripped) return;

    if (ends("at")) {
      set_to("ate");
    } else if (ends("bl")) {
      set_to("ble");
    } else if (ends("iz")) {
      set_to("ize");
    } else if (double_cons(w, len)) {
      char c = w[static_cast<std::size_t>(len - 1)];
      if (c != 'l' && c != 's' && c != 'z') {
        w.resize(static_cast<std::size_t>(--len));
      }
    } else if (measure(w, len) == 1 && ends_cvc(w, len)) {
      stem = len;
      set_to("e");
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(w, stem)) set_to("i");
  }

  void map_suffix(const char* from, const char* to) {
    if (ends(from) && m() > 0) set_to(to);
  }

  void step2() {
    static const char* const pairs[][2] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    };
    for (const auto& p : pairs) {
      if (ends(p[0])) {
        if (m() > 0) set_to(p[1]);
        return;
      }
    }
  }

  void step3() {
    static const char* const pairs[][2] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& p : pairs) {
      if (ends(p[0])) {
        if (m() > 0) set_to(p[1]);
        return;
      }
    }
  }

  void step4() {
    static const char* const suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
        "ment", "ent", "ion",  "ou",  "ism", "ate",  "iti",  "ous", "ive",
        "ize",
    };
    for (const char* s : suffixes) {
      if (ends(s)) {
        if (m() > 1) {
          if (std::strcmp(s, "ion") == 0) {
            char c = stem > 0 ? w[static_cast<std::size_t>(stem - 1)] : '\0';
            if (c != 's' && c != 't') return;
          }
          set_to("");
        }
        return;
      }
    }
  }

  void step5a() {
    if (ends("e")) {
      int mm = m();
      if (mm > 1 || (mm == 1 && !ends_cvc(w, stem))) set_to("");
    }
  }

  void step5b() {
    if (w[static_cast<std::size_t>(len - 1)] == 'l' && double_cons(w, len) &&
        measure(w, len) > 1) {
      w.resize(static_cast<std::size_t>(--len));
    }
  }
};

}  // namespace

std::string porter_stem(std::string word) {
  if (word.size() <= 2) return word;
  Stemmer s{std::move(word), 0, 0};
  s.len = static_cast<int>(s.w.size());
  s.step1a();
  s.step1b();
  s.step1c();
  s.step2();
  s.step3();
  s.step4();
  s.step5a();
  s.step5b();
  return s.w;
}

}  // namespace pqe
