#include <doctest.h>

#include "pqe/stem.hpp"

using pqe::porter_stem;

TEST_SUITE_BEGIN("stem");

TEST_CASE("classic vocabulary pairs") {
  // Expected outputs of the standard suffix-stripping algorithm.
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"},   {"ponies", "poni"},
      {"ties", "ti"},           {"caress", "caress"},
      {"cats", "cat"},          {"feed", "feed"},
      {"agreed", "agre"},       {"plastered", "plaster"},
      {"bled", "bled"},         {"motoring", "motor"},
      {"sing", "sing"},         {"conflated", "conflat"},
      {"troubled", "troubl"},   {"sized", "size"},
      {"hopping", "hop"},       {"tanned", "tan"},
      {"falling", "fall"},      {"hissing", "hiss"},
      {"fizzed", "fizz"},       {"failing", "fail"},
      {"filing", "file"},       {"happy", "happi"},
      {"sky", "sky"},           {"relational", "relat"},
      {"conditional", "condit"},{"rational", "ration"},
      {"valenci", "valenc"},    {"digitizer", "digit"},
      {"operator", "oper"},     {"feudalism", "feudal"},
      {"decisiveness", "decis"},{"hopefulness", "hope"},
      {"formative", "form"},    {"formalize", "formal"},
      {"electriciti", "electr"},{"electrical", "electr"},
      {"hopeful", "hope"},      {"goodness", "good"},
      {"revival", "reviv"},     {"allowance", "allow"},
      {"inference", "infer"},   {"airliner", "airlin"},
      {"adjustable", "adjust"}, {"irritant", "irrit"},
      {"replacement", "replac"},{"adjustment", "adjust"},
      {"dependent", "depend"},  {"adoption", "adopt"},
      {"communism", "commun"},  {"activate", "activ"},
      {"effective", "effect"},  {"probate", "probat"},
      {"rate", "rate"},         {"cease", "ceas"},
      {"controll", "control"},  {"roll", "roll"},
      {"indexing", "index"},    {"indexed", "index"},
      {"indexes", "index"},     {"retrieval", "retriev"},
  };
  for (const auto& [word, stem] : cases) {
    CAPTURE(word);
    CHECK(porter_stem(word) == stem);
  }
}

TEST_CASE("short words unchanged") {
  CHECK(porter_stem("a") == "a");
  CHECK(porter_stem("as") == "as");
  CHECK(porter_stem("is") == "is");
}

TEST_CASE("idempotent on its own output") {
  const char* words[] = {"indexing", "relational", "hopefulness",
                         "troubled",  "ponies",     "electriciti"};
  for (const char* w : words) {
    std::string once = porter_stem(w);
    CHECK(porter_stem(once) == once);
  }
}

TEST_SUITE_END();
