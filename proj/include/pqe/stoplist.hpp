#pragma once

#include <set>
#include <string>

namespace pqe {

// Bundled standard English stoplist. The same list ships as data/stopwords.txt
// so it can be inspected or replaced via configuration.
const std::set<std::string>& builtin_stoplist();

// One word per line; '#' comments and blank lines are ignored.
std::set<std::string> load_stoplist(const std::string& path);

}  // namespace pqe
