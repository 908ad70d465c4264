#pragma once

#include <string>

namespace pqe {

// Porter suffix-stripping stemmer. Expects a lowercase ASCII word; words of
// length <= 2 are returned unchanged.
std::string porter_stem(std::string word);

}  // namespace pqe
