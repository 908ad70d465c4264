#pragma once

namespace pqe {

inline constexpr const char* kToolVersion = "pqe 1.0.0";

}  // namespace pqe
