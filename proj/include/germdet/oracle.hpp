#pragma once

#include <cstdint>
#include <vector>

#include "germdet/jet.hpp"
#include "germdet/tangent.hpp"

namespace germdet {

struct OracleResult {
  // Smallest N such that every f + w with ord(w) >= N+1 lies in the orbit of
  // f modulo x^(D+1), for the group with coefficients in F_p itself.
  int order = 0;
  int degree = 0;
  // The order is unchanged at caps D-2, D-1 and D.
  bool stable = false;
  // (cap, order at that cap), ascending caps.
  std::vector<std::pair<int, int>> history;
  std::uint64_t group_size = 0;
  std::size_t orbit_size = 0;
};

constexpr std::uint64_t kOracleBudget = std::uint64_t{1} << 22;

// Univariate f over F_2 or F_3, cap at most 13, Right or Contact(1).
OracleResult brute_force_determinacy(const Jet& f, const GroupSpec& group, int degree,
                                     std::uint64_t budget = kOracleBudget);

}  // namespace germdet
