#pragma once

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "germdet/errors.hpp"
#include "germdet/jet.hpp"
#include "germdet/poly_io.hpp"

namespace gt {

using namespace germdet;

inline const std::vector<std::string> kXY{"x", "y"};
inline const std::vector<std::string> kX{"x"};

inline Field QQ() { return Field::rationals(); }
inline Field F(int p) { return Field::prime(static_cast<std::uint64_t>(p)); }

inline JetContext ctx(const Field& f, int nvars, int cap) { return JetContext{f, nvars, cap}; }

inline Jet P(const std::string& text, const JetContext& c) {
  return parse_polynomial(text, c.nvars == 1 ? kX : kXY, c);
}

inline std::string S(const Jet& f) { return format_polynomial(f, f.nvars() == 1 ? kX : kXY); }

inline Jet random_jet(std::mt19937& rng, const JetContext& c, int terms, int min_degree = 0) {
  Jet j(c);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(static_cast<std::size_t>(c.nvars), 0);
    int target = std::uniform_int_distribution<int>(min_degree, c.cap)(rng);
    for (int k = 0; k < target; ++k) ++e[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, c.nvars - 1)(rng))];
    long v = coef(rng);
    if (c.field.is_rational() && t % 3 == 0) {
      j.add_term(Monomial(c.nvars, e), Scalar(c.field, mpq_class(v, 1 + t % 4)));
    } else {
      j.add_term(Monomial(c.nvars, e), Scalar(c.field, v));
    }
  }
  return j;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an engine error");
  return ErrorCode::InvalidArgument;
}

}  // namespace gt
