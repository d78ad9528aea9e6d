#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <vector>

namespace germdet {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxExponent = 255;

// Exponent vector in at most kMaxVars variables. Ordered graded-lex: total
// degree first, then exponents compared from the first variable, so for two
// variables y < x < y^2 < x*y < x^2.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(int nvars);
  Monomial(int nvars, const std::vector<int>& exps);
  static Monomial variable(int nvars, int i, int power = 1);

  int nvars() const noexcept { return nvars_; }
  int degree() const noexcept { return degree_; }
  int operator[](int i) const noexcept { return e_[i]; }
  void set(int i, int value);

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  // Requires divides(o).
  Monomial quotient_of(const Monomial& o) const;

  std::uint64_t key() const noexcept {
    std::uint64_t k;
    std::memcpy(&k, e_.data(), sizeof(k));
    return k;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.nvars_ == b.nvars_ && a.e_ == b.e_;
  }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    return a.e_ <=> b.e_;
  }

 private:
  std::array<std::uint8_t, kMaxVars> e_{};
  std::uint8_t nvars_ = 0;
  std::uint16_t degree_ = 0;
};

// All monomials in nvars variables with total degree <= cap, ascending.
std::vector<Monomial> monomials_up_to(int nvars, int cap);
// Monomials of exactly the given degree, ascending.
std::vector<Monomial> monomials_of_degree(int nvars, int degree);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    return std::hash<std::uint64_t>{}(m.key());
  }
};

}  // namespace germdet
