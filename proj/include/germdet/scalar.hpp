#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace germdet {

// Coefficient field: the rationals or a prime field F_p.
class Field {
 public:
  static Field rationals() { return Field(0); }
  // Throws InvalidArgument unless p is a prime below 2^31.
  static Field prime(std::uint64_t p);

  bool is_rational() const noexcept { return p_ == 0; }
  std::uint64_t characteristic() const noexcept { return p_; }
  std::string name() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  friend class Scalar;
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

// Exact field element. Rationals are kept in lowest terms by GMP; residues
// live in [0, p). Mixing elements of different fields throws
// MismatchedContext.
class Scalar {
 public:
  Scalar(const Field& field, long value);
  Scalar(const Field& field, const mpq_class& value);
  static Scalar zero(const Field& field) { return Scalar(field, 0L); }
  static Scalar one(const Field& field) { return Scalar(field, 1L); }

  Field field() const;
  bool is_zero() const;
  bool is_one() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar inverse() const;

  friend bool operator==(const Scalar& a, const Scalar& b);

  // Rational value (residues are returned as their representative in [0,p)).
  mpq_class to_rational() const;
  // "3", "-1/2", or a residue such as "4".
  std::string to_string() const;
  // Sign for printing: residues are never negative.
  bool is_negative() const;

 private:
  struct Residue {
    std::uint64_t value;
    std::uint64_t p;
    bool operator==(const Residue&) const = default;
  };
  explicit Scalar(std::variant<mpq_class, Residue> v) : v_(std::move(v)) {}
  void require_same(const Scalar& o) const;

  std::variant<mpq_class, Residue> v_;
};

// n! as a field element; throws CharacteristicObstruction when p <= n.
Scalar factorial(const Field& field, int n);

}  // namespace germdet
