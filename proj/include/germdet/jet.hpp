#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "germdet/monomial.hpp"
#include "germdet/scalar.hpp"

namespace germdet {

// Filtration orders: nullopt stands for "infinite" (the zero jet).
using Order = std::optional<int>;

struct JetContext {
  Field field = Field::rationals();
  int nvars = 0;
  int cap = 0;
  friend bool operator==(const JetContext&, const JetContext&) = default;
};

// Polynomial truncated at total degree `cap`, with no stored zero
// coefficients. Terms are kept in graded-lex order.
class Jet {
 public:
  using Terms = std::map<Monomial, Scalar>;

  explicit Jet(const JetContext& ctx);
  Jet(const Field& field, int nvars, int cap) : Jet(JetContext{field, nvars, cap}) {}
  static Jet constant(const JetContext& ctx, const Scalar& c);
  static Jet constant(const JetContext& ctx, long c) { return constant(ctx, Scalar(ctx.field, c)); }
  static Jet variable(const JetContext& ctx, int i);
  static Jet monomial(const JetContext& ctx, const Monomial& m, const Scalar& c);
  static Jet monomial(const JetContext& ctx, const Monomial& m) {
    return monomial(ctx, m, Scalar::one(ctx.field));
  }

  const JetContext& context() const noexcept { return ctx_; }
  const Field& field() const noexcept { return ctx_.field; }
  int nvars() const noexcept { return ctx_.nvars; }
  int cap() const noexcept { return ctx_.cap; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Scalar coefficient(const Monomial& m) const;
  Scalar constant_term() const;
  // Accumulates c*m in place; terms above the cap are discarded.
  void add_term(const Monomial& m, const Scalar& c);

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet scaled(const Scalar& c) const;
  Jet times_monomial(const Monomial& m) const;

  // Terms of total degree <= d (cap unchanged).
  Jet truncated(int d) const;
  // Terms of total degree exactly d.
  Jet homogeneous_part(int d) const;
  // Same terms under a different cap (dropping those above it).
  Jet with_cap(int cap) const;

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

 private:
  void require_same(const Jet& o) const;
  JetContext ctx_;
  Terms terms_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
Jet partial_derivative(const Jet& f, int i);
// f(phi_1, ..., phi_n); every phi_i must vanish at the origin.
Jet substitute(const Jet& f, const std::vector<Jet>& phi);
Order total_order(const Jet& f);
Jet power(const Jet& f, int e);

// Vectors of jets: elements of R^s, matrices flattened row-major.
using JetVector = std::vector<Jet>;

Order total_order(const JetVector& v);
JetVector substitute(const JetVector& v, const std::vector<Jet>& phi);
JetVector operator+(const JetVector& a, const JetVector& b);
JetVector operator-(const JetVector& a, const JetVector& b);
bool is_zero(const JetVector& v);

// Square-or-rectangular matrices over jets, row-major.
struct JetMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Jet> entries;

  static JetMatrix identity(const JetContext& ctx, int n);
  static JetMatrix zero(const JetContext& ctx, int rows, int cols);
  Jet& at(int r, int c) { return entries[static_cast<std::size_t>(r * cols + c)]; }
  const Jet& at(int r, int c) const { return entries[static_cast<std::size_t>(r * cols + c)]; }
  friend bool operator==(const JetMatrix&, const JetMatrix&) = default;
};

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator+(const JetMatrix& a, const JetMatrix& b);
JetMatrix substitute(const JetMatrix& a, const std::vector<Jet>& phi);
// a * v for a column vector v of length a.cols.
JetVector apply(const JetMatrix& a, const JetVector& v);

}  // namespace germdet
