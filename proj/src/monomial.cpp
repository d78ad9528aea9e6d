#include "germdet/monomial.hpp"

#include <algorithm>
#include <string>

#include "germdet/errors.hpp"

namespace germdet {

Monomial::Monomial(int nvars) {
  if (nvars < 0 || nvars > kMaxVars)
    throw Error(ErrorCode::InvalidArgument,
                "at most " + std::to_string(kMaxVars) + " variables are supported");
  nvars_ = static_cast<std::uint8_t>(nvars);
}

Monomial::Monomial(int nvars, const std::vector<int>& exps) : Monomial(nvars) {
  if (static_cast<int>(exps.size()) != nvars)
    throw Error(ErrorCode::MismatchedContext, "exponent vector length differs from nvars");
  for (int i = 0; i < nvars; ++i) set(i, exps[i]);
}

Monomial Monomial::variable(int nvars, int i, int power) {
  Monomial m(nvars);
  if (i < 0 || i >= nvars) throw Error(ErrorCode::IndexOutOfRange, "variable index out of range");
  m.set(i, power);
  return m;
}

void Monomial::set(int i, int value) {
  if (i < 0 || i >= nvars_) throw Error(ErrorCode::IndexOutOfRange, "variable index out of range");
  if (value < 0 || value > kMaxExponent)
    throw Error(ErrorCode::InvalidArgument, "exponent out of supported range");
  degree_ = static_cast<std::uint16_t>(degree_ - e_[i] + value);
  e_[i] = static_cast<std::uint8_t>(value);
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (nvars_ != o.nvars_) throw Error(ErrorCode::MismatchedContext, "monomials differ in nvars");
  Monomial r = *this;
  for (int i = 0; i < nvars_; ++i) {
    int v = e_[i] + o.e_[i];
    if (v > kMaxExponent) throw Error(ErrorCode::InvalidArgument, "exponent overflow");
    r.e_[i] = static_cast<std::uint8_t>(v);
  }
  r.degree_ = static_cast<std::uint16_t>(degree_ + o.degree_);
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (int i = 0; i < nvars_; ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r = o;
  for (int i = 0; i < nvars_; ++i) r.e_[i] = static_cast<std::uint8_t>(o.e_[i] - e_[i]);
  r.degree_ = static_cast<std::uint16_t>(o.degree_ - degree_);
  return r;
}

namespace {

void fill_degree(int nvars, int var, int remaining, Monomial& cur, std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur.set(var, remaining);
    out.push_back(cur);
    cur.set(var, 0);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur.set(var, e);
    fill_degree(nvars, var + 1, remaining - e, cur, out);
  }
  cur.set(var, 0);
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial cur(nvars);
  if (nvars == 0) {
    if (degree == 0) out.push_back(cur);
    return out;
  }
  fill_degree(nvars, 0, degree, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> monomials_up_to(int nvars, int cap) {
  std::vector<Monomial> out;
  for (int d = 0; d <= cap; ++d) {
    auto piece = monomials_of_degree(nvars, d);
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

}  // namespace germdet
