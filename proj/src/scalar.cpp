#include "germdet/scalar.hpp"

#include "germdet/errors.hpp"

namespace germdet {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MismatchedContext: return "MismatchedContext";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonLocalSubstitution: return "NonLocalSubstitution";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::UnsupportedFiltration: return "UnsupportedFiltration";
    case ErrorCode::CharacteristicObstruction: return "CharacteristicObstruction";
    case ErrorCode::WrongCharacteristic: return "WrongCharacteristic";
    case ErrorCode::NotInTangent: return "NotInTangent";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p >= (1ULL << 31))
    throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is too large a characteristic");
  if (!is_prime(p))
    throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  return Field(p);
}

std::string Field::name() const {
  return is_rational() ? "QQ" : "Fp:" + std::to_string(p_);
}

namespace {

std::uint64_t reduce_mod(const mpz_class& v, std::uint64_t p) {
  mpz_class r = v % static_cast<unsigned long>(p);
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

}  // namespace

Scalar::Scalar(const Field& field, long value) {
  if (field.is_rational()) {
    v_ = mpq_class(value);
  } else {
    v_ = Residue{reduce_mod(mpz_class(value), field.characteristic()), field.characteristic()};
  }
}

Scalar::Scalar(const Field& field, const mpq_class& value) {
  if (field.is_rational()) {
    mpq_class q = value;
    q.canonicalize();
    v_ = q;
    return;
  }
  std::uint64_t p = field.characteristic();
  std::uint64_t den = reduce_mod(value.get_den(), p);
  if (den == 0)
    throw Error(ErrorCode::DivisionByZero,
                "denominator " + value.get_den().get_str() + " vanishes mod " + std::to_string(p));
  std::uint64_t num = reduce_mod(value.get_num(), p);
  v_ = Residue{num * pow_mod(den, p - 2, p) % p, p};
}

Field Scalar::field() const {
  if (const auto* r = std::get_if<Residue>(&v_)) return Field(r->p);
  return Field::rationals();
}

bool Scalar::is_zero() const {
  if (const auto* r = std::get_if<Residue>(&v_)) return r->value == 0;
  return sgn(std::get<mpq_class>(v_)) == 0;
}

bool Scalar::is_one() const {
  if (const auto* r = std::get_if<Residue>(&v_)) return r->value == 1 % r->p;
  return std::get<mpq_class>(v_) == 1;
}

void Scalar::require_same(const Scalar& o) const {
  bool same = v_.index() == o.v_.index();
  if (same && v_.index() == 1) same = std::get<Residue>(v_).p == std::get<Residue>(o.v_).p;
  if (!same) throw Error(ErrorCode::MismatchedContext, "scalars from different fields");
}

Scalar Scalar::operator-() const {
  if (const auto* r = std::get_if<Residue>(&v_))
    return Scalar(Residue{r->value == 0 ? 0 : r->p - r->value, r->p});
  return Scalar(mpq_class(-std::get<mpq_class>(v_)));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same(o);
  if (auto* r = std::get_if<Residue>(&v_)) {
    r->value += std::get<Residue>(o.v_).value;
    if (r->value >= r->p) r->value -= r->p;
  } else {
    std::get<mpq_class>(v_) += std::get<mpq_class>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same(o);
  if (auto* r = std::get_if<Residue>(&v_)) {
    std::uint64_t b = std::get<Residue>(o.v_).value;
    r->value = r->value >= b ? r->value - b : r->value + r->p - b;
  } else {
    std::get<mpq_class>(v_) -= std::get<mpq_class>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  require_same(o);
  if (auto* r = std::get_if<Residue>(&v_)) {
    r->value = r->value * std::get<Residue>(o.v_).value % r->p;
  } else {
    std::get<mpq_class>(v_) *= std::get<mpq_class>(o.v_);
  }
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (const auto* r = std::get_if<Residue>(&v_))
    return Scalar(Residue{pow_mod(r->value, r->p - 2, r->p), r->p});
  return Scalar(mpq_class(1 / std::get<mpq_class>(v_)));
}

Scalar& Scalar::operator/=(const Scalar& o) {
  require_same(o);
  return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }

mpq_class Scalar::to_rational() const {
  if (const auto* r = std::get_if<Residue>(&v_))
    return mpq_class(static_cast<unsigned long>(r->value));
  return std::get<mpq_class>(v_);
}

std::string Scalar::to_string() const {
  if (const auto* r = std::get_if<Residue>(&v_)) return std::to_string(r->value);
  return std::get<mpq_class>(v_).get_str();
}

bool Scalar::is_negative() const {
  if (std::holds_alternative<Residue>(v_)) return false;
  return sgn(std::get<mpq_class>(v_)) < 0;
}

Scalar factorial(const Field& field, int n) {
  if (!field.is_rational() && static_cast<std::uint64_t>(n) >= field.characteristic())
    throw Error(ErrorCode::CharacteristicObstruction,
                std::to_string(n) + "! vanishes in characteristic " +
                    std::to_string(field.characteristic()));
  Scalar r = Scalar::one(field);
  for (int k = 2; k <= n; ++k) r *= Scalar(field, static_cast<long>(k));
  return r;
}

}  // namespace germdet
