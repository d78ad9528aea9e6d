#pragma once

#include <string>
#include <vector>

#include "germdet/filtration.hpp"
#include "germdet/jet.hpp"
#include "germdet/jetlin.hpp"

namespace germdet {

enum class GroupKind { Right, Contact, MatrixLR };

struct GroupSpec {
  GroupKind kind = GroupKind::Right;
  // Contact: number of components. MatrixLR: rows x cols.
  int components = 1;
  int rows = 1;
  int cols = 1;
  std::vector<Jet> relative_ideal;
  std::vector<Jet> quotient_ideal;

  static GroupSpec right() { return GroupSpec{}; }
  static GroupSpec contact(int n);
  static GroupSpec matrix(int m, int n);
  std::string name() const;
};

// xi = sum_j coeffs[j] * d/dx_j.
struct Derivation {
  std::vector<Jet> coeffs;
};

Jet apply(const Derivation& xi, const Jet& f);
JetVector apply(const Derivation& xi, const JetVector& v);
Order coefficient_order(const Derivation& xi);

enum class GenKind { Derivation, Unit, Left, Right, Quotient };

std::string gen_kind_name(GenKind k);

// One tangent generator together with the group direction it came from.
//  Derivation: xi (monomial ones also record mono * d/dx_var).
//  Unit:  multiplier * E_{a b} acting on the germ vector (contact).
//  Left:  multiplier * E_{a b} * A;  Right: A * multiplier * E_{a b}.
//  Quotient: multiplier * e_a (tangent-side quotient ideal).
struct TangentGenerator {
  GenKind kind = GenKind::Derivation;
  Derivation xi;
  bool monomial = true;
  Monomial mono;
  int var = 0;
  int a = 0;
  int b = 0;
  int level = 1;
  JetVector image;
};

struct TangentModule {
  int rank = 1;
  int level = 1;
  int cap = 0;
  std::vector<TangentGenerator> generators;
  std::vector<std::string> diagnostics;

  std::vector<JetVector> images() const;
  std::size_t count(GenKind k) const;
};

// Monomial derivations x^alpha d/dx_j of level >= i with coefficients in m^2,
// reduced to minimal ones per variable.
std::vector<std::pair<Monomial, int>> derivation_generators(const FiltrationSpec& spec, int level, int cap);

TangentModule right_tangent(const JetVector& f, const GroupSpec& group, const FiltrationSpec& spec, int level,
                            int cap);
TangentModule contact_tangent(const JetVector& f, const GroupSpec& group, const FiltrationSpec& spec, int level,
                              int cap);
TangentModule matrix_tangent(const JetVector& a, const GroupSpec& group, const FiltrationSpec& spec, int level,
                             int cap);
TangentModule tangent_module(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int level,
                             int cap);

// Basis (reduced, grouped by coefficient degree) of the derivations of
// level >= i preserving every listed ideal modulo m^(D+1). Level 0 means
// the whole of Der(R).
std::vector<Derivation> log_derivations(const std::vector<std::vector<Jet>>& ideals, const FiltrationSpec& spec,
                                        int level, int cap);
std::vector<Derivation> log_derivations(const std::vector<Jet>& ideal, const FiltrationSpec& spec, int level,
                                        int cap);

// Span of derivations inside R^n (coefficient vectors), m-adic coordinates.
ReducedSpan derivation_span(const std::vector<Derivation>& xis, int nvars, const Field& field, int cap,
                            bool saturate);

ReducedSpan tangent_span(const TangentModule& t, const FiltrationSpec& spec, const Field& field);

}  // namespace germdet
