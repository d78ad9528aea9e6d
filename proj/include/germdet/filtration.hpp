#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "germdet/jet.hpp"

namespace germdet {

enum class FiltrationKind { MAdic, Weighted, Chain };

// Descending chain of monomial ideals I_0 = R > I_1 > ... with
// I_j * I_k inside I_{j+k}. Chain(I1, A) realizes I_{j+1} = A^j * I1.
class FiltrationSpec {
 public:
  static FiltrationSpec madic(int nvars);
  static FiltrationSpec weighted(std::vector<int> weights);
  // Generators are not validated here; see validate_assumptions.
  static FiltrationSpec chain(int nvars, std::vector<Monomial> i1_gens, std::vector<Monomial> a_gens);

  FiltrationKind kind() const noexcept { return kind_; }
  int nvars() const noexcept { return nvars_; }
  const std::vector<int>& weights() const noexcept { return weights_; }
  const std::vector<Monomial>& i1_generators() const noexcept { return i1_; }
  const std::vector<Monomial>& a_generators() const noexcept { return a_; }

  // Largest j with the monomial in I_j.
  int monomial_order(const Monomial& m) const;
  // Largest k with the monomial in A^k (Chain only).
  int a_power(const Monomial& m) const;
  // Every monomial of high enough degree lies in every I_j.
  bool is_m_primary() const;
  // Smallest L' with I_{L'} inside m * I_L.
  int nakayama_step(int level) const;
  // Smallest total degree d with m^d inside I_level; nullopt if none.
  std::optional<int> degree_for_level(int level) const;

  std::string describe(const std::vector<std::string>& vars) const;

  friend bool operator==(const FiltrationSpec& a, const FiltrationSpec& b) {
    return a.kind_ == b.kind_ && a.nvars_ == b.nvars_ && a.weights_ == b.weights_ && a.i1_ == b.i1_ &&
           a.a_ == b.a_;
  }

 private:
  struct Cache;
  FiltrationSpec() = default;
  FiltrationKind kind_ = FiltrationKind::MAdic;
  int nvars_ = 0;
  std::vector<int> weights_;
  std::vector<Monomial> i1_;
  std::vector<Monomial> a_;
  std::shared_ptr<Cache> cache_;
};

Order filt_order(const Jet& f, const FiltrationSpec& spec);
Order filt_order(const JetVector& v, const FiltrationSpec& spec);

// Monomials of total degree <= cap lying in I_level, ascending.
std::vector<Monomial> level_monomials(const FiltrationSpec& spec, int level, int cap);
// Minimal monomial generators of I_level with total degree <= cap.
std::vector<Monomial> minimal_generators(const FiltrationSpec& spec, int level, int cap);

// Filtration level of the monomial derivation x^alpha d/dx_j: the largest i
// (possibly negative) with the derivation mapping every I_l into I_{l+i}.
// Weighted and m-adic values are exact; chains use a sufficient test built
// from the generators of I_1 and A.
int derivation_level(const FiltrationSpec& spec, const Monomial& alpha, int j);

struct FiltrationCertificate {
  bool colon_condition_holds = false;
  bool der1_into_msq = false;
  std::optional<int> der_absorption_level;
  bool m_primary = false;
  std::vector<std::string> notes;
};

// Checks the standing filtration assumptions; search bounds use `cap`.
FiltrationCertificate validate_assumptions(const FiltrationSpec& spec, int cap = 12);

}  // namespace germdet
