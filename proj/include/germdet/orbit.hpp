#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "germdet/determinacy.hpp"
#include "germdet/filtration.hpp"
#include "germdet/jet.hpp"
#include "germdet/jetlin.hpp"
#include "germdet/tangent.hpp"

namespace germdet {

// g.z = U * z(phi) for contact, L * A(phi) * R for matrices, z(phi) otherwise.
struct GroupElement {
  GroupKind kind = GroupKind::Right;
  JetVector phi;
  std::optional<JetMatrix> unit;
  std::optional<JetMatrix> left;
  std::optional<JetMatrix> right;

  static GroupElement identity(const JetContext& ctx, const GroupSpec& group);
};

JetVector act(const GroupElement& g, const JetVector& z, const GroupSpec& group);
// The element acting as outer.(inner.z).
GroupElement compose(const GroupElement& outer, const GroupElement& inner);
// psi with phi(psi(x)) = x mod m^(D+1).
JetVector invert_coordinate_change(const JetVector& phi);
GroupElement invert(const GroupElement& g);
// Linear part of phi is the identity and the matrix factors are 1 mod m.
bool is_unipotent(const GroupElement& g);

// Infinitesimal direction: derivation plus optional matrix parts.
struct Increment {
  Derivation xi;
  std::optional<JetMatrix> unit;
  std::optional<JetMatrix> left;
  std::optional<JetMatrix> right;
};

JetVector exp_change(const Derivation& xi, int degree, Mode mode);
GroupElement exp_increment(const Increment& inc, const GroupSpec& group, const JetContext& ctx, Mode mode);

struct StepRecord {
  int degree = 0;
  int level = 0;
  int window_start = 1;
  Order residual_after;
  Increment increment;
};

struct OrbitWitness {
  GroupElement element;
  std::vector<GroupElement> factors;
  std::vector<StepRecord> steps;
  int degree = 0;
  Mode mode = Mode::LieType;
};

struct SolveOutcome {
  bool success = false;
  OrbitWitness witness;
  int failed_degree = -1;
  JetVector residual;
  std::string tag;
};

class OrbitSolver {
 public:
  OrbitSolver(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree);

  const TangentModule& tangent() const noexcept { return tangent_; }
  // Combination of tangent generators of level >= min_level matching the
  // residual modulo filtration d+1, given filt(residual) >= d.
  std::optional<Increment> solve_piece(const JetVector& residual, int d, int min_level = 1) const;
  SolveOutcome solve(const JetVector& w, Mode mode, std::optional<int> n_inf = std::nullopt) const;

 private:
  struct RowOrigin {
    int generator;
    Monomial multiplier;
  };
  const ProvenanceEchelon& echelon(int min_level) const;

  JetVector z_;
  GroupSpec group_;
  FiltrationSpec spec_;
  int degree_;
  Order ord_z_;
  TangentModule tangent_;
  std::shared_ptr<const Coordinates> coords_;
  std::vector<SparseRow> rows_;
  std::vector<int> row_level_;
  std::vector<RowOrigin> origins_;
  mutable std::map<int, std::unique_ptr<ProvenanceEchelon>> echelons_;
};

// Single-piece solve; throws NotInTangent when the piece is unreachable.
Increment step_solve(const JetVector& z, const JetVector& piece, const GroupSpec& group, const FiltrationSpec& spec,
                     int degree);

SolveOutcome order_by_order_equiv(const JetVector& z, const JetVector& w, const GroupSpec& group,
                                  const FiltrationSpec& spec, int degree, std::optional<Mode> mode = std::nullopt,
                                  std::optional<int> n_inf = std::nullopt);

bool verify_witness(const JetVector& z, const JetVector& w, const OrbitWitness& witness, const GroupSpec& group);

}  // namespace germdet
