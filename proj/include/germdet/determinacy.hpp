#pragma once

#include <optional>
#include <string>
#include <vector>

#include "germdet/filtration.hpp"
#include "germdet/jetlin.hpp"
#include "germdet/tangent.hpp"

namespace germdet {

enum class Mode { LieType, WeakLieType };

std::string mode_name(Mode m);
Mode mode_for(const Field& field);

struct LevelSearch {
  std::optional<int> found;
  // Largest N examined.
  int cap = 0;
  bool exact = true;
};

struct StabilityResult {
  std::optional<int> level;
  int cap = 0;
};

struct MilnorTjurina {
  ColengthResult mu;
  ColengthResult tau;
  std::optional<int> mu_bound;
  std::optional<int> tau_bound;
};

struct MapIndeterminacy {
  bool obstructed = false;
  std::string reason;
  int rank = 0;
  std::string note;
};

struct DeterminacyReport {
  int degree = 0;
  Order ord_z;
  LevelSearch n_inf;
  Mode mode = Mode::LieType;
  std::optional<int> determinacy_order;
  std::optional<MilnorTjurina> milnor_tjurina;
  StabilityResult stability;
  FiltrationCertificate certificate;
  std::optional<MapIndeterminacy> map;
  std::size_t tangent_generators = 0;
  std::vector<std::string> diagnostics;
};

// Smallest N with I_(N+1)*M inside the level-1 tangent span, scanning from
// max(0, ord z - 1) up to `cap` (default D - 2).
LevelSearch infinitesimal_level(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree,
                                std::optional<int> cap = std::nullopt);
LevelSearch infinitesimal_level(const ReducedSpan& span, const FiltrationSpec& spec, Order ord_z, int degree,
                                int cap);

// Smallest n with I_n*M inside the tangent span.
StabilityResult stability_report(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree,
                                 std::optional<int> cap = std::nullopt);
StabilityResult stability_report(const ReducedSpan& span, const FiltrationSpec& spec, int degree, int cap);

// Requires the m-adic filtration.
MilnorTjurina milnor_tjurina(const Jet& f, const FiltrationSpec& spec, int degree);

// Rank test on the linear parts of a map germ; characteristic zero only.
MapIndeterminacy map_indeterminacy(const JetVector& f);

DeterminacyReport determinacy_order(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec,
                                    int degree, std::optional<int> cap = std::nullopt);

}  // namespace germdet
