#include "germdet/determinacy.hpp"

#include <algorithm>

#include "germdet/errors.hpp"

namespace germdet {

std::string mode_name(Mode m) { return m == Mode::LieType ? "lie" : "weak-lie"; }

Mode mode_for(const Field& field) { return field.is_rational() ? Mode::LieType : Mode::WeakLieType; }

LevelSearch infinitesimal_level(const ReducedSpan& span, const FiltrationSpec& spec, Order ord_z, int degree,
                                int cap) {
  LevelSearch out;
  int start = ord_z ? std::max(0, *ord_z - 1) : 0;
  out.cap = start - 1;
  for (int n = start; n <= cap; ++n) {
    LevelCheck c;
    try {
      c = check_level(span, spec, n + 1, degree);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CapTooSmall && n > start) break;
      throw;
    }
    out.cap = n;
    if (!c.exact) out.exact = false;
    if (c.holds) {
      out.found = n;
      break;
    }
  }
  return out;
}

StabilityResult stability_report(const ReducedSpan& span, const FiltrationSpec& spec, int degree, int cap) {
  StabilityResult out;
  out.cap = -1;
  for (int n = 0; n <= cap; ++n) {
    LevelCheck c;
    try {
      c = check_level(span, spec, n, degree);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CapTooSmall && n > 0) break;
      throw;
    }
    out.cap = n;
    if (c.holds) {
      out.level = n;
      break;
    }
  }
  return out;
}

namespace {

ReducedSpan level_one_span(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree,
                           TangentModule* module_out = nullptr) {
  TangentModule t = tangent_module(z, group, spec, 1, degree);
  ReducedSpan span = tangent_span(t, spec, z.front().field());
  if (module_out) *module_out = std::move(t);
  return span;
}

}  // namespace

LevelSearch infinitesimal_level(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree,
                                std::optional<int> cap) {
  ReducedSpan span = level_one_span(z, group, spec, degree);
  return infinitesimal_level(span, spec, filt_order(z, spec), degree, cap.value_or(degree - 2));
}

StabilityResult stability_report(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree,
                                 std::optional<int> cap) {
  ReducedSpan span = level_one_span(z, group, spec, degree);
  return stability_report(span, spec, degree, cap.value_or(degree - 1));
}

MilnorTjurina milnor_tjurina(const Jet& f, const FiltrationSpec& spec, int degree) {
  if (spec.kind() != FiltrationKind::MAdic)
    throw Error(ErrorCode::UnsupportedFiltration, "Milnor and Tjurina numbers are computed for the m-adic filtration");
  Jet g = f.with_cap(degree);
  std::vector<Jet> jac;
  for (int i = 0; i < g.nvars(); ++i) jac.push_back(partial_derivative(g, i));
  MilnorTjurina out;
  out.mu = colength(jac, spec, degree);
  jac.push_back(g);
  out.tau = colength(jac, spec, degree);
  Order ord = total_order(g);
  auto bound = [&](const ColengthResult& c) -> std::optional<int> {
    if (!c.finite) return std::nullopt;
    int v = static_cast<int>(c.value);
    if (g.field().is_rational()) return v + 1;
    return 2 * v - ord.value_or(0) + 2;
  };
  out.mu_bound = bound(out.mu);
  out.tau_bound = bound(out.tau);
  return out;
}

MapIndeterminacy map_indeterminacy(const JetVector& f) {
  if (f.empty()) throw Error(ErrorCode::InvalidArgument, "map germ has no components");
  const Field& field = f.front().field();
  if (!field.is_rational())
    throw Error(ErrorCode::WrongCharacteristic, "the linear-part test is stated for characteristic zero");
  const int n = static_cast<int>(f.size());
  const int nv = f.front().nvars();
  std::vector<std::vector<Scalar>> lin(static_cast<std::size_t>(n));
  bool zero_row = false;
  for (int i = 0; i < n; ++i) {
    const Jet& fi = f[static_cast<std::size_t>(i)];
    bool all_zero = fi.constant_term().is_zero();
    for (int j = 0; j < nv; ++j) {
      Scalar c = fi.coefficient(Monomial::variable(nv, j));
      if (!c.is_zero()) all_zero = false;
      lin[static_cast<std::size_t>(i)].push_back(c);
    }
    if (all_zero) zero_row = true;
  }
  // Rank by elimination on the dense linear-part matrix.
  int rank = 0;
  auto m = lin;
  for (int col = 0; col < nv && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (!m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(rank)]);
    Scalar inv = m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)].inverse();
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      Scalar fct = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] * inv;
      if (fct.is_zero()) continue;
      for (int c = col; c < nv; ++c)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            fct * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
    }
    ++rank;
  }
  MapIndeterminacy out;
  out.rank = rank;
  if (zero_row) {
    out.obstructed = true;
    out.reason = "component in m^2";
  } else if (rank < n) {
    out.obstructed = true;
    out.reason = "linear parts dependent";
  } else {
    out.note = "1-determined";
  }
  return out;
}

DeterminacyReport determinacy_order(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec,
                                    int degree, std::optional<int> cap) {
  DeterminacyReport rep;
  rep.degree = degree;
  if (z.empty()) throw Error(ErrorCode::InvalidArgument, "germ has no components");
  const Field field = z.front().field();
  rep.certificate = validate_assumptions(spec, degree);
  for (const auto& n : rep.certificate.notes) rep.diagnostics.push_back(n);
  rep.ord_z = filt_order(z, spec);
  rep.mode = mode_for(field);

  TangentModule module;
  ReducedSpan span = level_one_span(z, group, spec, degree, &module);
  rep.tangent_generators = module.generators.size();
  for (const auto& d : module.diagnostics) rep.diagnostics.push_back(d);

  rep.n_inf = infinitesimal_level(span, spec, rep.ord_z, degree, cap.value_or(degree - 2));
  rep.stability = stability_report(span, spec, degree, degree - 1);
  if (!rep.n_inf.exact)
    rep.diagnostics.push_back("filtration is not m-primary: level checks are truncation-relative");

  if (rep.n_inf.found) {
    int n = *rep.n_inf.found;
    if (rep.mode == Mode::LieType) {
      rep.determinacy_order = n;
    } else if (!rep.certificate.colon_condition_holds) {
      rep.diagnostics.push_back("colon condition fails: the weak-Lie order bound is not available");
    } else if (rep.ord_z) {
      rep.determinacy_order = 2 * n - *rep.ord_z;
    }
  } else {
    rep.diagnostics.push_back("no level found up to N = " + std::to_string(rep.n_inf.cap));
  }
  if (rep.n_inf.found && rep.stability.level && *rep.stability.level != *rep.n_inf.found + 1 &&
      spec.kind() == FiltrationKind::MAdic)
    rep.diagnostics.push_back("stability level differs from N_inf + 1");

  bool scalar_germ = z.size() == 1 && (group.kind == GroupKind::Right ||
                                       (group.kind == GroupKind::Contact && group.components == 1));
  if (scalar_germ && spec.kind() == FiltrationKind::MAdic && group.quotient_ideal.empty())
    rep.milnor_tjurina = milnor_tjurina(z.front(), spec, degree);

  if (group.kind == GroupKind::Right && z.size() >= 2 && group.quotient_ideal.empty()) {
    if (field.is_rational()) {
      rep.map = map_indeterminacy(z);
    } else {
      rep.diagnostics.push_back("map linear-part test skipped in positive characteristic");
    }
  }
  return rep;
}

}  // namespace germdet
