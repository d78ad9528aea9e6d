#include "germdet/orbit.hpp"

#include <algorithm>
#include <numeric>

#include "germdet/errors.hpp"

namespace germdet {

namespace {

JetVector coordinate_identity(const JetContext& ctx) {
  JetVector x;
  for (int i = 0; i < ctx.nvars; ++i) x.push_back(Jet::variable(ctx, i));
  return x;
}

JetMatrix scaled(const JetMatrix& a, const Scalar& c) {
  JetMatrix r = a;
  for (auto& e : r.entries) e = e.scaled(c);
  return r;
}

JetMatrix derive(const Derivation& xi, const JetMatrix& a) {
  JetMatrix r = a;
  for (auto& e : r.entries) e = germdet::apply(xi, e);
  return r;
}

bool is_zero(const JetMatrix& a) {
  return std::all_of(a.entries.begin(), a.entries.end(), [](const Jet& j) { return j.is_zero(); });
}

JetMatrix unipotent_inverse(const JetMatrix& u) {
  const JetContext& ctx = u.entries.front().context();
  JetMatrix id = JetMatrix::identity(ctx, u.rows);
  JetMatrix neg = JetMatrix::zero(ctx, u.rows, u.cols);
  for (std::size_t i = 0; i < u.entries.size(); ++i) neg.entries[i] = id.entries[i] - u.entries[i];
  JetMatrix inv = id, term = id;
  for (int k = 1; k <= ctx.cap + 1; ++k) {
    term = term * neg;
    if (is_zero(term)) break;
    inv = inv + term;
  }
  return inv;
}

bool is_identity_mod_m(const JetMatrix& a) {
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) {
      Scalar v = a.at(r, c).constant_term();
      if (r == c ? !v.is_one() : !v.is_zero()) return false;
    }
  return true;
}

JetMatrix or_identity(const std::optional<JetMatrix>& m, const JetContext& ctx, int n) {
  return m ? *m : JetMatrix::identity(ctx, n);
}

// Exact exponential sum_a V_a / a! with V_{a+1} = xi(V_a) + step(V_a).
template <class Step>
JetMatrix exp_series(const Derivation& xi, const JetContext& ctx, int n, Step&& step) {
  JetMatrix v = JetMatrix::identity(ctx, n);
  JetMatrix sum = v;
  for (int a = 1; a <= ctx.cap + 1; ++a) {
    v = derive(xi, v) + step(v);
    v = scaled(v, Scalar(ctx.field, a).inverse());
    if (is_zero(v)) break;
    sum = sum + v;
  }
  return sum;
}

void check_lie_characteristic(const Field& field, int degree) {
  if (!field.is_rational() && static_cast<int>(field.characteristic()) <= degree)
    throw Error(ErrorCode::CharacteristicObstruction,
                "Lie-type exponential needs characteristic above the degree cap " + std::to_string(degree));
}

}  // namespace

GroupElement GroupElement::identity(const JetContext& ctx, const GroupSpec& group) {
  GroupElement g;
  g.kind = group.kind;
  g.phi = coordinate_identity(ctx);
  if (group.kind == GroupKind::Contact) g.unit = JetMatrix::identity(ctx, group.components);
  if (group.kind == GroupKind::MatrixLR) {
    g.left = JetMatrix::identity(ctx, group.rows);
    g.right = JetMatrix::identity(ctx, group.cols);
  }
  return g;
}

JetVector act(const GroupElement& g, const JetVector& z, const GroupSpec& group) {
  JetVector zphi = substitute(z, g.phi);
  if (group.kind == GroupKind::Contact && g.unit) return germdet::apply(*g.unit, zphi);
  if (group.kind == GroupKind::MatrixLR) {
    if (group.rows * group.cols != static_cast<int>(z.size()))
      throw Error(ErrorCode::MismatchedContext, "matrix shape differs from germ size");
    JetMatrix a{group.rows, group.cols, std::move(zphi)};
    if (g.left) a = *g.left * a;
    if (g.right) a = a * *g.right;
    return a.entries;
  }
  return zphi;
}

GroupElement compose(const GroupElement& outer, const GroupElement& inner) {
  if (outer.kind != inner.kind) throw Error(ErrorCode::MismatchedContext, "group elements of different kinds");
  GroupElement r;
  r.kind = outer.kind;
  r.phi = substitute(inner.phi, outer.phi);
  const JetContext& ctx = outer.phi.front().context();
  if (outer.unit || inner.unit) {
    int n = outer.unit ? outer.unit->rows : inner.unit->rows;
    r.unit = or_identity(outer.unit, ctx, n) * substitute(or_identity(inner.unit, ctx, n), outer.phi);
  }
  if (outer.left || inner.left) {
    int n = outer.left ? outer.left->rows : inner.left->rows;
    r.left = or_identity(outer.left, ctx, n) * substitute(or_identity(inner.left, ctx, n), outer.phi);
  }
  if (outer.right || inner.right) {
    int n = outer.right ? outer.right->rows : inner.right->rows;
    r.right = substitute(or_identity(inner.right, ctx, n), outer.phi) * or_identity(outer.right, ctx, n);
  }
  return r;
}

JetVector invert_coordinate_change(const JetVector& phi) {
  if (phi.empty()) throw Error(ErrorCode::InvalidArgument, "empty coordinate change");
  const JetContext& ctx = phi.front().context();
  JetVector x = coordinate_identity(ctx);
  if (static_cast<int>(phi.size()) != ctx.nvars)
    throw Error(ErrorCode::MismatchedContext, "coordinate change must have one entry per variable");
  JetVector h = phi - x;
  for (const auto& c : h)
    for (int i = 0; i < ctx.nvars; ++i)
      if (!c.constant_term().is_zero() || !c.coefficient(Monomial::variable(ctx.nvars, i)).is_zero())
        throw Error(ErrorCode::InvalidArgument, "coordinate change is not tangent to the identity");
  JetVector psi = x;
  for (int k = 0; k <= ctx.cap; ++k) {
    JetVector next = x - substitute(h, psi);
    if (next == psi) break;
    psi = std::move(next);
  }
  return psi;
}

GroupElement invert(const GroupElement& g) {
  if (!is_unipotent(g)) throw Error(ErrorCode::InvalidArgument, "only unipotent elements are inverted");
  GroupElement r;
  r.kind = g.kind;
  r.phi = invert_coordinate_change(g.phi);
  if (g.unit) r.unit = unipotent_inverse(substitute(*g.unit, r.phi));
  if (g.left) r.left = unipotent_inverse(substitute(*g.left, r.phi));
  if (g.right) r.right = unipotent_inverse(substitute(*g.right, r.phi));
  return r;
}

bool is_unipotent(const GroupElement& g) {
  if (g.phi.empty()) return false;
  const int n = g.phi.front().nvars();
  if (static_cast<int>(g.phi.size()) != n) return false;
  for (int i = 0; i < n; ++i) {
    const Jet& p = g.phi[static_cast<std::size_t>(i)];
    if (!p.constant_term().is_zero()) return false;
    for (int j = 0; j < n; ++j) {
      Scalar c = p.coefficient(Monomial::variable(n, j));
      if (i == j ? !c.is_one() : !c.is_zero()) return false;
    }
  }
  for (const auto* m : {&g.unit, &g.left, &g.right})
    if (*m && !is_identity_mod_m(**m)) return false;
  return true;
}

JetVector exp_change(const Derivation& xi, int degree, Mode mode) {
  if (xi.coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "derivation has no coefficients");
  JetContext ctx = xi.coeffs.front().context();
  ctx.cap = degree;
  Derivation d;
  for (const auto& c : xi.coeffs) {
    Jet cc = c.with_cap(degree);
    if (!cc.constant_term().is_zero()) throw Error(ErrorCode::InvalidArgument, "derivation must vanish at 0");
    for (int i = 0; i < ctx.nvars; ++i)
      if (!cc.coefficient(Monomial::variable(ctx.nvars, i)).is_zero())
        throw Error(ErrorCode::InvalidArgument, "derivation coefficients must lie in m^2");
    d.coeffs.push_back(std::move(cc));
  }
  JetVector x = coordinate_identity(ctx);
  if (mode == Mode::WeakLieType) return x + d.coeffs;
  check_lie_characteristic(ctx.field, degree);
  JetVector phi;
  for (const auto& xi_var : x) {
    Jet term = xi_var, sum = xi_var;
    for (int j = 1; j <= degree; ++j) {
      term = germdet::apply(d, term).scaled(Scalar(ctx.field, j).inverse());
      if (term.is_zero()) break;
      sum += term;
    }
    phi.push_back(std::move(sum));
  }
  return phi;
}

GroupElement exp_increment(const Increment& inc, const GroupSpec& group, const JetContext& ctx, Mode mode) {
  GroupElement g = GroupElement::identity(ctx, group);
  g.phi = exp_change(inc.xi, ctx.cap, mode);
  auto plus_identity = [&](const JetMatrix& m) { return JetMatrix::identity(ctx, m.rows) + m; };
  if (mode == Mode::WeakLieType) {
    if (inc.unit) g.unit = plus_identity(*inc.unit);
    if (inc.left) g.left = plus_identity(*inc.left);
    if (inc.right) g.right = plus_identity(*inc.right);
    return g;
  }
  if (inc.unit) {
    const JetMatrix& u = *inc.unit;
    g.unit = exp_series(inc.xi, ctx, u.rows, [&](const JetMatrix& v) { return u * v; });
  }
  if (inc.left) {
    const JetMatrix& l = *inc.left;
    g.left = exp_series(inc.xi, ctx, l.rows, [&](const JetMatrix& v) { return l * v; });
  }
  if (inc.right) {
    const JetMatrix& r = *inc.right;
    g.right = exp_series(inc.xi, ctx, r.rows, [&](const JetMatrix& v) { return v * r; });
  }
  return g;
}

OrbitSolver::OrbitSolver(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int degree)
    : group_(group), spec_(spec), degree_(degree) {
  if (!group.relative_ideal.empty() || !group.quotient_ideal.empty())
    throw Error(ErrorCode::UnsupportedCombination, "orbit solving with relative or quotient ideals is not supported");
  if (z.empty()) throw Error(ErrorCode::InvalidArgument, "germ has no components");
  for (const auto& c : z) z_.push_back(c.with_cap(degree));
  ord_z_ = filt_order(z_, spec_);
  tangent_ = tangent_module(z_, group_, spec_, 1, degree_);
  coords_ = std::make_shared<const Coordinates>(spec_, static_cast<int>(z_.size()), degree_);
  std::vector<JetVector> images = tangent_.images();
  for_each_multiple(images, degree_, [&](int gi, const Monomial& m, const JetVector& prod) {
    SparseRow row = to_row(*coords_, prod);
    if (row.empty()) return;
    const TangentGenerator& g = tangent_.generators[static_cast<std::size_t>(gi)];
    int level = g.level;
    if (g.kind == GenKind::Derivation && g.monomial) level = derivation_level(spec_, g.mono * m, g.var);
    else if (g.kind != GenKind::Derivation) level = spec_.monomial_order(g.mono * m);
    rows_.push_back(std::move(row));
    row_level_.push_back(level);
    origins_.push_back(RowOrigin{gi, m});
  });
}

const ProvenanceEchelon& OrbitSolver::echelon(int min_level) const {
  auto it = echelons_.find(min_level);
  if (it != echelons_.end()) return *it->second;
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows_[a].front().first < rows_[b].front().first; });
  auto e = std::make_unique<ProvenanceEchelon>(coords_, z_.front().field());
  for (std::size_t i : order)
    if (row_level_[i] >= min_level) e->add(rows_[i], static_cast<int>(i));
  return *echelons_.emplace(min_level, std::move(e)).first->second;
}

std::optional<Increment> OrbitSolver::solve_piece(const JetVector& residual, int d, int min_level) const {
  auto combo = echelon(min_level).solve_piece(to_row(*coords_, residual), d);
  if (!combo) return std::nullopt;
  const JetContext& ctx = z_.front().context();
  Increment inc;
  inc.xi.coeffs.assign(static_cast<std::size_t>(ctx.nvars), Jet(ctx));
  if (group_.kind == GroupKind::Contact) inc.unit = JetMatrix::zero(ctx, group_.components, group_.components);
  if (group_.kind == GroupKind::MatrixLR) {
    inc.left = JetMatrix::zero(ctx, group_.rows, group_.rows);
    inc.right = JetMatrix::zero(ctx, group_.cols, group_.cols);
  }
  for (const auto& [ri, c] : *combo) {
    const RowOrigin& o = origins_[static_cast<std::size_t>(ri)];
    const TangentGenerator& g = tangent_.generators[static_cast<std::size_t>(o.generator)];
    switch (g.kind) {
      case GenKind::Derivation:
        if (g.monomial) {
          inc.xi.coeffs[static_cast<std::size_t>(g.var)].add_term(g.mono * o.multiplier, c);
        } else {
          for (std::size_t j = 0; j < g.xi.coeffs.size(); ++j)
            inc.xi.coeffs[j] += g.xi.coeffs[j].times_monomial(o.multiplier).scaled(c);
        }
        break;
      case GenKind::Unit: inc.unit->at(g.a, g.b).add_term(g.mono * o.multiplier, c); break;
      case GenKind::Left: inc.left->at(g.a, g.b).add_term(g.mono * o.multiplier, c); break;
      case GenKind::Right: inc.right->at(g.a, g.b).add_term(g.mono * o.multiplier, c); break;
      case GenKind::Quotient: break;
    }
  }
  return inc;
}

SolveOutcome OrbitSolver::solve(const JetVector& w, Mode mode, std::optional<int> n_inf) const {
  const JetContext& ctx = z_.front().context();
  if (w.size() != z_.size()) throw Error(ErrorCode::MismatchedContext, "perturbation rank differs from germ rank");
  JetVector target;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    if (w[i].nvars() != ctx.nvars || !(w[i].field() == ctx.field))
      throw Error(ErrorCode::MismatchedContext, "perturbation context differs from germ context");
    target.push_back(z_[i] + w[i].with_cap(degree_));
  }
  if (mode == Mode::LieType) check_lie_characteristic(ctx.field, degree_);

  SolveOutcome out;
  OrbitWitness& wit = out.witness;
  wit.degree = degree_;
  wit.mode = mode;
  wit.element = GroupElement::identity(ctx, group_);
  int window = 1;
  if (n_inf && ord_z_) window = std::max(1, *n_inf + 1 - *ord_z_);

  JetVector residual = target - act(wit.element, z_, group_);
  const int floor = is_zero(residual) ? 0 : *filt_order(residual, spec_);
  int detours = 0;
  while (!is_zero(residual)) {
    int d = *filt_order(residual, spec_);
    auto fail = [&](std::string tag) {
      out.success = false;
      out.failed_degree = d;
      out.residual = residual;
      out.tag = std::move(tag);
      return out;
    };
    if (!solve_piece(residual, d, 1)) return fail("not in tangent");
    int top = ord_z_ ? std::max(1, d - *ord_z_) : 1;
    bool progressed = false;
    for (int k = mode == Mode::LieType ? 1 : top; k >= 1 && !progressed; --k) {
      auto inc = solve_piece(residual, d, k);
      if (!inc) continue;
      GroupElement h = exp_increment(*inc, group_, ctx, mode);
      GroupElement next = compose(wit.element, h);
      JetVector r = target - act(next, z_, group_);
      Order after = filt_order(r, spec_);
      if (after && *after <= d) continue;
      wit.element = std::move(next);
      wit.factors.push_back(std::move(h));
      wit.steps.push_back(StepRecord{d, k, window, after, std::move(*inc)});
      residual = std::move(r);
      progressed = true;
    }
    if (!progressed && mode == Mode::WeakLieType && detours < 4 * degree_) {
      // No level clears degree d at once; take the step whose residual stays
      // deepest and keep going while it remains at or above the start.
      std::optional<std::pair<GroupElement, StepRecord>> best;
      int best_order = -1;
      for (int k = top; k >= 1; --k) {
        auto inc = solve_piece(residual, d, k);
        if (!inc) continue;
        GroupElement h = exp_increment(*inc, group_, ctx, mode);
        GroupElement next = compose(wit.element, h);
        Order after = filt_order(target - act(next, z_, group_), spec_);
        int o = after ? *after : degree_ + 1;
        if (o > best_order) {
          best_order = o;
          best.emplace(std::move(h), StepRecord{d, k, window, after, std::move(*inc)});
        }
      }
      if (best && best_order >= floor) {
        ++detours;
        wit.element = compose(wit.element, best->first);
        wit.factors.push_back(std::move(best->first));
        wit.steps.push_back(std::move(best->second));
        residual = target - act(wit.element, z_, group_);
        progressed = true;
      }
    }
    if (!progressed) return fail(mode == Mode::WeakLieType ? "weak-Lie gap" : "no progress");
  }
  out.success = true;
  out.residual = residual;
  return out;
}

Increment step_solve(const JetVector& z, const JetVector& piece, const GroupSpec& group, const FiltrationSpec& spec,
                     int degree) {
  OrbitSolver solver(z, group, spec, degree);
  JetVector p;
  for (const auto& c : piece) p.push_back(c.with_cap(degree));
  Order d = filt_order(p, spec);
  int level = d ? *d : degree + 1;
  auto inc = solver.solve_piece(p, level, 1);
  if (!inc) throw Error(ErrorCode::NotInTangent, "residual piece at degree " + std::to_string(level) +
                                                     " is not in the tangent image");
  return *inc;
}

SolveOutcome order_by_order_equiv(const JetVector& z, const JetVector& w, const GroupSpec& group,
                                  const FiltrationSpec& spec, int degree, std::optional<Mode> mode,
                                  std::optional<int> n_inf) {
  if (z.empty()) throw Error(ErrorCode::InvalidArgument, "germ has no components");
  OrbitSolver solver(z, group, spec, degree);
  return solver.solve(w, mode.value_or(mode_for(z.front().field())), n_inf);
}

bool verify_witness(const JetVector& z, const JetVector& w, const OrbitWitness& witness, const GroupSpec& group) {
  if (z.empty() || z.size() != w.size()) throw Error(ErrorCode::MismatchedContext, "germ and perturbation differ");
  const JetContext& ctx = z.front().context();
  for (std::size_t i = 0; i < z.size(); ++i)
    if (w[i].nvars() != ctx.nvars || !(w[i].field() == ctx.field) || z[i].nvars() != ctx.nvars)
      throw Error(ErrorCode::MismatchedContext, "germ and perturbation differ in context");
  const GroupElement& g = witness.element;
  if (g.phi.empty() || !(g.phi.front().field() == ctx.field) || g.phi.front().nvars() != ctx.nvars)
    throw Error(ErrorCode::MismatchedContext, "witness context differs from germ context");
  if (!is_unipotent(g)) return false;
  const int d = witness.degree;
  JetVector zc, target;
  for (std::size_t i = 0; i < z.size(); ++i) {
    zc.push_back(z[i].with_cap(d));
    target.push_back(zc.back() + w[i].with_cap(d));
  }
  GroupElement gc = g;
  for (auto& p : gc.phi) p = p.with_cap(d);
  for (auto* m : {&gc.unit, &gc.left, &gc.right})
    if (*m)
      for (auto& e : (*m)->entries) e = e.with_cap(d);
  return act(gc, zc, group) == target;
}

}  // namespace germdet
