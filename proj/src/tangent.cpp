#include "germdet/tangent.hpp"

#include <algorithm>
#include <unordered_map>

#include "germdet/errors.hpp"

namespace germdet {

GroupSpec GroupSpec::contact(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "contact group needs at least one component");
  GroupSpec g;
  g.kind = GroupKind::Contact;
  g.components = n;
  return g;
}

GroupSpec GroupSpec::matrix(int m, int n) {
  if (m < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "matrix shape must be positive");
  GroupSpec g;
  g.kind = GroupKind::MatrixLR;
  g.rows = m;
  g.cols = n;
  g.components = m * n;
  return g;
}

std::string GroupSpec::name() const {
  switch (kind) {
    case GroupKind::Right: return "right";
    case GroupKind::Contact: return "contact";
    case GroupKind::MatrixLR: return "matrix";
  }
  return "";
}

Jet apply(const Derivation& xi, const Jet& f) {
  if (static_cast<int>(xi.coeffs.size()) != f.nvars())
    throw Error(ErrorCode::MismatchedContext, "derivation and jet differ in nvars");
  Jet r(f.context());
  for (int j = 0; j < f.nvars(); ++j) {
    const Jet& c = xi.coeffs[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    Jet d = partial_derivative(f, j);
    if (!d.is_zero()) r += c * d;
  }
  return r;
}

JetVector apply(const Derivation& xi, const JetVector& v) {
  JetVector r;
  r.reserve(v.size());
  for (const auto& j : v) r.push_back(apply(xi, j));
  return r;
}

Order coefficient_order(const Derivation& xi) { return total_order(xi.coeffs); }

std::string gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::Derivation: return "derivation";
    case GenKind::Unit: return "unit";
    case GenKind::Left: return "left";
    case GenKind::Right: return "right";
    case GenKind::Quotient: return "quotient";
  }
  return "";
}

std::vector<JetVector> TangentModule::images() const {
  std::vector<JetVector> out;
  out.reserve(generators.size());
  for (const auto& g : generators) out.push_back(g.image);
  return out;
}

std::size_t TangentModule::count(GenKind k) const {
  return static_cast<std::size_t>(
      std::count_if(generators.begin(), generators.end(), [&](const TangentGenerator& g) { return g.kind == k; }));
}

std::vector<std::pair<Monomial, int>> derivation_generators(const FiltrationSpec& spec, int level, int cap) {
  std::vector<std::pair<Monomial, int>> out;
  const int n = spec.nvars();
  for (int j = 0; j < n; ++j) {
    auto in_set = [&](const Monomial& a) {
      return a.degree() >= 2 && derivation_level(spec, a, j) >= level;
    };
    for (const auto& a : monomials_up_to(n, cap)) {
      if (!in_set(a)) continue;
      bool minimal = true;
      for (int k = 0; k < n && minimal; ++k) {
        if (a[k] == 0) continue;
        Monomial q = a;
        q.set(k, a[k] - 1);
        if (in_set(q)) minimal = false;
      }
      if (minimal) out.emplace_back(a, j);
    }
  }
  return out;
}

namespace {

const JetContext& context_of(const JetVector& z) {
  if (z.empty()) throw Error(ErrorCode::InvalidArgument, "germ has no components");
  for (const auto& j : z)
    if (!(j.context() == z.front().context()))
      throw Error(ErrorCode::MismatchedContext, "germ components differ in context");
  return z.front().context();
}

void check_ideal(const std::vector<Jet>& gens, const JetContext& ctx, const char* what) {
  for (const auto& g : gens) {
    if (g.nvars() != ctx.nvars || !(g.field() == ctx.field))
      throw Error(ErrorCode::MismatchedContext, std::string(what) + " generator context differs");
    if (!g.constant_term().is_zero())
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " generators must vanish at the origin");
  }
}

// Derivation part shared by all groups.
void add_derivation_part(TangentModule& t, const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec,
                         int level, int cap) {
  const JetContext& ctx = z.front().context();
  std::vector<std::vector<Jet>> ideals;
  if (!group.relative_ideal.empty()) ideals.push_back(group.relative_ideal);
  if (!group.quotient_ideal.empty()) ideals.push_back(group.quotient_ideal);
  if (!ideals.empty()) {
    for (auto& ideal : ideals)
      for (auto& g : ideal) g = g.with_cap(cap);
    for (auto& xi : log_derivations(ideals, spec, level, cap)) {
      TangentGenerator g;
      g.kind = GenKind::Derivation;
      g.monomial = false;
      g.level = level;
      g.image = germdet::apply(xi, z);
      g.xi = std::move(xi);
      if (!is_zero(g.image)) t.generators.push_back(std::move(g));
    }
    t.diagnostics.push_back("derivations restricted to those preserving the relative/quotient ideals");
    return;
  }
  for (const auto& [mono, var] : derivation_generators(spec, level, cap)) {
    TangentGenerator g;
    g.kind = GenKind::Derivation;
    g.mono = mono;
    g.var = var;
    g.level = derivation_level(spec, mono, var);
    g.xi.coeffs.assign(static_cast<std::size_t>(ctx.nvars), Jet(ctx));
    g.xi.coeffs[static_cast<std::size_t>(var)] = Jet::monomial(ctx, mono);
    g.image.reserve(z.size());
    for (const auto& c : z) g.image.push_back(partial_derivative(c, var).times_monomial(mono));
    if (!is_zero(g.image)) t.generators.push_back(std::move(g));
  }
  if (spec.kind() == FiltrationKind::Chain)
    t.diagnostics.push_back("chain filtration: derivation levels use a sufficient (inner) test");
}

void add_quotient_part(TangentModule& t, const JetVector& z, const GroupSpec& group, int cap) {
  const JetContext& ctx = z.front().context();
  for (const auto& q : group.quotient_ideal) {
    Jet qc = q.with_cap(cap);
    if (qc.is_zero()) continue;
    for (std::size_t k = 0; k < z.size(); ++k) {
      TangentGenerator g;
      g.kind = GenKind::Quotient;
      g.monomial = false;
      g.a = static_cast<int>(k);
      g.level = 0;
      g.image.assign(z.size(), Jet(ctx));
      g.image[k] = qc;
      t.generators.push_back(std::move(g));
    }
  }
}

TangentModule start_module(const JetVector& z, const GroupSpec& group, int level, int cap) {
  const JetContext& ctx = context_of(z);
  if (ctx.cap != cap) throw Error(ErrorCode::MismatchedContext, "germ cap differs from requested cap");
  if (level < 0) throw Error(ErrorCode::InvalidArgument, "level must be non-negative");
  check_ideal(group.relative_ideal, ctx, "relative ideal");
  for (const auto& g : group.quotient_ideal)
    if (g.nvars() != ctx.nvars || !(g.field() == ctx.field))
      throw Error(ErrorCode::MismatchedContext, "quotient generator context differs");
  TangentModule t;
  t.rank = static_cast<int>(z.size());
  t.level = level;
  t.cap = cap;
  return t;
}

// Module level-consistency: a level-i generator raises the order of z by i.
void check_levels(const TangentModule& t, const JetVector& z, const FiltrationSpec& spec) {
  Order oz = filt_order(z, spec);
  if (!oz) return;
  for (const auto& g : t.generators) {
    if (!g.monomial || g.kind == GenKind::Quotient) continue;
    Order og = filt_order(g.image, spec);
    if (og && *og < *oz + g.level)
      throw Error(ErrorCode::UnsupportedFiltration, "tangent generator violates its filtration level");
  }
}

}  // namespace

TangentModule right_tangent(const JetVector& f, const GroupSpec& group, const FiltrationSpec& spec, int level,
                            int cap) {
  TangentModule t = start_module(f, group, level, cap);
  add_derivation_part(t, f, group, spec, level, cap);
  add_quotient_part(t, f, group, cap);
  check_levels(t, f, spec);
  return t;
}

TangentModule contact_tangent(const JetVector& f, const GroupSpec& group, const FiltrationSpec& spec, int level,
                              int cap) {
  if (group.kind != GroupKind::Contact || group.components != static_cast<int>(f.size()))
    throw Error(ErrorCode::MismatchedContext, "contact group size differs from germ rank");
  TangentModule t = start_module(f, group, level, cap);
  add_derivation_part(t, f, group, spec, level, cap);
  const JetContext& ctx = f.front().context();
  const int n = static_cast<int>(f.size());
  for (const auto& c : minimal_generators(spec, level, cap))
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        TangentGenerator g;
        g.kind = GenKind::Unit;
        g.mono = c;
        g.a = k;
        g.b = j;
        g.level = spec.monomial_order(c);
        g.image.assign(f.size(), Jet(ctx));
        g.image[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(j)].times_monomial(c);
        if (!is_zero(g.image)) t.generators.push_back(std::move(g));
      }
  add_quotient_part(t, f, group, cap);
  check_levels(t, f, spec);
  return t;
}

TangentModule matrix_tangent(const JetVector& a, const GroupSpec& group, const FiltrationSpec& spec, int level,
                             int cap) {
  if (group.kind != GroupKind::MatrixLR || group.rows * group.cols != static_cast<int>(a.size()))
    throw Error(ErrorCode::MismatchedContext, "matrix group shape differs from germ size");
  TangentModule t = start_module(a, group, level, cap);
  const JetContext& ctx = a.front().context();
  const int m = group.rows, n = group.cols;
  auto entry = [&](int r, int c) -> const Jet& { return a[static_cast<std::size_t>(r * n + c)]; };
  auto gens = minimal_generators(spec, level, cap);
  for (const auto& c : gens)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        // c * E_pq * A: row p becomes row q of A.
        TangentGenerator g;
        g.kind = GenKind::Left;
        g.mono = c;
        g.a = p;
        g.b = q;
        g.level = spec.monomial_order(c);
        g.image.assign(a.size(), Jet(ctx));
        for (int col = 0; col < n; ++col)
          g.image[static_cast<std::size_t>(p * n + col)] = entry(q, col).times_monomial(c);
        if (!is_zero(g.image)) t.generators.push_back(std::move(g));
      }
  for (const auto& c : gens)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        // A * c * E_pq: column q becomes column p of A.
        TangentGenerator g;
        g.kind = GenKind::Right;
        g.mono = c;
        g.a = p;
        g.b = q;
        g.level = spec.monomial_order(c);
        g.image.assign(a.size(), Jet(ctx));
        for (int row = 0; row < m; ++row)
          g.image[static_cast<std::size_t>(row * n + q)] = entry(row, p).times_monomial(c);
        if (!is_zero(g.image)) t.generators.push_back(std::move(g));
      }
  add_derivation_part(t, a, group, spec, level, cap);
  add_quotient_part(t, a, group, cap);
  check_levels(t, a, spec);
  return t;
}

TangentModule tangent_module(const JetVector& z, const GroupSpec& group, const FiltrationSpec& spec, int level,
                             int cap) {
  switch (group.kind) {
    case GroupKind::Right: return right_tangent(z, group, spec, level, cap);
    case GroupKind::Contact: return contact_tangent(z, group, spec, level, cap);
    case GroupKind::MatrixLR: return matrix_tangent(z, group, spec, level, cap);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown group");
}

namespace {

// Rows that reduce to zero, expressed through the input rows.
std::vector<SparseRow> kernel_combinations(std::vector<SparseRow> rows, const Field& field) {
  std::unordered_map<int, std::size_t> pivot_of;
  std::vector<SparseRow> prow, pcombo, kernel;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SparseRow row = std::move(rows[i]);
    SparseRow combo{{static_cast<int>(i), Scalar::one(field)}};
    while (true) {
      if (row.empty()) {
        kernel.push_back(std::move(combo));
        break;
      }
      auto it = pivot_of.find(row.front().first);
      if (it == pivot_of.end()) {
        Scalar inv = row.front().second.inverse();
        row_scale(row, inv);
        row_scale(combo, inv);
        pivot_of[row.front().first] = prow.size();
        prow.push_back(std::move(row));
        pcombo.push_back(std::move(combo));
        break;
      }
      Scalar f = -row.front().second;
      row_axpy(row, f, prow[it->second]);
      row_axpy(combo, f, pcombo[it->second]);
    }
  }
  return kernel;
}

}  // namespace

std::vector<Derivation> log_derivations(const std::vector<std::vector<Jet>>& ideals, const FiltrationSpec& spec,
                                        int level, int cap) {
  const Jet* sample = nullptr;
  for (const auto& ideal : ideals)
    if (!ideal.empty()) sample = &ideal.front();
  if (!sample) throw Error(ErrorCode::InvalidArgument, "log_derivations needs at least one ideal generator");
  JetContext ctx = sample->context();
  ctx.cap = cap;
  const int n = spec.nvars();
  if (ctx.nvars != n) throw Error(ErrorCode::MismatchedContext, "ideal and filtration differ in nvars");

  std::vector<std::pair<Monomial, int>> unknowns;
  for (const auto& a : monomials_up_to(n, cap))
    for (int j = 0; j < n; ++j)
      if (level == 0 || (a.degree() >= 2 && derivation_level(spec, a, j) >= level)) unknowns.emplace_back(a, j);

  auto coords = std::make_shared<const Coordinates>(FiltrationSpec::madic(n), 1, cap);
  std::vector<ReducedSpan> spans;
  std::vector<std::vector<Jet>> gens;
  for (const auto& ideal : ideals) {
    std::vector<JetVector> vecs;
    std::vector<Jet> g;
    for (const auto& j : ideal) {
      if (j.nvars() != n) throw Error(ErrorCode::MismatchedContext, "ideal generator nvars differ");
      Jet jc = j.with_cap(cap);
      if (!jc.constant_term().is_zero())
        throw Error(ErrorCode::InvalidArgument, "ideal generators must be nonconstant at the origin");
      vecs.push_back({jc});
      g.push_back(jc);
    }
    spans.push_back(saturate_span(vecs, coords, ctx.field));
    gens.push_back(std::move(g));
  }

  std::vector<SparseRow> rows;
  rows.reserve(unknowns.size());
  for (const auto& [a, j] : unknowns) {
    SparseRow row;
    int offset = 0;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      for (const auto& g : gens[s]) {
        Jet img = partial_derivative(g, j).times_monomial(a);
        SparseRow nf = spans[s].normal_form(to_row(*coords, {img}));
        for (auto& e : nf) row.emplace_back(e.first + offset, std::move(e.second));
        offset += coords->size();
      }
    }
    rows.push_back(std::move(row));
  }

  std::vector<JetVector> kernel_vectors;
  for (const auto& combo : kernel_combinations(std::move(rows), ctx.field)) {
    JetVector coeffs(static_cast<std::size_t>(n), Jet(ctx));
    for (const auto& [u, c] : combo) {
      const auto& [a, j] = unknowns[static_cast<std::size_t>(u)];
      coeffs[static_cast<std::size_t>(j)].add_term(a, c);
    }
    kernel_vectors.push_back(std::move(coeffs));
  }
  auto dcoords = std::make_shared<const Coordinates>(FiltrationSpec::madic(n), n, cap);
  SpanBuilder b(dcoords, ctx.field);
  for (const auto& v : kernel_vectors) b.add(v);
  ReducedSpan reduced = b.build();
  std::vector<Derivation> out;
  for (const auto& row : reduced.rows()) out.push_back(Derivation{from_row(*dcoords, row, ctx)});
  return out;
}

std::vector<Derivation> log_derivations(const std::vector<Jet>& ideal, const FiltrationSpec& spec, int level,
                                        int cap) {
  return log_derivations(std::vector<std::vector<Jet>>{ideal}, spec, level, cap);
}

ReducedSpan derivation_span(const std::vector<Derivation>& xis, int nvars, const Field& field, int cap,
                            bool saturate) {
  auto coords = std::make_shared<const Coordinates>(FiltrationSpec::madic(nvars), nvars, cap);
  std::vector<JetVector> vecs;
  for (const auto& xi : xis) {
    JetVector v;
    for (const auto& c : xi.coeffs) v.push_back(c.with_cap(cap));
    vecs.push_back(std::move(v));
  }
  if (saturate) return saturate_span(vecs, coords, field);
  SpanBuilder b(coords, field);
  for (const auto& v : vecs) b.add(v);
  return b.build();
}

ReducedSpan tangent_span(const TangentModule& t, const FiltrationSpec& spec, const Field& field) {
  auto coords = std::make_shared<const Coordinates>(spec, t.rank, t.cap);
  return saturate_span(t.images(), coords, field);
}

}  // namespace germdet
