#include "germdet/tangent.hpp"
#include "support.hpp"

using namespace gt;

namespace {

ReducedSpan span_of(const TangentModule& t, const FiltrationSpec& spec, const Field& f) {
  return tangent_span(t, spec, f);
}

// Pivot count with coefficients (or entries) of total degree exactly k.
std::size_t dim_in_degree(const ReducedSpan& s, int k) { return s.pivots_below(k + 1) - s.pivots_below(k); }

bool contains_all_of_level(const ReducedSpan& s, int level) {
  const Coordinates& c = s.coordinates();
  for (int col = c.level_start(level); col < c.size(); ++col)
    if (!s.contains(SparseRow{{col, Scalar::one(s.field())}})) return false;
  return true;
}

}  // namespace

TEST_CASE("right_tangent examples") {
  auto spec = FiltrationSpec::madic(2);
  auto c = ctx(QQ(), 2, 8);
  auto t = right_tangent({P("x^3+y^3", c)}, GroupSpec::right(), spec, 1, 8);
  REQUIRE(t.generators.size() == 6);
  std::vector<Jet> expected;
  for (const char* d : {"3*x^2", "3*y^2"})
    for (const char* m : {"y^2", "x*y", "x^2"}) expected.push_back(P(m, c) * P(d, c));
  for (const auto& g : t.generators) {
    bool found = false;
    for (const auto& e : expected) found = found || g.image[0] == e;
    CHECK(found);
    CHECK(g.kind == GenKind::Derivation);
  }

  auto c1 = ctx(F(2), 1, 8);
  CHECK(right_tangent({P("x^2", c1)}, GroupSpec::right(), FiltrationSpec::madic(1), 1, 8).generators.empty());

  auto q = ctx(QQ(), 1, 10);
  for (int k = 1; k <= 5; ++k) {
    Jet f = power(Jet::variable(q, 0), k + 1);
    auto tk = right_tangent({f}, GroupSpec::right(), FiltrationSpec::madic(1), 1, 10);
    REQUIRE(tk.generators.size() == 1);
    CHECK(tk.generators[0].image[0] == power(Jet::variable(q, 0), k + 2).scaled(Scalar(QQ(), k + 1)));
  }
}

TEST_CASE("contact_tangent examples") {
  auto spec = FiltrationSpec::madic(2);
  auto c = ctx(F(2), 2, 8);
  Jet f = P("x^2+y^3", c);
  auto t = contact_tangent({f}, GroupSpec::contact(1), spec, 1, 8);
  CHECK(t.count(GenKind::Derivation) == 3);
  CHECK(t.count(GenKind::Unit) == 2);
  for (const auto& g : t.generators) {
    if (g.kind == GenKind::Derivation) {
      CHECK(g.var == 1);
      CHECK(g.image[0] == P("y^2", c).times_monomial(g.mono));
    } else {
      CHECK((g.image[0] == P("x", c) * f || g.image[0] == P("y", c) * f));
    }
  }

  auto q = ctx(QQ(), 2, 6);
  auto tx = contact_tangent({P("x", q)}, GroupSpec::contact(1), spec, 1, 6);
  auto sx = span_of(tx, spec, QQ());
  CHECK(contains_all_of_level(sx, 2));
  CHECK(sx.contains(JetVector{P("x^2", q)}));

  auto t2 = contact_tangent({P("x", q), P("y", q)}, GroupSpec::contact(2), spec, 1, 6);
  CHECK(t2.count(GenKind::Unit) == 8);
  CHECK(contains_all_of_level(span_of(t2, spec, QQ()), 2));
  CHECK(code_of([&] { (void)contact_tangent({P("x", q)}, GroupSpec::contact(2), spec, 1, 6); }) ==
        ErrorCode::MismatchedContext);
}

TEST_CASE("matrix_tangent examples") {
  auto spec1 = FiltrationSpec::madic(1);
  auto c1 = ctx(QQ(), 1, 6);
  auto t = matrix_tangent({P("x", c1)}, GroupSpec::matrix(1, 1), spec1, 1, 6);
  CHECK(t.count(GenKind::Left) == 1);
  CHECK(t.count(GenKind::Right) == 1);
  CHECK(t.count(GenKind::Derivation) == 1);
  auto s = span_of(t, spec1, QQ());
  CHECK(contains_all_of_level(s, 2));
  CHECK(!s.contains(JetVector{P("x", c1)}));

  auto unit = matrix_tangent({P("1", c1)}, GroupSpec::matrix(1, 1), spec1, 1, 6);
  CHECK(contains_all_of_level(span_of(unit, spec1, QQ()), 1));

  auto spec = FiltrationSpec::madic(2);
  auto c = ctx(QQ(), 2, 6);
  JetVector a{P("x", c), Jet(c), Jet(c), P("y", c)};
  auto tm = matrix_tangent(a, GroupSpec::matrix(2, 2), spec, 1, 6);
  // Left and right: 4 matrix units, 2 multipliers each; derivations: 6 minus those killing A.
  CHECK(tm.count(GenKind::Left) == 8);
  CHECK(tm.count(GenKind::Right) == 8);
  CHECK(tm.count(GenKind::Derivation) == 6);
  CHECK(tm.generators.size() == 22);
  CHECK(code_of([&] { (void)matrix_tangent(a, GroupSpec::matrix(1, 2), spec, 1, 6); }) ==
        ErrorCode::MismatchedContext);
}

TEST_CASE("log_derivations examples") {
  auto spec = FiltrationSpec::madic(2);
  const int D = 8;
  auto c = ctx(QQ(), 2, D);
  auto xis = log_derivations({P("x", c)}, spec, 0, D);
  auto got = derivation_span(xis, 2, QQ(), D, false);
  // <x d/dx, d/dy> as an R-module, truncated.
  auto closed = derivation_span({Derivation{{P("x", c), Jet(c)}}, Derivation{{Jet(c), P("1", c)}}}, 2, QQ(), D, true);
  for (int k = 0; k <= D; ++k) {
    CHECK(dim_in_degree(got, k) == dim_in_degree(closed, k));
    CHECK(dim_in_degree(got, k) == static_cast<std::size_t>(k == 0 ? 1 : 2 * k + 1));
  }
  for (const auto& r : closed.rows()) CHECK(got.contains(r));

  auto lvl1 = derivation_span(log_derivations({P("x", c)}, spec, 1, D), 2, QQ(), D, false);
  for (int k = 0; k <= D; ++k) CHECK(dim_in_degree(lvl1, k) == static_cast<std::size_t>(k < 2 ? 0 : 2 * k + 1));

  auto whole = derivation_span(log_derivations({P("x", c), P("y", c)}, spec, 1, D), 2, QQ(), D, false);
  for (int k = 0; k <= D; ++k) CHECK(dim_in_degree(whole, k) == static_cast<std::size_t>(k < 2 ? 0 : 2 * (k + 1)));

  auto all0 = derivation_span(log_derivations({P("x", c), P("y", c)}, spec, 0, D), 2, QQ(), D, false);
  // Preserving m forbids constant coefficients.
  CHECK(all0.rank() == static_cast<std::size_t>(2 * (monomials_up_to(2, D).size() - 1)));
}

TEST_CASE("logarithmic closure") {
  std::mt19937 rng(41);
  auto spec = FiltrationSpec::madic(2);
  const int D = 7;
  for (Field fld : {QQ(), F(3)}) {
    auto c = ctx(fld, 2, D);
    std::vector<Jet> ideal{P("x^2-y^3", c), P("x*y", c)};
    auto xis = log_derivations(ideal, spec, 1, D);
    CHECK(!xis.empty());
    auto coords = std::make_shared<const Coordinates>(spec, 1, D);
    auto span = saturate_span({{ideal[0]}, {ideal[1]}}, coords, fld);
    for (const auto& xi : xis) {
      for (const auto& g : ideal) CHECK(span.contains_modulo(to_row(*coords, {apply(xi, g)}), D + 1));
      for (int t = 0; t < 3; ++t) {
        Jet h = random_jet(rng, c, 3);
        for (const auto& g : ideal)
          for (const auto& g2 : ideal) {
            Jet img = apply(xi, g * g2 * h);
            CHECK(span.contains_modulo(to_row(*coords, {img}), D));
          }
      }
    }
  }
}

TEST_CASE("level filtration of tangent modules") {
  auto spec = FiltrationSpec::madic(2);
  const int D = 8;
  auto c = ctx(QQ(), 2, D);
  for (const char* g : {"x^3+y^3", "x^2*y+y^4", "x^2+y^5"}) {
    JetVector z{P(g, c)};
    for (auto group : {GroupSpec::right(), GroupSpec::contact(1)}) {
      auto base = tangent_span(tangent_module(z, group, spec, 1, D), spec, QQ());
      Order oz = filt_order(z, spec);
      for (int k = 1; k <= 3; ++k) {
        auto tk = tangent_module(z, group, spec, k, D);
        for (const auto& gen : tk.generators) {
          CHECK(base.contains(gen.image));
          Order o = filt_order(gen.image, spec);
          CHECK(*o >= *oz + k);
        }
      }
    }
  }
}

TEST_CASE("characteristic zero and large p agree") {
  auto spec = FiltrationSpec::madic(2);
  const int D = 9;
  for (const char* g : {"x^3+y^3", "x^2*y+y^4", "x^4+x*y^3+2*y^5", "x^2+y^5"}) {
    auto cq = ctx(QQ(), 2, D);
    auto cp = ctx(F(11), 2, D);
    auto sq = tangent_span(right_tangent({P(g, cq)}, GroupSpec::right(), spec, 1, D), spec, QQ());
    auto sp = tangent_span(right_tangent({P(g, cp)}, GroupSpec::right(), spec, 1, D), spec, F(11));
    for (int k = 0; k <= D; ++k) CHECK(dim_in_degree(sq, k) == dim_in_degree(sp, k));
  }
}

TEST_CASE("contact span contains the right span") {
  std::mt19937 rng(42);
  auto spec = FiltrationSpec::madic(2);
  const int D = 7;
  for (Field fld : {QQ(), F(2), F(3)}) {
    auto c = ctx(fld, 2, D);
    for (int t = 0; t < 5; ++t) {
      JetVector z{random_jet(rng, c, 4, 2)};
      if (is_zero(z)) continue;
      auto r = tangent_span(right_tangent(z, GroupSpec::right(), spec, 1, D), spec, fld);
      auto k = tangent_span(contact_tangent(z, GroupSpec::contact(1), spec, 1, D), spec, fld);
      for (const auto& row : r.rows()) CHECK(k.contains(row));
      CHECK(k.rank() >= r.rank());
    }
  }
}

TEST_CASE("relative and quotient ideals") {
  auto spec = FiltrationSpec::madic(2);
  const int D = 8;
  auto c = ctx(QQ(), 2, D);
  GroupSpec rel = GroupSpec::right();
  rel.relative_ideal = {P("x", c)};
  auto t = right_tangent({P("x^3+y^3", c)}, rel, spec, 1, D);
  CHECK(!t.diagnostics.empty());
  for (const auto& g : t.generators) CHECK(g.monomial == false);

  GroupSpec quo = GroupSpec::right();
  quo.quotient_ideal = {P("x*y", c)};
  auto tq = right_tangent({P("x^3+y^3", c)}, quo, spec, 1, D);
  CHECK(tq.count(GenKind::Quotient) == 1);

  GroupSpec bad = GroupSpec::right();
  bad.relative_ideal = {P("1+x", c)};
  CHECK(code_of([&] { (void)right_tangent({P("x^3", c)}, bad, spec, 1, D); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("weighted and chain tangents") {
  auto c = ctx(QQ(), 2, 10);
  auto w = FiltrationSpec::weighted({2, 3});
  auto tw = right_tangent({P("x^3+y^2", c)}, GroupSpec::right(), w, 1, 10);
  for (const auto& g : tw.generators) CHECK(*filt_order(g.image, w) >= 6 + 1);
  auto chain = FiltrationSpec::chain(2, {Monomial(2, {2, 0}), Monomial(2, {1, 1}), Monomial(2, {0, 2})},
                                     {Monomial(2, {1, 0}), Monomial(2, {0, 1})});
  auto tc = right_tangent({P("x^3+y^3", c)}, GroupSpec::right(), chain, 1, 10);
  CHECK(!tc.diagnostics.empty());
}
