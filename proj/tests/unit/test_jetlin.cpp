#include <set>

#include "germdet/jetlin.hpp"
#include "support.hpp"

using namespace gt;

namespace {

std::vector<JetVector> singletons(const std::vector<Jet>& js) {
  std::vector<JetVector> out;
  for (const auto& j : js) out.push_back({j});
  return out;
}

std::vector<JetVector> msq_times_partials(const Jet& f) {
  std::vector<JetVector> out;
  const JetContext& c = f.context();
  for (int j = 0; j < f.nvars(); ++j)
    for (const auto& m : monomials_of_degree(f.nvars(), 2))
      out.push_back({partial_derivative(f, j).times_monomial(m)});
  (void)c;
  return out;
}

// Brute force: monomials up to the cap which no generator divides.
long outside_count(const std::vector<Monomial>& gens, int nvars, int cap, int* stable) {
  long n = 0;
  *stable = -1;
  for (int d = 0; d <= cap; ++d) {
    long here = 0;
    for (const auto& m : monomials_of_degree(nvars, d)) {
      bool in = false;
      for (const auto& g : gens) in = in || g.divides(m);
      if (!in) ++here;
    }
    if (here == 0 && *stable < 0 && d <= cap - 1) *stable = d;
    n += here;
  }
  return n;
}

}  // namespace

TEST_CASE("coordinates order columns by level") {
  Coordinates coords(FiltrationSpec::weighted({1, 2}), 2, 4);
  for (int col = 1; col < coords.size(); ++col) CHECK(coords.filt(col - 1) <= coords.filt(col));
  for (int level = 0; level < 9; ++level)
    for (int col = coords.level_start(level); col < coords.size(); ++col) CHECK(coords.filt(col) >= level);
  CHECK(coords.column(0, Monomial(2, {3, 2})) == -1);
  CHECK(code_of([&] { (void)coords.column(2, Monomial(2)); }) == ErrorCode::IndexOutOfRange);
  auto c = ctx(QQ(), 2, 4);
  JetVector v{P("x+2*y^3", c), P("-x*y", c)};
  CHECK(from_row(coords, to_row(coords, v), c) == v);
}

TEST_CASE("saturate_span examples") {
  auto c1 = ctx(QQ(), 1, 4);
  auto principal = saturate_span({{P("x^2", c1)}}, FiltrationSpec::madic(1), 4);
  CHECK(principal.rank() == 3);
  for (const char* m : {"x^2", "x^3", "x^4"}) CHECK(principal.contains(JetVector{P(m, c1)}));
  CHECK(!principal.contains(JetVector{P("x", c1)}));

  auto c2 = ctx(QQ(), 2, 2);
  auto pair = saturate_span({{P("x^2", c2), Jet(c2)}, {Jet(c2), P("y^2", c2)}}, FiltrationSpec::madic(2), 2);
  CHECK(pair.rank() == 2);

  auto c3 = ctx(F(2), 2, 4);
  Jet f = P("x^2+y^3", c3);
  auto span = saturate_span({{f}}, FiltrationSpec::madic(2), 4);
  std::vector<JetVector> multiples;
  for (const auto& m : monomials_up_to(2, 2)) multiples.push_back({f.times_monomial(m)});
  CHECK(span.rank() == multiples.size());
  for (const auto& v : multiples) CHECK(span.contains(v));
  CHECK(span.contains(JetVector{P("x^4", c3)}));
  CHECK(!span.contains(JetVector{P("y^3", c3)}));
  CHECK(code_of([&] { (void)saturate_span({{f}, {P("x", c2)}}, FiltrationSpec::madic(2), 4); }) ==
        ErrorCode::MismatchedContext);
}

TEST_CASE("contains_level examples") {
  auto c = ctx(QQ(), 2, 6);
  auto spec = FiltrationSpec::madic(2);
  auto span = saturate_span(msq_times_partials(P("x^3+y^3", c)), spec, 6);
  CHECK(contains_level(span, spec, 4, 6));
  CHECK(!contains_level(span, spec, 3, 6));

  auto coords = std::make_shared<const Coordinates>(spec, 1, 6);
  auto zero = saturate_span({{Jet(c)}}, coords, QQ());
  CHECK(zero.rank() == 0);
  for (int L = 0; L < 6; ++L) CHECK(!contains_level(zero, spec, L, 6));

  auto c1 = ctx(QQ(), 1, 3);
  auto s1 = saturate_span({{P("x^2", c1)}}, FiltrationSpec::madic(1), 3);
  CHECK(code_of([&] { (void)contains_level(s1, FiltrationSpec::madic(1), 5, 3); }) == ErrorCode::CapTooSmall);
  CHECK(code_of([&] { (void)contains_level(s1, FiltrationSpec::madic(1), 3, 3); }) == ErrorCode::CapTooSmall);
  CHECK(contains_level(s1, FiltrationSpec::madic(1), 2, 3));
}

TEST_CASE("colength examples") {
  auto spec = FiltrationSpec::madic(2);
  auto c = ctx(QQ(), 2, 8);
  auto r = colength({P("x^2", c), P("y^2", c)}, spec, 8);
  CHECK(r.finite);
  CHECK(r.value == 4);
  std::set<Monomial> basis(r.basis.begin(), r.basis.end());
  CHECK(basis == std::set<Monomial>{Monomial(2, {0, 0}), Monomial(2, {1, 0}), Monomial(2, {0, 1}),
                                    Monomial(2, {1, 1})});

  auto jac = colength({P("2*x", c), P("3*y^2", c)}, spec, 8);
  CHECK(jac.finite);
  CHECK(jac.value == 2);

  auto c6 = ctx(F(2), 2, 6);
  auto ns = colength({P("y^2", c6)}, spec, 6);
  CHECK(!ns.finite);
  CHECK(ns.value == 7 + 6);
}

TEST_CASE("colength agrees with quotient enumeration for monomial ideals") {
  auto spec2 = FiltrationSpec::madic(2);
  std::vector<Monomial> pool;
  for (const auto& m : monomials_up_to(2, 4))
    if (m.degree() > 0) pool.push_back(m);
  int checked = 0;
  for (int cap = 3; cap <= 8; cap += 5) {
    auto c = ctx(F(3), 2, cap);
    for (std::size_t a = 0; a < pool.size(); ++a)
      for (std::size_t b = a; b < pool.size(); b += 2)
        for (std::size_t e = b; e < pool.size(); e += 3) {
          std::vector<Monomial> gens{pool[a], pool[b], pool[e]};
          std::vector<Jet> jets;
          for (const auto& g : gens) jets.push_back(Jet::monomial(c, g));
          int stable;
          long expected = outside_count(gens, 2, cap, &stable);
          auto r = colength(jets, spec2, cap);
          CHECK(r.finite == (stable >= 0));
          if (r.finite) {
            int s2;
            CHECK(r.value == outside_count(gens, 2, stable, &s2));
            CHECK(r.stable_degree == stable);
          } else {
            CHECK(r.value == expected);
          }
          ++checked;
        }
  }
  CHECK(checked > 100);
  auto c1 = ctx(QQ(), 1, 8);
  auto uni = colength({P("x^5", c1)}, FiltrationSpec::madic(1), 8);
  CHECK(uni.finite);
  CHECK(uni.value == 5);
}

TEST_CASE("row reduction is idempotent") {
  std::mt19937 rng(31);
  for (Field fld : {QQ(), F(2), F(5)}) {
    auto c = ctx(fld, 2, 6);
    std::vector<JetVector> gens;
    for (int t = 0; t < 3; ++t) gens.push_back({random_jet(rng, c, 3, 1), random_jet(rng, c, 3, 1)});
    auto span = saturate_span(gens, FiltrationSpec::madic(2), 6);
    SpanBuilder b(span.coordinates_ptr(), fld);
    for (const auto& r : span.rows()) b.add(r);
    auto again = b.build();
    CHECK(again.rows() == span.rows());
    for (const auto& r : span.rows()) {
      CHECK(span.contains(r));
      CHECK(span.is_pivot(r.front().first));
      // Reduced: no other row has an entry in this pivot column.
      int hits = 0;
      for (const auto& s : span.rows())
        for (const auto& [col, v] : s) hits += col == r.front().first;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("saturate_span is monotone in generators and cap") {
  std::mt19937 rng(32);
  auto spec = FiltrationSpec::madic(2);
  for (int t = 0; t < 6; ++t) {
    auto c = ctx(QQ(), 2, 6);
    std::vector<JetVector> gens{{random_jet(rng, c, 3, 1)}, {random_jet(rng, c, 3, 1)}};
    auto small = saturate_span({gens[0]}, spec, 6);
    auto big = saturate_span(gens, spec, 6);
    for (const auto& r : small.rows()) CHECK(big.contains(r));

    auto c7 = ctx(QQ(), 2, 7);
    std::vector<JetVector> gens7;
    for (const auto& g : gens) gens7.push_back({g[0].with_cap(7)});
    auto wide = saturate_span(gens7, spec, 7);
    SpanBuilder restricted(big.coordinates_ptr(), QQ());
    for (const auto& r : wide.rows()) {
      JetVector v = from_row(wide.coordinates(), r, c7);
      restricted.add(JetVector{v[0].with_cap(6)});
    }
    auto res = restricted.build();
    CHECK(res.rank() == big.rank());
    for (const auto& r : res.rows()) CHECK(big.contains(r));
  }
}

TEST_CASE("Nakayama stabilization under larger caps") {
  std::mt19937 rng(33);
  auto spec = FiltrationSpec::madic(2);
  std::vector<std::string> germs{"x^3+y^3", "x^2+y^5", "x^2*y+y^4", "x^4+x*y^3"};
  for (int t = 0; t < 4; ++t) {
    auto c = ctx(QQ(), 2, 8);
    germs.push_back(S(random_jet(rng, c, 3, 2)));
  }
  for (const auto& g : germs) {
    for (int L = 1; L <= 5; ++L) {
      std::vector<bool> verdicts;
      for (int cap = 8; cap <= 10; ++cap) {
        auto c = ctx(QQ(), 2, cap);
        auto span = saturate_span(msq_times_partials(P(g, c)), spec, cap);
        verdicts.push_back(contains_level(span, spec, L, cap));
      }
      CHECK(verdicts[0] == verdicts[1]);
      CHECK(verdicts[1] == verdicts[2]);
    }
  }
}

TEST_CASE("provenance echelon reproduces targets") {
  auto c = ctx(QQ(), 2, 6);
  auto spec = FiltrationSpec::madic(2);
  auto coords = std::make_shared<const Coordinates>(spec, 1, 6);
  ProvenanceEchelon pe(coords, QQ());
  std::vector<SparseRow> rows{to_row(*coords, {P("x^2+y^3", c)}), to_row(*coords, {P("y^2", c)}),
                              to_row(*coords, {P("x*y", c)})};
  for (int i = 0; i < 3; ++i) pe.add(rows[static_cast<std::size_t>(i)], i);
  SparseRow target = to_row(*coords, {P("3*x^2-x*y+y^4", c)});
  auto combo = pe.solve_piece(target, 2);
  REQUIRE(combo);
  SparseRow sum;
  for (const auto& [origin, coef] : *combo) row_axpy(sum, coef, rows[static_cast<std::size_t>(origin)]);
  row_axpy(sum, Scalar(QQ(), -1L), target);
  CHECK((sum.empty() || coords->filt(sum.front().first) >= 3));
  CHECK(!pe.solve_piece(to_row(*coords, {P("x^3", c)}), 3).has_value());
}
