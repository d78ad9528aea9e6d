#include "germdet/determinacy.hpp"
#include "germdet/oracle.hpp"
#include "support.hpp"

using namespace gt;

namespace {

DeterminacyReport analyze(const std::string& g, const Field& fld, int nvars, const GroupSpec& group, int D) {
  auto c = ctx(fld, nvars, D);
  return determinacy_order({P(g, c)}, group, FiltrationSpec::madic(nvars), D);
}

const std::vector<std::string> kCorpus2{"x^3+y^3", "x^2+y^3", "x^2+y^4", "x^2*y+y^4", "x^3+x*y^3",
                                        "x^2+y^5", "x^4+y^4", "x^3+y^4", "x^2*y+y^5", "x^3+x*y^4+y^5"};

}  // namespace

TEST_CASE("infinitesimal_level examples") {
  auto c = ctx(QQ(), 2, 12);
  auto n = infinitesimal_level({P("x^3+y^3", c)}, GroupSpec::right(), FiltrationSpec::madic(2), 12);
  CHECK(n.found == 3);
  CHECK(n.exact);
  auto c2 = ctx(F(2), 1, 12);
  CHECK(infinitesimal_level({P("x^2+x^7", c2)}, GroupSpec::right(), FiltrationSpec::madic(1), 12).found == 7);
  auto none = infinitesimal_level({P("x^2", c2)}, GroupSpec::right(), FiltrationSpec::madic(1), 12);
  CHECK(!none.found);
  CHECK(none.cap == 10);
  auto capped = infinitesimal_level({P("x^3+y^3", c)}, GroupSpec::right(), FiltrationSpec::madic(2), 12, 2);
  CHECK(!capped.found);
  CHECK(capped.cap == 2);
}

TEST_CASE("determinacy_order examples") {
  auto a = analyze("x^3+y^3", QQ(), 2, GroupSpec::right(), 12);
  CHECK(a.mode == Mode::LieType);
  CHECK(a.determinacy_order == 3);
  CHECK(a.ord_z == 3);
  CHECK(a.tangent_generators == 6);

  auto b = analyze("x^2+x^7", F(2), 1, GroupSpec::right(), 16);
  CHECK(b.mode == Mode::WeakLieType);
  CHECK(b.n_inf.found == 7);
  CHECK(b.determinacy_order == 12);

  auto k = analyze("x^2+y^3", F(2), 2, GroupSpec::contact(1), 12);
  CHECK(k.n_inf.found == 3);
  CHECK(k.determinacy_order == 4);

  auto none = analyze("x^2", F(2), 1, GroupSpec::right(), 12);
  CHECK(!none.determinacy_order);
  CHECK(!none.diagnostics.empty());
}

TEST_CASE("milnor_tjurina examples") {
  auto spec = FiltrationSpec::madic(2);
  auto q = ctx(QQ(), 2, 12);
  auto a = milnor_tjurina(P("x^3+y^3", q), spec, 12);
  CHECK(a.mu.value == 4);
  CHECK(a.tau.value == 4);
  CHECK(a.mu_bound == 5);
  CHECK(a.tau_bound == 5);
  auto b = milnor_tjurina(P("x^2+y^3", q), spec, 12);
  CHECK(b.mu.finite);
  CHECK(b.mu.value == 2);
  CHECK(b.tau.value == 2);
  auto f2 = ctx(F(2), 2, 12);
  auto c = milnor_tjurina(P("x^2+y^3", f2), spec, 12);
  CHECK(!c.mu.finite);
  CHECK(!c.mu_bound);
  CHECK(c.tau.finite);
  CHECK(c.tau.value == 4);
  CHECK(c.tau_bound == 2 * 4 - 2 + 2);
  CHECK(code_of([&] { (void)milnor_tjurina(P("x^2", q), FiltrationSpec::weighted({1, 2}), 12); }) ==
        ErrorCode::UnsupportedFiltration);
}

TEST_CASE("map_indeterminacy examples") {
  auto q = ctx(QQ(), 2, 6);
  auto ok = map_indeterminacy({P("x", q), P("y", q)});
  CHECK(!ok.obstructed);
  CHECK(ok.rank == 2);
  CHECK(ok.note == "1-determined");
  auto sq = map_indeterminacy({P("x", q), P("y^2", q)});
  CHECK(sq.obstructed);
  CHECK(sq.reason == "component in m^2");
  auto dep = map_indeterminacy({P("x+y", q), P("x+y", q)});
  CHECK(dep.obstructed);
  CHECK(dep.reason == "linear parts dependent");
  auto p = ctx(F(3), 2, 6);
  CHECK(code_of([&] { (void)map_indeterminacy({P("x", p), P("y", p)}); }) == ErrorCode::WrongCharacteristic);
}

TEST_CASE("stability_report examples") {
  auto q = ctx(QQ(), 2, 12);
  auto spec = FiltrationSpec::madic(2);
  CHECK(stability_report({P("x^3+y^3", q)}, GroupSpec::right(), spec, 12).level == 4);
  // The tangent image lies in m, so R itself is never inside it; I_1 is.
  auto unit = stability_report({P("1+x", q)}, GroupSpec::contact(1), spec, 12);
  CHECK(unit.level == 1);
  auto f2 = ctx(F(2), 1, 12);
  auto none = stability_report({P("x^2", f2)}, GroupSpec::right(), FiltrationSpec::madic(1), 12);
  CHECK(!none.level);
  CHECK(none.cap == 11);
}

TEST_CASE("bound dominance and stability cross-check") {
  for (Field fld : {QQ(), F(5)}) {
    for (const auto& g : kCorpus2) {
      auto r = analyze(g, fld, 2, GroupSpec::right(), 14);
      if (!r.n_inf.found) continue;
      REQUIRE(r.milnor_tjurina);
      const auto& mt = *r.milnor_tjurina;
      if (mt.mu.finite) {
        CHECK(*r.n_inf.found + 1 <= mt.mu.value + 2);
        CHECK(*r.determinacy_order <= *mt.mu_bound);
      }
      CHECK(*r.determinacy_order >= *r.n_inf.found);
      if (r.stability.level) CHECK(*r.stability.level == *r.n_inf.found + 1);
    }
  }
}

TEST_CASE("level is unchanged by high-order perturbations") {
  std::mt19937 rng(51);
  auto spec = FiltrationSpec::madic(2);
  const int D = 12;
  auto c = ctx(QQ(), 2, D);
  for (const auto& g : kCorpus2) {
    JetVector z{P(g, c)};
    auto base = infinitesimal_level(z, GroupSpec::right(), spec, D);
    if (!base.found) continue;
    for (int t = 0; t < 3; ++t) {
      Jet w = random_jet(rng, c, 4, *base.found + 2);
      auto moved = infinitesimal_level({z[0] + w}, GroupSpec::right(), spec, D);
      CHECK(moved.found == base.found);
    }
  }
}

TEST_CASE("determinacy dominates the finite-field oracle") {
  for (int p : {2, 3}) {
    const int D = p == 2 ? 10 : 7;
    auto c = ctx(F(p), 1, D);
    for (const char* g : {"x^2", "x^3", "x^2+x^3", "x^3+x^4", "x^2+x^5", "x^4", "x^3+x^5", "x^2+x^7"}) {
      for (auto group : {GroupSpec::right(), GroupSpec::contact(1)}) {
        auto r = determinacy_order({P(g, c)}, group, FiltrationSpec::madic(1), D);
        if (!r.determinacy_order) continue;
        auto o = brute_force_determinacy(P(g, c), group, D);
        CHECK(o.order <= *r.determinacy_order);
      }
    }
  }
}

TEST_CASE("weighted filtrations report the certificate") {
  auto c = ctx(QQ(), 2, 12);
  auto r = determinacy_order({P("x^2+y^3", c)}, GroupSpec::right(), FiltrationSpec::weighted({3, 2}), 12);
  CHECK(r.ord_z == 6);
  CHECK(!r.milnor_tjurina);
  CHECK(r.n_inf.found);
  auto p = ctx(F(2), 2, 12);
  auto map = determinacy_order({P("x", p), P("y", p)}, GroupSpec::right(), FiltrationSpec::madic(2), 12);
  CHECK(!map.map);
  bool skipped = false;
  for (const auto& d : map.diagnostics) skipped = skipped || d.find("skipped") != std::string::npos;
  CHECK(skipped);
}
