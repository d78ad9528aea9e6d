#include "germdet/oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "germdet/errors.hpp"

namespace germdet {

namespace {

constexpr int kMaxOracleDegree = 13;

// Dense truncated polynomial over F_p, p <= 3; two bits per coefficient.
struct Dense {
  int p;
  int cap;
  std::vector<int> c;

  Dense(int p_, int cap_) : p(p_), cap(cap_), c(static_cast<std::size_t>(cap_ + 1), 0) {}

  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int i = cap; i >= 0; --i) k = (k << 2) | static_cast<std::uint64_t>(c[static_cast<std::size_t>(i)]);
    return k;
  }
};

Dense mul(const Dense& a, const Dense& b) {
  Dense r(a.p, a.cap);
  for (int i = 0; i <= a.cap; ++i) {
    int ai = a.c[static_cast<std::size_t>(i)];
    if (!ai) continue;
    for (int j = 0; i + j <= a.cap; ++j) {
      int bj = b.c[static_cast<std::size_t>(j)];
      if (bj) r.c[static_cast<std::size_t>(i + j)] = (r.c[static_cast<std::size_t>(i + j)] + ai * bj) % a.p;
    }
  }
  return r;
}

// f(phi) by Horner.
Dense compose(const Dense& f, const Dense& phi) {
  Dense r(f.p, f.cap);
  for (int i = f.cap; i >= 0; --i) {
    r = mul(r, phi);
    r.c[0] = (r.c[0] + f.c[static_cast<std::size_t>(i)]) % f.p;
  }
  return r;
}

// Calls fn for every tuple of coefficients in F_p at positions [from, to].
template <class Fn>
void for_each_tail(Dense base, int from, int to, Fn&& fn) {
  if (from > to) {
    fn(base);
    return;
  }
  for (int v = 0; v < base.p; ++v) {
    base.c[static_cast<std::size_t>(from)] = v;
    for_each_tail(base, from + 1, to, fn);
  }
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

struct Orbit {
  std::unordered_set<std::uint64_t> keys;
  std::uint64_t group_size = 0;
};

Orbit enumerate_orbit(const Dense& f, bool contact, std::uint64_t budget) {
  const int p = f.p, cap = f.cap;
  int ord_all = -1, ord_shift = -1;
  for (int i = 0; i <= cap; ++i)
    if (f.c[static_cast<std::size_t>(i)]) {
      if (ord_all < 0) ord_all = i;
      if (i > 0 && ord_shift < 0) ord_shift = i;
    }
  int k_top = ord_shift < 0 ? 1 : std::min(cap, cap - ord_shift + 1);
  int unit_top = ord_all < 0 ? 0 : cap - ord_all;
  std::uint64_t right_count = ipow(static_cast<std::uint64_t>(p), std::max(0, k_top - 1));
  std::uint64_t unit_count = contact ? ipow(static_cast<std::uint64_t>(p), std::max(0, unit_top)) : 1;
  Orbit out;
  out.group_size = right_count * unit_count;
  if (right_count > budget || unit_count > budget || out.group_size > budget)
    throw Error(ErrorCode::TooLarge, "oracle enumeration of " + std::to_string(out.group_size) +
                                         " group elements exceeds the budget");
  std::vector<Dense> right_orbit;
  std::unordered_set<std::uint64_t> seen;
  Dense phi(p, cap);
  if (cap >= 1) phi.c[1] = 1;
  for_each_tail(phi, 2, k_top, [&](const Dense& ph) {
    Dense g = compose(f, ph);
    if (seen.insert(g.key()).second) right_orbit.push_back(g);
  });
  if (!contact) {
    out.keys = std::move(seen);
    return out;
  }
  Dense unit(p, cap);
  unit.c[0] = 1;
  for_each_tail(unit, 1, unit_top, [&](const Dense& u) {
    for (const auto& g : right_orbit) out.keys.insert(mul(u, g).key());
  });
  return out;
}

int exact_order(const Dense& f, const Orbit& orbit) {
  const int cap = f.cap;
  int order = cap;
  for (int n = cap - 1; n >= 0; --n) {
    // New perturbations: nonzero coefficient at x^(n+1), anything above.
    bool all = true;
    for (int lead = 1; lead < f.p && all; ++lead) {
      Dense w = f;
      w.c[static_cast<std::size_t>(n + 1)] = (w.c[static_cast<std::size_t>(n + 1)] + lead) % f.p;
      auto base = w;
      for_each_tail(base, n + 2, cap, [&](const Dense& t) {
        if (!all) return;
        Dense v = t;
        for (int i = n + 2; i <= cap; ++i)
          v.c[static_cast<std::size_t>(i)] = (f.c[static_cast<std::size_t>(i)] + t.c[static_cast<std::size_t>(i)]) % f.p;
        if (!orbit.keys.count(v.key())) all = false;
      });
    }
    if (!all) break;
    order = n;
  }
  return order;
}

}  // namespace

OracleResult brute_force_determinacy(const Jet& f, const GroupSpec& group, int degree, std::uint64_t budget) {
  if (f.nvars() != 1) throw Error(ErrorCode::InvalidArgument, "the oracle handles univariate germs only");
  if (f.field().is_rational() || f.field().characteristic() > 3)
    throw Error(ErrorCode::UnsupportedCombination, "the oracle runs over F_2 or F_3 only");
  if (degree < 1 || degree > kMaxOracleDegree)
    throw Error(ErrorCode::TooLarge, "oracle degree cap must lie in [1, 13]");
  bool contact = false;
  if (group.kind == GroupKind::Contact && group.components == 1) {
    contact = true;
  } else if (group.kind != GroupKind::Right) {
    throw Error(ErrorCode::UnsupportedCombination, "the oracle supports Right and Contact(1)");
  }
  if (!group.relative_ideal.empty() || !group.quotient_ideal.empty())
    throw Error(ErrorCode::UnsupportedCombination, "the oracle ignores relative and quotient ideals");
  const int p = static_cast<int>(f.field().characteristic());

  OracleResult out;
  out.degree = degree;
  for (int cap = std::max(1, degree - 2); cap <= degree; ++cap) {
    Dense d(p, cap);
    for (const auto& [m, c] : f.terms()) {
      if (m.degree() > cap) continue;
      mpq_class q = c.to_rational();
      long v = q.get_num().get_si() % p;
      d.c[static_cast<std::size_t>(m.degree())] = static_cast<int>((v + p) % p);
    }
    Orbit orbit = enumerate_orbit(d, contact, budget);
    int e = exact_order(d, orbit);
    out.history.emplace_back(cap, e);
    if (cap == degree) {
      out.order = e;
      out.group_size = orbit.group_size;
      out.orbit_size = orbit.keys.size();
    }
  }
  out.stable = out.history.size() == 3 &&
               std::all_of(out.history.begin(), out.history.end(),
                           [&](const auto& h) { return h.second == out.order; });
  return out;
}

}  // namespace germdet
