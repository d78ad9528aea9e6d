#include "germdet/jet.hpp"

#include <algorithm>

#include "germdet/errors.hpp"

namespace germdet {

Jet::Jet(const JetContext& ctx) : ctx_(ctx) {
  if (ctx.nvars < 0 || ctx.nvars > kMaxVars)
    throw Error(ErrorCode::InvalidArgument,
                "at most " + std::to_string(kMaxVars) + " variables are supported");
  if (ctx.cap < 0) throw Error(ErrorCode::InvalidArgument, "degree cap must be non-negative");
}

Jet Jet::constant(const JetContext& ctx, const Scalar& c) {
  Jet j(ctx);
  j.add_term(Monomial(ctx.nvars), c);
  return j;
}

Jet Jet::variable(const JetContext& ctx, int i) {
  Jet j(ctx);
  j.add_term(Monomial::variable(ctx.nvars, i), Scalar::one(ctx.field));
  return j;
}

Jet Jet::monomial(const JetContext& ctx, const Monomial& m, const Scalar& c) {
  Jet j(ctx);
  j.add_term(m, c);
  return j;
}

Scalar Jet::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar::zero(ctx_.field) : it->second;
}

Scalar Jet::constant_term() const { return coefficient(Monomial(ctx_.nvars)); }

void Jet::add_term(const Monomial& m, const Scalar& c) {
  if (m.nvars() != ctx_.nvars) throw Error(ErrorCode::MismatchedContext, "monomial nvars differ");
  if (m.degree() > ctx_.cap || c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Jet::require_same(const Jet& o) const {
  if (!(ctx_ == o.ctx_))
    throw Error(ErrorCode::MismatchedContext, "jets differ in field, nvars or degree cap");
}

Jet Jet::operator-() const {
  Jet r(ctx_);
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same(b);
  Jet r(a.ctx_);
  const int cap = a.ctx_.cap;
  for (const auto& [ma, ca] : a.terms_) {
    if (ma.degree() > cap) break;
    for (const auto& [mb, cb] : b.terms_) {
      if (ma.degree() + mb.degree() > cap) break;
      r.add_term(ma * mb, ca * cb);
    }
  }
  return r;
}

Jet Jet::scaled(const Scalar& c) const {
  Jet r(ctx_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, v * c);
  return r;
}

Jet Jet::times_monomial(const Monomial& mono) const {
  Jet r(ctx_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() + mono.degree() > ctx_.cap) break;
    r.terms_.emplace_hint(r.terms_.end(), m * mono, c);
  }
  return r;
}

Jet Jet::truncated(int d) const {
  Jet r(ctx_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > d) break;
    r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet Jet::homogeneous_part(int d) const {
  Jet r(ctx_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > d) break;
    if (m.degree() == d) r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet Jet::with_cap(int cap) const {
  JetContext ctx = ctx_;
  ctx.cap = cap;
  Jet r(ctx);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > cap) break;
    r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet jet_add(const Jet& a, const Jet& b) { return a + b; }
Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }

Jet partial_derivative(const Jet& f, int i) {
  if (i < 0 || i >= f.nvars()) throw Error(ErrorCode::IndexOutOfRange, "variable index out of range");
  Jet r(f.context());
  for (const auto& [m, c] : f.terms()) {
    if (m[i] == 0) continue;
    Monomial q = m;
    q.set(i, m[i] - 1);
    r.add_term(q, c * Scalar(f.field(), static_cast<long>(m[i])));
  }
  return r;
}

Jet power(const Jet& f, int e) {
  Jet r = Jet::constant(f.context(), 1);
  Jet base = f;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

namespace {

using TermList = std::vector<std::pair<Monomial, Scalar>>;

struct PowerCache {
  const Jet* base;
  std::vector<Jet> powers;
  const Jet& get(int e) {
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * *base);
    return powers[static_cast<std::size_t>(e)];
  }
};

// Horner evaluation in variable v, recursing into the remaining variables.
Jet horner(const TermList& terms, int v, std::vector<PowerCache>& cache, const JetContext& ctx) {
  if (terms.empty()) return Jet(ctx);
  if (v == ctx.nvars) {
    Scalar s = Scalar::zero(ctx.field);
    for (const auto& t : terms) s += t.second;
    return Jet::constant(ctx, s);
  }
  std::map<int, TermList, std::greater<int>> groups;
  for (const auto& t : terms) groups[t.first[v]].push_back(t);
  Jet result(ctx);
  int prev = groups.begin()->first;
  for (const auto& [e, group] : groups) {
    if (prev > e) result = result * cache[static_cast<std::size_t>(v)].get(prev - e);
    result += horner(group, v + 1, cache, ctx);
    prev = e;
  }
  if (prev > 0) result = result * cache[static_cast<std::size_t>(v)].get(prev);
  return result;
}

}  // namespace

Jet substitute(const Jet& f, const std::vector<Jet>& phi) {
  if (static_cast<int>(phi.size()) != f.nvars())
    throw Error(ErrorCode::MismatchedContext, "substitution needs one jet per variable");
  for (const auto& p : phi) {
    if (!(p.context() == f.context()))
      throw Error(ErrorCode::MismatchedContext, "substitution jets differ in context");
    if (!p.constant_term().is_zero())
      throw Error(ErrorCode::NonLocalSubstitution, "substituted jet has a nonzero constant term");
  }
  std::vector<PowerCache> cache;
  cache.reserve(phi.size());
  for (const auto& p : phi) cache.push_back(PowerCache{&p, {Jet::constant(f.context(), 1)}});
  TermList terms(f.terms().begin(), f.terms().end());
  return horner(terms, 0, cache, f.context());
}

Order total_order(const Jet& f) {
  if (f.is_zero()) return std::nullopt;
  return f.terms().begin()->first.degree();
}

Order total_order(const JetVector& v) {
  Order best;
  for (const auto& j : v) {
    Order o = total_order(j);
    if (o && (!best || *o < *best)) best = o;
  }
  return best;
}

JetVector substitute(const JetVector& v, const std::vector<Jet>& phi) {
  JetVector r;
  r.reserve(v.size());
  for (const auto& j : v) r.push_back(substitute(j, phi));
  return r;
}

JetVector operator+(const JetVector& a, const JetVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::MismatchedContext, "vector ranks differ");
  JetVector r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

JetVector operator-(const JetVector& a, const JetVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::MismatchedContext, "vector ranks differ");
  JetVector r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

bool is_zero(const JetVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Jet& j) { return j.is_zero(); });
}

JetMatrix JetMatrix::identity(const JetContext& ctx, int n) {
  JetMatrix m = zero(ctx, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Jet::constant(ctx, 1);
  return m;
}

JetMatrix JetMatrix::zero(const JetContext& ctx, int rows, int cols) {
  JetMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.entries.assign(static_cast<std::size_t>(rows * cols), Jet(ctx));
  return m;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols != b.rows) throw Error(ErrorCode::MismatchedContext, "matrix shapes do not compose");
  if (a.entries.empty() || b.entries.empty()) {
    JetMatrix r;
    r.rows = a.rows;
    r.cols = b.cols;
    return r;
  }
  JetMatrix r = JetMatrix::zero(a.entries.front().context(), a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Jet& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols; ++j)
        if (!b.at(k, j).is_zero()) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(ErrorCode::MismatchedContext, "matrix shapes differ");
  JetMatrix r = a;
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] += b.entries[i];
  return r;
}

JetMatrix substitute(const JetMatrix& a, const std::vector<Jet>& phi) {
  JetMatrix r = a;
  for (auto& e : r.entries) e = substitute(e, phi);
  return r;
}

JetVector apply(const JetMatrix& a, const JetVector& v) {
  if (static_cast<int>(v.size()) != a.cols)
    throw Error(ErrorCode::MismatchedContext, "matrix and vector shapes differ");
  JetVector r;
  for (int i = 0; i < a.rows; ++i) {
    Jet acc(v.front().context());
    for (int k = 0; k < a.cols; ++k)
      if (!a.at(i, k).is_zero()) acc += a.at(i, k) * v[static_cast<std::size_t>(k)];
    r.push_back(std::move(acc));
  }
  return r;
}

}  // namespace germdet
