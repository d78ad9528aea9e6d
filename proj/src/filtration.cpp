#include "germdet/filtration.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "germdet/errors.hpp"
#include "germdet/poly_io.hpp"

namespace germdet {

struct FiltrationSpec::Cache {
  std::mutex mu;
  std::unordered_map<std::uint64_t, int> order;
  std::unordered_map<std::uint64_t, int> a_power;
};

FiltrationSpec FiltrationSpec::madic(int nvars) {
  if (nvars < 1 || nvars > kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "unsupported number of variables");
  FiltrationSpec s;
  s.kind_ = FiltrationKind::MAdic;
  s.nvars_ = nvars;
  return s;
}

FiltrationSpec FiltrationSpec::weighted(std::vector<int> weights) {
  if (weights.empty() || static_cast<int>(weights.size()) > kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "unsupported number of weights");
  for (int w : weights)
    if (w < 1) throw Error(ErrorCode::InvalidArgument, "weights must be positive integers");
  FiltrationSpec s;
  s.kind_ = FiltrationKind::Weighted;
  s.nvars_ = static_cast<int>(weights.size());
  s.weights_ = std::move(weights);
  return s;
}

FiltrationSpec FiltrationSpec::chain(int nvars, std::vector<Monomial> i1_gens,
                                     std::vector<Monomial> a_gens) {
  if (nvars < 1 || nvars > kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "unsupported number of variables");
  if (i1_gens.empty() || a_gens.empty())
    throw Error(ErrorCode::InvalidChain, "chain filtration needs generators for I1 and A");
  for (const auto& m : i1_gens)
    if (m.nvars() != nvars) throw Error(ErrorCode::MismatchedContext, "generator nvars differ");
  for (const auto& m : a_gens) {
    if (m.nvars() != nvars) throw Error(ErrorCode::MismatchedContext, "generator nvars differ");
    if (m.degree() == 0) throw Error(ErrorCode::InvalidChain, "A must lie in the maximal ideal");
  }
  std::sort(i1_gens.begin(), i1_gens.end());
  i1_gens.erase(std::unique(i1_gens.begin(), i1_gens.end()), i1_gens.end());
  std::sort(a_gens.begin(), a_gens.end());
  a_gens.erase(std::unique(a_gens.begin(), a_gens.end()), a_gens.end());
  FiltrationSpec s;
  s.kind_ = FiltrationKind::Chain;
  s.nvars_ = nvars;
  s.i1_ = std::move(i1_gens);
  s.a_ = std::move(a_gens);
  s.cache_ = std::make_shared<Cache>();
  return s;
}

int FiltrationSpec::a_power(const Monomial& m) const {
  if (kind_ != FiltrationKind::Chain) return 0;
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->a_power.find(m.key());
    if (it != cache_->a_power.end()) return it->second;
  }
  int best = 0;
  for (const auto& g : a_)
    if (g.divides(m)) best = std::max(best, 1 + a_power(g.quotient_of(m)));
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->a_power[m.key()] = best;
  return best;
}

int FiltrationSpec::monomial_order(const Monomial& m) const {
  switch (kind_) {
    case FiltrationKind::MAdic:
      return m.degree();
    case FiltrationKind::Weighted: {
      int s = 0;
      for (int i = 0; i < nvars_; ++i) s += weights_[static_cast<std::size_t>(i)] * m[i];
      return s;
    }
    case FiltrationKind::Chain: {
      {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->order.find(m.key());
        if (it != cache_->order.end()) return it->second;
      }
      int best = 0;
      for (const auto& g : i1_)
        if (g.divides(m)) best = std::max(best, 1 + a_power(g.quotient_of(m)));
      std::lock_guard<std::mutex> lock(cache_->mu);
      cache_->order[m.key()] = best;
      return best;
    }
  }
  return 0;
}

bool FiltrationSpec::is_m_primary() const {
  if (kind_ != FiltrationKind::Chain) return true;
  auto covers = [&](const std::vector<Monomial>& gens) {
    for (int k = 0; k < nvars_; ++k) {
      bool found = false;
      for (const auto& g : gens)
        if (g[k] == g.degree() && g.degree() > 0) found = true;
      if (!found) return false;
    }
    return true;
  };
  return covers(i1_) && covers(a_);
}

int FiltrationSpec::nakayama_step(int level) const {
  if (kind_ != FiltrationKind::Weighted) return level + 1;
  int wmax = *std::max_element(weights_.begin(), weights_.end());
  for (int cand = level + 1; cand < level + wmax; ++cand) {
    bool ok = true;
    for (const auto& g : minimal_generators(*this, cand, cand)) {
      bool inside = false;
      for (int k = 0; k < nvars_ && !inside; ++k) {
        if (g[k] == 0) continue;
        Monomial q = g;
        q.set(k, g[k] - 1);
        inside = monomial_order(q) >= level;
      }
      if (!inside) {
        ok = false;
        break;
      }
    }
    if (ok) return cand;
  }
  return level + wmax;
}

std::optional<int> FiltrationSpec::degree_for_level(int level) const {
  if (level <= 0) return 0;
  switch (kind_) {
    case FiltrationKind::MAdic:
      return level;
    case FiltrationKind::Weighted: {
      int wmin = *std::min_element(weights_.begin(), weights_.end());
      return (level + wmin - 1) / wmin;
    }
    case FiltrationKind::Chain: {
      if (!is_m_primary()) return std::nullopt;
      for (int d = 1; d <= kMaxExponent; ++d) {
        bool all = true;
        for (const auto& m : monomials_of_degree(nvars_, d))
          if (monomial_order(m) < level) {
            all = false;
            break;
          }
        if (all) return d;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string FiltrationSpec::describe(const std::vector<std::string>& vars) const {
  switch (kind_) {
    case FiltrationKind::MAdic:
      return "m-adic";
    case FiltrationKind::Weighted: {
      std::string s = "weighted:";
      for (std::size_t i = 0; i < weights_.size(); ++i)
        s += (i ? "," : "") + std::to_string(weights_[i]);
      return s;
    }
    case FiltrationKind::Chain: {
      JetContext ctx{Field::rationals(), nvars_, kMaxExponent};
      auto list = [&](const std::vector<Monomial>& gens) {
        std::string s;
        for (std::size_t i = 0; i < gens.size(); ++i)
          s += (i ? "," : "") + format_polynomial(Jet::monomial(ctx, gens[i]), vars);
        return s;
      };
      return "chain:I1=" + list(i1_) + ";A=" + list(a_);
    }
  }
  return "";
}

Order filt_order(const Jet& f, const FiltrationSpec& spec) {
  if (f.nvars() != spec.nvars())
    throw Error(ErrorCode::MismatchedContext, "jet and filtration differ in nvars");
  Order best;
  for (const auto& [m, c] : f.terms()) {
    int o = spec.monomial_order(m);
    if (!best || o < *best) best = o;
    if (spec.kind() == FiltrationKind::MAdic) break;
  }
  return best;
}

Order filt_order(const JetVector& v, const FiltrationSpec& spec) {
  Order best;
  for (const auto& j : v) {
    Order o = filt_order(j, spec);
    if (o && (!best || *o < *best)) best = o;
  }
  return best;
}

std::vector<Monomial> level_monomials(const FiltrationSpec& spec, int level, int cap) {
  std::vector<Monomial> out;
  for (const auto& m : monomials_up_to(spec.nvars(), cap))
    if (spec.monomial_order(m) >= level) out.push_back(m);
  return out;
}

std::vector<Monomial> minimal_generators(const FiltrationSpec& spec, int level, int cap) {
  std::vector<Monomial> out;
  for (const auto& m : monomials_up_to(spec.nvars(), cap)) {
    if (spec.monomial_order(m) < level) continue;
    bool minimal = true;
    for (int k = 0; k < spec.nvars() && minimal; ++k) {
      if (m[k] == 0) continue;
      Monomial q = m;
      q.set(k, m[k] - 1);
      if (spec.monomial_order(q) >= level) minimal = false;
    }
    if (minimal) out.push_back(m);
  }
  return out;
}

namespace {

// x^alpha * g / x_j; requires g_j >= 1.
Monomial shifted(const Monomial& alpha, const Monomial& g, int j) {
  Monomial q = g;
  q.set(j, g[j] - 1);
  return alpha * q;
}

}  // namespace

int derivation_level(const FiltrationSpec& spec, const Monomial& alpha, int j) {
  if (j < 0 || j >= spec.nvars()) throw Error(ErrorCode::IndexOutOfRange, "variable index out of range");
  switch (spec.kind()) {
    case FiltrationKind::MAdic:
      return alpha.degree() - 1;
    case FiltrationKind::Weighted:
      return spec.monomial_order(alpha) - spec.weights()[static_cast<std::size_t>(j)];
    case FiltrationKind::Chain: {
      int level = spec.monomial_order(alpha);
      for (const auto& g : spec.i1_generators())
        if (g[j] > 0) level = std::min(level, spec.monomial_order(shifted(alpha, g, j)) - 1);
      for (const auto& a : spec.a_generators())
        if (a[j] > 0) level = std::min(level, spec.a_power(shifted(alpha, a, j)) - 1);
      if (level >= 0) return level;
      // Below zero the generator test no longer bounds I_0 = R; scan instead.
      int span = 0;
      for (const auto& g : spec.i1_generators()) span = std::max(span, g.degree());
      for (const auto& a : spec.a_generators()) span = std::max(span, a.degree());
      for (const auto& m : monomials_up_to(spec.nvars(), 4 * span + 4)) {
        if (m[j] == 0) continue;
        Monomial q = m;
        q.set(j, m[j] - 1);
        level = std::min(level, spec.monomial_order(alpha * q) - spec.monomial_order(m));
      }
      return level;
    }
  }
  return 0;
}

namespace {

bool weighted_colon_condition(const FiltrationSpec& spec, std::vector<std::string>& notes) {
  const auto& w = spec.weights();
  if (std::adjacent_find(w.begin(), w.end(), std::not_equal_to<int>()) == w.end() && w.front() == 1)
    return true;
  int wmax = *std::max_element(w.begin(), w.end());
  int bound = 2 * wmax + 1;
  for (int i = 0; i <= bound; ++i)
    for (int k = 0; k <= bound; ++k) {
      auto gi = minimal_generators(spec, i, i);
      auto in_colon = [&](const Monomial& m) {
        for (const auto& g : gi)
          if (spec.monomial_order(m * g) < i + k) return false;
        return true;
      };
      for (int j = 0; j <= bound; ++j) {
        for (const auto& h : minimal_generators(spec, k + j, k + j)) {
          bool found = false;
          for (const auto& a : monomials_up_to(spec.nvars(), h.degree())) {
            if (!a.divides(h)) continue;
            if (in_colon(a) && spec.monomial_order(a.quotient_of(h)) >= j) {
              found = true;
              break;
            }
          }
          if (!found) {
            notes.push_back("colon condition fails at (i,j,k) = (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) + ")");
            return false;
          }
        }
      }
    }
  return true;
}

}  // namespace

FiltrationCertificate validate_assumptions(const FiltrationSpec& spec, int cap) {
  FiltrationCertificate cert;
  cert.m_primary = spec.is_m_primary();
  if (spec.kind() == FiltrationKind::Chain) {
    for (const auto& g : spec.i1_generators())
      if (spec.a_power(g) < 2)
        throw Error(ErrorCode::InvalidChain, "I1 is not contained in the square of A");
  }
  switch (spec.kind()) {
    case FiltrationKind::MAdic:
    case FiltrationKind::Chain:
      cert.colon_condition_holds = true;
      break;
    case FiltrationKind::Weighted:
      cert.colon_condition_holds = weighted_colon_condition(spec, cert.notes);
      break;
  }

  cert.der1_into_msq = true;
  for (const auto& alpha : monomials_up_to(spec.nvars(), 1))
    for (int j = 0; j < spec.nvars(); ++j)
      if (derivation_level(spec, alpha, j) >= 1) cert.der1_into_msq = false;
  if (!cert.der1_into_msq)
    cert.notes.push_back("level-1 derivations with linear coefficients exist; only coefficients in m^2 are used");

  for (int n0 = 0; n0 <= cap; ++n0) {
    int degree_bound = cap;
    if (auto d = spec.degree_for_level(n0 + 1)) degree_bound = std::max(*d, 1);
    bool ok = true;
    for (const auto& m : minimal_generators(spec, n0 + 1, degree_bound)) {
      for (int j = 0; j < spec.nvars() && ok; ++j)
        if (derivation_level(spec, m, j) < 1) ok = false;
      if (!ok) break;
    }
    if (ok) {
      cert.der_absorption_level = n0;
      break;
    }
  }
  if (!cert.der_absorption_level) cert.notes.push_back("derivation absorption level not certified up to the cap");
  return cert;
}

}  // namespace germdet
