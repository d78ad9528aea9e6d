#include "germdet/jetlin.hpp"

#include <algorithm>

#include "germdet/errors.hpp"

namespace germdet {

Coordinates::Coordinates(FiltrationSpec spec, int rank, int cap)
    : spec_(std::move(spec)), rank_(rank), cap_(cap) {
  if (rank < 1) throw Error(ErrorCode::InvalidArgument, "module rank must be positive");
  if (cap < 0) throw Error(ErrorCode::InvalidArgument, "degree cap must be non-negative");
  monomials_ = monomials_up_to(spec_.nvars(), cap);
  for (std::size_t i = 0; i < monomials_.size(); ++i) lookup_[monomials_[i].key()] = static_cast<int>(i);
  std::vector<int> mfilt(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i) mfilt[i] = spec_.monomial_order(monomials_[i]);
  std::vector<std::pair<int, int>> order;  // (component, grlex index)
  for (int c = 0; c < rank; ++c)
    for (std::size_t i = 0; i < monomials_.size(); ++i) order.emplace_back(c, static_cast<int>(i));
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    int fa = mfilt[static_cast<std::size_t>(a.second)], fb = mfilt[static_cast<std::size_t>(b.second)];
    if (fa != fb) return fa < fb;
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  index_.assign(order.size(), -1);
  for (std::size_t col = 0; col < order.size(); ++col) {
    auto [c, i] = order[col];
    cols_.push_back(Col{mfilt[static_cast<std::size_t>(i)], c, monomials_[static_cast<std::size_t>(i)]});
    index_[static_cast<std::size_t>(c) * monomials_.size() + static_cast<std::size_t>(i)] = static_cast<int>(col);
  }
}

int Coordinates::column(int component, const Monomial& m) const {
  if (component < 0 || component >= rank_) throw Error(ErrorCode::IndexOutOfRange, "component out of range");
  if (m.degree() > cap_) return -1;
  auto it = lookup_.find(m.key());
  if (it == lookup_.end()) return -1;
  return index_[static_cast<std::size_t>(component) * monomials_.size() + static_cast<std::size_t>(it->second)];
}

int Coordinates::level_start(int level) const {
  auto it = std::lower_bound(cols_.begin(), cols_.end(), level,
                             [](const Col& c, int l) { return c.filt < l; });
  return static_cast<int>(it - cols_.begin());
}

void row_axpy(SparseRow& r, const Scalar& c, const SparseRow& s) {
  if (c.is_zero() || s.empty()) return;
  SparseRow out;
  out.reserve(r.size() + s.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
      out.push_back(std::move(r[i++]));
    } else if (i == r.size() || s[j].first < r[i].first) {
      out.emplace_back(s[j].first, c * s[j].second);
      ++j;
    } else {
      Scalar v = r[i].second + c * s[j].second;
      if (!v.is_zero()) out.emplace_back(r[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  r = std::move(out);
}

void row_scale(SparseRow& r, const Scalar& c) {
  for (auto& e : r) e.second *= c;
}

SparseRow to_row(const Coordinates& coords, const JetVector& v) {
  if (static_cast<int>(v.size()) != coords.rank())
    throw Error(ErrorCode::MismatchedContext, "vector rank differs from coordinate rank");
  SparseRow row;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c].nvars() != coords.nvars())
      throw Error(ErrorCode::MismatchedContext, "vector entry nvars differ");
    for (const auto& [m, coef] : v[c].terms()) {
      int col = coords.column(static_cast<int>(c), m);
      if (col >= 0) row.emplace_back(col, coef);
    }
  }
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return row;
}

JetVector from_row(const Coordinates& coords, const SparseRow& row, const JetContext& ctx) {
  JetVector v(static_cast<std::size_t>(coords.rank()), Jet(ctx));
  for (const auto& [col, c] : row)
    v[static_cast<std::size_t>(coords.component(col))].add_term(coords.monomial(col), c);
  return v;
}

SparseRow ReducedSpan::normal_form(SparseRow v) const {
  std::size_t pos = 0;
  while (pos < v.size()) {
    int col = v[pos].first;
    int p = pivot_of_[static_cast<std::size_t>(col)];
    if (p < 0) {
      ++pos;
      continue;
    }
    Scalar f = -v[pos].second;
    row_axpy(v, f, rows_[static_cast<std::size_t>(p)]);
  }
  return v;
}

JetVector ReducedSpan::normal_form(const JetVector& v) const {
  if (v.empty()) return v;
  return from_row(*coords_, normal_form(to_row(*coords_, v)), v.front().context());
}

bool ReducedSpan::contains(const JetVector& v) const { return contains(to_row(*coords_, v)); }

bool ReducedSpan::contains_modulo(SparseRow v, int level) const {
  int limit = coords_->level_start(level);
  while (!v.empty() && v.front().first < limit) {
    int p = pivot_of_[static_cast<std::size_t>(v.front().first)];
    if (p < 0) return false;
    Scalar f = -v.front().second;
    row_axpy(v, f, rows_[static_cast<std::size_t>(p)]);
  }
  return true;
}

std::size_t ReducedSpan::pivots_below(int level) const {
  int limit = coords_->level_start(level);
  std::size_t n = 0;
  for (const auto& r : rows_)
    if (r.front().first < limit) ++n;
  return n;
}

SpanBuilder::SpanBuilder(std::shared_ptr<const Coordinates> coords, Field field)
    : coords_(std::move(coords)), field_(field), pivot_of_(static_cast<std::size_t>(coords_->size()), -1) {}

void SpanBuilder::add(SparseRow row) {
  while (!row.empty()) {
    int col = row.front().first;
    int p = pivot_of_[static_cast<std::size_t>(col)];
    if (p < 0) {
      row_scale(row, row.front().second.inverse());
      pivot_of_[static_cast<std::size_t>(col)] = static_cast<int>(rows_.size());
      rows_.push_back(std::move(row));
      return;
    }
    Scalar f = -row.front().second;
    row_axpy(row, f, rows_[static_cast<std::size_t>(p)]);
  }
}

ReducedSpan SpanBuilder::build() const {
  ReducedSpan span(coords_, field_);
  std::vector<SparseRow> rows = rows_;
  std::sort(rows.begin(), rows.end(), [](const SparseRow& a, const SparseRow& b) {
    return a.front().first < b.front().first;
  });
  std::vector<int> pivot_of(static_cast<std::size_t>(coords_->size()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) pivot_of[static_cast<std::size_t>(rows[i].front().first)] = static_cast<int>(i);
  // Back-substitute from the highest pivot down; reduced rows vanish at all
  // other pivot columns, so each subtraction only creates free entries.
  for (std::size_t k = rows.size(); k-- > 0;) {
    SparseRow& r = rows[k];
    std::vector<std::pair<int, Scalar>> hits;
    for (std::size_t e = 1; e < r.size(); ++e) {
      int p = pivot_of[static_cast<std::size_t>(r[e].first)];
      if (p >= 0) hits.emplace_back(p, r[e].second);
    }
    for (const auto& [p, c] : hits) row_axpy(r, -c, rows[static_cast<std::size_t>(p)]);
  }
  span.rows_ = std::move(rows);
  span.pivot_of_ = std::move(pivot_of);
  return span;
}

ProvenanceEchelon::ProvenanceEchelon(std::shared_ptr<const Coordinates> coords, Field field)
    : coords_(std::move(coords)), field_(field), pivot_of_(static_cast<std::size_t>(coords_->size()), -1) {}

void ProvenanceEchelon::add(SparseRow row, int origin) {
  SparseRow combo{{origin, Scalar::one(field_)}};
  while (!row.empty()) {
    int col = row.front().first;
    int p = pivot_of_[static_cast<std::size_t>(col)];
    if (p < 0) {
      Scalar inv = row.front().second.inverse();
      row_scale(row, inv);
      row_scale(combo, inv);
      pivot_of_[static_cast<std::size_t>(col)] = static_cast<int>(rows_.size());
      rows_.push_back(std::move(row));
      combos_.push_back(std::move(combo));
      return;
    }
    Scalar f = -row.front().second;
    row_axpy(row, f, rows_[static_cast<std::size_t>(p)]);
    row_axpy(combo, f, combos_[static_cast<std::size_t>(p)]);
  }
}

std::optional<SparseRow> ProvenanceEchelon::solve_piece(SparseRow target, int level) const {
  int limit = coords_->level_start(level + 1);
  SparseRow combo;
  while (!target.empty() && target.front().first < limit) {
    int p = pivot_of_[static_cast<std::size_t>(target.front().first)];
    if (p < 0) return std::nullopt;
    Scalar f = target.front().second;
    row_axpy(target, -f, rows_[static_cast<std::size_t>(p)]);
    row_axpy(combo, f, combos_[static_cast<std::size_t>(p)]);
  }
  return combo;
}

ReducedSpan saturate_span(const std::vector<JetVector>& gens, std::shared_ptr<const Coordinates> coords,
                          const Field& field) {
  SpanBuilder b(coords, field);
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != coords->rank())
      throw Error(ErrorCode::MismatchedContext, "generator rank differs from module rank");
    for (const auto& j : g) {
      if (j.cap() != coords->cap() || j.nvars() != coords->nvars() || !(j.field() == field))
        throw Error(ErrorCode::MismatchedContext, "generator context differs from span context");
    }
  }
  for_each_multiple(gens, coords->cap(), [&](int, const Monomial&, const JetVector& prod) {
    b.add(to_row(*coords, prod));
  });
  return b.build();
}

ReducedSpan saturate_span(const std::vector<JetVector>& gens, const FiltrationSpec& spec, int cap) {
  if (gens.empty() || gens.front().empty())
    throw Error(ErrorCode::InvalidArgument, "saturate_span needs at least one generator to fix the rank");
  auto coords = std::make_shared<const Coordinates>(spec, static_cast<int>(gens.front().size()), cap);
  return saturate_span(gens, coords, gens.front().front().field());
}

LevelCheck check_level(const ReducedSpan& span, const FiltrationSpec& spec, int level, int cap) {
  const Coordinates& coords = span.coordinates();
  if (!(coords.spec() == spec) || coords.cap() != cap)
    throw Error(ErrorCode::MismatchedContext, "span was built for another filtration or cap");
  if (level < 0) throw Error(ErrorCode::InvalidArgument, "level must be non-negative");
  if (cap < level + 1)
    throw Error(ErrorCode::CapTooSmall,
                "degree cap " + std::to_string(cap) + " is below level + 1 = " + std::to_string(level + 1));
  LevelCheck out;
  int next = spec.nakayama_step(level);
  auto needed = spec.degree_for_level(next);
  if (!needed) {
    out.exact = false;
  } else if (*needed > cap + 1) {
    if (spec.kind() == FiltrationKind::Chain && !spec.is_m_primary()) {
      out.exact = false;
    } else {
      throw Error(ErrorCode::CapTooSmall, "degree cap " + std::to_string(cap) + " cannot resolve level " +
                                              std::to_string(next) + " (needs " + std::to_string(*needed - 1) +
                                              ")");
    }
  }
  int begin = coords.level_start(level);
  int end = coords.level_start(next);
  if (begin == end && out.exact)
    throw Error(ErrorCode::CapTooSmall, "no monomials of level " + std::to_string(level) + " below the cap");
  out.holds = true;
  for (int col = begin; col < end; ++col) {
    SparseRow e{{col, Scalar::one(span.field())}};
    if (!span.contains_modulo(std::move(e), next)) {
      out.holds = false;
      break;
    }
  }
  return out;
}

bool contains_level(const ReducedSpan& span, const FiltrationSpec& spec, int level, int cap) {
  return check_level(span, spec, level, cap).holds;
}

ColengthResult colength(const std::vector<Jet>& gens, const FiltrationSpec& spec, int cap) {
  ColengthResult out;
  FiltrationSpec madic = FiltrationSpec::madic(spec.nvars());
  auto coords = std::make_shared<const Coordinates>(madic, 1, cap);
  Field field = gens.empty() ? Field::rationals() : gens.front().field();
  std::vector<JetVector> vecs;
  for (const auto& g : gens) {
    if (g.nvars() != spec.nvars()) throw Error(ErrorCode::MismatchedContext, "generator nvars differ");
    vecs.push_back({g.with_cap(cap)});
  }
  ReducedSpan span = saturate_span(vecs, coords, field);
  for (int d = 0; d <= cap - 1; ++d) {
    bool all = true;
    for (int col = coords->level_start(d); col < coords->level_start(d + 1); ++col) {
      if (!span.contains_modulo(SparseRow{{col, Scalar::one(field)}}, d + 1)) {
        all = false;
        break;
      }
    }
    if (!all) continue;
    out.finite = true;
    out.stable_degree = d;
    int lower = coords->level_start(d);
    for (int col = 0; col < lower; ++col)
      if (!span.is_pivot(col)) out.basis.push_back(coords->monomial(col));
    out.value = static_cast<long>(out.basis.size());
    return out;
  }
  out.value = static_cast<long>(coords->size()) - static_cast<long>(span.rank());
  return out;
}

}  // namespace germdet
