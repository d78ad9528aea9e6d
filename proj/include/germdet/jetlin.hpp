#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "germdet/filtration.hpp"
#include "germdet/jet.hpp"

namespace germdet {

// Coordinates of M/m^(D+1)M for M = R^rank. Columns are ordered by the
// filtration order of their monomial, then component, then graded-lex, so
// every I_L*M is a tail of the column range.
class Coordinates {
 public:
  Coordinates(FiltrationSpec spec, int rank, int cap);

  const FiltrationSpec& spec() const noexcept { return spec_; }
  int rank() const noexcept { return rank_; }
  int cap() const noexcept { return cap_; }
  int nvars() const noexcept { return spec_.nvars(); }
  int size() const noexcept { return static_cast<int>(cols_.size()); }

  // -1 when the monomial is above the cap.
  int column(int component, const Monomial& m) const;
  int component(int col) const { return cols_[static_cast<std::size_t>(col)].component; }
  const Monomial& monomial(int col) const { return cols_[static_cast<std::size_t>(col)].mono; }
  int filt(int col) const { return cols_[static_cast<std::size_t>(col)].filt; }
  // First column whose filtration order is >= level (size() if none).
  int level_start(int level) const;

 private:
  struct Col {
    int filt;
    int component;
    Monomial mono;
  };
  FiltrationSpec spec_;
  int rank_;
  int cap_;
  std::vector<Monomial> monomials_;
  std::vector<Col> cols_;
  std::vector<int> index_;  // component * |monomials| + grlex index -> column
  std::unordered_map<std::uint64_t, int> lookup_;
};

using SparseRow = std::vector<std::pair<int, Scalar>>;

// r += c * s, both sorted by column.
void row_axpy(SparseRow& r, const Scalar& c, const SparseRow& s);
void row_scale(SparseRow& r, const Scalar& c);

SparseRow to_row(const Coordinates& coords, const JetVector& v);
JetVector from_row(const Coordinates& coords, const SparseRow& row, const JetContext& ctx);

// Immutable span in reduced row-echelon form; pivots are the lowest column
// of each row.
class ReducedSpan {
 public:
  const Coordinates& coordinates() const noexcept { return *coords_; }
  std::shared_ptr<const Coordinates> coordinates_ptr() const noexcept { return coords_; }
  const Field& field() const noexcept { return field_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  const std::vector<SparseRow>& rows() const noexcept { return rows_; }
  bool is_pivot(int col) const { return pivot_of_[static_cast<std::size_t>(col)] >= 0; }

  SparseRow normal_form(SparseRow v) const;
  JetVector normal_form(const JetVector& v) const;
  bool contains(const SparseRow& v) const { return normal_form(v).empty(); }
  bool contains(const JetVector& v) const;
  // v in span + I_level * M.
  bool contains_modulo(SparseRow v, int level) const;
  // Number of pivots among columns of filtration order < level.
  std::size_t pivots_below(int level) const;

 private:
  friend class SpanBuilder;
  ReducedSpan(std::shared_ptr<const Coordinates> coords, Field field)
      : coords_(std::move(coords)), field_(field) {}
  std::shared_ptr<const Coordinates> coords_;
  Field field_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivot_of_;
};

class SpanBuilder {
 public:
  SpanBuilder(std::shared_ptr<const Coordinates> coords, Field field);
  void add(SparseRow row);
  void add(const JetVector& v) { add(to_row(*coords_, v)); }
  std::size_t rank() const noexcept { return rows_.size(); }
  ReducedSpan build() const;

 private:
  std::shared_ptr<const Coordinates> coords_;
  Field field_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivot_of_;
};

// Echelon form that remembers how each row combines the inserted rows.
class ProvenanceEchelon {
 public:
  ProvenanceEchelon(std::shared_ptr<const Coordinates> coords, Field field);
  void add(SparseRow row, int origin);
  // A combination of inserted rows agreeing with `target` modulo I_(level+1)*M,
  // given that target lies in I_level*M. Entries are (origin, coefficient).
  std::optional<SparseRow> solve_piece(SparseRow target, int level) const;
  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  std::shared_ptr<const Coordinates> coords_;
  Field field_;
  std::vector<SparseRow> rows_;
  std::vector<SparseRow> combos_;
  std::vector<int> pivot_of_;
};

// Calls fn(generator index, multiplier, truncated product) for every
// monomial multiple of every generator that survives truncation.
template <class Fn>
void for_each_multiple(const std::vector<JetVector>& gens, int cap, Fn&& fn);

// Image of the R-submodule generated by gens in M/m^(D+1)M.
ReducedSpan saturate_span(const std::vector<JetVector>& gens, const FiltrationSpec& spec, int cap);
ReducedSpan saturate_span(const std::vector<JetVector>& gens, std::shared_ptr<const Coordinates> coords,
                          const Field& field);

struct LevelCheck {
  bool holds = false;
  // False when truncation at the cap cannot certify the power-series
  // statement (non m-primary chains).
  bool exact = true;
};

// I_L*M inside span + I_L'*M with I_L' the Nakayama step of L.
LevelCheck check_level(const ReducedSpan& span, const FiltrationSpec& spec, int level, int cap);
bool contains_level(const ReducedSpan& span, const FiltrationSpec& spec, int level, int cap);

struct ColengthResult {
  bool finite = false;
  // dim R/I when finite; otherwise dim R/(I + m^(D+1)), a lower bound.
  long value = 0;
  // Degree d with m^d inside I (finite case).
  int stable_degree = -1;
  std::vector<Monomial> basis;
};

ColengthResult colength(const std::vector<Jet>& gens, const FiltrationSpec& spec, int cap);

// --- template implementation ---

template <class Fn>
void for_each_multiple(const std::vector<JetVector>& gens, int cap, Fn&& fn) {
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const JetVector& v = gens[g];
    Order o = total_order(v);
    if (!o || v.empty()) continue;
    int nvars = v.front().nvars();
    for (const auto& m : monomials_up_to(nvars, cap - *o)) {
      JetVector prod;
      prod.reserve(v.size());
      for (const auto& j : v) prod.push_back(j.times_monomial(m));
      fn(static_cast<int>(g), m, prod);
    }
  }
}

}  // namespace germdet
