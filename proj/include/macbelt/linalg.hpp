#ifndef MACBELT_LINALG_HPP
#define MACBELT_LINALG_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "macbelt/fields.hpp"

namespace macbelt {

// ---------------------------------------------------------------------------
// Packed vectors over GF2.
// ---------------------------------------------------------------------------

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int n) : n_(n), w_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

  int size() const { return n_; }

  std::uint8_t get(int i) const {
    return static_cast<std::uint8_t>((w_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1);
  }
  void set(int i, std::uint8_t v) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    auto& word = w_[static_cast<std::size_t>(i) >> 6];
    word = v ? (word | bit) : (word & ~bit);
  }

  void xor_with(const BitVec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
  }

  bool is_zero() const {
    for (auto word : w_)
      if (word) return false;
    return true;
  }

  /// Index of the first set bit, or -1.
  int first_nonzero() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64) + std::countr_zero(w_[k]);
    return -1;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

// ---------------------------------------------------------------------------
// Dense vectors over an arbitrary field.
// ---------------------------------------------------------------------------

template <class F>
class DenseVec {
 public:
  using Value = typename F::Value;

  DenseVec() = default;
  explicit DenseVec(int n) : a_(static_cast<std::size_t>(n)) {}

  int size() const { return static_cast<int>(a_.size()); }
  const Value& get(int i) const { return a_[static_cast<std::size_t>(i)]; }
  void set(int i, Value v) { a_[static_cast<std::size_t>(i)] = std::move(v); }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!(x == Value())) return false;
    return true;
  }

  int first_nonzero() const {
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (!(a_[i] == Value())) return static_cast<int>(i);
    return -1;
  }

  friend bool operator==(const DenseVec& a, const DenseVec& b) { return a.a_ == b.a_; }

 private:
  std::vector<Value> a_;
};

// Field-to-storage mapping: GF2 gets the packed representation.
template <class F>
struct LinAlgTraits {
  using Vec = DenseVec<F>;
};
template <>
struct LinAlgTraits<GF2> {
  using Vec = BitVec;
};
template <class F>
using FVec = typename LinAlgTraits<F>::Vec;

/// y += c * x.
template <class F>
void vec_axpy(const F& f, DenseVec<F>& y, const typename F::Value& c, const DenseVec<F>& x) {
  if (f.is_zero(c)) return;
  for (int i = 0; i < y.size(); ++i) y.set(i, f.add(y.get(i), f.mul(c, x.get(i))));
}
inline void vec_axpy(const GF2&, BitVec& y, std::uint8_t c, const BitVec& x) {
  if (c) y.xor_with(x);
}

/// v *= c.
template <class F>
void vec_scale(const F& f, DenseVec<F>& v, const typename F::Value& c) {
  for (int i = 0; i < v.size(); ++i) v.set(i, f.mul(c, v.get(i)));
}
inline void vec_scale(const GF2&, BitVec&, std::uint8_t) {}

// ---------------------------------------------------------------------------
// Row-reduced echelon form, shared by both matrix representations.
//
// Reduction is deterministic: pivots are chosen leftmost-column first and
// topmost-row first, so identical input always yields identical echelon rows,
// kernel bases and solutions.
// ---------------------------------------------------------------------------

/// Echelon view of a row space: RREF rows (zero rows dropped) plus their pivot
/// columns, ascending.
template <class F>
struct Echelon {
  std::vector<FVec<F>> rows;
  std::vector<int> pivots;
  int ambient = 0;

  int rank() const { return static_cast<int>(rows.size()); }

  /// Eliminates the pivot coordinates of v against the echelon rows.
  void reduce(const F& f, FVec<F>& v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto c = v.get(pivots[r]);
      if (!f.is_zero(c)) vec_axpy(f, v, f.neg(c), rows[r]);
    }
  }

  bool contains(const F& f, FVec<F> v) const {
    reduce(f, v);
    return v.is_zero();
  }
};

namespace detail {

template <class F, class VecT>
Echelon<F> echelonize(const F& f, std::vector<VecT> rows, int ambient) {
  Echelon<F> e;
  e.ambient = ambient;
  for (auto& v : rows) {
    // Reduce against existing pivots, then accept if nonzero.
    e.reduce(f, v);
    const int p = v.first_nonzero();
    if (p < 0) continue;
    const auto lead = v.get(p);
    if (!f.is_zero(f.sub(lead, f.one()))) vec_scale(f, v, f.inv(lead));
    // Back-substitute into earlier rows so the form is fully reduced.
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      auto c = e.rows[r].get(p);
      if (!f.is_zero(c)) vec_axpy(f, e.rows[r], f.neg(c), v);
    }
    // Insert keeping pivots ascending.
    std::size_t at = 0;
    while (at < e.pivots.size() && e.pivots[at] < p) ++at;
    e.rows.insert(e.rows.begin() + static_cast<std::ptrdiff_t>(at), std::move(v));
    e.pivots.insert(e.pivots.begin() + static_cast<std::ptrdiff_t>(at), p);
  }
  return e;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices.  Rows are FVec<F>; the matrix represents the linear map
// x -> A x with `rows()` equations over `cols()` unknowns.
// ---------------------------------------------------------------------------

template <class F>
class Matrix {
 public:
  using Vec = FVec<F>;
  using Value = typename F::Value;

  Matrix() = default;
  Matrix(int rows, int cols, F field = F{})
      : field_(std::move(field)), cols_(cols), rows_(static_cast<std::size_t>(rows), Vec(cols)) {}

  static Matrix from_rows(std::vector<Vec> rows, int cols, F field = F{}) {
    Matrix m(0, cols, std::move(field));
    m.rows_ = std::move(rows);
    return m;
  }

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  const F& field() const { return field_; }

  Value get(int i, int j) const { return rows_[static_cast<std::size_t>(i)].get(j); }
  void set(int i, int j, Value v) { rows_[static_cast<std::size_t>(i)].set(j, std::move(v)); }

  const Vec& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  Vec& row(int i) { return rows_[static_cast<std::size_t>(i)]; }

  void add_row(Vec v) { rows_.push_back(std::move(v)); }

  /// Echelon form of the row space.
  Echelon<F> row_echelon() const { return detail::echelonize<F>(field_, rows_, cols_); }

  int rank() const { return row_echelon().rank(); }

  /// y = A x.
  Vec apply(const Vec& x) const {
    Vec y(rows());
    for (int i = 0; i < rows(); ++i) {
      Value acc = field_.zero();
      for (int j = 0; j < cols_; ++j) acc = field_.add(acc, field_.mul(get(i, j), x.get(j)));
      y.set(i, acc);
    }
    return y;
  }

  /// Basis of {x : A x = 0}, one vector per free column of the RREF, ordered
  /// by free column ascending.
  std::vector<Vec> kernel_basis() const {
    const Echelon<F> e = row_echelon();
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols_), false);
    for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Vec> basis;
    for (int j = 0; j < cols_; ++j) {
      if (is_pivot[static_cast<std::size_t>(j)]) continue;
      Vec v(cols_);
      v.set(j, field_.one());
      for (std::size_t r = 0; r < e.rows.size(); ++r)
        v.set(e.pivots[r], field_.neg(e.rows[r].get(j)));
      basis.push_back(std::move(v));
    }
    return basis;
  }

  /// One solution of A x = b (free variables zero), or nullopt.
  std::optional<Vec> solve(const Vec& b) const {
    // Eliminate on the augmented system.
    std::vector<Vec> aug;
    aug.reserve(rows_.size());
    for (int i = 0; i < rows(); ++i) {
      Vec v(cols_ + 1);
      for (int j = 0; j < cols_; ++j) v.set(j, get(i, j));
      v.set(cols_, b.get(i));
      aug.push_back(std::move(v));
    }
    const Echelon<F> e = detail::echelonize<F>(field_, std::move(aug), cols_ + 1);
    Vec x(cols_);
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      if (e.pivots[r] == cols_) return std::nullopt;  // inconsistent
      x.set(e.pivots[r], e.rows[r].get(cols_));
    }
    return x;
  }

 private:
  F field_{};
  int cols_ = 0;
  std::vector<Vec> rows_;
};

using BitMatrix = Matrix<GF2>;

/// Standard-basis complement of a subspace: echelonizes the given spanning
/// rows and returns the standard basis vectors sitting at the non-pivot
/// columns.  Their classes form a basis of ambient/<subspace>.
template <class F>
std::vector<FVec<F>> quotient_basis(const F& f, const std::vector<FVec<F>>& spanning, int ambient) {
  const Echelon<F> e = detail::echelonize<F>(f, spanning, ambient);
  std::vector<bool> is_pivot(static_cast<std::size_t>(ambient), false);
  for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<FVec<F>> out;
  for (int j = 0; j < ambient; ++j) {
    if (is_pivot[static_cast<std::size_t>(j)]) continue;
    FVec<F> v(ambient);
    v.set(j, f.one());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace macbelt

#endif  // MACBELT_LINALG_HPP
