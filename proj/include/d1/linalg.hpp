#pragma once

// Exact dense linear algebra over a field, plus an incremental sparse solver
// used for the large structured systems of the inverse search.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "d1/field.hpp"

namespace d1 {

template <Field F>
using Vector = std::vector<typename F::value_type>;

template <Field F>
class Matrix {
 public:
  using Scalar = typename F::value_type;

  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// Builds from nested rows of integers, reduced into the field.
  static Matrix from_ints(const F& field, const std::vector<std::vector<long>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw UsageError("ragged matrix");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = field.from_int(rows[i][j]);
    }
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector<F> row(std::size_t i) const {
    return Vector<F>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Vector<F> operator*(const Vector<F>& x) const {
    if (x.size() != cols_) throw UsageError("matrix-vector size mismatch");
    Vector<F> y(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i) {
      Scalar acc = field_.zero();
      for (std::size_t j = 0; j < cols_; ++j) {
        const Scalar& a = (*this)(i, j);
        if (!field_.is_zero(a) && !field_.is_zero(x[j])) acc = field_.add(acc, field_.mul(a, x[j]));
      }
      y[i] = acc;
    }
    return y;
  }

  Matrix operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw UsageError("matrix product size mismatch");
    Matrix out(field_, rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Scalar& a = (*this)(i, k);
        if (field_.is_zero(a)) continue;
        for (std::size_t j = 0; j < other.cols_; ++j)
          out(i, j) = field_.add(out(i, j), field_.mul(a, other(k, j)));
      }
    return out;
  }

  /// Keeps the listed columns, in the given order.
  Matrix select_columns(const std::vector<std::size_t>& which) const {
    Matrix out(field_, rows_, which.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < which.size(); ++j) out(i, j) = (*this)(i, which[j]);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

/// Reduces m in place to reduced row echelon form; returns the pivot columns.
/// Columns at or beyond `limit` are carried along but never chosen as pivots.
template <Field F>
std::vector<std::size_t> reduce_rows(Matrix<F>& m, std::size_t limit) {
  const F& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < limit && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && f.is_zero(m(sel, c))) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
    auto inv = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!f.is_zero(m(r, j))) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <Field F>
std::vector<std::size_t> reduce_rows(Matrix<F>& m) {
  return reduce_rows(m, m.cols());
}

/// A subspace of F^ambient, held by its reduced row echelon basis. The basis
/// is unique for a given subspace, so equality is structural.
template <Field F>
class Subspace {
 public:
  Subspace(F field, std::size_t ambient) : field_(std::move(field)), ambient_(ambient) {}

  static Subspace span(const F& field, std::size_t ambient, const std::vector<Vector<F>>& vectors) {
    Subspace s(field, ambient);
    if (vectors.empty()) return s;
    Matrix<F> m(field, vectors.size(), ambient);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != ambient) throw UsageError("span: vector of wrong dimension");
      for (std::size_t j = 0; j < ambient; ++j) m(i, j) = vectors[i][j];
    }
    auto pivots = reduce_rows(m);
    for (std::size_t i = 0; i < pivots.size(); ++i) s.basis_.push_back(m.row(i));
    return s;
  }

  static Subspace full(const F& field, std::size_t ambient) {
    std::vector<Vector<F>> vs;
    for (std::size_t i = 0; i < ambient; ++i) {
      Vector<F> v(ambient, field.zero());
      v[i] = field.one();
      vs.push_back(std::move(v));
    }
    return span(field, ambient, vs);
  }

  const F& field() const { return field_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<Vector<F>>& basis() const { return basis_; }

  bool contains(const Vector<F>& v) const {
    auto rest = v;
    for (const auto& b : basis_) {
      std::size_t lead = 0;
      while (field_.is_zero(b[lead])) ++lead;
      if (field_.is_zero(rest[lead])) continue;
      auto factor = rest[lead];
      for (std::size_t j = lead; j < ambient_; ++j) rest[j] = field_.sub(rest[j], field_.mul(factor, b[j]));
    }
    return std::all_of(rest.begin(), rest.end(), [&](const auto& x) { return field_.is_zero(x); });
  }

  bool is_subspace_of(const Subspace& other) const {
    return std::all_of(basis_.begin(), basis_.end(), [&](const auto& b) { return other.contains(b); });
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  F field_;
  std::size_t ambient_;
  std::vector<Vector<F>> basis_;
};

template <Field F>
std::size_t rank(const Matrix<F>& a) {
  auto m = a;
  return reduce_rows(m).size();
}

/// Right null space {x : Ax = 0}.
template <Field F>
Subspace<F> kernel_basis(const Matrix<F>& a) {
  const F& f = a.field();
  auto m = a;
  auto pivots = reduce_rows(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector<F>> vs;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector<F> v(a.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(m(i, free));
    vs.push_back(std::move(v));
  }
  return Subspace<F>::span(f, a.cols(), vs);
}

/// Some x with Ax = b (free variables set to zero), or nullopt.
template <Field F>
std::optional<Vector<F>> solve(const Matrix<F>& a, const Vector<F>& b) {
  const F& f = a.field();
  if (b.size() != a.rows()) throw UsageError("solve: right-hand side of wrong dimension");
  Matrix<F> m(f, a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    m(i, a.cols()) = b[i];
  }
  auto pivots = reduce_rows(m, a.cols());
  for (std::size_t i = pivots.size(); i < a.rows(); ++i)
    if (!f.is_zero(m(i, a.cols()))) return std::nullopt;
  Vector<F> x(a.cols(), f.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m(i, a.cols());
  return x;
}

/// {Av : v in s}.
template <Field F>
Subspace<F> image(const Matrix<F>& a, const Subspace<F>& s) {
  if (s.ambient_dim() != a.cols()) throw UsageError("image: subspace of wrong dimension");
  std::vector<Vector<F>> vs;
  for (const auto& b : s.basis()) vs.push_back(a * b);
  return Subspace<F>::span(a.field(), a.rows(), vs);
}

/// Row-at-a-time echelon solver for sparse systems. Rows are reduced against
/// stored pivots as they arrive, so fill-in stays inside whatever block
/// structure the column numbering exposes: put variables that couple many
/// rows at the highest indices.
template <Field F>
class SparseSystem {
 public:
  using Scalar = typename F::value_type;
  using Row = std::vector<std::pair<std::size_t, Scalar>>;

  SparseSystem(F field, std::size_t cols) : field_(std::move(field)), cols_(cols), pivot_of_(cols, npos) {}

  std::size_t cols() const { return cols_; }
  bool consistent() const { return consistent_; }
  std::size_t rank() const { return rows_.size(); }

  /// Entries may be unsorted and repeated; they are summed.
  void add_equation(Row row, Scalar rhs) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Row merged;
    for (auto& [c, v] : row) {
      if (c >= cols_) throw UsageError("sparse row column out of range");
      if (!merged.empty() && merged.back().first == c) {
        merged.back().second = field_.add(merged.back().second, v);
      } else {
        merged.emplace_back(c, std::move(v));
      }
    }
    std::erase_if(merged, [&](const auto& e) { return field_.is_zero(e.second); });
    reduce_and_store(std::move(merged), std::move(rhs));
  }

  /// The solution with every free variable zero.
  std::optional<Vector<F>> solve() const {
    if (!consistent_) return std::nullopt;
    Vector<F> x(cols_, field_.zero());
    for (std::size_t c = cols_; c-- > 0;) {
      if (pivot_of_[c] == npos) continue;
      const auto& [row, rhs] = rows_[pivot_of_[c]];
      Scalar acc = rhs;
      for (std::size_t k = 1; k < row.size(); ++k)
        acc = field_.sub(acc, field_.mul(row[k].second, x[row[k].first]));
      x[c] = acc;
    }
    return x;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void reduce_and_store(Row row, Scalar rhs) {
    while (!row.empty()) {
      std::size_t lead = row.front().first;
      std::size_t p = pivot_of_[lead];
      if (p == npos) {
        auto inv = field_.inv(row.front().second);
        for (auto& e : row) e.second = field_.mul(e.second, inv);
        rhs = field_.mul(rhs, inv);
        pivot_of_[lead] = rows_.size();
        rows_.emplace_back(std::move(row), std::move(rhs));
        return;
      }
      const auto& [prow, prhs] = rows_[p];
      Scalar factor = row.front().second;
      Row next;
      next.reserve(row.size() + prow.size());
      std::size_t i = 0, j = 0;
      while (i < row.size() || j < prow.size()) {
        if (j == prow.size() || (i < row.size() && row[i].first < prow[j].first)) {
          next.push_back(std::move(row[i++]));
        } else if (i == row.size() || prow[j].first < row[i].first) {
          next.emplace_back(prow[j].first, field_.neg(field_.mul(factor, prow[j].second)));
          ++j;
        } else {
          auto v = field_.sub(row[i].second, field_.mul(factor, prow[j].second));
          if (!field_.is_zero(v)) next.emplace_back(row[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      rhs = field_.sub(rhs, field_.mul(factor, prhs));
      row = std::move(next);
    }
    if (!field_.is_zero(rhs)) consistent_ = false;
  }

  F field_;
  std::size_t cols_;
  std::vector<std::size_t> pivot_of_;
  std::vector<std::pair<Row, Scalar>> rows_;
  bool consistent_ = true;
};

}  // namespace d1
