#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kerbundle/field.hpp"

namespace kerbundle {

/// Dense row-major matrix over GF(p).
class Matrix {
 public:
  Matrix() = default;
  Matrix(const PrimeField& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(const PrimeField& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Entries are reduced modulo p on the way in.
  static Matrix from_rows(const PrimeField& field, const std::vector<std::vector<std::int64_t>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.front().size() : 0;
    Matrix m(field, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw UsageError("ragged row list");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = field.reduce(rows[i][j]);
    }
    return m;
  }

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Scalar> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Scalar> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<Scalar> column(std::size_t j) const {
    std::vector<Scalar> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(std::size_t j, std::span<const Scalar> v) {
    if (v.size() != rows_) throw UsageError("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar x) { return x == 0; });
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  const std::vector<Scalar>& data() const { return data_; }

 private:
  PrimeField field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw UsageError("matrix product shape mismatch");
  const auto& f = x.field();
  const std::uint64_t p = f.p();
  Matrix z(f, x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto out = z.row(i);
    std::vector<std::uint64_t> acc(y.cols(), 0);
    for (std::size_t k = 0; k < x.cols(); ++k) {
      std::uint64_t a = x(i, k);
      if (!a) continue;
      auto yr = y.row(k);
      for (std::size_t j = 0; j < y.cols(); ++j) acc[j] = (acc[j] + a * yr[j]) % p;
    }
    for (std::size_t j = 0; j < y.cols(); ++j) out[j] = static_cast<Scalar>(acc[j]);
  }
  return z;
}

/// Places blocks side by side; all blocks must share the row count.
inline Matrix hconcat(const std::vector<const Matrix*>& blocks) {
  if (blocks.empty()) throw UsageError("hconcat of nothing");
  std::size_t r = blocks.front()->rows(), c = 0;
  for (auto* b : blocks) {
    if (b->rows() != r) throw UsageError("hconcat row mismatch");
    c += b->cols();
  }
  Matrix m(blocks.front()->field(), r, c);
  std::size_t off = 0;
  for (auto* b : blocks) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < b->cols(); ++j) m(i, off + j) = (*b)(i, j);
    off += b->cols();
  }
  return m;
}

namespace detail {

/// In-place Gauss-Jordan elimination with the first nonzero entry of each column as pivot.
/// Returns pivot columns; when `full` is false only rows below each pivot are cleared.
inline std::vector<std::size_t> eliminate(Matrix& m, bool full) {
  const auto& f = m.field();
  const std::uint64_t p = f.p();
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < m.cols() && prow < m.rows(); ++c) {
    std::size_t sel = prow;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != prow) {
      auto a = m.row(sel), b = m.row(prow);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto pr = m.row(prow);
    Scalar inv = f.inv(pr[c]);
    for (std::size_t j = c; j < m.cols(); ++j) pr[j] = f.mul(pr[j], inv);
    std::size_t start = full ? 0 : prow + 1;
    for (std::size_t i = start; i < m.rows(); ++i) {
      if (i == prow) continue;
      auto ri = m.row(i);
      std::uint64_t factor = ri[c];
      if (!factor) continue;
      std::uint64_t negf = p - factor;
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (pr[j]) ri[j] = static_cast<Scalar>((ri[j] + negf * pr[j]) % p);
      }
    }
    pivots.push_back(c);
    ++prow;
  }
  return pivots;
}

}  // namespace detail

/// Exact rank over GF(p).
inline std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  Matrix work = m.rows() > m.cols() ? m.transpose() : m;
  return detail::eliminate(work, false).size();
}

/// Reduced row echelon form together with its pivot columns.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

inline Echelon row_reduce(const Matrix& m) {
  Echelon e{m, {}};
  e.pivots = detail::eliminate(e.reduced, true);
  return e;
}

/// Columns form a basis of the right null space.
inline Matrix kernel_basis(const Matrix& m) {
  const auto& f = m.field();
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(f, m.cols(), free_cols.size());
  for (std::size_t idx = 0; idx < free_cols.size(); ++idx) {
    std::size_t fc = free_cols[idx];
    k(fc, idx) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], idx) = f.neg(e.reduced(r, fc));
  }
  return k;
}

/// Coordinates of each column of `targets` in the column span of `span`; an absent entry marks a
/// column outside the span. The span columns must be independent.
inline std::vector<std::optional<std::vector<Scalar>>> solve_membership_many(const Matrix& span,
                                                                             const Matrix& targets) {
  if (span.rows() != targets.rows()) throw UsageError("membership: ambient dimension mismatch");
  const std::size_t k = span.cols();
  Matrix aug = hconcat({&span, &targets});
  Echelon e = row_reduce(aug);
  std::size_t span_rank = 0;
  while (span_rank < e.pivots.size() && e.pivots[span_rank] < k) ++span_rank;
  if (span_rank != k) throw UsageError("membership: span columns are linearly dependent");
  std::vector<std::optional<std::vector<Scalar>>> out(targets.cols());
  for (std::size_t t = 0; t < targets.cols(); ++t) {
    const std::size_t col = k + t;
    bool inside = true;
    for (std::size_t r = k; r < e.reduced.rows(); ++r) {
      if (e.reduced(r, col) != 0) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    std::vector<Scalar> coords(k);
    for (std::size_t r = 0; r < k; ++r) coords[r] = e.reduced(r, col);
    out[t] = std::move(coords);
  }
  return out;
}

inline std::optional<std::vector<Scalar>> solve_membership(const Matrix& span, std::span<const Scalar> v) {
  Matrix t(span.field(), v.size(), 1);
  t.set_column(0, v);
  return solve_membership_many(span, t).front();
}

inline Matrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(f.p());
  return m;
}

}  // namespace kerbundle
