#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "kerbundle/field.hpp"
#include "kerbundle/matrix.hpp"

namespace kerbundle {

using Exponent = std::vector<int>;

/// Binomial coefficient as an exact integer; 0 outside 0 <= k <= m.
inline std::int64_t binomial(std::int64_t m, std::int64_t k) {
  if (k < 0 || m < 0 || k > m) return 0;
  k = std::min(k, m - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

/// Monomials of degree d in x_0..x_n, graded lexicographic with x_0 > x_1 > ... > x_n.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(int n, int d) : n_(n), d_(d) {
    if (n < 1) throw UsageError("monomial basis needs n >= 1");
    if (d < 0) return;
    Exponent e(n + 1, 0);
    fill(e, 0, d);
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
  }

  int n() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<Exponent>& monomials() const { return monomials_; }
  const Exponent& operator[](std::size_t i) const { return monomials_[i]; }

  std::size_t index(const Exponent& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) throw UsageError("monomial not in basis");
    return it->second;
  }

 private:
  void fill(Exponent& e, int var, int left) {
    if (var == n_) {
      e[var] = left;
      monomials_.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = k;
      fill(e, var + 1, left - k);
    }
    e[var] = 0;
  }

  int n_ = 0;
  int d_ = 0;
  std::vector<Exponent> monomials_;
  std::map<Exponent, std::size_t> index_;
};

/// Shared, immutable monomial bases; insertion is serialized so concurrent callers are safe.
inline std::shared_ptr<const MonomialBasis> monomial_basis(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(n, d);
  return slot;
}

/// A homogeneous form stored as coefficients in the monomial basis of its degree.
struct Form {
  int degree = 0;
  std::vector<Scalar> coeffs;
};

/// Product of two forms on P^n.
inline Form multiply(const PrimeField& f, int n, const Form& x, const Form& y) {
  auto bx = monomial_basis(n, x.degree), by = monomial_basis(n, y.degree);
  auto bz = monomial_basis(n, x.degree + y.degree);
  Form z{x.degree + y.degree, std::vector<Scalar>(bz->size(), 0)};
  Exponent e(n + 1);
  for (std::size_t i = 0; i < bx->size(); ++i) {
    if (!x.coeffs[i]) continue;
    for (std::size_t j = 0; j < by->size(); ++j) {
      if (!y.coeffs[j]) continue;
      for (int v = 0; v <= n; ++v) e[v] = (*bx)[i][v] + (*by)[j][v];
      auto k = bz->index(e);
      z.coeffs[k] = f.add(z.coeffs[k], f.mul(x.coeffs[i], y.coeffs[j]));
    }
  }
  return z;
}

/// Linear form sum_i c_i x_i.
using LinearForm = std::vector<Scalar>;

/// Index of x_v * m in degree d+1 for every monomial m of degree d and variable v.
inline std::vector<std::vector<std::size_t>> shift_table(int n, int d) {
  auto src = monomial_basis(n, d), dst = monomial_basis(n, d + 1);
  std::vector<std::vector<std::size_t>> t(src->size(), std::vector<std::size_t>(n + 1));
  for (std::size_t i = 0; i < src->size(); ++i) {
    Exponent e = (*src)[i];
    for (int v = 0; v <= n; ++v) {
      ++e[v];
      t[i][v] = dst->index(e);
      --e[v];
    }
  }
  return t;
}

/// A projective point normalized so its first nonzero coordinate is 1.
struct ProjectivePoint {
  std::vector<Scalar> coords;
  int chart = 0;  ///< first nonzero coordinate; used as the dehomogenizing variable

  static ProjectivePoint make(const PrimeField& f, const std::vector<std::int64_t>& raw) {
    ProjectivePoint q;
    q.coords.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) q.coords[i] = f.reduce(raw[i]);
    std::size_t j = 0;
    while (j < q.coords.size() && q.coords[j] == 0) ++j;
    if (j == q.coords.size()) throw DomainError("the zero vector is not a projective point");
    Scalar inv = f.inv(q.coords[j]);
    for (auto& c : q.coords) c = f.mul(c, inv);
    q.chart = static_cast<int>(j);
    return q;
  }

  bool operator==(const ProjectivePoint& o) const { return coords == o.coords; }
};

/// Monomials in the n local coordinates of a chart with total degree < b.
inline std::vector<Exponent> local_jet_monomials(int n, int b) {
  std::vector<Exponent> out;
  for (int deg = 0; deg < b; ++deg) {
    if (n == 1) {
      out.push_back({deg});
      continue;
    }
    for (const auto& e : monomial_basis(n - 1, deg)->monomials()) out.push_back(e);
  }
  return out;
}

/// Zero-dimensional scheme sum_t b_t p_t: at p_t every Taylor coefficient of order < b_t vanishes.
class FatPointScheme {
 public:
  FatPointScheme() = default;
  FatPointScheme(int n, std::vector<ProjectivePoint> points, std::vector<int> multiplicities)
      : n_(n), points_(std::move(points)), mult_(std::move(multiplicities)) {
    if (points_.size() != mult_.size()) throw UsageError("one multiplicity per point required");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (static_cast<int>(points_[i].coords.size()) != n_ + 1)
        throw UsageError("point has the wrong number of coordinates");
      if (mult_[i] < 0) throw DomainError("negative multiplicity");
      for (std::size_t j = 0; j < i; ++j)
        if (points_[i] == points_[j]) throw DomainError("coincident points in fat-point scheme");
    }
  }

  int n() const { return n_; }
  const std::vector<ProjectivePoint>& points() const { return points_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  int max_multiplicity() const {
    int m = 0;
    for (int b : mult_) m = std::max(m, b);
    return m;
  }

  /// Length of the scheme: sum_t C(b_t + n - 1, n).
  std::size_t length() const {
    std::size_t l = 0;
    for (int b : mult_) l += static_cast<std::size_t>(binomial(b + n_ - 1, n_));
    return l;
  }

 private:
  int n_ = 2;
  std::vector<ProjectivePoint> points_;
  std::vector<int> mult_;
};

namespace detail {

/// Pascal triangle mod p up to row `m`.
inline std::vector<std::vector<Scalar>> pascal(const PrimeField& f, int m) {
  std::vector<std::vector<Scalar>> c(m + 1);
  for (int i = 0; i <= m; ++i) {
    c[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) c[i][j] = f.add(c[i - 1][j - 1], c[i - 1][j]);
  }
  return c;
}

/// Positions of the local coordinates (all variables but the chart variable).
inline std::vector<int> local_vars(int n, int chart) {
  std::vector<int> v;
  for (int i = 0; i <= n; ++i)
    if (i != chart) v.push_back(i);
  return v;
}

}  // namespace detail

/// Rows impose vanishing to order b_t at p_t on forms of degree d. A form x^e is dehomogenized at
/// the chart variable and translated to the point; row beta holds the coefficient of y^beta in
/// prod_{i != chart} (p_i + y_i)^{e_i}.
inline Matrix condition_matrix(const PrimeField& f, const FatPointScheme& w, int d) {
  f.require_degree(std::max(d, w.max_multiplicity()));
  const int n = w.n();
  auto basis = monomial_basis(n, d);
  Matrix m(f, w.length(), basis->size());
  auto binom = detail::pascal(f, std::max(d, 0));
  std::size_t row = 0;
  for (std::size_t t = 0; t < w.points().size(); ++t) {
    const auto& pt = w.points()[t];
    auto vars = detail::local_vars(n, pt.chart);
    for (const auto& beta : local_jet_monomials(n, w.multiplicities()[t])) {
      for (std::size_t k = 0; k < basis->size(); ++k) {
        const auto& e = (*basis)[k];
        Scalar v = 1;
        for (std::size_t li = 0; li < vars.size() && v; ++li) {
          int ei = e[vars[li]], bi = beta[li];
          if (bi > ei) {
            v = 0;
            break;
          }
          v = f.mul(v, f.mul(binom[ei][bi], f.pow(pt.coords[vars[li]], ei - bi)));
        }
        m(row, k) = v;
      }
      ++row;
    }
  }
  return m;
}

/// Subspace of degree-d forms, stored as independent coefficient columns.
struct FormSubspace {
  int n = 2;
  int degree = 0;
  Matrix span;  ///< rows index the monomials of degree `degree`

  std::size_t dimension() const { return span.cols(); }
  std::size_t ambient_dimension() const { return span.rows(); }
  Form element(std::size_t j) const { return Form{degree, span.column(j)}; }
};

/// Full space of degree-d forms (empty when d < 0).
inline FormSubspace full_space(const PrimeField& f, int n, int d) {
  if (d < 0) return FormSubspace{n, d, Matrix(f, 0, 0)};
  return FormSubspace{n, d, Matrix::identity(f, monomial_basis(n, d)->size())};
}

/// H^0(P^n, I_W(d)) as the kernel of the vanishing conditions.
inline FormSubspace ideal_section_space(const PrimeField& f, const FatPointScheme& w, int d) {
  if (d < 0) return FormSubspace{w.n(), d, Matrix(f, 0, 0)};
  return FormSubspace{w.n(), d, kernel_basis(condition_matrix(f, w, d))};
}

/// Matrix of linear forms; entry (i, j) is a coefficient vector over x_0..x_n.
class LinearFormMatrix {
 public:
  LinearFormMatrix() = default;
  LinearFormMatrix(int n, std::size_t rows, std::size_t cols)
      : n_(n), rows_(rows), cols_(cols), entries_(rows * cols, LinearForm(n + 1, 0)) {}

  int n() const { return n_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  LinearForm& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const LinearForm& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  LinearFormMatrix transposed() const {
    LinearFormMatrix t(n_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Coefficient matrix of variable v.
  Matrix coefficient_slice(const PrimeField& f, int v) const {
    Matrix m(f, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)[v];
    return m;
  }

  /// Scalar matrix A(q) at a point q.
  Matrix evaluate(const PrimeField& f, const std::vector<Scalar>& q) const {
    Matrix m(f, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        Scalar s = 0;
        for (int v = 0; v <= n_; ++v) s = f.add(s, f.mul((*this)(i, j)[v], q[v]));
        m(i, j) = s;
      }
    return m;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      for (auto c : e)
        if (c) return false;
    return true;
  }

  bool operator==(const LinearFormMatrix& o) const {
    return n_ == o.n_ && rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  int n_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LinearForm> entries_;
};

/// Image of src^{M.cols} under M, written in ambient coordinates of degree deg(src)+1 with one
/// block of rows per row of M. Its rank equals the rank of the induced map between subspaces.
inline Matrix apply_to_ambient(const PrimeField& f, const FormSubspace& src, const LinearFormMatrix& m) {
  const int n = src.n;
  const std::size_t dim = src.dimension();
  if (src.degree < 0 || dim == 0) return Matrix(f, 0, 0);
  auto shift = shift_table(n, src.degree);
  const std::size_t out_dim = monomial_basis(n, src.degree + 1)->size();
  Matrix out(f, m.rows() * out_dim, m.cols() * dim);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t col = j * dim + k;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto& ell = m(i, j);
        for (std::size_t mono = 0; mono < src.ambient_dimension(); ++mono) {
          Scalar c = src.span(mono, k);
          if (!c) continue;
          for (int v = 0; v <= n; ++v) {
            if (!ell[v]) continue;
            auto& slot = out(i * out_dim + shift[mono][v], col);
            slot = f.add(slot, f.mul(c, ell[v]));
          }
        }
      }
    }
  }
  return out;
}

/// Block matrix of src^{M.cols} -> dst^{M.rows}, (v_j) -> (sum_j M_ij v_j)_i, in the bases of
/// src and dst. Fails when a product leaves dst.
inline Matrix multiplication_map(const PrimeField& f, const FormSubspace& src, const FormSubspace& dst,
                                 const LinearFormMatrix& m) {
  if (dst.degree != src.degree + 1) throw UsageError("multiplication map: degree of target must be one more");
  if (m.n() != src.n || m.n() != dst.n) throw UsageError("multiplication map: ambient dimension mismatch");
  const std::size_t sdim = src.dimension(), ddim = dst.dimension();
  Matrix out(f, m.rows() * ddim, m.cols() * sdim);
  if (sdim == 0 || m.rows() == 0 || m.cols() == 0) return out;
  Matrix amb = apply_to_ambient(f, src, m);
  const std::size_t out_dim = dst.ambient_dimension();
  // One column per (row block i, source column); solved against dst in a single elimination.
  Matrix targets(f, out_dim, m.rows() * amb.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < amb.cols(); ++c)
      for (std::size_t r = 0; r < out_dim; ++r) targets(r, i * amb.cols() + c) = amb(i * out_dim + r, c);
  auto coords = solve_membership_many(dst.span, targets);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < amb.cols(); ++c) {
      const auto& x = coords[i * amb.cols() + c];
      if (!x) throw UsageError("multiplication map: product leaves the target subspace");
      for (std::size_t r = 0; r < ddim; ++r) out(i * ddim + r, c) = (*x)[r];
    }
  return out;
}

/// Multiplication by M on the jet spaces of W: J^{M.cols} -> J^{M.rows}. In the chart of p a linear
/// form l acts as the local function l(p + y); products are truncated at order b_t.
inline Matrix jet_multiplication(const PrimeField& f, const FatPointScheme& w, const LinearFormMatrix& m) {
  const int n = w.n();
  const std::size_t len = w.length();
  Matrix out(f, m.rows() * len, m.cols() * len);
  std::size_t offset = 0;
  for (std::size_t t = 0; t < w.points().size(); ++t) {
    const auto& pt = w.points()[t];
    auto vars = detail::local_vars(n, pt.chart);
    auto jets = local_jet_monomials(n, w.multiplicities()[t]);
    std::map<Exponent, std::size_t> where;
    for (std::size_t k = 0; k < jets.size(); ++k) where.emplace(jets[k], k);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto& ell = m(i, j);
        Scalar at_point = 0;
        for (int v = 0; v <= n; ++v) at_point = f.add(at_point, f.mul(ell[v], pt.coords[v]));
        for (std::size_t k = 0; k < jets.size(); ++k) {
          const std::size_t src = j * len + offset + k;
          if (at_point) out(i * len + offset + k, src) = f.add(out(i * len + offset + k, src), at_point);
          Exponent up = jets[k];
          for (std::size_t li = 0; li < vars.size(); ++li) {
            Scalar c = ell[vars[li]];
            ++up[li];
            auto it = where.find(up);
            if (c && it != where.end()) {
              auto& slot = out(i * len + offset + it->second, src);
              slot = f.add(slot, c);
            }
            --up[li];
          }
        }
      }
    }
    offset += jets.size();
  }
  return out;
}

/// Block-diagonal repetition of a matrix.
inline Matrix block_diagonal(const Matrix& m, std::size_t copies) {
  Matrix out(m.field(), m.rows() * copies, m.cols() * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(c * m.rows() + i, c * m.cols() + j) = m(i, j);
  return out;
}

}  // namespace kerbundle
