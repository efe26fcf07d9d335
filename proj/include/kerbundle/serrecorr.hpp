#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerbundle/blowup.hpp"
#include "kerbundle/matrix.hpp"
#include "kerbundle/polyspace.hpp"

namespace kerbundle {

/// m(r) = (d r^2 + (2 - d) r) / 2, the length of Z for a rank-r Ulrich bundle.
inline std::int64_t m_of_r(int d, int r) {
  if (r < 2) throw DomainError("m(r) needs r >= 2");
  if (d < 1 || d > 9) throw DomainError("del Pezzo degree must lie in 1..9");
  std::int64_t num = static_cast<std::int64_t>(d) * r * r + static_cast<std::int64_t>(2 - d) * r;
  if (num % 2 != 0) throw std::logic_error("m(r) is not integral");
  return num / 2;
}

/// Hilbert polynomial of the anticanonical model, P_X(t) = d t (t + 1) / 2 + 1.
struct HilbertData {
  int d = 3;

  std::int64_t P(std::int64_t t) const { return d * t * (t + 1) / 2 + 1; }
  std::int64_t delta(std::int64_t t) const { return P(t) - P(t - 1); }
  std::int64_t delta2(std::int64_t t) const { return delta(t) - delta(t - 1); }
  /// Coefficients of P_X in t^0, t^1, t^2 (times 2 to stay integral).
  std::vector<std::int64_t> doubled_coefficients() const { return {2, d, d}; }
};

inline HilbertData hilbert_data(const BlowupVariety& x) {
  if (x.n() != 2) throw DomainError("Hilbert data is defined here for surfaces");
  return {static_cast<int>(x.degree())};
}

/// Reduced points of P^2 lifted to X, kept away from the blown-up points.
class PointScheme {
 public:
  PointScheme(BlowupVariety x, std::vector<ProjectivePoint> plane_points)
      : x_(std::move(x)), pts_(std::move(plane_points)) {
    if (x_.n() != 2) throw DomainError("point schemes live on del Pezzo surfaces");
    if (x_.s() > 6) throw DomainError("requires strong del Pezzo (s<=6): -K_X is very ample only for s <= 6");
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (pts_[i].coords.size() != 3) throw UsageError("points of Z must have three coordinates");
      for (const auto& base : x_.points())
        if (pts_[i] == base) throw DomainError("point " + std::to_string(i) + " of Z is a blown-up point");
      for (std::size_t j = 0; j < i; ++j)
        if (pts_[i] == pts_[j]) throw DomainError("point " + std::to_string(i) + " of Z is repeated");
    }
  }

  const BlowupVariety& variety() const { return x_; }
  const std::vector<ProjectivePoint>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  int degree() const { return static_cast<int>(x_.degree()); }

 private:
  BlowupVariety x_;
  std::vector<ProjectivePoint> pts_;
};

/// m random points of P^2 away from the base points and from each other.
inline PointScheme sample_point_scheme(const BlowupVariety& x, std::size_t m, std::uint64_t seed) {
  const auto& f = x.field();
  Rng rng(seed);
  std::vector<ProjectivePoint> pts;
  while (pts.size() < m) {
    std::vector<std::int64_t> raw{rng.uniform(f.p()), rng.uniform(f.p()), rng.uniform(f.p())};
    if (raw[0] == 0 && raw[1] == 0 && raw[2] == 0) continue;
    auto q = ProjectivePoint::make(f, raw);
    bool clash = false;
    for (const auto& b : x.points()) clash = clash || b == q;
    for (const auto& o : pts) clash = clash || o == q;
    if (!clash) pts.push_back(q);
  }
  return PointScheme(x, std::move(pts));
}

/// H^0(I_{Z|X}(jH)) in the plane model: degree-3j curves with multiplicity j at every base
/// point, passing through Z.
inline FormSubspace ideal_graded_piece(const PointScheme& z, int j) {
  if (j < 0) throw DomainError("graded piece needs j >= 0");
  const auto& x = z.variety();
  std::vector<ProjectivePoint> pts = x.points();
  std::vector<int> mult(x.s(), j);
  for (const auto& q : z.points()) {
    pts.push_back(q);
    mult.push_back(1);
  }
  return ideal_section_space(x.field(), FatPointScheme(2, std::move(pts), std::move(mult)), 3 * j);
}

/// Anticanonical sections W = H^0(O_X(H)); their dimension is d + 1.
inline FormSubspace anticanonical_sections(const BlowupVariety& x) {
  return ideal_graded_piece(PointScheme(x, {}), 1);
}

namespace detail {

/// Ambient coefficient columns of w * g for every w in `w` and g in `g`, w-major.
inline Matrix products(const PrimeField& f, const FormSubspace& w, const FormSubspace& g) {
  int deg = w.degree + g.degree;
  Matrix out(f, monomial_basis(2, deg)->size(), w.dimension() * g.dimension());
  std::size_t col = 0;
  for (std::size_t a = 0; a < w.dimension(); ++a) {
    Form wa = w.element(a);
    for (std::size_t b = 0; b < g.dimension(); ++b) {
      Form prod = multiply(f, 2, wa, g.element(b));
      out.set_column(col++, prod.coeffs);
    }
  }
  return out;
}

}  // namespace detail

struct MrcReport {
  int d = 0;
  int r = 0;
  std::int64_t m = 0;
  std::size_t h0_below = 0;     ///< h^0(I(r-1)), expected 0
  std::size_t h0_at = 0;        ///< h^0(I(r)), expected (d-1) r + 1
  std::int64_t expected_at = 0;
  std::size_t h0_above = 0;     ///< h^0(I(r+1))
  std::size_t image_rank = 0;   ///< rank of W (x) I_r -> I_{r+1}
  bool below_ok = false;
  bool at_ok = false;
  bool surjective = false;

  bool pass() const { return below_ok && at_ok && surjective; }
};

/// Degree checks of the minimal resolution: nothing in degree r - 1, (d-1) r + 1 generators in
/// degree r, none in degree r + 1.
inline MrcReport check_mrc_degrees(const PointScheme& z, int r) {
  MrcReport rep;
  rep.d = z.degree();
  rep.r = r;
  rep.m = m_of_r(rep.d, r);
  if (static_cast<std::int64_t>(z.size()) != rep.m)
    throw UsageError("|Z| = " + std::to_string(z.size()) + " but m(r) = " + std::to_string(rep.m));
  const auto& f = z.variety().field();
  auto below = ideal_graded_piece(z, r - 1);
  auto at = ideal_graded_piece(z, r);
  auto above = ideal_graded_piece(z, r + 1);
  rep.h0_below = below.dimension();
  rep.h0_at = at.dimension();
  rep.h0_above = above.dimension();
  rep.expected_at = static_cast<std::int64_t>(rep.d - 1) * r + 1;
  rep.below_ok = rep.h0_below == 0;
  rep.at_ok = static_cast<std::int64_t>(rep.h0_at) == rep.expected_at;
  auto w = anticanonical_sections(z.variety());
  rep.image_rank = at.dimension() ? rank(detail::products(f, w, at)) : 0;
  rep.surjective = rep.image_rank == rep.h0_above;
  return rep;
}

/// gamma_{i,r-1} = sum_{l=0,1} (-1)^l C(d-l-1, i-l) Delta^{l+1} P_X(r+l) - C(d,i) (m(r) - P_X(r-1)).
inline std::int64_t gamma(int d, int i, int r) {
  if (r < 2) throw DomainError("gamma needs r >= 2");
  if (i < 2 || i > d - 1) throw DomainError("gamma_{i,r-1} is defined for 2 <= i <= d-1");
  HilbertData h{d};
  std::int64_t m = m_of_r(d, r);
  if (h.delta(r) != static_cast<std::int64_t>(d) * r) throw std::logic_error("Delta P_X(t) != d t");
  if (h.delta2(r + 1) != d) throw std::logic_error("Delta^2 P_X != d");
  if (m - h.P(r - 1) != r - 1) throw std::logic_error("m(r) - P_X(r-1) != r - 1");
  return binomial(d - 1, i) * h.delta(r) - binomial(d - 2, i - 1) * h.delta2(r + 1) -
         binomial(d, i) * (m - h.P(r - 1));
}

namespace detail {

/// Subsets of {0..n-1} of size k in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Koszul differential Lambda^k W (x) M_a -> Lambda^{k-1} W (x) M_{a+1}; mu[v] is x_v : M_a -> M_{a+1}.
inline Matrix koszul_differential(const PrimeField& f, int nvars, int k, std::size_t dim_src, std::size_t dim_dst,
                                  const std::vector<Matrix>& mu) {
  auto src = subsets(nvars, k);
  auto dst = subsets(nvars, k - 1);
  Matrix out(f, dst.size() * dim_dst, src.size() * dim_src);
  if (out.empty()) return out;
  std::map<std::vector<int>, std::size_t> dst_index;
  for (std::size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = i;
  for (std::size_t si = 0; si < src.size(); ++si) {
    for (std::size_t pos = 0; pos < src[si].size(); ++pos) {
      auto rest = src[si];
      int v = rest[pos];
      rest.erase(rest.begin() + static_cast<long>(pos));
      std::size_t di = dst_index.at(rest);
      bool negate = pos % 2 == 1;
      for (std::size_t a = 0; a < dim_dst; ++a)
        for (std::size_t b = 0; b < dim_src; ++b) {
          Scalar c = mu[v](a, b);
          out(di * dim_dst + a, si * dim_src + b) = negate ? f.neg(c) : c;
        }
    }
  }
  return out;
}

}  // namespace detail

/// beta_{i,j} of M = (+)_j H^0(I_{Z|X}(jH)) over the coordinate ring of P^d, as Koszul homology.
/// Small instances only: d <= 4 and |Z| <= m(2).
inline std::size_t koszul_betti(const PointScheme& z, int i, int j) {
  const int d = z.degree();
  if (d > 4 || static_cast<std::int64_t>(z.size()) > m_of_r(d, 2))
    throw DomainError("koszul_betti is limited to d <= 4 and r <= 2");
  if (i < 0 || i > d + 1) return 0;
  const auto& f = z.variety().field();
  const int nvars = d + 1;
  auto w = anticanonical_sections(z.variety());
  if (static_cast<int>(w.dimension()) != nvars) throw std::logic_error("h^0(O_X(H)) != d + 1");

  auto piece = [&](int a) {
    return a < 0 ? FormSubspace{2, 3 * a, Matrix(f, 0, 0)} : ideal_graded_piece(z, a);
  };
  // x_v : M_a -> M_{a+1} in the chosen bases.
  auto mult = [&](const FormSubspace& src, const FormSubspace& dst) {
    std::vector<Matrix> mu;
    for (int v = 0; v < nvars; ++v) {
      Matrix m(f, dst.dimension(), src.dimension());
      if (src.dimension() && dst.dimension()) {
        FormSubspace one{2, 3, Matrix(f, w.ambient_dimension(), 1)};
        one.span.set_column(0, w.span.column(v));
        auto prods = detail::products(f, one, src);
        auto coords = solve_membership_many(dst.span, prods);
        for (std::size_t b = 0; b < coords.size(); ++b) {
          if (!coords[b]) throw std::logic_error("product left the ideal");
          for (std::size_t a = 0; a < dst.dimension(); ++a) m(a, b) = (*coords[b])[a];
        }
      }
      mu.push_back(std::move(m));
    }
    return mu;
  };

  auto lo = piece(j - i - 1), mid = piece(j - i), hi = piece(j - i + 1);
  Matrix d_in = detail::koszul_differential(f, nvars, i + 1, lo.dimension(), mid.dimension(), mult(lo, mid));
  Matrix d_out = detail::koszul_differential(f, nvars, i, mid.dimension(), hi.dimension(), mult(mid, hi));
  std::size_t chain = detail::subsets(nvars, i).size() * mid.dimension();
  std::size_t kernel = chain - rank(d_out);
  return kernel - rank(d_in);
}

}  // namespace kerbundle
