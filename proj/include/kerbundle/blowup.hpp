#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kerbundle/field.hpp"
#include "kerbundle/matrix.hpp"
#include "kerbundle/polyspace.hpp"

namespace kerbundle {

/// Divisor class D = a e_0 - sum_i b_i e_i on Bl_s P^n. The b_i are multiplicities, so the
/// anticanonical class of a del Pezzo surface is (3; 1, ..., 1).
struct DivisorClass {
  int a = 0;
  std::vector<int> b;

  DivisorClass operator+(const DivisorClass& o) const {
    check_same(o);
    DivisorClass r{a + o.a, b};
    for (std::size_t i = 0; i < b.size(); ++i) r.b[i] += o.b[i];
    return r;
  }
  DivisorClass operator-(const DivisorClass& o) const { return *this + o * -1; }
  DivisorClass operator*(int k) const {
    DivisorClass r{a * k, b};
    for (auto& x : r.b) x *= k;
    return r;
  }
  bool operator==(const DivisorClass& o) const { return a == o.a && b == o.b; }

  bool multiplicities_nonnegative() const {
    return std::all_of(b.begin(), b.end(), [](int x) { return x >= 0; });
  }

  std::string str() const {
    std::ostringstream os;
    os << a << ";";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    return os.str();
  }

  /// Parses "a;b1,b2,...". Throws UsageError on malformed input.
  static DivisorClass parse(const std::string& text) {
    auto semi = text.find(';');
    if (semi == std::string::npos) throw UsageError("divisor must look like \"a;b1,b2,...\"");
    DivisorClass d;
    auto parse_int = [&](const std::string& s) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(s, &used);
      } catch (const std::exception&) {
        throw UsageError("bad integer '" + s + "' in divisor");
      }
      if (used != s.size()) throw UsageError("bad integer '" + s + "' in divisor");
      return v;
    };
    d.a = parse_int(text.substr(0, semi));
    std::string rest = text.substr(semi + 1);
    if (!rest.empty()) {
      std::stringstream ss(rest);
      std::string tok;
      while (std::getline(ss, tok, ',')) d.b.push_back(parse_int(tok));
      if (rest.back() == ',') throw UsageError("trailing comma in divisor");
    }
    return d;
  }

 private:
  void check_same(const DivisorClass& o) const {
    if (b.size() != o.b.size()) throw UsageError("divisor classes live on different blow-ups");
  }
};

/// Blow-up of P^n at s distinct points over GF(p).
class BlowupVariety {
 public:
  BlowupVariety(PrimeField field, int n, std::vector<ProjectivePoint> points)
      : field_(field), n_(n), points_(std::move(points)) {
    if (n_ < 2) throw DomainError("blow-ups are modelled for n >= 2");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (static_cast<int>(points_[i].coords.size()) != n_ + 1)
        throw UsageError("point " + std::to_string(i) + " has the wrong number of coordinates");
      for (std::size_t j = 0; j < i; ++j)
        if (points_[i] == points_[j]) throw DomainError("blown-up points must be distinct");
    }
  }

  const PrimeField& field() const { return field_; }
  int n() const { return n_; }
  std::size_t s() const { return points_.size(); }
  const std::vector<ProjectivePoint>& points() const { return points_; }

  /// H = -K_X = (n+1) e_0 - (n-1) sum e_i.
  DivisorClass anticanonical() const { return {n_ + 1, std::vector<int>(s(), n_ - 1)}; }
  DivisorClass e0() const { return {1, std::vector<int>(s(), 0)}; }
  DivisorClass zero() const { return {0, std::vector<int>(s(), 0)}; }

  /// Degree (-K_X)^n = (n+1)^n - s (n-1)^n; equals 9 - s on surfaces.
  std::int64_t degree() const {
    std::int64_t top = 1, ex = 1;
    for (int i = 0; i < n_; ++i) {
      top *= n_ + 1;
      ex *= n_ - 1;
    }
    return top - static_cast<std::int64_t>(s()) * ex;
  }

  void check_divisor(const DivisorClass& d) const {
    if (d.b.size() != s())
      throw UsageError("divisor has " + std::to_string(d.b.size()) + " exceptional coefficients, variety has " +
                       std::to_string(s()) + " points");
  }

  /// W = sum b_t p_t; requires b_t >= 0.
  FatPointScheme fat_scheme(const DivisorClass& d) const {
    check_divisor(d);
    if (!d.multiplicities_nonnegative()) throw DomainError("fat-point model needs b_i >= 0: " + d.str());
    return FatPointScheme(n_, points_, d.b);
  }

 private:
  PrimeField field_;
  int n_;
  std::vector<ProjectivePoint> points_;
};

/// K_X = -(n+1) e_0 + (n-1) sum e_i, i.e. (-(n+1); -(n-1), ..., -(n-1)) in multiplicity notation.
inline DivisorClass canonical_class(const BlowupVariety& x) { return x.anticanonical() * -1; }

/// C(m, k) extended polynomially in m, so C(a+n, n) = chi(O_{P^n}(a)) for every integer a.
inline std::int64_t binomial_poly(std::int64_t m, std::int64_t k) {
  if (k < 0) return 0;
  std::int64_t num = 1, den = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    num *= (m - i);
    den *= (i + 1);
  }
  return num / den;
}

/// chi(O_X(D)) = C(a+n, n) - sum C(b_i+n-1, n), applied for b_i >= 0 only.
inline std::int64_t chi_divisor(const BlowupVariety& x, const DivisorClass& d) {
  x.check_divisor(d);
  if (!d.multiplicities_nonnegative())
    throw DomainError("Euler characteristic formula is applied only for b_i >= 0: " + d.str());
  const int n = x.n();
  std::int64_t chi = binomial_poly(d.a + n, n);
  for (int bi : d.b) chi -= binomial(bi + n - 1, n);
  return chi;
}

/// Intersection pairing on a blown-up surface: e_0^2 = 1, e_i^2 = -1, mixed products 0.
inline std::int64_t intersection(const BlowupVariety& x, const DivisorClass& d1, const DivisorClass& d2) {
  if (x.n() != 2) throw DomainError("intersection pairing is only provided on surfaces");
  x.check_divisor(d1);
  x.check_divisor(d2);
  std::int64_t v = static_cast<std::int64_t>(d1.a) * d2.a;
  for (std::size_t i = 0; i < d1.b.size(); ++i) v -= static_cast<std::int64_t>(d1.b[i]) * d2.b[i];
  return v;
}

/// h^0(O_X(D)) through the fat-point isomorphism; 0 when a < 0 (not effective).
inline std::size_t h0_divisor(const BlowupVariety& x, const DivisorClass& d) {
  x.check_divisor(d);
  if (d.a < 0) return 0;
  return ideal_section_space(x.field(), x.fat_scheme(d), d.a).dimension();
}

/// One h^i value: exact when lo == hi, otherwise an interval with the reason it is not pinned.
struct CohomologyEntry {
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi = 0;  ///< nullopt: unbounded above
  std::string reason;

  static CohomologyEntry exact(std::int64_t v) { return {v, v, {}}; }
  static CohomologyEntry unknown(std::string why) { return {0, std::nullopt, std::move(why)}; }
  bool is_exact() const { return hi && *hi == lo; }
  std::int64_t value() const {
    if (!is_exact()) throw UsageError("cohomology entry is not exact (" + reason + ")");
    return lo;
  }
};

struct CohomologyTable {
  std::vector<CohomologyEntry> h;  ///< h^0 .. h^n
  std::vector<std::string> citations;

  bool all_exact() const {
    return std::all_of(h.begin(), h.end(), [](const CohomologyEntry& e) { return e.is_exact(); });
  }
  std::vector<std::int64_t> values() const {
    std::vector<std::int64_t> v;
    for (const auto& e : h) v.push_back(e.value());
    return v;
  }
  std::int64_t euler() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < h.size(); ++i) s += (i % 2 ? -1 : 1) * h[i].value();
    return s;
  }
  std::string str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (i) os << ",";
      if (h[i].is_exact())
        os << h[i].lo;
      else
        os << "[" << h[i].lo << "," << (h[i].hi ? std::to_string(*h[i].hi) : "inf") << "]";
    }
    os << ")";
    return os.str();
  }
};

/// Multiplicities in [-(n-1), -1] can be raised to 0: O_X(D + jE) / O_X(D + (j-1)E) = O_{P^{n-1}}(-j)
/// is acyclic for 1 <= j <= n-1.
inline std::optional<DivisorClass> acyclic_normal_form(const BlowupVariety& x, const DivisorClass& d) {
  DivisorClass c = d;
  for (auto& bi : c.b) {
    if (bi < -(x.n() - 1)) return std::nullopt;
    bi = std::max(bi, 0);
  }
  return c;
}

/// Cohomology of O_X(a e_0 - sum b_t e_t) realized on P^n as I_W(a):
///   H^0 = ker(S_a -> J_W), H^1 = coker(S_a -> J_W), H^i = 0 for 2 <= i <= n-1,
///   H^n = H^n(O_{P^n}(a)) = S_{-a-n-1}^*.
/// J_W is the space of jets of order < b_t at each p_t.
struct LineBundleModel {
  DivisorClass divisor;  ///< with b_t >= 0
  FatPointScheme scheme;
  FormSubspace sections;
  Matrix evaluation;  ///< S_a -> J_W
  std::size_t evaluation_rank = 0;
  std::size_t top_dimension = 0;

  int n() const { return scheme.n(); }
  int degree() const { return divisor.a; }
  std::size_t h(int i) const {
    if (i == 0) return sections.dimension();
    if (i == 1) return scheme.length() - evaluation_rank;
    if (i == n()) return top_dimension;
    return 0;
  }
};

inline LineBundleModel line_bundle_model(const BlowupVariety& x, const DivisorClass& d) {
  x.check_divisor(d);
  const auto& f = x.field();
  LineBundleModel m{d, x.fat_scheme(d), {}, {}, 0, 0};
  m.sections = ideal_section_space(f, m.scheme, d.a);
  m.evaluation = condition_matrix(f, m.scheme, d.a);
  m.evaluation_rank = rank(m.evaluation);
  const int top = -d.a - x.n() - 1;
  m.top_dimension = top >= 0 ? monomial_basis(x.n(), top)->size() : 0;
  return m;
}

/// h^1 of a b >= 0 divisor read directly from the cokernel of evaluation on jets.
inline std::size_t h1_fat_points(const BlowupVariety& x, const DivisorClass& d) {
  auto w = x.fat_scheme(d);
  return w.length() - rank(condition_matrix(x.field(), w, d.a));
}

/// Ranks of H^i(m): H^i(L)^{cols} -> H^i(L')^{rows} for the map given by a matrix of linear forms,
/// where L' = L + e_0 on the same fat-point scheme.
inline std::vector<std::size_t> induced_ranks(const PrimeField& f, const LineBundleModel& src,
                                              const LineBundleModel& dst, const LinearFormMatrix& m) {
  if (dst.degree() != src.degree() + 1 || !(dst.divisor.b == src.divisor.b))
    throw UsageError("induced map needs target = source + e_0");
  const int n = src.n();
  std::vector<std::size_t> r(n + 1, 0);
  r[0] = rank(apply_to_ambient(f, src.sections, m));
  if (src.h(1) && dst.h(1)) {
    Matrix jets = jet_multiplication(f, src.scheme, m);
    Matrix ev = block_diagonal(dst.evaluation, m.rows());
    r[1] = rank(hconcat({&jets, &ev})) - m.rows() * dst.evaluation_rank;
  }
  if (src.top_dimension && dst.top_dimension) {
    // Serre duality on P^n: H^n(O(a)) -> H^n(O(a+1)) is dual to S_{-a-n-2} -> S_{-a-n-1}.
    const int dual_deg = -src.degree() - n - 2;
    r[n] = rank(apply_to_ambient(f, full_space(f, n, dual_deg), m.transposed()));
  }
  return r;
}

/// h^i(O_X(D)) for every i. Exact whenever D (after the acyclic normal form) has b_t >= 0, or
/// when K_X - D does; other shapes come back flagged.
inline CohomologyTable cohomology_divisor(const BlowupVariety& x, const DivisorClass& d) {
  x.check_divisor(d);
  const int n = x.n();
  CohomologyTable t;
  if (auto c = acyclic_normal_form(x, d)) {
    t.h.resize(n + 1);
    const auto h0 = static_cast<std::int64_t>(h0_divisor(x, *c));
    const int top = -c->a - n - 1;
    const auto hn = top >= 0 ? static_cast<std::int64_t>(monomial_basis(n, top)->size()) : 0;
    t.h[0] = CohomologyEntry::exact(h0);
    t.h[n] = CohomologyEntry::exact(hn);
    for (int i = 2; i < n; ++i) t.h[i] = CohomologyEntry::exact(0);
    if (n > 2) t.citations.push_back("h^i = 0 for 2 <= i <= n-1 (b_t >= 0 checked)");
    if (hn == 0 && c->a >= -n) t.citations.push_back("h^n = 0 since a >= -n");
    if (c->a < 0) t.citations.push_back("h^0 = 0 since a < 0 (not effective)");
    if (!(*c == d)) t.citations.push_back("multiplicities in [-(n-1),-1] raised to 0 (acyclic exceptional layers)");
    std::int64_t alt = h0 + (n % 2 ? -hn : hn);
    t.h[1] = CohomologyEntry::exact(alt - chi_divisor(x, *c));
    t.citations.push_back("h^1 from the Euler characteristic");
    return t;
  }
  DivisorClass dual = canonical_class(x) - d;
  if (acyclic_normal_form(x, dual)) {
    CohomologyTable dt = cohomology_divisor(x, dual);
    t.h.assign(dt.h.rbegin(), dt.h.rend());
    t.citations = dt.citations;
    t.citations.push_back("Serre duality h^i(D) = h^{n-i}(K_X - D)");
    return t;
  }
  t.h.assign(n + 1, CohomologyEntry::unknown("unsupported-shape"));
  return t;
}

struct GeneralPositionResult {
  bool general = true;
  std::string violation;  ///< "collinear", "six on a conic", "eight on a singular cubic", "coincident"
  std::vector<std::size_t> witness;
};

namespace detail {

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// No three points on a line, no six on a conic, no eight on a cubic singular at one of them.
inline GeneralPositionResult is_general_position(const PrimeField& f, const std::vector<ProjectivePoint>& pts) {
  if (pts.size() > 8) throw DomainError("general position is defined here for at most 8 points");
  const std::size_t s = pts.size();
  for (const auto& p : pts)
    if (p.coords.size() != 3) throw UsageError("general position test is for points of P^2");
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (pts[i] == pts[j]) return {false, "coincident", {j, i}};

  auto subset = [&](const std::vector<std::size_t>& idx, int mult_at = -1) {
    std::vector<ProjectivePoint> sub;
    std::vector<int> mult;
    for (auto i : idx) {
      sub.push_back(pts[i]);
      mult.push_back(static_cast<int>(i) == mult_at ? 2 : 1);
    }
    return FatPointScheme(2, sub, mult);
  };

  if (s >= 3) {
    std::vector<std::size_t> idx{0, 1, 2};
    do {
      if (rank(condition_matrix(f, subset(idx), 1)) < 3) return {false, "collinear", idx};
    } while (detail::next_combination(idx, s));
  }
  if (s >= 6) {
    std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5};
    do {
      if (rank(condition_matrix(f, subset(idx), 2)) < 6) return {false, "six on a conic", idx};
    } while (detail::next_combination(idx, s));
  }
  if (s == 8) {
    std::vector<std::size_t> all{0, 1, 2, 3, 4, 5, 6, 7};
    for (std::size_t i = 0; i < 8; ++i) {
      // 7 simple conditions plus 3 for the double point on the 10-dimensional space of cubics.
      if (rank(condition_matrix(f, subset(all, static_cast<int>(i)), 3)) < 10)
        return {false, "eight on a singular cubic", all};
    }
  }
  return {};
}

struct FanoStatus {
  bool fano = false;
  bool very_ample = false;  ///< -K_X very ample ("strong")
  std::string reason;
};

/// Fano iff (n = 2, s <= 8, general position) or (n >= 3, s <= 1). -K_X is very ample for n >= 3
/// Fano and for surfaces with s <= 6.
inline FanoStatus is_fano(const BlowupVariety& x) {
  if (x.n() >= 3) {
    if (x.s() <= 1) return {true, true, "blow-up of P^n, n >= 3, at s <= 1 points"};
    return {false, false, "not Fano: blow-up of P^n, n >= 3, is Fano if and only if s <= 1"};
  }
  if (x.s() > 8) return {false, false, "not Fano: a del Pezzo surface blows up at most 8 points"};
  auto gp = is_general_position(x.field(), x.points());
  if (!gp.general) return {false, false, "not Fano: points not in general position (" + gp.violation + ")"};
  if (x.s() <= 6) return {true, true, "del Pezzo surface of degree " + std::to_string(9 - x.s())};
  return {true, false,
          x.s() == 7 ? "del Pezzo of degree 2: -K_X ample and globally generated, not very ample"
                     : "del Pezzo of degree 1: -K_X ample, -2K_X globally generated"};
}

/// Uniformly sampled point configuration, rejected until it is in general position (surfaces) or
/// simply distinct (n >= 3). Returns the points and the number of rejected draws.
struct SampledPoints {
  std::vector<ProjectivePoint> points;
  std::uint64_t seed = 0;
  int rejected = 0;
};

inline SampledPoints sample_points(const PrimeField& f, int n, std::size_t s, std::uint64_t seed,
                                   int max_attempts = 100) {
  SampledPoints out;
  out.seed = seed;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<ProjectivePoint> pts;
    bool ok = true;
    for (std::size_t i = 0; i < s && ok; ++i) {
      std::vector<std::int64_t> raw(n + 1);
      for (auto& c : raw) c = rng.uniform(f.p());
      if (std::all_of(raw.begin(), raw.end(), [](std::int64_t c) { return c == 0; })) {
        ok = false;
        break;
      }
      auto q = ProjectivePoint::make(f, raw);
      for (const auto& prev : pts)
        if (prev == q) ok = false;
      pts.push_back(q);
    }
    if (ok && n == 2) ok = is_general_position(f, pts).general;
    if (ok) {
      out.points = std::move(pts);
      return out;
    }
    ++out.rejected;
  }
  throw DomainError("could not sample a configuration in general position");
}

}  // namespace kerbundle
