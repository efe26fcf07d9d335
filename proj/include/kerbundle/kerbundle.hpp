#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerbundle/blowup.hpp"
#include "kerbundle/field.hpp"
#include "kerbundle/matrix.hpp"
#include "kerbundle/polyspace.hpp"

namespace kerbundle {

/// Raised when every sampled matrix in the retry budget fails certification.
class GenericityFailure : public std::runtime_error {
 public:
  GenericityFailure(const std::string& what, std::vector<std::uint64_t> seeds)
      : std::runtime_error(what), seeds_(std::move(seeds)) {}
  const std::vector<std::uint64_t>& seeds() const { return seeds_; }

 private:
  std::vector<std::uint64_t> seeds_;
};

/// Sizes (a, b) of O(-2e_0)^a -> O(-e_0)^b.
///   n even: a = r, b = (n+2)r/2 + c, r >= 2, 0 <= c <= n/2 - 1
///   n odd:  a = 2r, b = (n+2)r + c, r >= 1, 0 <= c <= n - 1
struct RankPlan {
  int n = 2;
  int r = 2;
  int c = 0;
  int a = 2;
  int b = 4;

  static RankPlan make(int n, int r, int c) {
    if (n < 2) throw DomainError("rank plans need n >= 2");
    RankPlan p{n, r, c, 0, 0};
    if (n % 2 == 0) {
      if (r < 2) throw DomainError("even n requires r >= 2");
      if (c < 0 || c > n / 2 - 1) throw DomainError("even n requires 0 <= c <= n/2 - 1");
      p.a = r;
      p.b = (n + 2) * r / 2 + c;
    } else {
      if (r < 1) throw DomainError("odd n requires r >= 1");
      if (c < 0 || c > n - 1) throw DomainError("odd n requires 0 <= c <= n - 1");
      p.a = 2 * r;
      p.b = (n + 2) * r + c;
    }
    return p;
  }

  int bundle_rank() const { return b - a; }
};

/// a >= 1, b >= a + n, 2b >= (n+2)a.
inline bool check_eh_inequalities(int a, int b, int n) { return a >= 1 && b >= a + n && 2 * b >= (n + 2) * a; }

/// a x b matrix of linear forms with uniform coefficients; deterministic per seed.
inline LinearFormMatrix sample_matrix(const PrimeField& f, const RankPlan& plan, std::uint64_t seed) {
  if (!check_eh_inequalities(plan.a, plan.b, plan.n)) throw DomainError("plan violates the surjectivity range");
  Rng rng(seed);
  LinearFormMatrix m(plan.n, plan.a, plan.b);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (auto& c : m(i, j)) c = rng.uniform(f.p());
  return m;
}

struct SurjectivityCertificate {
  std::size_t h0_rank = 0;    ///< rank of S_1^b -> S_2^a
  std::size_t h0_target = 0;  ///< a * C(n+2, 2)
  bool h0_surjective = false;
  int trials = 0;
  int pointwise_failures = 0;
  bool pointwise_full_rank = false;
  std::uint64_t seed = 0;
  /// Bound on the chance that a single point of a non-degenerate matrix is misreported (a/p).
  double per_trial_false_alarm = 0;

  bool pass() const { return h0_surjective && pointwise_full_rank; }
};

/// Exact check that H^0(m(1)) is onto, plus rank(A(q)) = a at `trials` random points q.
inline SurjectivityCertificate certify_surjectivity(const PrimeField& f, const LinearFormMatrix& a, int trials,
                                                    std::uint64_t seed = 0) {
  SurjectivityCertificate c;
  const int n = a.n();
  c.seed = seed;
  c.trials = trials;
  c.h0_target = a.rows() * monomial_basis(n, 2)->size();
  c.h0_rank = rank(apply_to_ambient(f, full_space(f, n, 1), a));
  c.h0_surjective = c.h0_rank == c.h0_target;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<Scalar> q(n + 1);
    do {
      for (auto& x : q) x = rng.uniform(f.p());
    } while (std::all_of(q.begin(), q.end(), [](Scalar x) { return x == 0; }));
    if (rank(a.evaluate(f, q)) != a.rows()) ++c.pointwise_failures;
  }
  c.pointwise_full_rank = trials > 0 && c.pointwise_failures == 0;
  c.per_trial_false_alarm = static_cast<double>(a.rows()) / f.p();
  return c;
}

/// dim of {(P, Q) : P A = A Q} for P a x a, Q b x b scalar, imposed variable by variable.
inline std::size_t stabilizer_dimension(const PrimeField& f, const LinearFormMatrix& m) {
  const std::size_t a = m.rows(), b = m.cols();
  const int n = m.n();
  Matrix sys(f, (n + 1) * a * b, a * a + b * b);
  for (int v = 0; v <= n; ++v) {
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = 0; j < b; ++j) {
        const std::size_t row = (v * a + i) * b + j;
        for (std::size_t k = 0; k < a; ++k) {
          auto& slot = sys(row, i * a + k);
          slot = f.add(slot, m(k, j)[v]);
        }
        for (std::size_t k = 0; k < b; ++k) {
          auto& slot = sys(row, a * a + k * b + j);
          slot = f.sub(slot, m(i, k)[v]);
        }
      }
    }
  }
  return sys.cols() - rank(sys);
}

struct FamilyDimension {
  std::int64_t defining = 0;     ///< (n+1)ab - a^2 - b^2 + 1
  std::int64_t closed_form = 0;  ///< closed form in r and c, carrying +c^2
  bool match = false;
  std::string flag;
};

inline FamilyDimension family_dimension(const RankPlan& plan) {
  const std::int64_t n = plan.n, a = plan.a, b = plan.b, r = plan.r, c = plan.c;
  FamilyDimension d;
  d.defining = (n + 1) * a * b - a * a - b * b + 1;
  if (n % 2 == 0)
    d.closed_form = ((n + 2) * n - 4) / 4 * r * r - c * r + c * c + 1;
  else
    d.closed_form = ((n + 2) * n - 4) * r * r - 2 * c * r + c * c + 1;
  d.match = d.defining == d.closed_form;
  if (!d.match)
    d.flag = "closed form carries +c^2 but dim M - a^2 - b^2 + 1 gives -c^2 (difference " +
             std::to_string(d.closed_form - d.defining) + ")";
  return d;
}

/// Presentation 0 -> O_X(-2e_0)^a -f-> O_X(-e_0)^b -> E -> 0 with f = A^T, together with its
/// dual 0 -> E^* -> O_X(e_0)^b -A-> O_X(2e_0)^a -> 0.
struct KernelBundlePresentation {
  BlowupVariety variety;
  RankPlan plan;
  LinearFormMatrix matrix;  ///< a x b
  SurjectivityCertificate certificate;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> attempted_seeds;
  std::size_t stabilizer = 0;
};

struct ConstructionOptions {
  int retries = 5;
  int pointwise_trials = 200;
  bool require_simple = true;
};

/// Fano check shared by every construction entry point.
inline void require_fano(const BlowupVariety& x) {
  auto st = is_fano(x);
  if (!st.fano) throw DomainError(st.reason);
}

/// Wraps a given matrix; certification results are recorded, not enforced.
inline KernelBundlePresentation present(const BlowupVariety& x, const RankPlan& plan, LinearFormMatrix a,
                                        int trials = 200, std::uint64_t seed = 0) {
  if (plan.n != x.n() || a.n() != x.n()) throw UsageError("plan, matrix and variety disagree on n");
  if (static_cast<int>(a.rows()) != plan.a || static_cast<int>(a.cols()) != plan.b)
    throw UsageError("matrix shape does not match the plan");
  require_fano(x);
  KernelBundlePresentation p{x, plan, std::move(a), {}, seed, {seed}, 0};
  p.certificate = certify_surjectivity(x.field(), p.matrix, trials, Rng::derive(seed, 0xC0FFEE));
  p.stabilizer = stabilizer_dimension(x.field(), p.matrix);
  return p;
}

/// Samples with derived seeds until the matrix certifies (and is simple when requested).
inline KernelBundlePresentation construct(const BlowupVariety& x, const RankPlan& plan, std::uint64_t master_seed,
                                          const ConstructionOptions& opt = {}) {
  require_fano(x);
  std::vector<std::uint64_t> seeds;
  for (int attempt = 0; attempt < opt.retries; ++attempt) {
    std::uint64_t seed = Rng::derive(master_seed, static_cast<std::uint64_t>(attempt));
    seeds.push_back(seed);
    auto p = present(x, plan, sample_matrix(x.field(), plan, seed), opt.pointwise_trials, seed);
    if (p.certificate.pass() && (!opt.require_simple || p.stabilizer == 1)) {
      p.attempted_seeds = seeds;
      return p;
    }
  }
  throw GenericityFailure("genericity failure: no certified matrix within " + std::to_string(opt.retries) +
                              " attempts",
                          seeds);
}

namespace detail {

inline std::optional<LineBundleModel> try_model(const BlowupVariety& x, const DivisorClass& d) {
  auto c = acyclic_normal_form(x, d);
  if (!c) return std::nullopt;
  return line_bundle_model(x, *c);
}

/// Every entry unresolved, tagged with the reason.
inline CohomologyTable flagged(int n, const std::string& why) {
  CohomologyTable t;
  t.h.assign(n + 1, CohomologyEntry::unknown(why));
  return t;
}

}  // namespace detail

/// Which exact sequence a table was read from.
enum class Route { Kernel, Dual };

inline const char* route_name(Route r) { return r == Route::Kernel ? "kernel" : "dual"; }

/// h^i(E(tH)) from 0 -> O(tH-2e_0)^a -> O(tH-e_0)^b -> E(tH) -> 0:
///   h^i(E(tH)) = coker H^i(f) + ker H^{i+1}(f).
inline CohomologyTable kernel_route(const KernelBundlePresentation& bp, int t) {
  const auto& x = bp.variety;
  const int n = x.n();
  DivisorClass th = x.anticanonical() * t;
  auto l1 = detail::try_model(x, th - x.e0() * 2);
  auto l2 = detail::try_model(x, th - x.e0());
  if (!l1 || !l2) return detail::flagged(n, "LES-indeterminate: line bundle outside the fat-point model");
  const std::size_t a = bp.plan.a, b = bp.plan.b;
  auto ranks = induced_ranks(x.field(), *l1, *l2, bp.matrix.transposed());
  CohomologyTable table;
  table.h.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    std::int64_t coker = static_cast<std::int64_t>(b * l2->h(i)) - static_cast<std::int64_t>(ranks[i]);
    std::int64_t ker = 0;
    if (i + 1 <= n) ker = static_cast<std::int64_t>(a * l1->h(i + 1)) - static_cast<std::int64_t>(ranks[i + 1]);
    table.h[i] = CohomologyEntry::exact(coker + ker);
  }
  table.citations.push_back("kernel route: 0 -> O(tH-2e0)^a -> O(tH-e0)^b -> E(tH) -> 0");
  if (n > 2) table.citations.push_back("line bundles: h^i = 0 for 2 <= i <= n-1 (b_t >= 0 checked)");
  return table;
}

/// h^i(E(tH)) = h^{n-i}(E^*(sH)), s = -t-1, from 0 -> E^*(sH) -> O(e_0+sH)^b -> O(2e_0+sH)^a -> 0:
///   h^j(E^*(sH)) = ker H^j(A) + coker H^{j-1}(A).
inline CohomologyTable dual_route(const KernelBundlePresentation& bp, int t) {
  const auto& x = bp.variety;
  const int n = x.n();
  const int s = -t - 1;
  DivisorClass sh = x.anticanonical() * s;
  auto l3 = detail::try_model(x, sh + x.e0());
  auto l4 = detail::try_model(x, sh + x.e0() * 2);
  if (!l3 || !l4) return detail::flagged(n, "LES-indeterminate: line bundle outside the fat-point model");
  const std::size_t a = bp.plan.a, b = bp.plan.b;
  auto ranks = induced_ranks(x.field(), *l3, *l4, bp.matrix);
  std::vector<std::int64_t> dual(n + 1);
  for (int j = 0; j <= n; ++j) {
    std::int64_t ker = static_cast<std::int64_t>(b * l3->h(j)) - static_cast<std::int64_t>(ranks[j]);
    std::int64_t coker = 0;
    if (j >= 1) coker = static_cast<std::int64_t>(a * l4->h(j - 1)) - static_cast<std::int64_t>(ranks[j - 1]);
    dual[j] = ker + coker;
  }
  CohomologyTable table;
  for (int i = 0; i <= n; ++i) table.h.push_back(CohomologyEntry::exact(dual[n - i]));
  table.citations.push_back("dual route: 0 -> E*(sH) -> O(e0+sH)^b -> O(2e0+sH)^a -> 0, s = -t-1");
  table.citations.push_back("Serre duality h^i(E(tH)) = h^{n-i}(E*((-t-1)H))");
  return table;
}

/// Kernel route for t >= 0, dual route for t <= -1.
inline CohomologyTable bundle_cohomology(const KernelBundlePresentation& bp, int t) {
  if (!bp.certificate.pass()) throw UsageError("presentation is not certified");
  return t >= 0 ? kernel_route(bp, t) : dual_route(bp, t);
}

/// chi(E(tH)) from the Euler characteristics of the line bundles of whichever sequence keeps the
/// multiplicities non-negative.
inline std::int64_t expected_euler(const KernelBundlePresentation& bp, int t) {
  const auto& x = bp.variety;
  const std::int64_t a = bp.plan.a, b = bp.plan.b;
  if (t >= 0) {
    DivisorClass th = x.anticanonical() * t;
    return b * chi_divisor(x, th - x.e0()) - a * chi_divisor(x, th - x.e0() * 2);
  }
  const int s = -t - 1;
  DivisorClass sh = x.anticanonical() * s;
  std::int64_t dual = b * chi_divisor(x, sh + x.e0()) - a * chi_divisor(x, sh + x.e0() * 2);
  return x.n() % 2 ? -dual : dual;
}

struct RegularityCheck {
  int t = 0;
  int i = 0;
  DivisorClass divisor;  ///< t(n+1) - 2i with multiplicity t(n-1)
  CohomologyTable table;
  bool vanishes = false;
};

struct AcmReport {
  int t_min = 0;
  int t_max = 0;
  std::map<int, CohomologyTable> tables;
  std::vector<RegularityCheck> regularity;
  std::vector<std::string> failures;
  std::string label = "window + regularity";
  bool pass = false;
};

/// h^i(E(tH)) = 0 for 1 <= i <= n-1 over the window, plus the 0-regularity of I_W(t(n+1)) with
/// respect to O(2) (H^i(I_W(t(n+1) - 2i)) = 0, 1 <= i <= n) for t >= 1 when n >= 3.
inline AcmReport verify_acm(const KernelBundlePresentation& bp, int t_min, int t_max) {
  if (t_min > t_max) throw UsageError("empty ACM window");
  AcmReport rep;
  rep.t_min = t_min;
  rep.t_max = t_max;
  const auto& x = bp.variety;
  const int n = x.n();
  if (!bp.certificate.pass()) {
    if (!bp.certificate.h0_surjective) rep.failures.push_back("H^0(m(1)) is not surjective");
    if (!bp.certificate.pointwise_full_rank) rep.failures.push_back("m drops rank at a sampled point");
    return rep;
  }
  for (int t = t_min; t <= t_max; ++t) {
    auto table = bundle_cohomology(bp, t);
    for (int i = 1; i <= n - 1; ++i) {
      const auto& e = table.h[i];
      if (!e.is_exact())
        rep.failures.push_back("t=" + std::to_string(t) + ": h^" + std::to_string(i) + " " + e.reason);
      else if (e.lo != 0)
        rep.failures.push_back("t=" + std::to_string(t) + ": h^" + std::to_string(i) + " = " + std::to_string(e.lo));
    }
    rep.tables.emplace(t, std::move(table));
  }
  if (n >= 3) {
    for (int t = std::max(1, t_min); t <= t_max; ++t) {
      for (int i = 1; i <= n; ++i) {
        RegularityCheck rc;
        rc.t = t;
        rc.i = i;
        rc.divisor = DivisorClass{t * (n + 1) - 2 * i, std::vector<int>(x.s(), t * (n - 1))};
        rc.table = cohomology_divisor(x, rc.divisor);
        rc.vanishes = rc.table.h[i].is_exact() && rc.table.h[i].lo == 0;
        if (!rc.vanishes)
          rep.failures.push_back("regularity: H^" + std::to_string(i) + "(I_W(" + std::to_string(rc.divisor.a) +
                                 ")) != 0 at t=" + std::to_string(t));
        rep.regularity.push_back(std::move(rc));
      }
    }
  }
  rep.pass = rep.failures.empty();
  return rep;
}

/// Chern data of E(lH). c_1 is a divisor class for every n; c_2 and the slope are for surfaces.
struct ChernData {
  int rank = 0;
  DivisorClass c1;
  std::optional<std::int64_t> c2;
  std::optional<std::int64_t> slope_numerator;  ///< c_1 . H^{n-1}

  std::optional<double> slope() const {
    if (!slope_numerator) return std::nullopt;
    return static_cast<double>(*slope_numerator) / rank;
  }
};

/// From c(E) = (1 - e_0)^b / (1 - 2e_0)^a, then the twist rules
///   c_1(F(lH)) = c_1 + r l H,  c_2(F(lH)) = c_2 + (r-1) l c_1.H + C(r,2) l^2 H^2.
inline ChernData chern_and_slope(const KernelBundlePresentation& bp, int l) {
  const auto& x = bp.variety;
  const std::int64_t a = bp.plan.a, b = bp.plan.b;
  ChernData cd;
  cd.rank = bp.plan.bundle_rank();
  DivisorClass c1 = x.e0() * static_cast<int>(2 * a - b);
  cd.c1 = c1 + x.anticanonical() * (cd.rank * l);
  if (x.n() == 2) {
    const DivisorClass h = x.anticanonical();
    std::int64_t c2 = binomial(b, 2) - 2 * a * b + 4 * binomial(a + 1, 2);
    c2 += static_cast<std::int64_t>(cd.rank - 1) * l * intersection(x, c1, h) +
          binomial(cd.rank, 2) * l * l * intersection(x, h, h);
    cd.c2 = c2;
    cd.slope_numerator = intersection(x, cd.c1, h);
  }
  return cd;
}

/// chi(F) = c_1(c_1 - K)/2 + r - c_2 on a rational surface.
inline std::int64_t riemann_roch_surface(const BlowupVariety& x, const ChernData& cd) {
  if (x.n() != 2 || !cd.c2) throw DomainError("Riemann-Roch check is for surfaces");
  return intersection(x, cd.c1, cd.c1 - canonical_class(x)) / 2 + cd.rank - *cd.c2;
}

struct UlrichCheck {
  std::string name;
  std::int64_t expected = 0;
  std::int64_t actual = 0;
  bool ok = false;
};

struct UlrichReport {
  std::vector<UlrichCheck> checks;
  AcmReport acm;
  bool pass = false;
};

/// E(H) initialized Ulrich on a del Pezzo surface of degree d:
///   h^0(E) = 0, h^0(E(H)) = d r, h^1(E(H)) = 0, ACM on the window, and
///   H^i(F(-i)) = 0 for i > 0, H^i(F(-i-1)) = 0 for i < 2 with F = E(H);
///   with 8 blown-up points additionally h^0(E(2H)) = 3r.
inline UlrichReport verify_ulrich(const KernelBundlePresentation& bp, int t_min = -4, int t_max = 4) {
  const auto& x = bp.variety;
  if (x.n() != 2) throw DomainError("Ulrich verification is provided for del Pezzo surfaces");
  UlrichReport rep;
  rep.acm = verify_acm(bp, std::min(t_min, -1), std::max(t_max, 2));
  if (!bp.certificate.pass()) return rep;
  const std::int64_t d = x.degree(), r = bp.plan.bundle_rank();
  auto h = [&](int t, int i) { return rep.acm.tables.at(t).h[i].value(); };
  auto add = [&](std::string name, std::int64_t expected, std::int64_t actual) {
    rep.checks.push_back({std::move(name), expected, actual, expected == actual});
  };
  add("h0(E)", 0, h(0, 0));
  add("h0(E(H))", d * r, h(1, 0));
  add("h1(E(H))", 0, h(1, 1));
  add("h1(F(-1)) = h1(E)", 0, h(0, 1));
  add("h2(F(-2)) = h2(E(-H))", 0, h(-1, 2));
  add("h0(F(-1)) = h0(E)", 0, h(0, 0));
  add("h1(F(-2)) = h1(E(-H))", 0, h(-1, 1));
  if (x.s() == 8) add("h0(E(2H))", 3 * r, h(2, 0));
  rep.pass = rep.acm.pass;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.ok;
  return rep;
}

}  // namespace kerbundle
