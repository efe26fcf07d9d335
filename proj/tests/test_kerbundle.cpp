#include <gtest/gtest.h>

#include "kerbundle/kerbundle.hpp"

using namespace kerbundle;

namespace {
PrimeField F;

BlowupVariety surface(int s, std::uint64_t seed = 3) { return BlowupVariety(F, 2, sample_points(F, 2, s, seed).points); }
BlowupVariety space(int n, int s, std::uint64_t seed = 3) {
  return BlowupVariety(F, n, sample_points(F, n, s, seed).points);
}
}  // namespace

TEST(RankPlan, Shapes) {
  auto p = RankPlan::make(2, 2, 0);
  EXPECT_EQ(p.a, 2);
  EXPECT_EQ(p.b, 4);
  EXPECT_EQ(p.bundle_rank(), 2);
  auto q = RankPlan::make(3, 1, 1);
  EXPECT_EQ(q.a, 2);
  EXPECT_EQ(q.b, 6);
  EXPECT_EQ(q.bundle_rank(), 4);
  EXPECT_EQ(RankPlan::make(4, 2, 1).b, 7);
  EXPECT_THROW(RankPlan::make(2, 1, 0), DomainError);
  EXPECT_THROW(RankPlan::make(2, 2, 1), DomainError);
  EXPECT_THROW(RankPlan::make(3, 1, 3), DomainError);
  for (int n = 2; n <= 6; ++n)
    for (int r = 2; r <= 4; ++r) {
      auto pl = RankPlan::make(n, r, 0);
      EXPECT_TRUE(check_eh_inequalities(pl.a, pl.b, n));
    }
  EXPECT_FALSE(check_eh_inequalities(2, 3, 2));
}

TEST(Certificate, GenericPassesZeroFails) {
  auto plan = RankPlan::make(2, 2, 0);
  auto good = certify_surjectivity(F, sample_matrix(F, plan, 1), 50, 2);
  EXPECT_TRUE(good.pass());
  EXPECT_EQ(good.h0_target, 12u);
  auto zero = certify_surjectivity(F, LinearFormMatrix(2, 2, 4), 50, 2);
  EXPECT_FALSE(zero.h0_surjective);
  EXPECT_FALSE(zero.pass());
}

TEST(Stabilizer, GenericIsOneAndGroupInvariant) {
  auto plan = RankPlan::make(2, 2, 0);
  auto a = sample_matrix(F, plan, 4);
  EXPECT_EQ(stabilizer_dimension(F, a), 1u);
  // Reversing rows, cycling columns and scaling is a change of bases; the dimension is unchanged.
  LinearFormMatrix b(2, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      auto src = a(a.rows() - 1 - i, (j + 1) % a.cols());
      for (auto& c : src) c = F.mul(c, 7);
      b(i, j) = src;
    }
  EXPECT_EQ(stabilizer_dimension(F, b), 1u);
  // A block-diagonal matrix decomposes, so each block carries its own scalar.
  LinearFormMatrix split(2, 2, 4);
  Rng rng(6);
  for (std::size_t j = 0; j < 2; ++j)
    for (auto& c : split(0, j)) c = rng.uniform(F.p());
  for (std::size_t j = 2; j < 4; ++j)
    for (auto& c : split(1, j)) c = rng.uniform(F.p());
  EXPECT_GE(stabilizer_dimension(F, split), 2u);
  EXPECT_EQ(stabilizer_dimension(F, LinearFormMatrix(2, 2, 4)), 20u);
}

TEST(FamilyDimension, ClosedForms) {
  for (int r = 2; r <= 6; ++r) {
    auto fd = family_dimension(RankPlan::make(2, r, 0));
    EXPECT_EQ(fd.defining, r * r + 1);
    EXPECT_TRUE(fd.match);
  }
  EXPECT_EQ(family_dimension(RankPlan::make(3, 1, 0)).defining, 12);
  auto flagged = family_dimension(RankPlan::make(3, 1, 1));
  EXPECT_EQ(flagged.defining, 9);
  EXPECT_EQ(flagged.closed_form, 11);
  EXPECT_FALSE(flagged.match);
  EXPECT_NE(flagged.flag.find("c^2"), std::string::npos);
  for (int n = 2; n <= 7; ++n)
    for (int r = 1; r <= 4; ++r) {
      if (n % 2 == 0 && r < 2) continue;
      int cmax = n % 2 ? n - 1 : n / 2 - 1;
      for (int c = 0; c <= cmax; ++c) {
        auto fd = family_dimension(RankPlan::make(n, r, c));
        EXPECT_EQ(fd.closed_form - fd.defining, 2 * c * c);
      }
    }
}

TEST(Construct, DelPezzoUlrich) {
  for (int s : {0, 3, 6, 8}) {
    auto x = surface(s, 20 + s);
    for (int r : {2, 3}) {
      auto bp = construct(x, RankPlan::make(2, r, 0), 100 + r);
      auto u = verify_ulrich(bp);
      EXPECT_TRUE(u.pass) << "s=" << s << " r=" << r;
      std::int64_t d = 9 - s;
      EXPECT_EQ(bundle_cohomology(bp, 1).h[0].value(), d * r);
      auto cd = chern_and_slope(bp, 1);
      EXPECT_EQ(cd.c1, x.anticanonical() * r);
      EXPECT_EQ(*cd.c2, (d * r * r + (2 - d) * r) / 2);
      EXPECT_EQ(riemann_roch_surface(x, cd), d * r);
      for (int t = -4; t <= 4; ++t) {
        EXPECT_EQ(bundle_cohomology(bp, t).euler(), expected_euler(bp, t));
        EXPECT_EQ(expected_euler(bp, t), d * r * (t * t + t) / 2);
      }
      if (s == 8) {
        EXPECT_EQ(bundle_cohomology(bp, 2).h[0].value(), 3 * r);
      }
    }
  }
}

TEST(Construct, RoutesAgreeOnOverlap) {
  auto bp = construct(surface(6, 9), RankPlan::make(2, 2, 0), 5);
  for (int t : {-1, 0}) {
    auto k = kernel_route(bp, t), d = dual_route(bp, t);
    ASSERT_TRUE(k.all_exact() && d.all_exact()) << t;
    EXPECT_EQ(k.values(), d.values()) << t;
  }
}

TEST(Construct, ChernTwistMatchesRiemannRoch) {
  auto x = surface(5, 4);
  auto bp = construct(x, RankPlan::make(2, 3, 0), 8);
  for (int l = -2; l <= 3; ++l) {
    auto cd = chern_and_slope(bp, l);
    EXPECT_EQ(riemann_roch_surface(x, cd), expected_euler(bp, l)) << l;
  }
}

TEST(Construct, Threefolds) {
  for (int s : {0, 1}) {
    auto x = space(3, s, 7);
    for (int c : {0, 1}) {
      auto bp = construct(x, RankPlan::make(3, 1, c), 3);
      auto acm = verify_acm(bp, -3, 3);
      EXPECT_TRUE(acm.pass) << s << " " << c;
      EXPECT_EQ(acm.regularity.size(), 9u);
      for (int t = -3; t <= 3; ++t) {
        auto tab = bundle_cohomology(bp, t);
        ASSERT_TRUE(tab.all_exact());
        EXPECT_EQ(tab.euler(), expected_euler(bp, t));
      }
    }
  }
  auto bp = construct(space(3, 1, 7), RankPlan::make(3, 1, 0), 3);
  EXPECT_EQ(bundle_cohomology(bp, 1).h[0].value(), 68);
}

TEST(Construct, Errors) {
  EXPECT_THROW(construct(space(3, 2), RankPlan::make(3, 1, 0), 1), DomainError);
  EXPECT_THROW(construct(surface(6), RankPlan::make(2, 2, 0), 1, {0, 10, true}), GenericityFailure);
  auto x = surface(6);
  auto bad = present(x, RankPlan::make(2, 2, 0), LinearFormMatrix(2, 2, 4), 20, 1);
  EXPECT_FALSE(bad.certificate.pass());
  EXPECT_THROW(bundle_cohomology(bad, 0), UsageError);
  auto acm = verify_acm(bad, -1, 1);
  EXPECT_FALSE(acm.pass);
  EXPECT_FALSE(acm.failures.empty());
  EXPECT_THROW(present(x, RankPlan::make(2, 3, 0), LinearFormMatrix(2, 2, 4)), UsageError);
}

TEST(Construct, Deterministic) {
  auto x = surface(4, 2);
  auto a = construct(x, RankPlan::make(2, 2, 0), 77);
  auto b = construct(x, RankPlan::make(2, 2, 0), 77);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.seed, b.seed);
}
