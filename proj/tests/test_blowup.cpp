#include <gtest/gtest.h>

#include "kerbundle/blowup.hpp"

using namespace kerbundle;

namespace {
PrimeField F;

BlowupVariety surface(int s, std::uint64_t seed = 3) { return BlowupVariety(F, 2, sample_points(F, 2, s, seed).points); }
BlowupVariety threefold(int s, std::uint64_t seed = 3) { return BlowupVariety(F, 3, sample_points(F, 3, s, seed).points); }

DivisorClass D(int a, std::vector<int> b) { return DivisorClass{a, std::move(b)}; }
}  // namespace

TEST(DivisorClass, ParseAndPrint) {
  auto d = DivisorClass::parse("1;1,1,2");
  EXPECT_EQ(d.a, 1);
  EXPECT_EQ(d.b, (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(d.str(), "1;1,1,2");
  EXPECT_EQ(DivisorClass::parse("-3;").b.size(), 0u);
  EXPECT_THROW(DivisorClass::parse("1,2"), UsageError);
  EXPECT_THROW(DivisorClass::parse("x;1"), UsageError);
  EXPECT_THROW(DivisorClass::parse("1;1,"), UsageError);
  EXPECT_THROW(DivisorClass::parse("1;1,,2"), UsageError);
}

TEST(CanonicalClass, MultiplicityNotation) {
  // (a; b) stands for a e_0 - sum b_i e_i.
  EXPECT_EQ(canonical_class(surface(0)), D(-3, {}));
  EXPECT_EQ(canonical_class(threefold(1)), D(-4, {-2}));
  auto x = surface(8);
  EXPECT_EQ(canonical_class(x), D(-3, std::vector<int>(8, -1)));
  EXPECT_EQ(x.anticanonical(), D(3, std::vector<int>(8, 1)));
}

TEST(Chi, Examples) {
  EXPECT_EQ(chi_divisor(surface(1), D(3, {1})), 9);
  EXPECT_EQ(chi_divisor(surface(4), surface(4).zero()), 1);
  EXPECT_EQ(chi_divisor(surface(8), D(1, std::vector<int>(8, 1))), -5);
  EXPECT_THROW(chi_divisor(surface(1), D(3, {-1})), DomainError);
}

TEST(Chi, HilbertPolynomialOnSurfaces) {
  for (int s : {0, 3, 6, 8}) {
    auto x = surface(s);
    std::int64_t d = 9 - s;
    for (int t = 0; t <= 5; ++t) EXPECT_EQ(chi_divisor(x, x.anticanonical() * t), d * t * (t + 1) / 2 + 1);
  }
}

TEST(Intersection, Pairing) {
  auto x = surface(6);
  EXPECT_EQ(intersection(x, x.anticanonical(), x.anticanonical()), 3);
  DivisorClass e1 = D(0, {-1, 0, 0, 0, 0, 0});
  EXPECT_EQ(intersection(x, x.e0(), e1), 0);
  EXPECT_EQ(intersection(x, e1, e1), -1);
  EXPECT_THROW(intersection(threefold(1), D(1, {0}), D(1, {0})), DomainError);
}

TEST(H0, Examples) {
  EXPECT_EQ(h0_divisor(surface(3), D(-1, {0, 0, 0})), 0u);
  auto x8 = surface(8);
  EXPECT_EQ(h0_divisor(x8, x8.anticanonical()), 2u);
  EXPECT_EQ(h0_divisor(threefold(1), D(2, {2})), 6u);
  for (int s = 0; s <= 8; ++s) EXPECT_EQ(h0_divisor(surface(s), surface(s).anticanonical()), static_cast<std::size_t>(10 - s));
}

TEST(H0, MonotoneInMultiplicities) {
  auto x = surface(5);
  for (int a = 0; a <= 5; ++a) {
    std::vector<int> b(5, 0);
    std::size_t prev = h0_divisor(x, D(a, b));
    for (int k = 0; k < 5; ++k) {
      b[k] += 1;
      std::size_t now = h0_divisor(x, D(a, b));
      EXPECT_LE(now, prev);
      prev = now;
    }
  }
}

TEST(Cohomology, EightPointValues) {
  auto x = surface(8);
  EXPECT_EQ(cohomology_divisor(x, D(1, std::vector<int>(8, 1))).values(), (std::vector<std::int64_t>{0, 5, 0}));
  EXPECT_EQ(cohomology_divisor(x, D(2, std::vector<int>(8, 1))).values(), (std::vector<std::int64_t>{0, 2, 0}));
  EXPECT_EQ(cohomology_divisor(x, x.zero()).values(), (std::vector<std::int64_t>{1, 0, 0}));
  EXPECT_EQ(cohomology_divisor(threefold(1), D(0, {0})).values(), (std::vector<std::int64_t>{1, 0, 0, 0}));
}

TEST(Cohomology, TopDegreeAndDuality) {
  auto x = surface(2);
  // O(-3e_0) on P^2: h^2 = 1.
  EXPECT_EQ(cohomology_divisor(x, D(-3, {0, 0})).values(), (std::vector<std::int64_t>{0, 0, 1}));
  // Exceptional layer -e_1 is acyclic.
  EXPECT_EQ(cohomology_divisor(x, D(0, {-1, 0})).values(), (std::vector<std::int64_t>{1, 0, 0}));
  // Negative multiplicities resolved through K_X - D.
  auto t = cohomology_divisor(x, D(-5, {-2, 0}));
  ASSERT_TRUE(t.all_exact());
  auto dual = acyclic_normal_form(x, canonical_class(x) - D(-5, {-2, 0}));
  ASSERT_TRUE(dual.has_value());
  EXPECT_EQ(t.euler(), chi_divisor(x, *dual));
}

TEST(Cohomology, UnsupportedShapeIsFlagged) {
  auto x = surface(2);
  // b = (-3, 1): D has a multiplicity below -(n-1) and K_X - D = (-4; 2, -2) does too.
  auto t = cohomology_divisor(x, D(1, {-3, 1}));
  EXPECT_FALSE(t.all_exact());
  for (const auto& e : t.h) EXPECT_EQ(e.reason, "unsupported-shape");
  EXPECT_THROW(t.values(), UsageError);
}

TEST(Cohomology, EulerCharacteristicProperty) {
  Rng rng(77);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    int n = 2 + static_cast<int>(rng.next() % 2);
    int s = n == 2 ? static_cast<int>(rng.next() % 9) : static_cast<int>(rng.next() % 2);
    auto x = n == 2 ? surface(s, 10 + k) : threefold(s, 10 + k);
    DivisorClass d{static_cast<int>(rng.next() % 9) - 2, std::vector<int>(s)};
    for (auto& b : d.b) b = static_cast<int>(rng.next() % 3);
    auto t = cohomology_divisor(x, d);
    ASSERT_TRUE(t.all_exact()) << d.str();
    for (auto& e : t.h) EXPECT_GE(e.lo, 0);
    EXPECT_EQ(t.euler(), chi_divisor(x, d)) << d.str();
    ++checked;
  }
  EXPECT_EQ(checked, 60);
}

TEST(Cohomology, SerreDualityProperty) {
  Rng rng(91);
  for (int k = 0; k < 40; ++k) {
    int n = 2 + static_cast<int>(rng.next() % 2);
    int s = n == 2 ? static_cast<int>(rng.next() % 7) : static_cast<int>(rng.next() % 2);
    auto x = n == 2 ? surface(s, 50 + k) : threefold(s, 50 + k);
    DivisorClass d{static_cast<int>(rng.next() % 11) - 6, std::vector<int>(s)};
    for (auto& b : d.b) b = static_cast<int>(rng.next() % 2);
    auto lhs = cohomology_divisor(x, d);
    auto rhs = cohomology_divisor(x, canonical_class(x) - d);
    if (!lhs.all_exact() || !rhs.all_exact()) continue;
    for (int i = 0; i <= n; ++i) EXPECT_EQ(lhs.h[i].lo, rhs.h[n - i].lo) << d.str();
  }
}

TEST(GeneralPosition, Examples) {
  auto pt = [](std::vector<std::int64_t> c) { return ProjectivePoint::make(F, c); };
  auto collinear = is_general_position(F, {pt({1, 0, 0}), pt({0, 1, 0}), pt({1, 1, 0})});
  EXPECT_FALSE(collinear.general);
  EXPECT_EQ(collinear.witness.size(), 3u);
  EXPECT_TRUE(is_general_position(F, {pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1}), pt({1, 1, 1})}).general);
  // Six points on the conic x0 x2 = x1^2: (1 : t : t^2).
  std::vector<ProjectivePoint> conic;
  for (int t = 1; t <= 6; ++t) conic.push_back(pt({1, t, t * t}));
  auto r = is_general_position(F, conic);
  EXPECT_FALSE(r.general);
  for (int s = 0; s <= 8; ++s) EXPECT_TRUE(is_general_position(F, sample_points(F, 2, s, 5).points).general);
}

TEST(Fano, Classification) {
  auto st = is_fano(threefold(2));
  EXPECT_FALSE(st.fano);
  EXPECT_NE(st.reason.find("if and only if s <= 1"), std::string::npos);
  auto s8 = is_fano(surface(8));
  EXPECT_TRUE(s8.fano);
  EXPECT_FALSE(s8.very_ample);
  auto p5 = is_fano(BlowupVariety(F, 5, sample_points(F, 5, 1, 2).points));
  EXPECT_TRUE(p5.fano);
  EXPECT_TRUE(p5.very_ample);
  EXPECT_TRUE(is_fano(surface(6)).very_ample);
}

TEST(BlowupVariety, Validation) {
  auto p = sample_points(F, 2, 1, 1).points;
  EXPECT_THROW(BlowupVariety(F, 2, {p[0], p[0]}), DomainError);
  EXPECT_THROW(BlowupVariety(F, 1, {}), DomainError);
  EXPECT_EQ(surface(6).degree(), 3);
  EXPECT_EQ(threefold(1).degree(), 56);
}
