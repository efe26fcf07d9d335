#include <gtest/gtest.h>

#include "kerbundle/matrix.hpp"

using namespace kerbundle;

namespace {
PrimeField F;
}

TEST(Rank, Trivial) {
  EXPECT_EQ(rank(Matrix::identity(F, 5)), 5u);
  EXPECT_EQ(rank(Matrix(F, 3, 7)), 0u);
  EXPECT_EQ(rank(Matrix(F, 0, 4)), 0u);
}

TEST(Rank, RandomSquareIsFullRank) {
  int full = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    full += rank(random_matrix(F, 12, 12, rng)) == 12;
  }
  EXPECT_GE(full, 49);
}

TEST(Rank, DependentRows) {
  auto m = Matrix::from_rows(F, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  EXPECT_EQ(rank(m), 2u);
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel_basis(Matrix::identity(F, 4)).cols(), 0u);
  auto z = kernel_basis(Matrix(F, 2, 5));
  EXPECT_EQ(z.cols(), 5u);
  EXPECT_EQ(rank(z), 5u);
  auto m = Matrix::from_rows(F, {{1, 1}});
  auto k = kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k(0, 0), F.p() - 1);
  EXPECT_EQ(k(1, 0), 1u);
  EXPECT_TRUE((m * k).is_zero());
}

TEST(Kernel, RankNullityAndTranspose) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    std::size_t r = 1 + rng.next() % 9, c = 1 + rng.next() % 9, k = 1 + rng.next() % 4;
    // Low-rank product so kernels are non-trivial.
    Matrix m = random_matrix(F, r, k, rng) * random_matrix(F, k, c, rng);
    auto ker = kernel_basis(m);
    EXPECT_EQ(rank(m) + ker.cols(), c);
    EXPECT_EQ(rank(m.transpose()), rank(m));
    EXPECT_TRUE((m * ker).is_zero());
    EXPECT_EQ(rank(ker), ker.cols());
  }
}

TEST(Membership, Examples) {
  auto id = Matrix::identity(F, 3);
  std::vector<Scalar> v{4, 5, 6};
  EXPECT_EQ(*solve_membership(id, v), v);
  std::vector<Scalar> zero{0, 0, 0};
  EXPECT_EQ(*solve_membership(id, zero), zero);
  auto two = Matrix::from_rows(F, {{1, 0}, {0, 1}, {0, 0}});
  std::vector<Scalar> e3{0, 0, 1};
  EXPECT_FALSE(solve_membership(two, e3).has_value());
  auto dep = Matrix::from_rows(F, {{1, 2}, {1, 2}});
  EXPECT_THROW(solve_membership(dep, std::vector<Scalar>{1, 1}), UsageError);
}

TEST(Membership, RecoversCoordinates) {
  Rng rng(5);
  Matrix span = random_matrix(F, 8, 4, rng);
  Matrix coeffs = random_matrix(F, 4, 3, rng);
  Matrix targets = span * coeffs;
  auto sol = solve_membership_many(span, targets);
  for (std::size_t t = 0; t < 3; ++t) {
    ASSERT_TRUE(sol[t].has_value());
    EXPECT_EQ(*sol[t], coeffs.column(t));
  }
}

TEST(Matrix, ShapeErrors) {
  EXPECT_THROW(Matrix(F, 2, 3) * Matrix(F, 2, 3), UsageError);
  EXPECT_THROW(Matrix::from_rows(F, {{1, 2}, {3}}), UsageError);
}
