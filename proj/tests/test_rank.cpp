#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slocc/rank.hpp"

using namespace slocc;

namespace {

ExactMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound, bool complex) {
  std::uniform_int_distribution<int> v(-bound, bound);
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const long long re = v(rng);
      const long long im = complex ? v(rng) : 0;
      m(r, c) = ExactScalar(re, im);
    }
  return m;
}

/// u (rows x k) times w (k x cols): rank at most k, almost surely exactly k.
ExactMatrix low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t k, bool complex) {
  return random_integer_matrix(rng, rows, k, 3, complex) * random_integer_matrix(rng, k, cols, 3, complex);
}

}  // namespace

TEST(RankExact, SmallCases) {
  EXPECT_EQ(rank_exact(ExactMatrix({{1, 2}, {2, 4}})).rank, 1u);
  EXPECT_EQ(rank_exact(ExactMatrix({{0, 0}, {0, 0}})).rank, 0u);
  EXPECT_EQ(rank_exact(ExactMatrix::identity(5)).rank, 5u);
  EXPECT_EQ(rank_exact(ExactMatrix({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})).rank, 2u);
  EXPECT_THROW(rank_exact(ExactMatrix(0, 3)), InvalidArgument);
}

TEST(RankExact, GaussianAndRationalEntries) {
  // [[1, i], [i, -1]] has rank 1 over Q(i).
  ExactMatrix m(2, 2);
  m(0, 0) = ExactScalar(1);
  m(0, 1) = ExactScalar(0, 1);
  m(1, 0) = ExactScalar(0, 1);
  m(1, 1) = ExactScalar(-1);
  EXPECT_EQ(rank_exact(m).rank, 1u);
  ExactMatrix q(2, 2);
  q(0, 0) = ExactScalar(Rational(1, 3), Rational(0));
  q(0, 1) = ExactScalar(Rational(1, 2), Rational(0));
  q(1, 0) = ExactScalar(Rational(2, 3), Rational(0));
  q(1, 1) = ExactScalar(1);
  EXPECT_EQ(rank_exact(q).rank, 1u);
  q(1, 1) = ExactScalar(Rational(0), Rational(1, 7));
  EXPECT_EQ(rank_exact(q).rank, 2u);
}

TEST(RankExact, PivotsAreIndependentRows) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const ExactMatrix m = low_rank(rng, 7, 6, 3, true);
    const RankResult r = rank_exact(m);
    ASSERT_EQ(r.pivots.size(), r.rank);
    ExactMatrix sub(r.rank, m.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
      for (std::size_t c = 0; c < m.cols(); ++c) sub(i, c) = m(r.pivots[i].first, c);
    EXPECT_EQ(oracle::modular_rank(sub), r.rank);
  }
}

TEST(RankExact, AgreesWithModularElimination) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::size_t> dim(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, std::min(rows, cols))(rng);
    const bool complex = trial % 2 == 1;
    const ExactMatrix m = k == 0 ? ExactMatrix(rows, cols) : low_rank(rng, rows, cols, k, complex);
    ASSERT_EQ(rank_exact(m).rank, oracle::modular_rank(m)) << "trial " << trial;
  }
}

TEST(RankExact, InvariantProperties) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const ExactMatrix m = low_rank(rng, 6, 8, 1 + static_cast<std::size_t>(trial % 5), trial % 3 == 0);
    const std::size_t r = rank_exact(m).rank;
    EXPECT_LE(r, 6u);
    EXPECT_EQ(rank_exact(m.transpose()).rank, r);
    EXPECT_EQ(rank_exact(m.adjoint()).rank, r);
    ExactMatrix scaled = m;
    ExactMatrix swapped = m;
    swapped.swap_rows(0, 5);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t c = 0; c < 8; ++c) scaled(i, c) = scaled(i, c) * ExactScalar(Rational(2, 3), Rational(-1));
    EXPECT_EQ(rank_exact(scaled).rank, r);
    EXPECT_EQ(rank_exact(swapped).rank, r);
  }
}

TEST(RankExact, LargeEntriesUseBigIntegerPath) {
  // entries near 2^62 overflow the checked 64-bit path
  const long long big = 4611686018427387903LL;
  ExactMatrix m(3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) m(r, c) = ExactScalar(big - static_cast<long long>(3 * r + c));
  EXPECT_EQ(rank_exact(m).rank, oracle::modular_rank(m));
  EXPECT_EQ(rank_exact(m).rank, 2u);
  m(2, 2) = ExactScalar(big) * ExactScalar(big);
  EXPECT_EQ(rank_exact(m).rank, 3u);
}

TEST(RankNumeric, AgreesWithExactOnRandomIntegerMatrices) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(rows, cols))(rng);
    const ExactMatrix m = trial % 2 ? random_integer_matrix(rng, rows, cols, 5, false)
                                    : low_rank(rng, rows, cols, k, trial % 4 == 0);
    const std::size_t exact = rank_exact(m).rank;
    EXPECT_EQ(rank_numeric(m).rank, exact) << "trial " << trial;
    EXPECT_EQ(oracle::svd_rank(m), exact) << "trial " << trial;
  }
}

TEST(RankNumeric, ZeroMatrixAndMethodTag) {
  EXPECT_EQ(rank_numeric(ExactMatrix(3, 2)).rank, 0u);
  EXPECT_EQ(rank_numeric(ExactMatrix::identity(4)).method, RankMethod::numeric);
  EXPECT_EQ(rank_exact(ExactMatrix::identity(4)).method, RankMethod::exact);
}
