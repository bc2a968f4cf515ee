#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "toricchow/intlin.hpp"

using namespace toricchow;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

bool is_diagonal_chain(const SnfResult& s) {
  for (std::size_t i = 0; i < s.d.rows(); ++i)
    for (std::size_t j = 0; j < s.d.cols(); ++j)
      if (i != j && s.d(i, j) != 0) return false;
  for (std::size_t i = 0; i < s.rank; ++i) {
    if (s.d(i, i) <= 0) return false;
    if (i + 1 < s.rank && s.d(i + 1, i + 1) % s.d(i, i) != 0) return false;
  }
  for (std::size_t i = s.rank; i < std::min(s.d.rows(), s.d.cols()); ++i)
    if (s.d(i, i) != 0) return false;
  return true;
}

// Oracle: the k-th determinantal divisor (gcd of all k x k minors) equals the
// product of the first k invariant factors.
Integer minors_gcd(const IntMatrix& m, std::size_t k) {
  Integer g = 0;
  std::vector<std::size_t> rs, cs;
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t)> pick_rows = [&](std::size_t start) {
    if (rs.size() == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t i = start; i < m.rows(); ++i) {
      rs.push_back(i);
      pick_rows(i + 1);
      rs.pop_back();
    }
  };
  pick_cols = [&](std::size_t start, std::size_t) {
    if (cs.size() == k) {
      Integer d = determinant(m.select_rows(rs).select_cols(cs));
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t j = start; j < m.cols(); ++j) {
      cs.push_back(j);
      pick_cols(j + 1, 0);
      cs.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

}  // namespace

TEST(Snf, DiagonalExample) {
  IntMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  auto s = snf(m);
  EXPECT_EQ(s.u * m * s.v, s.d);
  EXPECT_EQ(s.diagonal(), make_vector({2, 6, 12}));
  EXPECT_EQ(abs(determinant(s.u)), 1);
  EXPECT_EQ(abs(determinant(s.v)), 1);
}

TEST(Snf, ZeroAndEmpty) {
  auto s = snf(IntMatrix(2, 3));
  EXPECT_EQ(s.rank, 0u);
  EXPECT_EQ(s.u * IntMatrix(2, 3) * s.v, s.d);
  auto e = snf(IntMatrix(0, 3));
  EXPECT_EQ(e.rank, 0u);
  EXPECT_EQ(e.v.rows(), 3u);
}

TEST(Snf, RandomizedAgainstMinors) {
  std::mt19937_64 rng(20240607);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = random_matrix(rng, r, c, 9);
    auto s = snf(m);
    ASSERT_EQ(s.u * m * s.v, s.d) << m.to_string();
    ASSERT_TRUE(is_diagonal_chain(s)) << m.to_string();
    ASSERT_EQ(abs(determinant(s.u)), 1);
    ASSERT_EQ(abs(determinant(s.v)), 1);
    Integer prod = 1;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      if (k <= s.rank) prod *= s.d(k - 1, k - 1); else prod = 0;
      ASSERT_EQ(minors_gcd(m, k), prod) << m.to_string() << " k=" << k;
    }
  }
}

TEST(Hnf, Shape) {
  IntMatrix m{{3, 5, 7}, {2, 4, 9}};
  auto h = hnf(m);
  EXPECT_EQ(m * h.transform, h.h);
  EXPECT_EQ(abs(determinant(h.transform)), 1);
  ASSERT_EQ(h.rank(), 2u);
  for (std::size_t k = 0; k < h.rank(); ++k) {
    std::size_t r = h.pivot_rows[k];
    EXPECT_GT(h.h(r, k), 0);
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_GE(h.h(r, j), 0);
      EXPECT_LT(h.h(r, j), h.h(r, k));
    }
    for (std::size_t i = 0; i < r; ++i) EXPECT_EQ(h.h(i, k), 0);
  }
}

TEST(Solve, SingleRow) {
  auto x = solve(IntMatrix{{2, -3}}, make_vector({1}));
  ASSERT_TRUE(x);
  EXPECT_EQ(IntMatrix({{2, -3}}) * *x, make_vector({1}));
  EXPECT_EQ(*x, make_vector({-1, -1}));
}

TEST(Solve, Unsolvable) {
  EXPECT_FALSE(solve(IntMatrix{{2, 4}}, make_vector({1})));
  EXPECT_FALSE(solve(IntMatrix{{1, 0}, {0, 0}}, make_vector({0, 1})));
  EXPECT_THROW(solve(IntMatrix{{1, 0}}, make_vector({1, 2})), std::invalid_argument);
}

TEST(Solve, Randomized) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    IntMatrix m = random_matrix(rng, r, c, 6);
    IntVector x0 = random_matrix(rng, c, 1, 5).column(0);
    IntVector b = m * x0;
    auto x = solve(m, b);
    ASSERT_TRUE(x);
    ASSERT_EQ(m * *x, b);
  }
}

TEST(Kernel, Randomized) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    IntMatrix m = random_matrix(rng, r, c, 6);
    IntMatrix k = kernel(m);
    ASSERT_TRUE((m * k).is_zero());
    auto s = snf(m);
    ASSERT_EQ(k.cols(), c - s.rank);
    // Saturation: the kernel basis extends to a unimodular matrix, so its
    // maximal minors are coprime.
    if (k.cols() > 0) {
      ASSERT_EQ(minors_gcd(k, k.cols()), 1);
    }
  }
}

TEST(Cokernel, TorsionAndFree) {
  auto ck = cokernel(IntMatrix{{2, 0}, {0, 3}, {0, 0}});
  EXPECT_EQ(ck.group, (FgAbGroup{1, make_vector({6})}));
  EXPECT_TRUE(ck.group.is_zero_element(ck.project(make_vector({2, 0, 0}))));
  EXPECT_FALSE(ck.group.is_zero_element(ck.project(make_vector({1, 0, 0}))));
  EXPECT_EQ(ck.project(make_vector({0, 0, 1})), make_vector({1, 0}));
}

TEST(Cokernel, CanonicalFreeBasis) {
  // coker of (2,3)^t is Z, projection must be the primitive row (3,-2) up to
  // the canonical sign.
  auto ck = cokernel(IntMatrix{{2}, {3}});
  EXPECT_EQ(ck.group, FgAbGroup::free(1));
  IntMatrix p = ck.projection;
  EXPECT_TRUE((p * IntMatrix{{2}, {3}}).is_zero());
  EXPECT_GT(p(0, 0), 0);
  EXPECT_EQ(ck.projection * ck.lift, IntMatrix::identity(1));
}

TEST(Cokernel, RandomizedOrderAndSplitting) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 4, c = rng() % 5;
    IntMatrix m = random_matrix(rng, r, c, 6);
    auto ck = cokernel(m);
    ASSERT_EQ(ck.projection.cols(), r);
    IntMatrix pm = ck.projection * m;
    for (std::size_t j = 0; j < m.cols(); ++j) ASSERT_TRUE(ck.group.is_zero_element(pm.column(j)));
    IntMatrix pl = ck.projection * ck.lift;
    for (std::size_t j = 0; j < ck.group.size(); ++j) {
      IntVector e(ck.group.size());
      e[j] = 1;
      ASSERT_EQ(ck.group.normalize(pl.column(j)), ck.group.normalize(e));
    }
    auto s = snf(m);
    ASSERT_EQ(ck.group.rank, r - s.rank);
    Integer t = 1;
    for (auto& x : ck.group.torsion) t *= x;
    Integer expect = 1;
    for (std::size_t i = 0; i < s.rank; ++i) expect *= s.d(i, i);
    ASSERT_EQ(t, expect);
  }
}

TEST(FgAbGroup, FromCyclic) {
  EXPECT_EQ(FgAbGroup::from_cyclic(0, make_vector({4, 6})), (FgAbGroup{0, make_vector({2, 12})}));
  EXPECT_EQ(FgAbGroup::from_cyclic(1, make_vector({1, 0, 3})), (FgAbGroup{2, make_vector({3})}));
  EXPECT_EQ(FgAbGroup::from_cyclic(0, make_vector({2, 3})).to_string(), "Z/6");
  EXPECT_EQ(direct_sum(FgAbGroup{1, {}}, FgAbGroup{0, make_vector({2})}).to_string(), "Z + Z/2");
}

TEST(Unimodular, Inverse) {
  IntMatrix u{{2, 3}, {1, 2}};
  EXPECT_EQ(u * unimodular_inverse(u), IntMatrix::identity(2));
  EXPECT_THROW(unimodular_inverse(IntMatrix{{2, 0}, {0, 1}}), std::invalid_argument);
}
