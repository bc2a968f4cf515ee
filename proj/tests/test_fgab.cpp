#include <gtest/gtest.h>

#include <random>

#include "toricchow/fgab.hpp"

using namespace toricchow;

namespace {

GroupHom make_beta(const FgAbGroup& n, const std::vector<IntVector>& rays) {
  return GroupHom{FgAbGroup::free(rays.size()), n, IntMatrix::from_columns(n.size(), rays)};
}

// Oracle for membership: brute force over small coefficient boxes.
bool brute_contains(const FgAbGroup& g, const std::vector<IntVector>& gens, const IntVector& t, int bound) {
  std::vector<int> c(gens.size(), -bound);
  for (;;) {
    IntVector s(g.size());
    for (std::size_t k = 0; k < gens.size(); ++k) s = s + Integer(c[k]) * gens[k];
    if (g.normalize(s) == g.normalize(t)) return true;
    std::size_t k = 0;
    while (k < c.size() && c[k] == bound) c[k++] = -bound;
    if (k == c.size()) return false;
    ++c[k];
  }
}

}  // namespace

TEST(Quotient, Empty) {
  FgAbGroup g{1, make_vector({2})};
  auto q = quotient(g, {});
  EXPECT_EQ(q.group, g);
  EXPECT_EQ(q.projection.matrix, IntMatrix::identity(2));
}

TEST(Quotient, CyclicOfOrderFour) {
  FgAbGroup g{1, make_vector({2})};
  auto q = quotient(g, {make_vector({2, 1})});
  EXPECT_EQ(q.group, (FgAbGroup{0, make_vector({4})}));
  EXPECT_TRUE(q.group.is_zero_element(q.projection.apply(make_vector({2, 1}))));
  // (1,0) generates.
  EXPECT_FALSE(q.group.is_zero_element(q.projection.apply(make_vector({2, 0}))));
}

TEST(Quotient, ByGeneratingSet) {
  FgAbGroup g{2, make_vector({3})};
  auto q = quotient(g, {make_vector({1, 0, 0}), make_vector({0, 1, 0}), make_vector({0, 0, 1})});
  EXPECT_TRUE(q.group.is_trivial());
}

TEST(Quotient, Functoriality) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    FgAbGroup g = FgAbGroup::from_cyclic(1 + rng() % 2, make_vector({2 + long(rng() % 4)}));
    auto rnd = [&] {
      IntVector v(g.size());
      for (auto& x : v) x = dist(rng);
      return g.normalize(v);
    };
    IntVector a = rnd(), b = rnd();
    auto q1 = quotient(g, {a});
    auto q12 = quotient(q1.group, {q1.projection.apply(b)});
    auto both = quotient(g, {a, b});
    ASSERT_EQ(q12.group, both.group);
  }
}

TEST(SubgroupContains, Examples) {
  FgAbGroup g{1, make_vector({2})};
  EXPECT_TRUE(subgroup_contains(g, {make_vector({2, 1}), make_vector({-3, 0})}, make_vector({0, 1})));
  EXPECT_FALSE(subgroup_contains(g, {make_vector({2, 0}), make_vector({-3, 0})}, make_vector({0, 1})));
  EXPECT_TRUE(subgroup_contains(g, {make_vector({1, 0}), make_vector({0, 1})}, make_vector({5, 1})));
  EXPECT_THROW(subgroup_contains(g, {make_vector({1})}, make_vector({0, 1})), InvalidInput);
}

TEST(SubgroupContains, AgainstBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (int trial = 0; trial < 150; ++trial) {
    FgAbGroup g{0, make_vector({2 + long(rng() % 3), 6})};
    g = FgAbGroup::from_cyclic(0, g.torsion);
    std::vector<IntVector> gens;
    for (int k = 0; k < 2; ++k) {
      IntVector v(g.size());
      for (auto& x : v) x = dist(rng);
      gens.push_back(v);
    }
    IntVector t(g.size());
    for (auto& x : t) x = dist(rng);
    ASSERT_EQ(subgroup_contains(g, gens, t), brute_contains(g, gens, t, 6));
  }
}

TEST(GaleDual, TrivialCase) {
  auto gd = gale_dual(make_beta(FgAbGroup::free(1), {make_vector({1})}));
  EXPECT_TRUE(gd.ndual.is_trivial());
  EXPECT_EQ(gd.beta_dual.matrix.rows(), 0u);
}

TEST(GaleDual, WeightedProjectiveLineWithGerbe) {
  auto gd = gale_dual(make_beta(FgAbGroup{1, make_vector({2})}, {make_vector({2, 1}), make_vector({-3, 0})}));
  EXPECT_EQ(gd.ndual, FgAbGroup::free(1));
  EXPECT_EQ(gd.beta_dual.matrix, (IntMatrix{{6, 4}}));
  EXPECT_EQ(gd.dual_cokernel.target, (FgAbGroup{0, make_vector({2})}));
}

TEST(GaleDual, HirzebruchGerbe) {
  FgAbGroup n{2, make_vector({2, 4})};
  auto gd = gale_dual(make_beta(n, {make_vector({1, 0, 1, 0}), make_vector({0, 1, 0, 0}), make_vector({-1, 2, 0, 0}),
                                    make_vector({0, -1, 0, 1})}));
  EXPECT_EQ(gd.ndual, FgAbGroup::free(2));
  EXPECT_EQ(row_lattice_basis(gd.beta_dual.matrix), row_lattice_basis(IntMatrix{{2, -4, 2, 0}, {0, 4, 0, 4}}));
}

TEST(DualLatticeMaps, Examples) {
  auto d = dual_lattice_maps(make_beta(FgAbGroup{1, make_vector({2})}, {make_vector({2, 1}), make_vector({-3, 0})}));
  EXPECT_EQ(d.matrix, (IntMatrix{{2}, {-3}}));
  auto e = dual_lattice_maps(make_beta(FgAbGroup::free(2), {make_vector({1, 0}), make_vector({0, 1})}));
  EXPECT_EQ(e.matrix, IntMatrix::identity(2));
}

TEST(GaleDual, RandomExactness) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dist(-4, 4);
  int checked = 0;
  while (checked < 100) {
    std::size_t d = 1 + rng() % 3, n = d + rng() % 3;
    IntVector orders;
    if (rng() % 2) orders.push_back(2 + long(rng() % 5));
    FgAbGroup g = FgAbGroup::from_cyclic(d, orders);
    std::vector<IntVector> rays;
    for (std::size_t i = 0; i < n; ++i) {
      IntVector v(g.size());
      for (auto& x : v) x = dist(rng);
      rays.push_back(g.normalize(v));
    }
    GroupHom beta = make_beta(g, rays);
    if (snf(beta.free_block()).rank != d) continue;
    ++checked;
    auto gd = gale_dual(beta);
    auto dual = dual_lattice_maps(beta);
    IntMatrix composite = gd.beta_dual.matrix * dual.matrix;
    for (std::size_t j = 0; j < composite.cols(); ++j)
      ASSERT_TRUE(gd.ndual.is_zero_element(composite.column(j)));
    ASSERT_TRUE(gd.dual_cokernel.target.is_finite());
    ASSERT_EQ(gd.ndual.rank, n - d);
  }
}
