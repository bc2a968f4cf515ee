#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "toricchow/chowring.hpp"

using namespace toricchow;
using namespace fixtures;

namespace {

FgAbGroup z() { return FgAbGroup::free(1); }
FgAbGroup zmod(long m) { return FgAbGroup{0, make_vector({m})}; }

// Z[t]/(c t^k) with t in degree 1.
GradedPresentation univariate(long c, unsigned k) {
  GradedPresentation p;
  p.generators = {{"t", Rational(1)}};
  p.relations = {Polynomial::variable(1, 0, c).pow(1) * Polynomial::variable(1, 0).pow(k - 1)};
  return p;
}

GradedPresentation permuted(const GradedPresentation& p, const std::vector<std::size_t>& perm) {
  GradedPresentation q;
  for (auto i : perm) q.generators.push_back(p.generators[i]);
  std::vector<Polynomial> images(p.size(), Polynomial(p.size()));
  for (std::size_t k = 0; k < perm.size(); ++k) images[perm[k]] = Polynomial::variable(p.size(), k);
  for (const auto& r : p.relations) q.relations.push_back(r.substitute(images));
  return q;
}

}  // namespace

TEST(Polynomial, Arithmetic) {
  Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  Polynomial p = (x + y) * (x - y);
  EXPECT_EQ(p, x.pow(2) - y.pow(2));
  EXPECT_EQ(p.to_string({"x", "y"}), "x^2 - y^2");
  EXPECT_EQ((Integer(2) * x - Integer(3) * y).to_string({"x1", "x2"}), "2*x1 - 3*x2");
  EXPECT_TRUE((p - p).is_zero());
  std::vector<Polynomial> img = {Polynomial::variable(1, 0, 3), Polynomial::variable(1, 0, 2)};
  EXPECT_EQ((x * y).substitute(img), Polynomial::variable(1, 0, 6).pow(1) * Polynomial::variable(1, 0));
}

TEST(SrRing, WeightedLineGerbe) {
  auto p = sr_ring(weighted_line_gerbe());
  Polynomial x1 = p.var("x1"), x2 = p.var("x2");
  ASSERT_EQ(p.relations.size(), 2u);
  EXPECT_EQ(p.relations[0], Integer(2) * x1 - Integer(3) * x2);
  EXPECT_EQ(p.relations[1], (Integer(2) * x1) * (Integer(2) * x2));
}

TEST(SrRing, WeightedPlane) {
  auto p = sr_ring(weighted_plane());
  Polynomial x1 = p.var("x1"), x2 = p.var("x2"), x3 = p.var("x3");
  EXPECT_EQ(p.relations, (std::vector<Polynomial>{x1 - x3, x2 - Integer(2) * x3, x1 * x2 * x3}));
}

TEST(SrRing, ProjectiveLine) {
  auto p = sr_ring(projective_line());
  Polynomial x1 = p.var("x1"), x2 = p.var("x2");
  EXPECT_EQ(p.relations, (std::vector<Polynomial>{x1 - x2, x1 * x2}));
  auto t = graded_pieces(p, 3);
  EXPECT_EQ(t.at(0), z());
  EXPECT_EQ(t.at(1), z());
  EXPECT_TRUE(t.at(2).is_trivial());
}

TEST(ReducedSrRing, Examples) {
  auto p = reduced_sr_ring(reduce(weighted_line_gerbe()));
  Polynomial x1 = p.var("x1"), x2 = p.var("x2");
  EXPECT_EQ(p.relations, (std::vector<Polynomial>{Integer(2) * x1 - Integer(3) * x2, x1 * x2}));
  auto f = reduced_sr_ring(hirzebruch());
  Polynomial y1 = f.var("x1"), y2 = f.var("x2"), y3 = f.var("x3"), y4 = f.var("x4");
  EXPECT_EQ(f.relations, (std::vector<Polynomial>{y1 - y3, y2 - Integer(2) * y3 - y4, y1 * y3, y2 * y4}));
  auto trivial = reduced_sr_ring(make_stacky_fan("", FgAbGroup::free(0), {}, {}));
  EXPECT_EQ(graded_pieces(trivial, 2), (GradedGroupTable{{Rational(0), z()}}));
  EXPECT_THROW(reduced_sr_ring(weighted_line_gerbe()), InvalidInput);
}

TEST(EliminateLinear, WeightedLineGerbeIsZt24) {
  auto e = eliminate_linear(sr_ring(weighted_line_gerbe()));
  const auto& p = e.presentation;
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.generators[0].name, "t");
  ASSERT_EQ(p.relations.size(), 1u);
  EXPECT_EQ(p.relations[0], Polynomial::variable(1, 0, 24) * Polynomial::variable(1, 0));
  auto t = graded_pieces(p, 5);
  EXPECT_EQ(t.at(0), z());
  EXPECT_EQ(t.at(1), z());
  for (int d = 2; d <= 5; ++d) EXPECT_EQ(t.at(d), zmod(24));
}

TEST(EliminateLinear, WeightedPlane) {
  auto e = eliminate_linear(sr_ring(weighted_plane()));
  ASSERT_EQ(e.presentation.size(), 1u);
  ASSERT_EQ(e.presentation.relations.size(), 1u);
  EXPECT_EQ(e.presentation.relations[0], Polynomial::variable(1, 0, 2) * Polynomial::variable(1, 0).pow(2));
}

TEST(EliminateLinear, NoLinearRelations) {
  auto p = univariate(24, 2);
  auto e = eliminate_linear(p);
  EXPECT_EQ(e.presentation.relations, p.relations);
  EXPECT_EQ(e.substitution[0], Polynomial::variable(1, 0));
}

TEST(EliminateLinear, TorsionFactorBecomesGenerator) {
  GradedPresentation p;
  p.generators = {{"a", 1}, {"b", 1}};
  p.relations = {Polynomial::variable(2, 0, 2) - Polynomial::variable(2, 1, 2)};
  auto e = eliminate_linear(p);
  EXPECT_EQ(e.presentation.size(), 2u);
  EXPECT_TRUE(graded_equal(p, e.presentation, 4).equal);
}

TEST(EliminateLinear, PreservesGradedPieces) {
  for (const StackyFan& sf : {weighted_line_gerbe(), hirzebruch_gerbe(), weighted_plane(), hirzebruch()}) {
    auto p = sr_ring(sf);
    auto cmp = graded_equal(p, eliminate_linear(p).presentation, 5);
    EXPECT_TRUE(cmp.equal) << sf.name;
  }
}

TEST(RootGerbe, WeightedLineFromReduced) {
  auto base = eliminate_linear(reduced_sr_ring(reduce(weighted_line_gerbe()))).presentation;
  ASSERT_EQ(base.relations, (std::vector<Polynomial>{Polynomial::variable(1, 0, 6) * Polynomial::variable(1, 0)}));
  auto rooted = root_gerbe_ring(base, base.var("t"), 2);
  EXPECT_TRUE(graded_equal(rooted, univariate(24, 2), 5).equal);
  EXPECT_TRUE(graded_equal(root_gerbe_ring(base, base.var("t"), 1), base, 5).equal);
  EXPECT_THROW(root_gerbe_ring(base, base.var("t"), 0), InvalidInput);
  auto trivial = root_gerbe_ring(base, Polynomial(1), 3);
  auto t = graded_pieces(trivial, 2);
  EXPECT_EQ(t.at(1), direct_sum(z(), zmod(3)));
}

TEST(BmuExtension, Examples) {
  GradedPresentation point;
  auto p = bmu_extension(point, FgAbGroup{0, make_vector({2})});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.relations, (std::vector<Polynomial>{Polynomial::variable(1, 0, 2)}));
  auto t = graded_pieces(p, 3);
  EXPECT_EQ(t.at(0), z());
  EXPECT_EQ(t.at(3), zmod(2));
  auto q = bmu_extension(point, FgAbGroup{0, make_vector({2, 4})});
  EXPECT_EQ(q.size(), 2u);
  EXPECT_EQ(graded_pieces(q, 1).at(1), (FgAbGroup{0, make_vector({2, 4})}));
  EXPECT_EQ(bmu_extension(univariate(24, 2), FgAbGroup{}).relations, univariate(24, 2).relations);
  EXPECT_THROW(bmu_extension(point, FgAbGroup::free(1)), InvalidInput);
}

TEST(ChowRing, RoutesThroughDecomposition) {
  auto ng = make_stacky_fan("", FgAbGroup{1, make_vector({2})}, {make_vector({2, 0}), make_vector({-3, 0})},
                            {{0}, {1}});
  auto p = chow_ring(ng);
  EXPECT_FALSE(p.notes.empty());
  auto expected = bmu_extension(reduced_sr_ring(reduce(ng)), FgAbGroup{0, make_vector({2})});
  EXPECT_TRUE(graded_equal(p, expected, 4).equal);
  auto t = graded_pieces(p, 1);
  EXPECT_EQ(t.at(1), direct_sum(z(), zmod(2)));
}

TEST(Engine, NormalForm) {
  GradedEngine e(univariate(24, 2));
  Polynomial t = Polynomial::variable(1, 0);
  EXPECT_EQ(e.normal_form(Integer(25) * t * t), e.normal_form(t * t));
  EXPECT_EQ(e.normal_form(Integer(25) * t * t), make_vector({1}));
  EXPECT_TRUE(e.in_ideal(Integer(24) * t * t));
  EXPECT_FALSE(e.in_ideal(Integer(12) * t * t));

  auto p = sr_ring(weighted_line_gerbe());
  GradedEngine f(p);
  EXPECT_TRUE(f.in_ideal(Integer(4) * p.var("x1") * p.var("x2")));
  for (const auto& r : p.relations) EXPECT_TRUE(is_zero(f.normal_form(r)));
}

TEST(Engine, DegreeZeroGenerators) {
  // Z[u]/(u^2 - 1) with u in degree 0 and x in degree 1, x u = x.
  GradedPresentation p;
  p.generators = {{"u", 0}, {"x", 1}};
  Polynomial u = p.var("u"), x = p.var("x");
  p.relations = {u * u - p.one(), x * u - x, x * x};
  auto t = graded_pieces(p, 2);
  EXPECT_EQ(t.at(0), FgAbGroup::free(2));
  EXPECT_EQ(t.at(1), z());
  EXPECT_TRUE(t.at(2).is_trivial());
}

TEST(Engine, FractionalDegrees) {
  GradedPresentation p;
  p.generators = {{"y", Rational(1, 2)}, {"x", 1}};
  Polynomial y = p.var("y"), x = p.var("x");
  p.relations = {y * y - x, Integer(2) * x * y};
  auto t = graded_pieces(p, 2);
  EXPECT_EQ(t.at(Rational(1, 2)), z());
  EXPECT_EQ(t.at(1), z());
  EXPECT_EQ(t.at(Rational(3, 2)), zmod(2));
}

TEST(Engine, ResourceLimit) {
  GradedPresentation p;
  for (int i = 0; i < 8; ++i) p.generators.push_back({"x" + std::to_string(i), 1});
  EngineLimits lim;
  lim.max_monomials = 100;
  EXPECT_THROW(graded_pieces(p, 4, lim), ResourceLimit);
}

TEST(Engine, InvariantUnderPermutationAndRedundantRelations) {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    GradedPresentation p;
    const std::size_t n = 2 + rng() % 2;
    for (std::size_t i = 0; i < n; ++i) p.generators.push_back({"g" + std::to_string(i), Rational(1 + long(rng() % 2))});
    // Random homogeneous relations built from monomials of one random degree.
    for (int k = 0; k < 3; ++k) {
      GradedEngine tmp(p);
      const Rational deg = 1 + long(rng() % 3);
      const auto& mons = tmp.monomials(deg);
      if (mons.empty()) continue;
      Polynomial r(n);
      for (const auto& m : mons) r.add_term(m, coef(rng));
      if (!r.is_zero()) p.relations.push_back(r);
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ASSERT_TRUE(graded_equal(p, permuted(p, perm), 4).equal);
    if (p.relations.size() >= 2 && p.degree_of(p.relations[0]) == p.degree_of(p.relations[1])) {
      GradedPresentation q = p;
      q.relations.push_back(Integer(coef(rng)) * p.relations[0] + Integer(coef(rng)) * p.relations[1]);
      ASSERT_TRUE(graded_equal(p, q, 4).equal);
    }
  }
}

TEST(GradedEqual, ReportsMismatch) {
  auto cmp = graded_equal(univariate(24, 2), univariate(12, 2), 3);
  EXPECT_FALSE(cmp.equal);
  ASSERT_EQ(cmp.mismatches.size(), 2u);
  EXPECT_EQ(cmp.mismatches[0].degree, 2);
  EXPECT_TRUE(graded_equal(univariate(24, 2), univariate(24, 2), 5).equal);
}
