#pragma once

// Example stacky fans and a generator of random valid stacky fans shared by
// the unit tests and the acceptance runner.

#include <random>

#include "toricchow/stacky.hpp"

namespace fixtures {

using namespace toricchow;

// Weighted projective line P(6,4): N = Z + Z/2, b1 = (2,1), b2 = (-3,0).
inline StackyFan weighted_line_gerbe() {
  return make_stacky_fan("P(6,4)", FgAbGroup{1, make_vector({2})}, {make_vector({2, 1}), make_vector({-3, 0})},
                         {{0}, {1}});
}

// Gerbe over the Hirzebruch surface F2 with N = Z^2 + Z/2 + Z/4.
inline StackyFan hirzebruch_gerbe() {
  return make_stacky_fan("F2 gerbe", FgAbGroup{2, make_vector({2, 4})},
                         {make_vector({1, 0, 1, 0}), make_vector({0, 1, 0, 0}), make_vector({-1, 2, 0, 0}),
                          make_vector({0, -1, 0, 1})},
                         {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

// Weighted projective plane P(1,1,2).
inline StackyFan weighted_plane() {
  return make_stacky_fan("P(1,1,2)", FgAbGroup::free(2),
                         {make_vector({1, 0}), make_vector({0, 1}), make_vector({-1, -2})}, {{0, 1}, {1, 2}, {0, 2}});
}

// Hirzebruch surface F2, the crepant resolution of P(1,1,2).
inline StackyFan hirzebruch() {
  return make_stacky_fan("F2", FgAbGroup::free(2),
                         {make_vector({1, 0}), make_vector({0, 1}), make_vector({-1, -2}), make_vector({0, -1})},
                         {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

inline StackyFan projective_line() {
  return make_stacky_fan("P1", FgAbGroup::free(1), {make_vector({1}), make_vector({-1})}, {{0}, {1}});
}

struct RandomFanOptions {
  std::size_t max_rank = 3;
  std::size_t max_rays = 5;
  long max_torsion = 6;
  long coord_bound = 3;
};

// Complete simplicial fan: a weighted-projective simplex fan, refined by
// stellar subdivisions, with random ray multiples and random torsion parts.
inline StackyFan random_stacky_fan(std::mt19937_64& rng, const RandomFanOptions& opt = {}) {
  std::uniform_int_distribution<long> coord(-opt.coord_bound, opt.coord_bound);
  std::uniform_int_distribution<long> positive(1, 3);
  for (;;) {
    const std::size_t d = 1 + rng() % opt.max_rank;
    if (d + 1 > opt.max_rays) continue;
    std::vector<IntVector> rays;
    for (std::size_t i = 0; i < d; ++i) {
      IntVector v(d);
      for (auto& x : v) x = coord(rng);
      rays.push_back(v);
    }
    IntMatrix basis = IntMatrix::from_columns(d, rays);
    if (determinant(basis) == 0) continue;
    IntVector last(d);
    for (std::size_t i = 0; i < d; ++i) last = last - Integer(positive(rng)) * rays[i];
    rays.push_back(last);
    std::vector<Cone> cones;
    for (std::size_t skip = 0; skip <= d; ++skip) {
      Cone c;
      for (std::size_t i = 0; i <= d; ++i)
        if (i != skip) c.push_back(i);
      cones.push_back(c);
    }
    // Stellar subdivisions (only meaningful for d >= 2).
    while (d >= 2 && rays.size() < opt.max_rays && rng() % 2 == 0) {
      const std::size_t pick = rng() % cones.size();
      const Cone sigma = cones[pick];
      IntVector w(d);
      for (auto r : sigma) w = w + Integer(positive(rng)) * rays[r];
      const std::size_t idx = rays.size();
      rays.push_back(w);
      cones.erase(cones.begin() + static_cast<std::ptrdiff_t>(pick));
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        Cone c = sigma;
        c[k] = idx;
        std::sort(c.begin(), c.end());
        cones.push_back(c);
      }
    }
    for (auto& v : rays) v = Integer(rng() % 4 == 0 ? 2 : 1) * v;
    IntVector orders;
    const std::size_t nt = rng() % 3;
    for (std::size_t j = 0; j < nt; ++j) orders.push_back(Integer(2 + long(rng() % (opt.max_torsion - 1))));
    FgAbGroup g = FgAbGroup::from_cyclic(d, orders);
    if (!g.torsion.empty() && g.torsion.back() > opt.max_torsion) continue;
    std::vector<IntVector> full;
    for (const auto& v : rays) {
      IntVector f = v;
      for (std::size_t j = 0; j < g.torsion.size(); ++j) f.push_back(Integer(long(rng() % 7)));
      full.push_back(f);
    }
    StackyFan sf = make_stacky_fan("random", g, full, cones);
    if (validate(sf).ok()) return sf;
  }
}

}  // namespace fixtures
