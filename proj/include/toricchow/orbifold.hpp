#pragma once

// Twisted sectors and the orbifold product of a toric DM stack.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toricchow/chowring.hpp"

namespace toricchow {

struct BoxElement {
  IntVector element;                 // in N, torsion normalized
  Cone cone;                         // minimal cone containing the free part
  RationalVector fractional_coords;  // one per ray of cone, in (0,1)
  Rational age;
  std::string label;

  bool is_zero() const { return toricchow::is_zero(element); }
};

/// Box elements in a fixed order with a lookup by element.
class BoxList : public std::vector<BoxElement> {
public:
  BoxList() = default;
  explicit BoxList(std::vector<BoxElement> boxes) : std::vector<BoxElement>(std::move(boxes)) {
    for (std::size_t i = 0; i < size(); ++i) index_.emplace((*this)[i].element, i);
  }

  std::optional<std::size_t> find(const IntVector& element) const {
    auto it = index_.find(element);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

private:
  std::map<IntVector, std::size_t> index_;
};

inline std::string element_label(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

namespace detail {

/// Every element of Z/o_1 + ... + Z/o_k, first coordinate slowest.
inline std::vector<IntVector> finite_elements(const IntVector& orders, std::size_t cap = 1000000) {
  Integer total = 1;
  for (const auto& o : orders) total *= o;
  if (total > cap) throw ResourceLimit("finite group of order " + total.get_str() + " is too large to enumerate");
  std::vector<IntVector> out{IntVector(orders.size())};
  for (std::size_t j = orders.size(); j-- > 0;) {
    std::vector<IntVector> next;
    for (const auto& base : out)
      for (Integer a = 0; a < orders[j]; ++a) {
        IntVector v = base;
        v[j] = a;
        next.push_back(v);
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline IntVector sum_of_rays(const StackyFan& sf, const Cone& c, const std::vector<Integer>& mult) {
  IntVector s(sf.group.size());
  for (std::size_t k = 0; k < c.size(); ++k) s = s + mult[k] * sf.ray(c[k]);
  return s;
}

}  // namespace detail

/// Box element with the given element; throws if it is not one.
inline BoxElement make_box(const StackyFan& sf, const IntVector& element) {
  BoxElement b;
  b.element = sf.group.normalize(element);
  const IntVector free(b.element.begin(), b.element.begin() + static_cast<std::ptrdiff_t>(sf.dimension()));
  auto cc = minimal_cone_containing(sf.fan, free);
  if (!cc) throw InvalidInput("element " + element_label(element) + " lies outside the support");
  for (const auto& a : cc->coefficients)
    if (a >= 1) throw InvalidInput("element " + element_label(element) + " is not a box element");
  b.cone = cc->cone;
  b.fractional_coords = cc->coefficients;
  b.age = 0;
  for (const auto& a : b.fractional_coords) b.age += a;
  b.label = element_label(b.element);
  return b;
}

/// All box elements, each attached to its minimal cone. The zero element comes
/// first, then cones in face order, then fractional coordinates and torsion.
inline BoxList enumerate_boxes(const StackyFan& sf) {
  require_valid(sf);
  const std::size_t d = sf.dimension();
  const auto lifts = detail::finite_elements(sf.group.torsion);
  std::vector<BoxElement> out;
  for (const Cone& c : all_cones(sf.fan)) {
    std::vector<std::pair<RationalVector, IntVector>> points;
    if (c.empty()) {
      points.emplace_back(RationalVector{}, IntVector(d));
    } else {
      const IntMatrix b = ray_matrix(sf.fan, c);
      const Cokernel ck = cokernel(b);
      const IntVector orders = ck.group.torsion;
      for (const auto& t : detail::finite_elements(orders)) {
        IntVector x(d);
        for (std::size_t j = 0; j < t.size(); ++j) x = x + t[j] * ck.lift.column(ck.group.rank + j);
        RationalVector rhs(x.begin(), x.end());
        auto alpha = rational_solve(b, rhs);
        if (!alpha) throw IntegrityError("torsion class outside the span of its cone");
        RationalVector fr;
        for (const auto& a : *alpha) fr.push_back(frac(a));
        if (std::any_of(fr.begin(), fr.end(), [](const Rational& q) { return q == 0; })) continue;
        IntVector p(d);
        for (std::size_t i = 0; i < d; ++i) {
          Rational s = 0;
          for (std::size_t k = 0; k < c.size(); ++k) s += fr[k] * Rational(b(i, k));
          if (s.get_den() != 1) throw IntegrityError("box point is not integral");
          p[i] = s.get_num();
        }
        points.emplace_back(fr, p);
      }
      std::sort(points.begin(), points.end());
    }
    for (const auto& [fr, p] : points)
      for (const auto& t : lifts) {
        BoxElement e;
        e.element = p;
        e.element.insert(e.element.end(), t.begin(), t.end());
        e.cone = c;
        e.fractional_coords = fr;
        e.age = 0;
        for (const auto& a : fr) e.age += a;
        e.label = element_label(e.element);
        out.push_back(std::move(e));
      }
  }
  return BoxList(std::move(out));
}

inline std::size_t box_index(const BoxList& boxes, const IntVector& element) {
  if (auto i = boxes.find(element)) return *i;
  throw IntegrityError("element " + element_label(element) + " is not among the box elements");
}

/// The box element representing the inverse class in the local group.
inline std::size_t box_inverse(const StackyFan& sf, const BoxList& boxes, std::size_t v) {
  const BoxElement& b = boxes.at(v);
  IntVector w = detail::sum_of_rays(sf, b.cone, std::vector<Integer>(b.cone.size(), 1)) - b.element;
  return box_index(boxes, sf.group.normalize(w));
}

/// c = box + sum carries_i b_i with nonnegative integer carries over the
/// minimal cone of c.
struct Split {
  IntVector box;
  Cone cone;
  std::vector<Integer> carries;
};

inline Split split_point(const StackyFan& sf, const IntVector& c) {
  check_element(sf.group, c);
  const IntVector n = sf.group.normalize(c);
  const IntVector free(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(sf.dimension()));
  auto cc = minimal_cone_containing(sf.fan, free);
  if (!cc) throw InvalidInput("point " + element_label(c) + " lies outside the support");
  Split s;
  s.cone = cc->cone;
  for (const auto& a : cc->coefficients) s.carries.push_back(floor(a));
  s.box = sf.group.normalize(n - detail::sum_of_rays(sf, s.cone, s.carries));
  return s;
}

struct BoxSum {
  std::size_t v3 = 0;        // v1 + v2 + v3 vanishes in the local group
  std::size_t check_v3 = 0;  // box part of v1 + v2
  Cone cone;                 // smallest cone containing both
  Cone carry_rays;           // rays where the fractional parts add up to at least 1
};

/// std::nullopt when v1 and v2 lie in no common cone.
inline std::optional<BoxSum> box_sum_third(const StackyFan& sf, const BoxList& boxes, std::size_t v1,
                                           std::size_t v2) {
  const BoxElement& a = boxes.at(v1);
  const BoxElement& b = boxes.at(v2);
  BoxSum r;
  r.cone = cone_union(a.cone, b.cone);
  if (!is_cone(sf.fan, r.cone)) return std::nullopt;
  std::vector<Integer> carries;
  for (auto ray : r.cone) {
    Rational s = 0;
    for (std::size_t k = 0; k < a.cone.size(); ++k)
      if (a.cone[k] == ray) s += a.fractional_coords[k];
    for (std::size_t k = 0; k < b.cone.size(); ++k)
      if (b.cone[k] == ray) s += b.fractional_coords[k];
    carries.push_back(floor(s));
    if (carries.back() > 0) r.carry_rays.push_back(ray);
  }
  const IntVector check = sf.group.normalize(a.element + b.element - detail::sum_of_rays(sf, r.cone, carries));
  r.check_v3 = box_index(boxes, check);
  r.v3 = box_inverse(sf, boxes, r.check_v3);
  return r;
}

/// N / <b_i : i in cone> with the fan projected along the cone.
inline StackyFan quotient_stacky_fan(const StackyFan& sf, const Cone& cone) {
  if (!is_cone(sf.fan, cone)) throw InvalidInput("quotient: " + cone_to_string(cone) + " is not a cone");
  std::vector<IntVector> gens;
  for (auto i : cone) gens.push_back(sf.ray(i));
  const QuotientResult q = quotient(sf.group, gens);
  const IntMatrix& proj = q.projection.matrix;
  const IntMatrix free_proj = proj.block(0, 0, q.group.rank, sf.dimension());
  const Fan qf = quotient_fan(sf.fan, cone, free_proj);
  std::vector<IntVector> rays;
  for (auto j : link(sf.fan, cone)) rays.push_back(proj * sf.ray(j));
  StackyFan out = make_stacky_fan(sf.name.empty() ? "" : sf.name + "/" + cone_to_string(cone), q.group, rays,
                                  qf.max_cones);
  if (out.fan.rays != qf.rays) throw IntegrityError("quotient fan rays disagree with the projected stacky rays");
  return out;
}

struct InertiaComponent {
  BoxElement box;
  StackyFan sector;
  FgAbGroup local_group;
};

inline std::vector<InertiaComponent> inertia_components(const StackyFan& sf) {
  std::vector<InertiaComponent> out;
  for (const auto& b : enumerate_boxes(sf)) {
    InertiaComponent c{b, quotient_stacky_fan(sf, b.cone), {}};
    c.local_group = FgAbGroup{0, c.sector.group.torsion};
    out.push_back(std::move(c));
  }
  return out;
}

struct TwistedTriple {
  std::size_t v1 = 0, v2 = 0, v3 = 0;
  Cone cone;
  StackyFan sector;
};

/// Components of the double inertia stack: one per ordered pair in a common cone.
inline std::vector<TwistedTriple> twisted_triples(const StackyFan& sf, const BoxList& boxes) {
  std::vector<TwistedTriple> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      auto s = box_sum_third(sf, boxes, i, j);
      if (!s) continue;
      TwistedTriple t{i, j, s->v3, cone_union(s->cone, boxes[s->v3].cone), {}};
      t.sector = quotient_stacky_fan(sf, t.cone);
      out.push_back(std::move(t));
    }
  return out;
}

/// Euler class of the obstruction bundle of a twisted triple, in the ray
/// variables: the product of the stack ray divisors with coefficient 2.
inline Polynomial obstruction_euler(const StackyFan& sf, const GerbeData& gd, const BoxList& boxes,
                                    std::size_t v1, std::size_t v2, std::size_t v3) {
  const std::size_t n = sf.num_rays();
  const Cone cone = cone_union(cone_union(boxes.at(v1).cone, boxes.at(v2).cone), boxes.at(v3).cone);
  const IntVector total = sf.group.normalize(boxes[v1].element + boxes[v2].element + boxes[v3].element);
  RationalVector rhs(total.begin(), total.begin() + static_cast<std::ptrdiff_t>(sf.dimension()));
  auto a = rational_solve(ray_matrix(sf.fan, cone), rhs);
  if (!a) throw IntegrityError("triple sum lies outside its cone");
  std::vector<Integer> coeffs;
  Polynomial euler = Polynomial::constant(n, 1);
  for (std::size_t k = 0; k < cone.size(); ++k) {
    const Rational& q = (*a)[k];
    if (q != 1 && q != 2)
      throw IntegrityError("triple coefficient " + q.get_str() + " on ray " + std::to_string(cone[k] + 1) +
                           " is not 1 or 2");
    coeffs.push_back(q.get_num());
    if (q == 2) euler = euler * Polynomial::linear(gd.tilde[cone[k]]);
  }
  if (sf.group.normalize(detail::sum_of_rays(sf, cone, coeffs)) != total)
    throw IntegrityError("triple sum differs from its ray expansion in the torsion");
  return euler;
}

struct OrbifoldProduct {
  std::size_t box = 0;  // index of the box part
  Polynomial factor;    // in the ray variables
  Cone carries_inside;  // carries on rays of the box part's cone
  Cone carries_outside; // carries on rays leaving the cone
};

/// y^v1 * y^v2 as y^box * factor, std::nullopt when the product vanishes.
inline std::optional<OrbifoldProduct> orbifold_product(const StackyFan& sf, const GerbeData& gd,
                                                       const BoxList& boxes, std::size_t v1,
                                                       std::size_t v2) {
  auto s = box_sum_third(sf, boxes, v1, v2);
  if (!s) return std::nullopt;
  OrbifoldProduct r;
  r.box = s->check_v3;
  r.factor = Polynomial::constant(sf.num_rays(), 1);
  const Cone& target = boxes[r.box].cone;
  for (auto i : s->carry_rays) {
    r.factor = r.factor * Polynomial::linear(gd.tilde[i]);
    if (std::binary_search(target.begin(), target.end(), i))
      r.carries_inside.push_back(i);
    else
      r.carries_outside.push_back(i);
  }
  const Cone common = cone_intersection(boxes[v1].cone, boxes[v2].cone);
  if (!is_subset(r.carries_outside, common)) throw IntegrityError("carry outside both supports");
  if (boxes[v1].age + boxes[v2].age != boxes[r.box].age + Rational(long(s->carry_rays.size())))
    throw IntegrityError("orbifold product " + boxes[v1].label + " * " + boxes[v2].label + " breaks the grading");
  return r;
}

/// Orbifold Chow ring: ray variables x1..xn, one variable per nonzero box.
struct OrbifoldPresentation {
  GradedPresentation presentation;
  BoxList boxes;
  std::vector<std::optional<std::size_t>> box_variable;  // per box; zero box has none

  /// The monomial y^box as a polynomial in the presentation.
  Polynomial box_monomial(std::size_t b) const {
    const std::size_t n = presentation.size();
    if (!box_variable.at(b)) return Polynomial::constant(n, 1);
    return Polynomial::variable(n, *box_variable[b]);
  }
};

inline OrbifoldPresentation orbifold_presentation(const StackyFan& sf) {
  require_valid(sf);
  if (!torsion_generated(sf)) throw HypothesisNotSatisfied("the rays do not generate the torsion of N");
  const GerbeData gd = gerbe_data(sf);
  OrbifoldPresentation out;
  out.boxes = enumerate_boxes(sf);
  const std::size_t n = sf.num_rays();
  GradedPresentation& p = out.presentation;
  p.generators = ray_generators(n);
  std::size_t k = 0;
  for (const auto& b : out.boxes) {
    if (b.is_zero()) {
      out.box_variable.push_back(std::nullopt);
      continue;
    }
    out.box_variable.push_back(n + k);
    p.generators.push_back({"y" + std::to_string(++k), b.age});
    p.box_labels.emplace_back(p.generators.back().name, b.label);
  }
  const std::size_t total = p.size();
  p.relations = circuit_relations(sf, total);
  for (auto& r : nonface_relations(sf, gd.tilde, total)) p.relations.push_back(r);

  const auto nonfaces = minimal_nonfaces(sf.fan);
  for (std::size_t b = 0; b < out.boxes.size(); ++b) {
    if (!out.box_variable[b]) continue;
    // Minimal ray sets S with cone(v) + S not a cone.
    std::set<Cone> sets;
    for (const auto& t : nonfaces) sets.insert(cone_difference(t, out.boxes[b].cone));
    for (const auto& s : sets) {
      bool minimal = true;
      for (const auto& o : sets)
        if (o != s && is_subset(o, s)) minimal = false;
      if (!minimal) continue;
      Polynomial r = out.box_monomial(b);
      for (auto i : s) r = r * Polynomial::linear(gd.tilde[i]).extend(total);
      p.relations.push_back(r);
    }
  }
  for (std::size_t a = 0; a < out.boxes.size(); ++a) {
    if (!out.box_variable[a]) continue;
    for (std::size_t b = a; b < out.boxes.size(); ++b) {
      if (!out.box_variable[b]) continue;
      Polynomial r = out.box_monomial(a) * out.box_monomial(b);
      if (auto prod = orbifold_product(sf, gd, out.boxes, a, b)) r -= out.box_monomial(prod->box) * prod->factor.extend(total);
      p.relations.push_back(r);
    }
  }
  if (!gd.diagonal) p.notes.push_back("reduced Picard group has torsion; identification made in canonical coordinates");
  return out;
}

inline GradedPresentation orbifold_ring(const StackyFan& sf) { return orbifold_presentation(sf).presentation; }

/// Orbifold ring of any valid stacky fan. When the rays miss part of the
/// torsion the stack is core x B(mu); each cyclic factor of order m adds a
/// degree-one class t with m t = 0 and a degree-zero sector class g with
/// g^m = 1.
inline GradedPresentation orbifold_chow_ring(const StackyFan& sf) {
  require_valid(sf);
  if (torsion_generated(sf)) return orbifold_ring(sf);
  const Decomposition dec = decompose(sf);
  if (!torsion_generated(dec.core))
    throw HypothesisNotSatisfied("the rays do not generate the torsion of the decomposition core");
  GradedPresentation p = bmu_extension(orbifold_ring(dec.core), dec.mu);
  for (std::size_t k = 0; k < dec.mu.torsion.size(); ++k) {
    const std::string name = fresh_name(p, dec.mu.torsion.size() == 1 ? "g" : "g" + std::to_string(k + 1));
    add_generators(p, {{name, Rational(0)}});
    const unsigned m = static_cast<unsigned>(dec.mu.torsion[k].get_ui());
    p.relations.push_back(p.var(name).pow(m) - p.one());
  }
  p.notes.push_back("rays do not generate the torsion of N; computed as core x B(" + dec.mu.to_string() + ")");
  return p;
}

/// ((v1 v2) v3) and (v1 (v2 v3)) expanded with the product formula, as
/// polynomials in the presentation.
inline std::pair<Polynomial, Polynomial> triple_products(const StackyFan& sf, const GerbeData& gd,
                                                         const OrbifoldPresentation& op, std::size_t v1,
                                                         std::size_t v2, std::size_t v3) {
  const std::size_t total = op.presentation.size();
  auto twice = [&](std::size_t a, std::size_t b, std::size_t c, bool left) {
    const std::size_t first = left ? a : b, second = left ? b : c, last = left ? c : a;
    auto p1 = orbifold_product(sf, gd, op.boxes, first, second);
    if (!p1) return Polynomial(total);
    auto p2 = orbifold_product(sf, gd, op.boxes, p1->box, last);
    if (!p2) return Polynomial(total);
    return op.box_monomial(p2->box) * (p1->factor * p2->factor).extend(total);
  };
  return {twice(v1, v2, v3, true), twice(v1, v2, v3, false)};
}

struct AssociativityReport {
  std::size_t triples = 0;
  std::vector<std::array<std::size_t, 3>> failures;
  bool ok() const { return failures.empty(); }
};

inline AssociativityReport check_associativity(const StackyFan& sf, const EngineLimits& limits = {}) {
  const OrbifoldPresentation op = orbifold_presentation(sf);
  const GerbeData gd = gerbe_data(sf);
  GradedEngine engine(op.presentation, limits);
  AssociativityReport rep;
  const std::size_t k = op.boxes.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) {
        ++rep.triples;
        auto [l, r] = triple_products(sf, gd, op, a, b, c);
        if (!engine.in_ideal(l - r)) rep.failures.push_back({a, b, c});
      }
  return rep;
}

struct ModuleDecomposition {
  std::vector<GradedGroupTable> summands;  // per box, already shifted by age
  GradedGroupTable total;
  GradedGroupTable orbifold;
  bool verdict = false;
};

namespace detail {
inline GradedGroupTable drop_trivial(const GradedGroupTable& t) {
  GradedGroupTable out;
  for (const auto& [d, g] : t)
    if (!g.is_trivial()) out.emplace(d, g);
  return out;
}
}  // namespace detail

/// Compares the orbifold ring degree by degree with the sum of the sector
/// Chow groups shifted by age.
inline ModuleDecomposition module_decomposition_check(const StackyFan& sf, const Rational& max_degree,
                                                      const EngineLimits& limits = {}) {
  ModuleDecomposition out;
  for (const auto& comp : inertia_components(sf)) {
    GradedGroupTable shifted;
    if (comp.box.age <= max_degree) {
      for (const auto& [d, g] : graded_pieces(chow_ring(comp.sector), max_degree - comp.box.age, limits))
        shifted.emplace(d + comp.box.age, g);
    }
    for (const auto& [d, g] : shifted) {
      auto it = out.total.find(d);
      if (it == out.total.end())
        out.total.emplace(d, g);
      else
        it->second = direct_sum(it->second, g);
    }
    out.summands.push_back(std::move(shifted));
  }
  out.orbifold = graded_pieces(orbifold_ring(sf), max_degree, limits);
  out.verdict = detail::drop_trivial(out.total) == detail::drop_trivial(out.orbifold);
  return out;
}

}  // namespace toricchow
