#pragma once

// Stacky fans (N, fan, beta): validation, the reduced fan, Gale duals, the
// gerbe data relating the stack to its underlying orbifold, and the
// decomposition into a torsion-generated core times a classifying stack.

#include <string>
#include <vector>

#include "toricchow/fancomb.hpp"
#include "toricchow/fgab.hpp"

namespace toricchow {

struct StackyFan {
  std::string name;
  FgAbGroup group;
  Fan fan;       // rays are the free parts of the columns of beta
  IntMatrix beta;  // group.size() x n, torsion rows reduced

  std::size_t num_rays() const { return beta.cols(); }
  std::size_t dimension() const { return group.rank; }
  IntVector ray(std::size_t i) const { return beta.column(i); }
  GroupHom beta_hom() const { return GroupHom{FgAbGroup::free(num_rays()), group, beta}; }
};

/// Builds a stacky fan from full ray vectors in N (free coordinates first);
/// torsion coordinates may be given in any range.
inline StackyFan make_stacky_fan(std::string name, const FgAbGroup& group, const std::vector<IntVector>& rays,
                                 std::vector<Cone> max_cones) {
  StackyFan sf;
  sf.name = std::move(name);
  sf.group = group;
  sf.beta = IntMatrix(group.size(), rays.size());
  sf.fan.ambient_rank = group.rank;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].size() != group.size())
      throw InvalidInput("ray " + std::to_string(i) + " has " + std::to_string(rays[i].size()) +
                         " coordinates, expected " + std::to_string(group.size()));
    IntVector v = group.normalize(rays[i]);
    for (std::size_t k = 0; k < v.size(); ++k) sf.beta(k, i) = v[k];
    sf.fan.rays.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(group.rank));
  }
  for (auto& c : max_cones) std::sort(c.begin(), c.end());
  sf.fan.max_cones = std::move(max_cones);
  return sf;
}

struct StackyValidation {
  std::vector<std::string> diagnostics;
  bool torsion_generated = false;
  bool ok() const { return diagnostics.empty(); }
};

inline std::vector<IntVector> ray_vectors(const StackyFan& sf) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < sf.num_rays(); ++i) out.push_back(sf.ray(i));
  return out;
}

/// True iff every torsion generator of N lies in the span of the rays.
inline bool torsion_generated(const StackyFan& sf) {
  const auto rays = ray_vectors(sf);
  for (std::size_t j = 0; j < sf.group.torsion.size(); ++j) {
    IntVector e(sf.group.size());
    e[sf.group.rank + j] = 1;
    if (!subgroup_contains(sf.group, rays, e)) return false;
  }
  return true;
}

inline StackyValidation validate(const StackyFan& sf) {
  StackyValidation v;
  for (const auto& m : sf.group.torsion)
    if (m <= 1) v.diagnostics.push_back("torsion order " + m.get_str() + " is not > 1");
  for (std::size_t j = 1; j < sf.group.torsion.size(); ++j)
    if (sf.group.torsion[j] % sf.group.torsion[j - 1] != 0)
      v.diagnostics.push_back("torsion orders do not form a divisibility chain");
  if (!v.diagnostics.empty()) return v;
  if (sf.beta.rows() != sf.group.size()) {
    v.diagnostics.push_back("beta has the wrong number of rows");
    return v;
  }
  for (auto& d : validate(sf.fan)) v.diagnostics.push_back(d);
  if (rational_rank(sf.beta_hom().free_block()) != sf.group.rank)
    v.diagnostics.push_back("beta does not have finite cokernel (rays span a proper subspace)");
  v.torsion_generated = torsion_generated(sf);
  return v;
}

inline void require_valid(const StackyFan& sf) {
  auto v = validate(sf);
  if (!v.ok()) throw InvalidInput("invalid stacky fan: " + v.diagnostics.front());
}

/// Same fan over N / torsion.
inline StackyFan reduce(const StackyFan& sf) {
  StackyFan r;
  r.name = sf.name.empty() ? "" : sf.name + " (reduced)";
  r.group = FgAbGroup::free(sf.group.rank);
  r.fan = sf.fan;
  r.beta = sf.beta_hom().free_block();
  return r;
}

inline FgAbGroup picard(const StackyFan& sf) { return gale_dual(sf.beta_hom()).ndual; }

/// One root construction: take the order-th root of the line bundle whose
/// class is `bundle` (a linear form in the ray divisors x_1..x_n).
struct RootBundle {
  IntVector bundle;     // coefficients in x_1..x_n
  IntVector t_class;    // the same class in coordinates of the reduced Picard group
  Integer order;
};

struct GerbeData {
  StackyFan reduced;
  GaleDual dual;          // of beta
  GaleDual reduced_dual;  // of the reduced beta
  IntMatrix phi;          // reduced Picard group -> Picard group
  IntMatrix t_basis;      // columns: chosen generators t_j in reduced Picard coordinates
  IntMatrix a;            // n x k: x = A t
  IntMatrix m;            // k x k
  IntMatrix c;            // k x n: t = C x
  IntMatrix e;            // n x n, E = A M C
  bool diagonal = true;   // false when the reduced Picard group has torsion
  std::vector<RootBundle> root_bundles;
  std::vector<IntVector> tilde;  // tilde[i]: linear form of the i-th stack ray divisor
};

/// Row lattice of the reduced beta in Z^n: the linear (circuit) relations.
inline IntMatrix circuit_matrix(const StackyFan& sf) { return sf.beta_hom().free_block(); }

/// True iff the linear form `v` lies in the circuit lattice.
inline bool in_circuit_lattice(const StackyFan& sf, const IntVector& v) {
  return solve(circuit_matrix(sf).transpose(), v).has_value();
}

namespace detail {

// Simplest representative of the linear form `row`: k e_i when row is
// congruent to k e_i modulo circuits, otherwise row itself.
inline IntVector simplify_tilde(const StackyFan& sf, std::size_t i, const IntVector& row) {
  const std::size_t n = sf.num_rays();
  IntMatrix sys(n, 1);
  sys(i, 0) = 1;
  sys = sys.hcat(circuit_matrix(sf).transpose());
  auto sol = solve(sys, row);
  if (!sol) return row;
  IntVector out(n);
  out[i] = (*sol)[0];
  return out;
}

}  // namespace detail

/// Gerbe data of a torsion-generated stacky fan.
inline GerbeData gerbe_data(const StackyFan& sf) {
  require_valid(sf);
  if (!torsion_generated(sf))
    throw HypothesisNotSatisfied("the rays do not generate the torsion part of N; decompose first");
  GerbeData gd;
  gd.reduced = reduce(sf);
  gd.dual = gale_dual(sf.beta_hom());
  gd.reduced_dual = gale_dual(gd.reduced.beta_hom());
  const FgAbGroup& g = gd.dual.ndual;
  const FgAbGroup& gbar = gd.reduced_dual.ndual;
  if (g != gbar)
    throw HypothesisNotSatisfied("Picard groups of the stack and of the reduced stack differ: " + g.to_string() +
                                 " vs " + gbar.to_string());
  const std::size_t n = sf.num_rays();
  const IntMatrix& bdual = gd.dual.beta_dual.matrix;
  const IntMatrix& bbar = gd.reduced_dual.beta_dual.matrix;

  // Right inverse of the reduced Gale dual: column j is a preimage of the j-th
  // generator of the reduced Picard group.
  std::vector<IntVector> preimages;
  for (std::size_t j = 0; j < gbar.size(); ++j) {
    IntVector target(gbar.size());
    target[j] = 1;
    auto x = solve(bbar.hcat(gbar.relation_matrix()), target);
    if (!x) throw IntegrityError("reduced Gale dual is not surjective");
    x->resize(n);
    preimages.push_back(*x);
  }
  const IntMatrix r = IntMatrix::from_columns(n, preimages);
  IntMatrix p = bdual * r;
  for (std::size_t i = g.rank; i < g.size(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) p(i, j) = mod_floor(p(i, j), g.torsion[i - g.rank]);
  gd.phi = p;

  if (gbar.torsion.empty()) {
    const SnfResult s = snf(p);
    gd.t_basis = s.v;
    gd.m = s.d;
    gd.a = (unimodular_inverse(s.v) * bbar).transpose();
    gd.c = (r * s.v).transpose();
    for (std::size_t j = 0; j < gd.m.rows(); ++j)
      if (gd.m(j, j) > 1) {
        RootBundle rb;
        rb.bundle = gd.c.row(j);
        rb.t_class = s.v.column(j);
        rb.order = gd.m(j, j);
        gd.root_bundles.push_back(rb);
      }
    if (s.rank != p.rows() && p.rows() > 0) throw IntegrityError("phi is not injective");
  } else {
    gd.diagonal = false;
    gd.t_basis = IntMatrix::identity(gbar.size());
    gd.a = bbar.transpose();
    gd.m = p.transpose();
    gd.c = r.transpose();
  }
  gd.e = gd.a * gd.m * gd.c;
  for (std::size_t i = 0; i < n; ++i) gd.tilde.push_back(detail::simplify_tilde(sf, i, gd.e.row(i)));
  return gd;
}

/// Expansion of the i-th stack ray divisor in the orbifold ray divisors: the
/// i-th row of E.
inline IntVector line_bundle_expansion(const GerbeData& gd, std::size_t i) {
  if (i >= gd.e.rows()) throw std::out_of_range("line_bundle_expansion: ray index out of range");
  return gd.e.row(i);
}

/// True iff C is a valid choice, i.e. each row of C maps to the matching t-basis
/// vector under the reduced Gale dual.
inline bool valid_c_choice(const GerbeData& gd, const IntMatrix& c) {
  const FgAbGroup& gbar = gd.reduced_dual.ndual;
  const IntMatrix image = gd.reduced_dual.beta_dual.matrix * c.transpose();
  for (std::size_t j = 0; j < c.rows(); ++j)
    if (!gbar.is_zero_element(image.column(j) - gd.t_basis.column(j))) return false;
  return true;
}

struct Decomposition {
  StackyFan core;
  FgAbGroup mu;
  bool trivial = true;  // true when core is the input itself
};

/// Splits off the torsion not reached by the torsion parts of the rays.
inline Decomposition decompose(const StackyFan& sf) {
  require_valid(sf);
  const std::size_t d = sf.group.rank, r = sf.group.torsion.size(), n = sf.num_rays();
  std::vector<IntVector> torsion_parts;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector t(r);
    for (std::size_t j = 0; j < r; ++j) t[j] = sf.beta(d + j, i);
    torsion_parts.push_back(t);
  }
  const FgAbGroup ntor{0, sf.group.torsion};
  const QuotientResult mu = quotient(ntor, torsion_parts);
  Decomposition dec;
  dec.mu = mu.group;
  if (mu.group.is_trivial()) {
    dec.core = sf;
    return dec;
  }
  dec.trivial = false;
  // Subgroup of N_tor generated by the torsion parts, as Z^n / kernel.
  IntMatrix tm = IntMatrix::from_columns(r, torsion_parts).hcat(ntor.relation_matrix().block(0, 0, r, r));
  const IntMatrix ker = kernel(tm);
  std::vector<std::size_t> first;
  for (std::size_t i = 0; i < n; ++i) first.push_back(i);
  const Cokernel h = cokernel(ker.select_rows(first));
  if (h.group.rank != 0) throw IntegrityError("torsion subgroup has positive rank");
  std::vector<IntVector> rays;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector v(sf.fan.rays[i]);
    IntVector e(n);
    e[i] = 1;
    IntVector coords = h.project(e);
    v.insert(v.end(), coords.begin(), coords.end());
    rays.push_back(v);
  }
  dec.core = make_stacky_fan(sf.name.empty() ? "" : sf.name + " (core)", FgAbGroup{d, h.group.torsion}, rays,
                             sf.fan.max_cones);
  return dec;
}

}  // namespace toricchow
