#pragma once

// Homomorphisms of finitely generated abelian groups, quotients, membership
// and the Gale dual of a map Z^n -> N.

#include <string>
#include <vector>

#include "toricchow/intlin.hpp"

namespace toricchow {

/// Homomorphism given by the images of the source generators (one column per
/// source coordinate, expressed in target coordinates).
struct GroupHom {
  FgAbGroup source;
  FgAbGroup target;
  IntMatrix matrix;

  IntVector apply(const IntVector& x) const { return target.normalize(matrix * x); }

  /// Checks shapes and that each torsion generator of the source maps to an
  /// element killed by its order.
  bool well_defined() const {
    if (matrix.rows() != target.size() || matrix.cols() != source.size()) return false;
    for (std::size_t j = 0; j < source.torsion.size(); ++j) {
      IntVector img = source.torsion[j] * matrix.column(source.rank + j);
      if (!target.is_zero_element(img)) return false;
    }
    return true;
  }

  /// Free-coordinate block of the matrix (rows of the free part of the target).
  IntMatrix free_block() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < target.rank; ++i) idx.push_back(i);
    return matrix.select_rows(idx);
  }
};

inline GroupHom identity_hom(const FgAbGroup& g) { return GroupHom{g, g, IntMatrix::identity(g.size())}; }

struct QuotientResult {
  FgAbGroup group;
  GroupHom projection;
  IntMatrix lift;  // columns: representatives in g of the quotient generators
};

inline void check_element(const FgAbGroup& g, const IntVector& v) {
  if (v.size() != g.size())
    throw InvalidInput("element of length " + std::to_string(v.size()) + " in a group with " +
                       std::to_string(g.size()) + " coordinates");
}

/// g / <elements>.
inline QuotientResult quotient(const FgAbGroup& g, const std::vector<IntVector>& elements) {
  for (const auto& e : elements) check_element(g, e);
  if (elements.empty()) return QuotientResult{g, identity_hom(g), IntMatrix::identity(g.size())};
  const IntMatrix pres = IntMatrix::from_columns(g.size(), elements).hcat(g.relation_matrix());
  Cokernel ck = cokernel(pres);
  // Reduce projections of torsion coordinates through the new torsion orders.
  GroupHom proj{g, ck.group, ck.projection};
  for (std::size_t i = 0; i < proj.matrix.rows(); ++i)
    if (i >= ck.group.rank)
      for (std::size_t j = 0; j < proj.matrix.cols(); ++j)
        proj.matrix(i, j) = mod_floor(proj.matrix(i, j), ck.group.torsion[i - ck.group.rank]);
  return QuotientResult{ck.group, proj, ck.lift};
}

/// True iff target lies in the subgroup of `ambient` generated by `generators`.
inline bool subgroup_contains(const FgAbGroup& ambient, const std::vector<IntVector>& generators,
                              const IntVector& target) {
  check_element(ambient, target);
  for (const auto& g : generators) check_element(ambient, g);
  IntMatrix m = IntMatrix::from_columns(ambient.size(), generators).hcat(ambient.relation_matrix());
  return solve(m, target).has_value();
}

struct GaleDual {
  FgAbGroup ndual;
  GroupHom beta_dual;      // Z^n -> ndual
  GroupHom dual_cokernel;  // ndual -> coker(beta_dual)
};

/// Gale dual: ndual = coker([B, Q]^t) and beta_dual the composite
/// (Z^n)* -> (Z^{n+r})* -> ndual.
inline GaleDual gale_dual(const GroupHom& beta) {
  if (beta.source.torsion.size() != 0) throw InvalidInput("gale_dual: source must be free");
  const std::size_t n = beta.source.rank;
  const IntMatrix bq = beta.matrix.hcat(beta.target.relation_matrix());
  const Cokernel ck = cokernel(bq.transpose());
  std::vector<std::size_t> first;
  for (std::size_t j = 0; j < n; ++j) first.push_back(j);
  GaleDual gd;
  gd.ndual = ck.group;
  gd.beta_dual = GroupHom{beta.source, ck.group, ck.projection.select_cols(first)};
  for (std::size_t i = ck.group.rank; i < ck.group.size(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      gd.beta_dual.matrix(i, j) = mod_floor(gd.beta_dual.matrix(i, j), ck.group.torsion[i - ck.group.rank]);
  std::vector<IntVector> images;
  for (std::size_t j = 0; j < n; ++j) images.push_back(gd.beta_dual.matrix.column(j));
  const QuotientResult q = quotient(gd.ndual, images);
  gd.dual_cokernel = q.projection;
  return gd;
}

/// beta^*: N^* -> (Z^n)^*, an n x d matrix (Hom(-, Z) kills torsion).
inline GroupHom dual_lattice_maps(const GroupHom& beta) {
  IntMatrix free = beta.free_block();
  return GroupHom{FgAbGroup::free(beta.target.rank), FgAbGroup::free(beta.source.size()), free.transpose()};
}

/// Row Hermite basis of the row lattice of m; two matrices with equal results
/// differ by a unimodular change of basis on the left.
inline IntMatrix row_lattice_basis(const IntMatrix& m) {
  const HnfResult h = hnf(m.transpose());
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < h.rank(); ++k) idx.push_back(k);
  return h.h.select_cols(idx).transpose();
}

}  // namespace toricchow
