#pragma once

// Simplicial fans given by ray vectors and maximal cones: validation, face
// queries, minimal non-faces, links, point location and quotient fans.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toricchow/intlin.hpp"

namespace toricchow {

/// Sorted set of ray indices.
using Cone = std::vector<std::size_t>;
using RationalVector = std::vector<Rational>;

struct Fan {
  std::size_t ambient_rank = 0;
  std::vector<IntVector> rays;
  std::vector<Cone> max_cones;

  std::size_t num_rays() const { return rays.size(); }
};

inline std::string cone_to_string(const Cone& c) {
  std::string s = "{";
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k]);
  return s + "}";
}

inline bool is_subset(const Cone& a, const Cone& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline Cone cone_union(const Cone& a, const Cone& b) {
  Cone u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

inline Cone cone_intersection(const Cone& a, const Cone& b) {
  Cone u;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

inline Cone cone_difference(const Cone& a, const Cone& b) {
  Cone u;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

/// Matrix whose columns are the rays indexed by c.
inline IntMatrix ray_matrix(const Fan& f, const Cone& c) {
  IntMatrix m(f.ambient_rank, c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t i = 0; i < f.ambient_rank; ++i) m(i, j) = f.rays[c[j]][i];
  return m;
}

/// Unique rational solution of m x = b when the columns of m are independent;
/// std::nullopt if b is outside their rational span.
inline std::optional<RationalVector> rational_solve(const IntMatrix& m, const RationalVector& b) {
  const std::size_t r = m.rows(), c = m.cols();
  if (b.size() != r) throw std::invalid_argument("rational_solve: right-hand side has wrong length");
  std::vector<RationalVector> a(r, RationalVector(c + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) a[i][j] = Rational(m(i, j));
    a[i][c] = b[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t j = 0; j < c && row < r; ++j) {
    std::size_t p = row;
    while (p < r && a[p][j] == 0) ++p;
    if (p == r) continue;
    std::swap(a[p], a[row]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || a[i][j] == 0) continue;
      Rational k = a[i][j] / a[row][j];
      for (std::size_t l = j; l <= c; ++l) a[i][l] -= k * a[row][l];
    }
    pivot_col.push_back(j);
    ++row;
  }
  for (std::size_t i = row; i < r; ++i)
    if (a[i][c] != 0) return std::nullopt;
  if (pivot_col.size() != c) throw std::invalid_argument("rational_solve: columns are dependent");
  RationalVector x(c);
  for (std::size_t k = 0; k < row; ++k) x[pivot_col[k]] = a[k][c] / a[k][pivot_col[k]];
  return x;
}

inline std::size_t rational_rank(const IntMatrix& m) { return snf(m).rank; }

namespace detail {

// A linear constraint sum coeffs[k] * y_k + constant (= 0 or >= 0) with
// integer coefficients.
struct Constraint {
  IntVector coeffs;
  Integer constant;
};

inline void make_primitive(Constraint& c) {
  Integer g = abs(c.constant);
  for (const auto& x : c.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1) {
    for (auto& x : c.coeffs) x /= g;
    c.constant /= g;
  }
}

inline bool operator<(const Constraint& a, const Constraint& b) {
  if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
  return a.constant < b.constant;
}

// Exact feasibility of a system of equalities and inequalities over Q by
// Gaussian elimination followed by Fourier-Motzkin.
inline bool feasible(std::vector<Constraint> eqs, std::vector<Constraint> ineqs, std::size_t nvars) {
  for (std::size_t v = 0; v < nvars; ++v) {
    auto it = std::find_if(eqs.begin(), eqs.end(), [&](const Constraint& e) { return e.coeffs[v] != 0; });
    if (it == eqs.end()) continue;
    Constraint piv = *it;
    eqs.erase(it);
    if (piv.coeffs[v] < 0) {
      for (auto& x : piv.coeffs) x = -x;
      piv.constant = -piv.constant;
    }
    auto eliminate = [&](Constraint& c) {
      if (c.coeffs[v] == 0) return;
      Integer k = c.coeffs[v];
      for (std::size_t l = 0; l < nvars; ++l) c.coeffs[l] = piv.coeffs[v] * c.coeffs[l] - k * piv.coeffs[l];
      c.constant = piv.coeffs[v] * c.constant - k * piv.constant;
      make_primitive(c);
    };
    for (auto& e : eqs) eliminate(e);
    for (auto& e : ineqs) eliminate(e);
  }
  for (const auto& e : eqs)
    if (is_zero(e.coeffs) && e.constant != 0) return false;
  for (std::size_t v = 0; v < nvars; ++v) {
    std::vector<Constraint> pos, neg;
    std::set<Constraint> next;
    for (auto& c : ineqs) {
      if (c.coeffs[v] > 0)
        pos.push_back(c);
      else if (c.coeffs[v] < 0)
        neg.push_back(c);
      else
        next.insert(c);
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        Constraint c;
        c.coeffs.resize(nvars);
        Integer kp = -q.coeffs[v], kq = p.coeffs[v];
        for (std::size_t l = 0; l < nvars; ++l) c.coeffs[l] = kp * p.coeffs[l] + kq * q.coeffs[l];
        c.constant = kp * p.constant + kq * q.constant;
        make_primitive(c);
        next.insert(c);
      }
    ineqs.assign(next.begin(), next.end());
    for (const auto& c : ineqs)
      if (is_zero(c.coeffs) && c.constant < 0) return false;
  }
  return true;
}

// True iff cone(s) and cone(t) meet exactly in cone(s n t).
inline bool meet_properly(const Fan& f, const Cone& s, const Cone& t) {
  const Cone common = cone_intersection(s, t);
  const Cone s_only = cone_difference(s, common), t_only = cone_difference(t, common);
  if (s_only.empty() || t_only.empty()) return true;
  const std::size_t nv = s_only.size() + t_only.size() + common.size();
  std::vector<Constraint> eqs, ineqs;
  for (std::size_t i = 0; i < f.ambient_rank; ++i) {
    Constraint c{IntVector(nv), 0};
    std::size_t k = 0;
    for (auto r : s_only) c.coeffs[k++] = f.rays[r][i];
    for (auto r : t_only) c.coeffs[k++] = -f.rays[r][i];
    for (auto r : common) c.coeffs[k++] = f.rays[r][i];
    eqs.push_back(c);
  }
  Constraint norm{IntVector(nv), -1};
  for (std::size_t k = 0; k < s_only.size() + t_only.size(); ++k) {
    norm.coeffs[k] = 1;
    Constraint nonneg{IntVector(nv), 0};
    nonneg.coeffs[k] = 1;
    ineqs.push_back(nonneg);
  }
  eqs.push_back(norm);
  return !feasible(eqs, ineqs, nv);
}

}  // namespace detail

/// Checks the fan invariants; returns a list of diagnostics (empty when valid).
inline std::vector<std::string> validate(const Fan& f) {
  std::vector<std::string> diag;
  for (std::size_t i = 0; i < f.rays.size(); ++i) {
    if (f.rays[i].size() != f.ambient_rank)
      diag.push_back("ray " + std::to_string(i) + " has wrong length");
    else if (is_zero(f.rays[i]))
      diag.push_back("ray " + std::to_string(i) + " is zero");
  }
  if (!diag.empty()) return diag;
  std::vector<bool> used(f.rays.size(), false);
  bool cones_ok = true;
  for (const auto& c : f.max_cones) {
    bool ok = true;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] >= f.rays.size()) {
        diag.push_back("cone " + cone_to_string(c) + " has index out of range");
        ok = false;
        break;
      }
      if (k > 0 && c[k - 1] >= c[k]) {
        diag.push_back("cone " + cone_to_string(c) + " is not strictly increasing");
        ok = false;
        break;
      }
    }
    if (!ok) {
      cones_ok = false;
      continue;
    }
    for (auto r : c) used[r] = true;
    if (rational_rank(ray_matrix(f, c)) != c.size()) {
      diag.push_back("cone " + cone_to_string(c) + " has linearly dependent rays");
      cones_ok = false;
    }
  }
  for (std::size_t i = 0; i < f.rays.size(); ++i)
    if (!used[i]) diag.push_back("ray " + std::to_string(i) + " lies in no cone");
  if (!cones_ok) return diag;
  for (std::size_t a = 0; a < f.max_cones.size(); ++a)
    for (std::size_t b = 0; b < f.max_cones.size(); ++b) {
      if (a == b) continue;
      const Cone &s = f.max_cones[a], &t = f.max_cones[b];
      if (is_subset(s, t) && (s != t || a < b)) {
        diag.push_back("cone " + cone_to_string(s) + " is contained in cone " + cone_to_string(t));
        continue;
      }
      if (a < b && !detail::meet_properly(f, s, t))
        diag.push_back("cones " + cone_to_string(s) + " and " + cone_to_string(t) +
                       " do not meet in a common face");
    }
  return diag;
}

/// True iff `c` (sorted) is a face of some maximal cone; the empty set is the zero cone.
inline bool is_cone(const Fan& f, const Cone& c) {
  if (c.empty()) return true;
  for (const auto& m : f.max_cones)
    if (is_subset(c, m)) return true;
  return false;
}

/// All cones of the fan including the zero cone, ordered by size then lexicographically.
inline std::vector<Cone> all_cones(const Fan& f) {
  std::set<Cone> faces;
  faces.insert(Cone{});
  for (const auto& m : f.max_cones) {
    const std::size_t k = m.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      Cone c;
      for (std::size_t j = 0; j < k; ++j)
        if (mask & (std::size_t{1} << j)) c.push_back(m[j]);
      faces.insert(c);
    }
  }
  std::vector<Cone> out(faces.begin(), faces.end());
  std::stable_sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) { return a.size() < b.size(); });
  return out;
}

/// Inclusion-minimal ray sets that do not span a cone.
inline std::vector<Cone> minimal_nonfaces(const Fan& f) {
  std::vector<Cone> result;
  const std::vector<Cone> cones = all_cones(f);
  std::set<Cone> cone_set(cones.begin(), cones.end());
  for (const auto& c : cones) {
    const std::size_t start = c.empty() ? 0 : c.back() + 1;
    for (std::size_t i = start; i < f.num_rays(); ++i) {
      Cone cand = c;
      cand.push_back(i);
      if (cone_set.count(cand)) continue;
      bool minimal = true;
      for (std::size_t drop = 0; drop + 1 < cand.size() && minimal; ++drop) {
        Cone sub = cand;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
        if (!cone_set.count(sub)) minimal = false;
      }
      if (minimal) result.push_back(cand);
    }
  }
  std::stable_sort(result.begin(), result.end(), [](const Cone& a, const Cone& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return result;
}

struct ConeCoords {
  Cone cone;
  RationalVector coefficients;  // one per ray of cone, all positive
};

/// The cone whose relative interior contains `point`, with the coefficients of
/// the point in its rays; std::nullopt if the point is outside the support.
inline std::optional<ConeCoords> minimal_cone_containing(const Fan& f, const RationalVector& point) {
  if (point.size() != f.ambient_rank) throw InvalidInput("point has wrong dimension");
  if (std::all_of(point.begin(), point.end(), [](const Rational& q) { return q == 0; })) return ConeCoords{};
  for (const auto& m : f.max_cones) {
    auto x = rational_solve(ray_matrix(f, m), point);
    if (!x) continue;
    if (std::any_of(x->begin(), x->end(), [](const Rational& q) { return q < 0; })) continue;
    ConeCoords out;
    for (std::size_t k = 0; k < m.size(); ++k)
      if ((*x)[k] != 0) {
        out.cone.push_back(m[k]);
        out.coefficients.push_back((*x)[k]);
      }
    return out;
  }
  return std::nullopt;
}

inline std::optional<ConeCoords> minimal_cone_containing(const Fan& f, const IntVector& point) {
  RationalVector p;
  for (const auto& x : point) p.emplace_back(x);
  return minimal_cone_containing(f, p);
}

/// Rays i outside `c` such that c + {i} is a cone.
inline Cone link(const Fan& f, const Cone& c) {
  if (!is_cone(f, c)) throw InvalidInput("link: " + cone_to_string(c) + " is not a cone");
  Cone out;
  for (std::size_t i = 0; i < f.num_rays(); ++i) {
    if (std::binary_search(c.begin(), c.end(), i)) continue;
    if (is_cone(f, cone_union(c, Cone{i}))) out.push_back(i);
  }
  return out;
}

/// Quotient fan by a cone. `projection` maps the ambient lattice onto the
/// free part of the quotient lattice and must kill the cone's rays. Rays of
/// the result are the images of link(f, c), in increasing index order.
inline Fan quotient_fan(const Fan& f, const Cone& c, const IntMatrix& projection) {
  if (projection.cols() != f.ambient_rank) throw InvalidInput("quotient_fan: projection has wrong shape");
  for (auto r : c)
    if (!is_zero(projection * f.rays[r])) throw InvalidInput("quotient_fan: projection does not kill the cone");
  const Cone lk = link(f, c);
  std::map<std::size_t, std::size_t> index;
  Fan q;
  q.ambient_rank = projection.rows();
  for (std::size_t k = 0; k < lk.size(); ++k) {
    index[lk[k]] = k;
    q.rays.push_back(projection * f.rays[lk[k]]);
  }
  std::set<Cone> cones;
  for (const auto& m : f.max_cones) {
    if (!is_subset(c, m)) continue;
    Cone img;
    for (auto r : cone_difference(m, c)) img.push_back(index.at(r));
    std::sort(img.begin(), img.end());
    if (!img.empty()) cones.insert(img);
  }
  q.max_cones.assign(cones.begin(), cones.end());
  return q;
}

}  // namespace toricchow
