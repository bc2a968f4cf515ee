#pragma once

// Graded ring presentations over Z, the per-degree engine computing their
// graded pieces, and the Chow ring constructions of a stacky fan.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toricchow/lattice_quotient.hpp"
#include "toricchow/polynomial.hpp"
#include "toricchow/stacky.hpp"

namespace toricchow {

struct Generator {
  std::string name;
  Rational degree;
};

struct GradedPresentation {
  std::vector<Generator> generators;
  std::vector<Polynomial> relations;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::string>> box_labels;  // generator name -> box element

  std::size_t size() const { return generators.size(); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& g : generators) out.push_back(g.name);
    return out;
  }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name == name) return i;
    return std::nullopt;
  }

  Polynomial var(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw std::invalid_argument("no generator named " + name);
    return Polynomial::variable(size(), *i);
  }

  Polynomial one() const { return Polynomial::constant(size(), 1); }

  Rational degree_of(const Exponents& e) const {
    Rational d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += Rational(e[i]) * generators[i].degree;
    return d;
  }

  /// Degree of a homogeneous polynomial; std::nullopt for zero or inhomogeneous input.
  std::optional<Rational> degree_of(const Polynomial& p) const {
    std::optional<Rational> d;
    for (const auto& [e, c] : p.terms()) {
      Rational de = degree_of(e);
      if (d && *d != de) return std::nullopt;
      d = de;
    }
    return d;
  }

  /// Throws InvalidInput unless every relation is homogeneous in the right ring.
  void check() const {
    for (const auto& g : generators)
      if (g.degree < 0) throw InvalidInput("generator " + g.name + " has negative degree");
    for (const auto& r : relations) {
      if (r.nvars() != size()) throw InvalidInput("relation has the wrong number of variables");
      if (!r.is_zero() && !degree_of(r)) throw InvalidInput("relation " + r.to_string(names()) + " is not homogeneous");
    }
  }
};

/// Invariant factors of each graded piece, keyed by degree.
using GradedGroupTable = std::map<Rational, FgAbGroup>;

inline std::string fresh_name(const GradedPresentation& p, const std::string& base) {
  if (!p.index_of(base)) return base;
  for (int k = 1;; ++k) {
    std::string s = base + std::to_string(k);
    if (!p.index_of(s)) return s;
  }
}

/// Appends generators to p, extending all relations.
inline void add_generators(GradedPresentation& p, const std::vector<Generator>& gens) {
  p.generators.insert(p.generators.end(), gens.begin(), gens.end());
  for (auto& r : p.relations) r = r.extend(p.size());
}

struct EngineLimits {
  std::size_t max_monomials = 200000;
  // Largest total exponent allowed in degree-zero generators; 0 means the
  // largest such exponent occurring in a relation (at least 1).
  std::uint32_t zero_degree_cap = 0;
};

/// Per-degree lattice computations for a graded presentation. Each degree is
/// computed once and cached.
class GradedEngine {
public:
  explicit GradedEngine(GradedPresentation p, EngineLimits limits = {}) : p_(std::move(p)), limits_(limits) {
    p_.check();
    Integer l = 1;
    for (const auto& g : p_.generators) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), g.degree.get_den_mpz_t());
    scale_ = l;
    for (const auto& g : p_.generators) {
      Rational w = g.degree * Rational(scale_);
      weights_.push_back(w.get_num().get_ui());
    }
    if (limits_.zero_degree_cap == 0) {
      std::uint32_t cap = 1;
      for (const auto& r : p_.relations)
        for (const auto& [e, c] : r.terms()) cap = std::max(cap, zero_level(e));
      zero_cap_ = cap;
    } else {
      zero_cap_ = limits_.zero_degree_cap;
    }
  }

  const GradedPresentation& presentation() const { return p_; }

  /// Graded piece in the given degree.
  const FgAbGroup& piece(const Rational& degree) { return quotient(to_weight(degree)).group(); }

  /// Ordered monomial basis of the degree (before relations).
  const std::vector<Exponents>& monomials(const Rational& degree) { return monomials_of(to_weight(degree)); }

  /// Graded pieces of every degree up to max_degree carrying at least one monomial.
  GradedGroupTable table(const Rational& max_degree) {
    GradedGroupTable t;
    const Rational top = max_degree * Rational(scale_);
    const unsigned long wmax = top < 0 ? 0 : floor(top).get_ui();
    for (unsigned long w = 0; w <= wmax; ++w) {
      if (top < 0) break;
      if (monomials_of(w).empty()) continue;
      t[make_rational(Integer(w), scale_)] = quotient(w).group();
    }
    return t;
  }

  /// Coordinates of the class of a homogeneous element in its graded piece;
  /// the zero polynomial maps to an empty vector.
  IntVector normal_form(const Polynomial& f) {
    if (f.is_zero()) return {};
    auto d = p_.degree_of(f);
    if (!d) throw InvalidInput("normal_form: element is not homogeneous");
    const unsigned long w = to_weight(*d);
    const auto& index = index_of(w);
    SparseVector v;
    for (const auto& [e, c] : f.terms()) {
      auto it = index.find(e);
      if (it == index.end()) throw ResourceLimit("normal_form: monomial exceeds the degree-zero exponent cap");
      v[it->second] += c;
    }
    return quotient(w).coordinates(v);
  }

  /// True iff f lies in the ideal (per-degree lattice membership).
  bool in_ideal(const Polynomial& f) {
    if (f.is_zero()) return true;
    auto d = p_.degree_of(f);
    if (!d) {
      // Check each homogeneous component.
      std::map<Rational, Polynomial> parts;
      for (const auto& [e, c] : f.terms()) {
        auto [it, ins] = parts.emplace(p_.degree_of(e), Polynomial(f.nvars()));
        it->second.add_term(e, c);
      }
      for (const auto& [deg, part] : parts)
        if (!in_ideal(part)) return false;
      return true;
    }
    return is_zero(normal_form(f));
  }

private:
  std::uint32_t zero_level(const Exponents& e) const {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (p_.generators[i].degree == 0) s += e[i];
    return s;
  }

  unsigned long to_weight(const Rational& degree) const {
    Rational w = degree * Rational(scale_);
    if (w < 0 || w.get_den() != 1) throw InvalidInput("degree " + degree.get_str() + " does not occur in this ring");
    return w.get_num().get_ui();
  }

  // Monomials of weight w with degree-zero level at most zero_cap_, in
  // descending graded lexicographic order.
  const std::vector<Exponents>& monomials_of(unsigned long w) {
    auto it = monomials_.find(w);
    if (it != monomials_.end()) return it->second;
    std::vector<Exponents> out;
    Exponents e(p_.size(), 0);
    std::size_t count = 0;
    std::function<void(std::size_t, unsigned long, std::uint32_t)> rec = [&](std::size_t i, unsigned long left,
                                                                              std::uint32_t zl) {
      if (i == e.size()) {
        if (left == 0) {
          if (++count > limits_.max_monomials)
            throw ResourceLimit("more than " + std::to_string(limits_.max_monomials) + " monomials in one degree");
          out.push_back(e);
        }
        return;
      }
      const unsigned long wi = weights_[i];
      if (wi == 0) {
        for (std::uint32_t k = 0; zl + k <= zero_cap_; ++k) {
          e[i] = k;
          rec(i + 1, left, zl + k);
        }
      } else {
        for (std::uint32_t k = 0; k * wi <= left; ++k) {
          e[i] = k;
          rec(i + 1, left - k * wi, zl);
        }
      }
      e[i] = 0;
    };
    rec(0, w, 0);
    std::sort(out.begin(), out.end(), GrlexDescending{});
    return monomials_.emplace(w, std::move(out)).first->second;
  }

  const std::map<Exponents, std::size_t>& index_of(unsigned long w) {
    auto it = indices_.find(w);
    if (it != indices_.end()) return it->second;
    std::map<Exponents, std::size_t> idx;
    const auto& mons = monomials_of(w);
    for (std::size_t k = 0; k < mons.size(); ++k) idx.emplace(mons[k], k);
    return indices_.emplace(w, std::move(idx)).first->second;
  }

  const LatticeQuotient& quotient(unsigned long w) {
    auto it = quotients_.find(w);
    if (it != quotients_.end()) return it->second;
    const auto& index = index_of(w);
    std::vector<SparseVector> columns;
    for (const auto& r : p_.relations) {
      if (r.is_zero()) continue;
      const Rational rd = *p_.degree_of(r);
      const unsigned long rw = to_weight(rd);
      if (rw > w) continue;
      std::uint32_t rzl = 0;
      for (const auto& [e, c] : r.terms()) rzl = std::max(rzl, zero_level(e));
      for (const auto& m : monomials_of(w - rw)) {
        if (zero_level(m) + rzl > zero_cap_) continue;
        SparseVector col;
        Exponents prod(m.size());
        for (const auto& [e, c] : r.terms()) {
          for (std::size_t i = 0; i < m.size(); ++i) prod[i] = m[i] + e[i];
          col[index.at(prod)] += c;
        }
        columns.push_back(std::move(col));
      }
    }
    return quotients_.emplace(w, LatticeQuotient(index.size(), std::move(columns))).first->second;
  }

  GradedPresentation p_;
  EngineLimits limits_;
  Integer scale_ = 1;
  std::vector<unsigned long> weights_;
  std::uint32_t zero_cap_ = 1;
  std::map<unsigned long, std::vector<Exponents>> monomials_;
  std::map<unsigned long, std::map<Exponents, std::size_t>> indices_;
  std::map<unsigned long, LatticeQuotient> quotients_;
};

inline GradedGroupTable graded_pieces(const GradedPresentation& p, const Rational& max_degree,
                                      EngineLimits limits = {}) {
  GradedEngine engine(p, limits);
  return engine.table(max_degree);
}

struct GradedComparison {
  bool equal = true;
  struct Mismatch {
    Rational degree;
    FgAbGroup a;
    FgAbGroup b;
  };
  std::vector<Mismatch> mismatches;
  GradedGroupTable table_a;
  GradedGroupTable table_b;
};

/// Degree-wise comparison of invariant factors up to max_degree. A mismatch
/// certifies non-isomorphism; agreement is only a necessary condition.
inline GradedComparison graded_equal(const GradedPresentation& a, const GradedPresentation& b,
                                     const Rational& max_degree, EngineLimits limits = {}) {
  GradedComparison out;
  out.table_a = graded_pieces(a, max_degree, limits);
  out.table_b = graded_pieces(b, max_degree, limits);
  std::set<Rational> degrees;
  for (const auto& [d, g] : out.table_a) degrees.insert(d);
  for (const auto& [d, g] : out.table_b) degrees.insert(d);
  for (const auto& d : degrees) {
    FgAbGroup ga = out.table_a.count(d) ? out.table_a.at(d) : FgAbGroup{};
    FgAbGroup gb = out.table_b.count(d) ? out.table_b.at(d) : FgAbGroup{};
    if (ga != gb) {
      out.equal = false;
      out.mismatches.push_back({d, ga, gb});
    }
  }
  return out;
}

inline std::vector<Generator> ray_generators(std::size_t n, const std::string& prefix = "x") {
  std::vector<Generator> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back({prefix + std::to_string(i + 1), Rational(1)});
  return g;
}

/// Circuit relations: sum_i (b_i)_j x_i for each free coordinate j.
inline std::vector<Polynomial> circuit_relations(const StackyFan& sf, std::size_t nvars) {
  std::vector<Polynomial> out;
  const IntMatrix circ = circuit_matrix(sf);
  for (std::size_t j = 0; j < circ.rows(); ++j) {
    Polynomial p = Polynomial::linear(circ.row(j)).extend(nvars);
    if (!p.is_zero()) out.push_back(p);
  }
  return out;
}

/// Products of the given linear forms over the minimal non-faces.
inline std::vector<Polynomial> nonface_relations(const StackyFan& sf, const std::vector<IntVector>& forms,
                                                 std::size_t nvars) {
  std::vector<Polynomial> out;
  for (const auto& s : minimal_nonfaces(sf.fan)) {
    Polynomial p = Polynomial::constant(nvars, 1);
    for (auto i : s) p = p * Polynomial::linear(forms[i]).extend(nvars);
    out.push_back(p);
  }
  return out;
}

/// Chow ring presentation of a torsion-generated stacky fan: Z[x_1..x_n]
/// modulo circuits and the products of stack ray divisors over non-faces.
inline GradedPresentation sr_ring(const StackyFan& sf, const GerbeData& gd) {
  GradedPresentation p;
  p.generators = ray_generators(sf.num_rays());
  const std::size_t n = sf.num_rays();
  p.relations = circuit_relations(sf, n);
  for (auto& r : nonface_relations(sf, gd.tilde, n)) p.relations.push_back(r);
  if (!gd.diagonal) p.notes.push_back("reduced Picard group has torsion; identification made in canonical coordinates");
  return p;
}

inline GradedPresentation sr_ring(const StackyFan& sf) { return sr_ring(sf, gerbe_data(sf)); }

/// Chow ring of a toric orbifold (torsion-free N), ray divisors untwisted.
inline GradedPresentation reduced_sr_ring(const StackyFan& sf_red) {
  if (!sf_red.group.torsion.empty()) throw InvalidInput("reduced_sr_ring: group has torsion");
  const std::size_t n = sf_red.num_rays();
  std::vector<IntVector> forms;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n);
    e[i] = 1;
    forms.push_back(e);
  }
  GradedPresentation p;
  p.generators = ray_generators(n);
  p.relations = circuit_relations(sf_red, n);
  for (auto& r : nonface_relations(sf_red, forms, n)) p.relations.push_back(r);
  return p;
}

struct Elimination {
  GradedPresentation presentation;
  std::vector<Polynomial> substitution;  // image of each old generator
};

/// Removes linear relations: for each degree the generators involved in
/// linear relations are replaced by a basis of the quotient lattice; torsion
/// invariant factors e > 1 become generators with relation e*t.
inline Elimination eliminate_linear(const GradedPresentation& p) {
  p.check();
  const std::size_t n = p.size();
  auto is_linear = [](const Polynomial& r) {
    if (r.is_zero()) return false;
    for (const auto& [e, c] : r.terms())
      if (total_degree(e) != 1) return false;
    return true;
  };
  std::map<Rational, std::vector<std::size_t>> rels_by_degree;
  for (std::size_t k = 0; k < p.relations.size(); ++k)
    if (is_linear(p.relations[k])) rels_by_degree[*p.degree_of(p.relations[k])].push_back(k);

  std::vector<bool> replaced(n, false);
  struct Block {
    std::vector<std::size_t> gens;
    Cokernel ck;
    Rational degree;
  };
  std::vector<Block> blocks;
  for (const auto& [deg, rels] : rels_by_degree) {
    Block b;
    b.degree = deg;
    std::set<std::size_t> involved;
    for (auto k : rels)
      for (const auto& [e, c] : p.relations[k].terms())
        for (std::size_t i = 0; i < n; ++i)
          if (e[i]) involved.insert(i);
    b.gens.assign(involved.begin(), involved.end());
    IntMatrix m(b.gens.size(), rels.size());
    for (std::size_t j = 0; j < rels.size(); ++j)
      for (std::size_t r = 0; r < b.gens.size(); ++r) {
        Exponents e(n, 0);
        e[b.gens[r]] = 1;
        m(r, j) = p.relations[rels[j]].coefficient(e);
      }
    b.ck = cokernel(m);
    for (auto g : b.gens) replaced[g] = true;
    blocks.push_back(std::move(b));
  }

  Elimination out;
  GradedPresentation& q = out.presentation;
  q.notes = p.notes;
  std::vector<std::size_t> kept_index(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!replaced[i]) {
      kept_index[i] = q.generators.size();
      q.generators.push_back(p.generators[i]);
    }

  // Name new generators after an old one when the new generator is exactly it.
  std::vector<std::vector<std::string>> new_names(blocks.size());
  std::vector<std::string> pending;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    for (std::size_t j = 0; j < b.ck.group.size(); ++j) {
      std::string name;
      for (std::size_t r = 0; r < b.gens.size(); ++r) {
        IntVector col = b.ck.lift.column(j);
        IntVector unit(b.gens.size());
        unit[r] = 1;
        IntVector img = b.ck.project(unit);
        IntVector ej(b.ck.group.size());
        ej[j] = 1;
        if (col == unit && img == ej) name = p.generators[b.gens[r]].name;
      }
      new_names[bi].push_back(name);
    }
  }
  GradedPresentation naming = q;
  for (auto& names : new_names)
    for (auto& nm : names)
      if (!nm.empty()) naming.generators.push_back({nm, 0});
  std::size_t unnamed = 0;
  for (auto& names : new_names)
    for (auto& nm : names)
      if (nm.empty()) ++unnamed;
  std::size_t counter = 0;
  for (auto& names : new_names)
    for (auto& nm : names)
      if (nm.empty()) {
        nm = unnamed == 1 ? fresh_name(naming, "t") : fresh_name(naming, "t" + std::to_string(++counter));
        naming.generators.push_back({nm, 0});
      }

  std::vector<std::vector<std::size_t>> new_index(blocks.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi)
    for (std::size_t j = 0; j < blocks[bi].ck.group.size(); ++j) {
      new_index[bi].push_back(q.generators.size());
      q.generators.push_back({new_names[bi][j], blocks[bi].degree});
    }
  const std::size_t total = q.generators.size();

  out.substitution.assign(n, Polynomial(total));
  for (std::size_t i = 0; i < n; ++i)
    if (!replaced[i]) out.substitution[i] = Polynomial::variable(total, kept_index[i]);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    for (std::size_t r = 0; r < b.gens.size(); ++r) {
      Polynomial img(total);
      for (std::size_t j = 0; j < b.ck.group.size(); ++j)
        img += Polynomial::variable(total, new_index[bi][j], b.ck.projection(j, r));
      out.substitution[b.gens[r]] = img;
    }
  }

  std::vector<Polynomial> rels;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    for (std::size_t t = 0; t < b.ck.group.torsion.size(); ++t)
      rels.push_back(Polynomial::variable(total, new_index[bi][b.ck.group.rank + t], b.ck.group.torsion[t]));
  }
  for (const auto& r : p.relations) {
    if (is_linear(r)) continue;
    Polynomial s = r.substitute(out.substitution);
    if (s.is_zero()) continue;
    if (s.leading_coefficient() < 0) s = -s;
    if (std::find(rels.begin(), rels.end(), s) == rels.end()) rels.push_back(s);
  }
  q.relations = std::move(rels);
  return out;
}

/// Chow ring of the m-th root stack of a line bundle: adjoins t with
/// relation (bundle - m t).
inline GradedPresentation root_gerbe_ring(const GradedPresentation& base, const Polynomial& bundle, const Integer& m) {
  if (m <= 0) throw InvalidInput("root order must be positive");
  GradedPresentation p = base;
  const std::string name = fresh_name(p, "t");
  add_generators(p, {{name, Rational(1)}});
  Polynomial b = bundle.extend(p.size());
  auto d = p.degree_of(b);
  if (!b.is_zero() && (!d || *d != 1)) throw InvalidInput("root bundle class must have degree 1");
  p.relations.push_back(b - Polynomial::variable(p.size(), p.size() - 1, m));
  return p;
}

/// Chow ring of X x B(mu): adjoins t_i with relation r_i t_i per invariant factor.
inline GradedPresentation bmu_extension(const GradedPresentation& base, const FgAbGroup& mu) {
  if (mu.rank != 0) throw InvalidInput("bmu_extension: group must be finite");
  GradedPresentation p = base;
  for (std::size_t k = 0; k < mu.torsion.size(); ++k) {
    const Integer& r = mu.torsion[k];
    const std::string name = fresh_name(p, mu.torsion.size() == 1 ? "t" : "t" + std::to_string(k + 1));
    add_generators(p, {{name, Rational(1)}});
    p.relations.push_back(Polynomial::variable(p.size(), p.size() - 1, r));
  }
  return p;
}

/// Chow ring of any valid stacky fan: direct when the rays generate the
/// torsion, otherwise through the core and a classifying-stack factor.
inline GradedPresentation chow_ring(const StackyFan& sf) {
  require_valid(sf);
  if (torsion_generated(sf)) return sr_ring(sf);
  const Decomposition dec = decompose(sf);
  if (!torsion_generated(dec.core))
    throw HypothesisNotSatisfied("the rays do not generate the torsion of the decomposition core");
  GradedPresentation p = bmu_extension(sr_ring(dec.core), dec.mu);
  p.notes.push_back("rays do not generate the torsion of N; computed as core x B(" + dec.mu.to_string() + ")");
  return p;
}

}  // namespace toricchow
