#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer
// coefficients.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toricchow/intlin.hpp"

namespace toricchow {

using Exponents = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponents& e) {
  std::uint64_t s = 0;
  for (auto x : e) s += x;
  return s;
}

/// Graded lexicographic order, larger monomials first.
struct GrlexDescending {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

class Polynomial {
public:
  using TermMap = std::map<Exponents, Integer, GrlexDescending>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Integer& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[Exponents(nvars, 0)] = c;
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i, const Integer& c = 1) {
    Exponents e(nvars, 0);
    e.at(i) = 1;
    return monomial(e, c);
  }

  static Polynomial monomial(const Exponents& e, const Integer& c = 1) {
    Polynomial p(e.size());
    if (c != 0) p.terms_[e] = c;
    return p;
  }

  /// Linear form sum coeffs[i] * x_i.
  static Polynomial linear(const IntVector& coeffs) {
    Polynomial p(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (coeffs[i] != 0) p += variable(coeffs.size(), i, coeffs[i]);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  const Integer& leading_coefficient() const {
    if (terms_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return terms_.begin()->second;
  }

  Integer coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  void add_term(const Exponents& e, const Integer& c) {
    if (e.size() != nvars_) throw std::invalid_argument("term has wrong number of variables");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Integer& k) {
    if (k == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= k;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Integer(-1); }
  friend Polynomial operator*(const Integer& k, Polynomial a) { return a *= k; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial r(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(nvars_, 1), base = *this;
    while (k) {
      if (k & 1u) r = r * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Replaces variable i by images[i] (all images share one ring).
  Polynomial substitute(const std::vector<Polynomial>& images) const {
    if (images.size() != nvars_) throw std::invalid_argument("substitute: wrong number of images");
    const std::size_t target = images.empty() ? 0 : images.front().nvars();
    Polynomial r(target);
    std::vector<std::map<std::uint32_t, Polynomial>> powers(nvars_);
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(target, c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        auto it = powers[i].find(e[i]);
        if (it == powers[i].end()) it = powers[i].emplace(e[i], images[i].pow(e[i])).first;
        t = t * it->second;
      }
      r += t;
    }
    return r;
  }

  /// Same polynomial viewed in a ring with more variables appended.
  Polynomial extend(std::size_t new_nvars) const {
    if (new_nvars < nvars_) throw std::invalid_argument("extend: cannot drop variables");
    Polynomial r(new_nvars);
    for (const auto& [e, c] : terms_) {
      Exponents f = e;
      f.resize(new_nvars, 0);
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

  /// Human-readable form such as "2*x1 - 3*x2" or "x1^2*y3".
  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Integer a = abs(c);
      if (first)
        s += c < 0 ? "-" : "";
      else
        s += c < 0 ? " - " : " + ";
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names.at(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty())
        s += a.get_str();
      else if (a == 1)
        s += mono;
      else
        s += a.get_str() + "*" + mono;
    }
    return s;
  }

private:
  void check(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomials live in different rings");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

}  // namespace toricchow
