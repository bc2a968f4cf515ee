#pragma once

// Exact integer linear algebra: dense matrices over arbitrary-precision
// integers, Smith and Hermite normal forms with transforms, kernels,
// cokernels and integer solving.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toricchow {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (bad file, inconsistent fan, wrong dimensions).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A theorem hypothesis (e.g. torsion generation) does not hold for the input.
class HypothesisNotSatisfied : public Error {
public:
  using Error::Error;
};

/// The graded engine exceeded a configured size limit.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

/// An internal consistency check failed.
class IntegrityError : public Error {
public:
  using Error::Error;
};

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Representative of a modulo m in [0, m).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Rational frac(const Rational& q) { return q - Rational(floor(q)); }

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Integer& a) { return a.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline IntVector operator+(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  IntVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline IntVector operator-(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  IntVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline IntVector operator*(const Integer& k, const IntVector& a) {
  IntVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
  return r;
}

inline IntVector make_vector(std::initializer_list<long> values) {
  IntVector v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

/// Dense row-major matrix of arbitrary-precision integers. Zero rows or
/// columns are legal and model maps to or from the zero lattice.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (long x : row) data_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::size_t cols, const std::vector<IntVector>& rows) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static IntMatrix diagonal(const IntVector& entries) {
    IntMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  IntVector column(std::size_t c) const {
    IntVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix select_rows(const std::vector<std::size_t>& idx) const {
    IntMatrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  IntMatrix select_cols(const std::vector<std::size_t>& idx) const {
    IntMatrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    IntMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  /// Horizontal concatenation [*this | other].
  IntMatrix hcat(const IntMatrix& other) const {
    if (other.rows_ != rows_) throw std::invalid_argument("hcat: row count mismatch");
    IntMatrix m(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
    }
    return m;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  // col[dst] += k * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    IntMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend IntVector operator*(const IntMatrix& a, const IntVector& x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    IntVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
    IntMatrix m = a;
    for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
    return m;
  }

  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
    IntMatrix m = a;
    for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] -= b.data_[i];
    return m;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
      os << ']';
    }
    os << ']';
    return os.str();
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SnfResult {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector out;
    for (std::size_t i = 0; i < rank; ++i) out.push_back(d(i, i));
    return out;
  }
};

namespace detail {

// Smallest nonzero |entry| in the trailing block starting at (t, t), first in
// row-major order.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_pivot(const IntMatrix& d, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Integer best_abs;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Integer a = abs(d(i, j));
      if (!best || a < best_abs) {
        best = {i, j};
        best_abs = a;
      }
    }
  return best;
}

inline SnfResult smith(const IntMatrix& m, bool want_u, bool want_v) {
  SnfResult res;
  res.d = m;
  IntMatrix& d = res.d;
  if (want_u) res.u = IntMatrix::identity(m.rows());
  if (want_v) res.v = IntMatrix::identity(m.cols());
  auto row_swap = [&](std::size_t a, std::size_t b) {
    d.swap_rows(a, b);
    if (want_u) res.u.swap_rows(a, b);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    d.swap_cols(a, b);
    if (want_v) res.v.swap_cols(a, b);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    d.add_row_multiple(dst, src, k);
    if (want_u) res.u.add_row_multiple(dst, src, k);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    d.add_col_multiple(dst, src, k);
    if (want_v) res.v.add_col_multiple(dst, src, k);
  };

  const std::size_t limit = std::min(m.rows(), m.cols());
  std::size_t t = 0;
  for (; t < limit; ++t) {
    auto pivot = smallest_pivot(d, t);
    if (!pivot) break;
    row_swap(t, pivot->first);
    col_swap(t, pivot->second);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        Integer q = d(i, t) / d(t, t);
        row_add(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        Integer q = d(t, j) / d(t, t);
        col_add(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Move the smallest remainder in row t / column t into the pivot.
        std::size_t bi = t, bj = t;
        Integer best = abs(d(t, t));
        for (std::size_t i = t + 1; i < d.rows(); ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < best) {
            best = abs(d(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < best) {
            best = abs(d(t, j));
            bi = t;
            bj = j;
          }
        row_swap(t, bi);
        col_swap(t, bj);
        continue;
      }
      // Divisibility: fold a non-divisible row into row t and start over.
      bool divisible = true;
      for (std::size_t i = t + 1; i < d.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            row_add(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      if (want_u) res.u.negate_row(t);
    }
  }
  res.rank = t;
  return res;
}

struct Echelon {
  IntMatrix h;
  IntMatrix transform;  // empty unless requested
  std::vector<std::size_t> pivot_rows;
};

// Column Hermite form: h = m * transform, pivot of column k sits in row
// pivot_rows[k] and is positive, entries to its left in that row are reduced
// into [0, pivot).
inline Echelon column_echelon(const IntMatrix& m, bool want_transform) {
  Echelon e;
  e.h = m;
  IntMatrix& h = e.h;
  if (want_transform) e.transform = IntMatrix::identity(m.cols());
  auto col_swap = [&](std::size_t a, std::size_t b) {
    h.swap_cols(a, b);
    if (want_transform) e.transform.swap_cols(a, b);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    h.add_col_multiple(dst, src, k);
    if (want_transform) e.transform.add_col_multiple(dst, src, k);
  };
  std::size_t k = 0;
  for (std::size_t r = 0; r < h.rows() && k < h.cols(); ++r) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t j = k; j < h.cols(); ++j)
        if (h(r, j) != 0 && (!best || abs(h(r, j)) < abs(h(r, *best)))) best = j;
      if (!best) break;
      col_swap(k, *best);
      bool done = true;
      for (std::size_t j = k + 1; j < h.cols(); ++j) {
        if (h(r, j) == 0) continue;
        Integer q = h(r, j) / h(r, k);
        col_add(j, k, -q);
        if (h(r, j) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, k) == 0) continue;
    if (h(r, k) < 0) {
      h.negate_col(k);
      if (want_transform) e.transform.negate_col(k);
    }
    for (std::size_t j = 0; j < k; ++j) {
      Integer q = floor_div(h(r, j), h(r, k));
      col_add(j, k, -q);
    }
    e.pivot_rows.push_back(r);
    ++k;
  }
  return e;
}

}  // namespace detail

/// Smith normal form u * m * v = d with unimodular u, v and a divisibility
/// chain d1 | d2 | ... on the nonnegative diagonal.
inline SnfResult snf(const IntMatrix& m) { return detail::smith(m, true, true); }

struct HnfResult {
  IntMatrix h;
  IntMatrix transform;
  std::vector<std::size_t> pivot_rows;
  std::size_t rank() const { return pivot_rows.size(); }
};

/// Column Hermite normal form: h = m * transform with transform unimodular.
inline HnfResult hnf(const IntMatrix& m) {
  auto e = detail::column_echelon(m, true);
  return HnfResult{std::move(e.h), std::move(e.transform), std::move(e.pivot_rows)};
}

/// Integer solution of m * x = b by back-substitution through the Hermite
/// form; std::nullopt when b is not in the column lattice.
inline std::optional<IntVector> solve(const IntMatrix& m, const IntVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  const HnfResult hr = hnf(m);
  IntVector y(m.cols());
  for (std::size_t k = 0; k < hr.rank(); ++k) {
    const std::size_t r = hr.pivot_rows[k];
    Integer s = b[r];
    for (std::size_t j = 0; j < k; ++j) s -= hr.h(r, j) * y[j];
    if (s % hr.h(r, k) != 0) return std::nullopt;
    y[k] = s / hr.h(r, k);
  }
  if (hr.h * y != b) return std::nullopt;
  return hr.transform * y;
}

/// Basis of the integer kernel as columns.
inline IntMatrix kernel(const IntMatrix& m) {
  const HnfResult hr = hnf(m);
  std::vector<std::size_t> idx;
  for (std::size_t j = hr.rank(); j < m.cols(); ++j) idx.push_back(j);
  return hr.transform.select_cols(idx);
}

/// Inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unimodular_inverse: not square");
  const std::size_t n = u.rows();
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < n; ++j) {
    IntVector e(n);
    e[j] = 1;
    auto x = solve(u, e);
    if (!x) throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
    cols.push_back(std::move(*x));
  }
  return IntMatrix::from_columns(n, cols);
}

/// Finitely generated abelian group in invariant-factor form
/// Z^rank + Z/m_1 + ... + Z/m_r with m_1 | ... | m_r, every m_j > 1.
/// Elements are vectors of length rank + r, free coordinates first.
struct FgAbGroup {
  std::size_t rank = 0;
  IntVector torsion;

  static FgAbGroup free(std::size_t n) { return FgAbGroup{n, {}}; }

  std::size_t size() const { return rank + torsion.size(); }
  bool is_finite() const { return rank == 0; }
  bool is_trivial() const { return rank == 0 && torsion.empty(); }

  Integer order() const {
    if (rank != 0) throw std::domain_error("order of an infinite group");
    Integer o = 1;
    for (const auto& m : torsion) o *= m;
    return o;
  }

  /// Reduces torsion coordinates into [0, m_j).
  IntVector normalize(IntVector v) const {
    if (v.size() != size()) throw InvalidInput("group element has wrong length");
    for (std::size_t j = 0; j < torsion.size(); ++j) v[rank + j] = mod_floor(v[rank + j], torsion[j]);
    return v;
  }

  bool is_zero_element(const IntVector& v) const { return toricchow::is_zero(normalize(v)); }

  /// size x r matrix whose columns are the torsion relations m_j e_{rank+j}.
  IntMatrix relation_matrix() const {
    IntMatrix q(size(), torsion.size());
    for (std::size_t j = 0; j < torsion.size(); ++j) q(rank + j, j) = torsion[j];
    return q;
  }

  /// Canonical group from an arbitrary list of cyclic orders (0 = infinite cyclic,
  /// 1 = trivial).
  static FgAbGroup from_cyclic(std::size_t free_rank, const IntVector& orders) {
    FgAbGroup g;
    g.rank = free_rank;
    IntVector nontrivial;
    for (const auto& o : orders) {
      if (o == 0)
        ++g.rank;
      else if (abs(o) != 1)
        nontrivial.push_back(abs(o));
    }
    if (nontrivial.empty()) return g;
    const SnfResult s = detail::smith(IntMatrix::diagonal(nontrivial), false, false);
    for (std::size_t i = 0; i < s.rank; ++i)
      if (s.d(i, i) != 1) g.torsion.push_back(s.d(i, i));
    return g;
  }

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    if (rank == 1) s = "Z";
    if (rank > 1) s = "Z^" + std::to_string(rank);
    for (const auto& m : torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + m.get_str();
    return s;
  }

  friend bool operator==(const FgAbGroup& a, const FgAbGroup& b) {
    return a.rank == b.rank && a.torsion == b.torsion;
  }
  friend bool operator!=(const FgAbGroup& a, const FgAbGroup& b) { return !(a == b); }
};

inline FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  IntVector orders = a.torsion;
  orders.insert(orders.end(), b.torsion.begin(), b.torsion.end());
  return FgAbGroup::from_cyclic(a.rank + b.rank, orders);
}

/// Quotient of Z^rows by the column span of a matrix, in invariant-factor
/// coordinates. projection maps Z^rows onto the quotient's coordinates; lift
/// sends each quotient generator back to a representative in Z^rows.
struct Cokernel {
  FgAbGroup group;
  IntMatrix projection;
  IntMatrix lift;

  IntVector project(const IntVector& x) const { return group.normalize(projection * x); }
};

/// Cokernel of m : Z^cols -> Z^rows. The free coordinates are put in a
/// canonical basis (the free block of the projection is in row Hermite form),
/// so identical inputs always yield identical coordinates.
inline Cokernel cokernel(const IntMatrix& m) {
  const std::size_t n = m.rows();
  // Shrink the generator set first; the column lattice is unchanged.
  IntMatrix gens = m;
  if (m.cols() > n) {
    const auto e = detail::column_echelon(m, false);
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < e.pivot_rows.size(); ++k) idx.push_back(k);
    gens = e.h.select_cols(idx);
  }
  const SnfResult s = detail::smith(gens, true, false);
  const IntMatrix uinv = unimodular_inverse(s.u);

  Cokernel ck;
  std::vector<std::size_t> free_rows, torsion_rows;
  for (std::size_t i = s.rank; i < n; ++i) free_rows.push_back(i);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.d(i, i) != 1) torsion_rows.push_back(i);
  ck.group.rank = free_rows.size();
  for (auto i : torsion_rows) ck.group.torsion.push_back(s.d(i, i));

  std::vector<std::size_t> rows = free_rows;
  rows.insert(rows.end(), torsion_rows.begin(), torsion_rows.end());
  ck.projection = s.u.select_rows(rows);
  ck.lift = uinv.select_cols(rows);

  // Canonical free basis: F' = T^t F with F^t T in column Hermite form.
  const std::size_t f = ck.group.rank;
  if (f > 0) {
    IntMatrix free_block = ck.projection.block(0, 0, f, n);
    const HnfResult hr = hnf(free_block.transpose());
    const IntMatrix tt = hr.transform.transpose();
    const IntMatrix new_free = tt * free_block;
    const IntMatrix tinv_t = unimodular_inverse(hr.transform).transpose();
    std::vector<std::size_t> fcols;
    for (std::size_t j = 0; j < f; ++j) fcols.push_back(j);
    const IntMatrix new_lift_free = ck.lift.select_cols(fcols) * tinv_t;
    for (std::size_t i = 0; i < f; ++i)
      for (std::size_t j = 0; j < n; ++j) ck.projection(i, j) = new_free(i, j);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < f; ++j) ck.lift(i, j) = new_lift_free(i, j);
  }
  for (std::size_t t = 0; t < ck.group.torsion.size(); ++t)
    for (std::size_t j = 0; j < n; ++j)
      ck.projection(f + t, j) = mod_floor(ck.projection(f + t, j), ck.group.torsion[t]);
  return ck;
}

}  // namespace toricchow
