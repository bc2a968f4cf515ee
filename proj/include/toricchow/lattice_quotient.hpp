#pragma once

// Quotient of Z^dim by the span of sparse integer vectors. Unit pivots are
// eliminated sparsely first; what is left goes through a dense cokernel.

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "toricchow/intlin.hpp"

namespace toricchow {

using SparseVector = std::map<std::size_t, Integer>;

class LatticeQuotient {
public:
  LatticeQuotient() = default;

  LatticeQuotient(std::size_t dim, std::vector<SparseVector> columns) : dim_(dim) {
    eliminate_units(std::move(columns));
  }

  const FgAbGroup& group() const { return cokernel_.group; }
  std::size_t dimension() const { return dim_; }

  /// Coordinates of the class of v in group(), torsion entries reduced.
  IntVector coordinates(const SparseVector& v) const {
    SparseVector w = v;
    for (const auto& [row, expr] : substitutions_) {
      auto it = w.find(row);
      if (it == w.end()) continue;
      const Integer k = it->second;
      w.erase(it);
      for (const auto& [s, c] : expr) {
        Integer& slot = w[s];
        slot += k * c;
        if (slot == 0) w.erase(s);
      }
    }
    IntVector dense(remaining_rows_.size());
    for (const auto& [row, c] : w) {
      auto pos = std::lower_bound(remaining_rows_.begin(), remaining_rows_.end(), row);
      if (pos == remaining_rows_.end() || *pos != row) throw IntegrityError("lattice quotient: stray coordinate");
      dense[static_cast<std::size_t>(pos - remaining_rows_.begin())] = c;
    }
    if (remaining_rows_.empty()) return IntVector{};
    return cokernel_.project(dense);
  }

private:
  void eliminate_units(std::vector<SparseVector> columns) {
    std::vector<std::set<std::size_t>> occurrences(dim_);
    std::vector<bool> alive(columns.size(), true);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      for (auto it = columns[j].begin(); it != columns[j].end();) {
        if (it->second == 0)
          it = columns[j].erase(it);
        else
          ++it;
      }
      for (const auto& [r, c] : columns[j]) occurrences[r].insert(j);
    }
    std::vector<bool> eliminated(dim_, false);
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t j = 0; j < columns.size(); ++j) {
        if (!alive[j]) continue;
        if (columns[j].empty()) {
          alive[j] = false;
          continue;
        }
        // Unit entry whose row is shared by the fewest columns.
        std::size_t best_row = dim_;
        std::size_t best_count = 0;
        for (const auto& [r, c] : columns[j]) {
          if (abs(c) != 1) continue;
          if (best_row == dim_ || occurrences[r].size() < best_count) {
            best_row = r;
            best_count = occurrences[r].size();
          }
        }
        if (best_row == dim_) continue;
        progress = true;
        const SparseVector pivot = columns[j];
        const Integer u = pivot.at(best_row);
        alive[j] = false;
        for (const auto& [r, c] : pivot) occurrences[r].erase(j);
        // e_row = -u * sum_{s != row} p_s e_s in the quotient.
        SparseVector expr;
        for (const auto& [s, c] : pivot)
          if (s != best_row) expr[s] = -u * c;
        const std::vector<std::size_t> users(occurrences[best_row].begin(), occurrences[best_row].end());
        for (std::size_t k : users) {
          SparseVector& col = columns[k];
          const Integer q = col.at(best_row);
          for (const auto& [s, c] : pivot) {
            Integer& slot = col[s];
            slot -= q * u * c;
            if (slot == 0) {
              col.erase(s);
              occurrences[s].erase(k);
            } else {
              occurrences[s].insert(k);
            }
          }
        }
        occurrences[best_row].clear();
        eliminated[best_row] = true;
        substitutions_.emplace_back(best_row, std::move(expr));
      }
    }
    for (std::size_t r = 0; r < dim_; ++r)
      if (!eliminated[r]) remaining_rows_.push_back(r);
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (alive[j] && !columns[j].empty()) live.push_back(j);
    IntMatrix dense(remaining_rows_.size(), live.size());
    for (std::size_t k = 0; k < live.size(); ++k)
      for (const auto& [r, c] : columns[live[k]]) {
        auto pos = std::lower_bound(remaining_rows_.begin(), remaining_rows_.end(), r);
        dense(static_cast<std::size_t>(pos - remaining_rows_.begin()), k) = c;
      }
    cokernel_ = cokernel(dense);
  }

  std::size_t dim_ = 0;
  std::vector<std::pair<std::size_t, SparseVector>> substitutions_;
  std::vector<std::size_t> remaining_rows_;
  Cokernel cokernel_;
};

}  // namespace toricchow
