#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "jetcalc/affine.hpp"

namespace jetcalc {

/// One equation of an affine system: value(x) = sum coef_j x_j + constant,
/// required to equal target.
struct AffineRow {
  AffineScalar value;
  Rational target;
};

/// Per-order solver diagnostics (the computable trace of the submersion
/// lemmas): every engine-generated system must report rank == unknowns and
/// consistent == true.
struct SolveReport {
  std::string stage;
  int order = 0;
  int unknowns = 0;
  int rank = 0;
  bool consistent = false;
};

/// Row-reduction recipe for a family of affine systems sharing the same
/// (sample-independent) linear part. Built once from the first sample's
/// rows and reused: for each unknown it stores the rational combination of
/// row right-hand sides that yields the solution.
class LinearRecipe {
 public:
  LinearRecipe(const std::vector<AffineRow>& rows, int unknowns) : unknowns_(unknowns) {
    rowLin_.reserve(rows.size());
    for (const auto& r : rows) rowLin_.push_back(r.value.linear());
    std::vector<std::vector<Rational>> pivots;                 // RREF rows
    std::vector<std::vector<std::pair<int, Rational>>> combos; // over original row ids
    std::vector<int> pivotCol;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      std::vector<Rational> row(unknowns, Rational(0));
      for (const auto& [id, c] : rows[r].value.linear()) row[id] = c;
      std::vector<std::pair<int, Rational>> combo{{r, Rational(1)}};
      // Reduce against current pivots.
      for (std::size_t p = 0; p < pivots.size(); ++p) {
        const Rational& f = row[pivotCol[p]];
        if (f == 0) continue;
        Rational fac = f;
        for (int c = 0; c < unknowns; ++c) row[c] -= fac * pivots[p][c];
        mergeCombo(combo, combos[p], -fac);
      }
      int col = -1;
      for (int c = 0; c < unknowns; ++c)
        if (row[c] != 0) {
          col = c;
          break;
        }
      if (col < 0) continue;  // dependent row; checked per sample via residuals
      Rational d = row[col];
      for (int c = 0; c < unknowns; ++c) row[c] /= d;
      scaleCombo(combo, Rational(1) / d);
      // Back-eliminate from existing pivots.
      for (std::size_t p = 0; p < pivots.size(); ++p) {
        const Rational f = pivots[p][col];
        if (f == 0) continue;
        for (int c = 0; c < unknowns; ++c) pivots[p][c] -= f * row[c];
        mergeCombo(combos[p], combo, -f);
      }
      pivots.push_back(std::move(row));
      combos.push_back(std::move(combo));
      pivotCol.push_back(col);
      if (static_cast<int>(pivots.size()) == unknowns) break;
    }
    rank_ = static_cast<int>(pivots.size());
    solveCombo_.assign(unknowns, {});
    for (std::size_t p = 0; p < pivots.size(); ++p) solveCombo_[pivotCol[p]] = combos[p];
  }

  int rank() const { return rank_; }
  int unknowns() const { return unknowns_; }

  /// Solve for the sample at hand; returns the solution (zero-filled for
  /// non-pivot columns, which cannot occur when rank == unknowns) and sets
  /// `consistent` from an exact residual check of every row.
  std::vector<Rational> solve(const std::vector<AffineRow>& rows, bool& consistent) const {
    std::vector<Rational> x(unknowns_, Rational(0));
    for (int j = 0; j < unknowns_; ++j)
      for (const auto& [rowId, c] : solveCombo_[j])
        x[j] += c * (rows[rowId].target - rows[rowId].value.value());
    consistent = true;
    for (const auto& row : rows) {
      Rational v = row.value.value();
      for (const auto& [id, c] : row.value.linear()) v += c * x[id];
      if (v != row.target) {
        consistent = false;
        break;
      }
    }
    return x;
  }

  /// Same solve, given only the sample-dependent data: the constant term of
  /// each row and its target. The linear parts are the ones the recipe was
  /// built from (sample-independent by construction of the systems).
  std::vector<Rational> solveValues(const std::vector<Rational>& constants,
                                    const std::vector<Rational>& targets,
                                    bool& consistent) const {
    if (constants.size() != rowLin_.size() || targets.size() != rowLin_.size())
      throw std::invalid_argument("row count mismatch against recipe");
    std::vector<Rational> x(unknowns_, Rational(0));
    for (int j = 0; j < unknowns_; ++j)
      for (const auto& [rowId, c] : solveCombo_[j])
        x[j] += c * (targets[rowId] - constants[rowId]);
    consistent = true;
    for (std::size_t r = 0; r < rowLin_.size(); ++r) {
      Rational v = constants[r];
      for (const auto& [id, c] : rowLin_[r]) v += c * x[id];
      if (v != targets[r]) {
        consistent = false;
        break;
      }
    }
    return x;
  }

 private:
  static void scaleCombo(std::vector<std::pair<int, Rational>>& c, const Rational& f) {
    for (auto& [id, v] : c) v *= f;
  }
  static void mergeCombo(std::vector<std::pair<int, Rational>>& a,
                         const std::vector<std::pair<int, Rational>>& b, const Rational& f) {
    std::map<int, Rational> acc;
    for (const auto& [id, v] : a) acc[id] += v;
    for (const auto& [id, v] : b) acc[id] += v * f;
    a.clear();
    for (const auto& [id, v] : acc)
      if (v != 0) a.emplace_back(id, v);
  }

  int unknowns_;
  int rank_;
  std::vector<std::vector<std::pair<int, Rational>>> solveCombo_;
  std::vector<std::vector<std::pair<int, Rational>>> rowLin_;  // construction rows
};

namespace detail {

struct RecipeCache {
  std::mutex mu;
  std::map<std::string, std::unique_ptr<LinearRecipe>> map;
  static RecipeCache& get() {
    static RecipeCache c;
    return c;
  }
};

}  // namespace detail

/// Look up a cached recipe; null when the key has not been built yet (the
/// caller then pays the one-time symbolic construction via cachedRecipe).
inline const LinearRecipe* findCachedRecipe(const std::string& key) {
  auto& c = detail::RecipeCache::get();
  std::lock_guard<std::mutex> lock(c.mu);
  auto it = c.map.find(key);
  return it == c.map.end() ? nullptr : it->second.get();
}

/// Process-wide cache of reduction recipes, keyed by the structural
/// parameters of the system (the linear part depends only on those, not on
/// the sampled jets; consistency of every row is still re-verified exactly
/// per sample).
inline const LinearRecipe& cachedRecipe(const std::string& key,
                                        const std::vector<AffineRow>& rows, int unknowns) {
  auto& c = detail::RecipeCache::get();
  std::lock_guard<std::mutex> lock(c.mu);
  auto it = c.map.find(key);
  if (it == c.map.end())
    it = c.map.emplace(key, std::make_unique<LinearRecipe>(rows, unknowns)).first;
  return *it->second;
}

}  // namespace jetcalc
