#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "jetcalc/rational.hpp"

namespace jetcalc {

/// Derivative multi-index: an ordered multiset of base-axis labels in
/// 0..m-1 (canonical form is the sorted tuple). The order of the index is
/// its cardinality.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
  }

  static MultiIndex fromExponents(const std::vector<int>& exps) {
    std::vector<int> labels;
    for (int axis = 0; axis < static_cast<int>(exps.size()); ++axis)
      for (int c = 0; c < exps[axis]; ++c) labels.push_back(axis);
    return MultiIndex(std::move(labels));
  }

  int order() const { return static_cast<int>(labels_.size()); }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<int> toExponents(int m) const {
    std::vector<int> exps(m, 0);
    for (int l : labels_) {
      if (l < 0 || l >= m) throw std::out_of_range("multi-index label out of range");
      ++exps[l];
    }
    return exps;
  }

  /// Product of factorials of the label multiplicities; converts a monomial
  /// coefficient into the partial-derivative value at the origin.
  Rational multiplicityFactorial() const {
    Rational f = 1;
    int run = 1;
    for (std::size_t i = 1; i <= labels_.size(); ++i) {
      if (i < labels_.size() && labels_[i] == labels_[i - 1]) {
        ++run;
        f *= run;  // running factorial product
      } else {
        run = 1;
      }
    }
    // The loop above multiplies 2*3*...*mult for each run of equal labels.
    return f;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    return a.labels_ < b.labels_;
  }

 private:
  std::vector<int> labels_;  // sorted
};

/// All exponent vectors of total degree d in m variables, in lexicographic
/// order, with reverse lookup. Cached per (m, d).
class MonomialBasis {
 public:
  static const MonomialBasis& get(int m, int d) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, MonomialBasis> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(m, d);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, MonomialBasis(m, d)).first;
    return it->second;
  }

  int size() const { return static_cast<int>(exps_.size()); }
  const std::vector<int>& exponents(int i) const { return exps_[i]; }
  int indexOf(const std::vector<int>& e) const {
    auto it = lookup_.find(e);
    if (it == lookup_.end()) throw std::out_of_range("exponent vector not in basis");
    return it->second;
  }

 private:
  MonomialBasis(int m, int d) {
    std::vector<int> cur(m, 0);
    enumerate(cur, 0, d);
    for (int i = 0; i < static_cast<int>(exps_.size()); ++i) lookup_[exps_[i]] = i;
  }
  void enumerate(std::vector<int>& cur, int axis, int remaining) {
    if (axis == static_cast<int>(cur.size()) - 1) {
      cur[axis] = remaining;
      exps_.push_back(cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      cur[axis] = v;
      enumerate(cur, axis + 1, remaining - v);
    }
  }

  std::vector<std::vector<int>> exps_;
  std::map<std::vector<int>, int> lookup_;
};

/// All sorted label tuples (multisets over 0..range-1) of given size.
inline std::vector<std::vector<int>> allMultisets(int range, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // labels non-decreasing
  std::function<void(int)> rec = [&](int minLabel) {
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (int l = minLabel; l < range; ++l) {
      cur.push_back(l);
      rec(l);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace jetcalc
