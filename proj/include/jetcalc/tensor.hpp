#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetcalc/series.hpp"

namespace jetcalc {

/// One tensor slot: fiber slots range over 0..n-1, base slots over 0..m-1.
enum class SlotKind { FiberUp, FiberDown, BaseUp, BaseDown };

inline bool slotIsFiber(SlotKind k) {
  return k == SlotKind::FiberUp || k == SlotKind::FiberDown;
}
inline bool slotIsUpper(SlotKind k) {
  return k == SlotKind::FiberUp || k == SlotKind::BaseUp;
}

/// Declared (anti)symmetry over a set of slot positions of equal range.
struct SlotSym {
  std::vector<int> slots;
  bool anti = false;
};

/// Iterate all index tuples over the given ranges (odometer order).
inline void forEachIndex(const std::vector<int>& ranges,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(ranges.size(), 0);
  while (true) {
    fn(idx);
    int pos = static_cast<int>(ranges.size()) - 1;
    while (pos >= 0) {
      if (++idx[pos] < ranges[pos]) break;
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

inline void permutationsOf(int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  do {
    fn(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline int permutationSign(const std::vector<int>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

/// Jet of a tensor field: one truncated series per component index tuple.
/// Slot order is fixed at construction; declared symmetries are audit data
/// (checked by auditSymmetries and imposed by symmetrizedOver), never
/// compressed storage.
template <class C>
class TensorJet {
 public:
  TensorJet(int m, int n, std::vector<SlotKind> slots, int order,
            std::vector<SlotSym> syms = {})
      : m_(m), n_(n), order_(order), slots_(std::move(slots)), syms_(std::move(syms)) {
    int count = 1;
    for (SlotKind k : slots_) count *= range(k);
    comp_.assign(count, Series<C>(m, order));
    for (const auto& g : syms_) checkSymGroup(g);
  }

  int dim() const { return m_; }
  int fiberDim() const { return n_; }
  int order() const { return order_; }
  int slotCount() const { return static_cast<int>(slots_.size()); }
  const std::vector<SlotKind>& slots() const { return slots_; }
  const std::vector<SlotSym>& symmetries() const { return syms_; }
  int componentCount() const { return static_cast<int>(comp_.size()); }

  int range(SlotKind k) const { return slotIsFiber(k) ? n_ : m_; }
  int range(int slot) const { return range(slots_[slot]); }
  std::vector<int> ranges() const {
    std::vector<int> r;
    r.reserve(slots_.size());
    for (SlotKind k : slots_) r.push_back(range(k));
    return r;
  }

  const Series<C>& at(const std::vector<int>& idx) const { return comp_[flat(idx)]; }
  Series<C>& at(const std::vector<int>& idx) { return comp_[flat(idx)]; }
  const Series<C>& atFlat(int i) const { return comp_[i]; }
  Series<C>& atFlat(int i) { return comp_[i]; }

  C jetCoordinate(const std::vector<int>& idx, const MultiIndex& mi) const {
    return at(idx).jetCoordinate(mi);
  }
  void setJetCoordinate(const std::vector<int>& idx, const MultiIndex& mi, const C& v) {
    at(idx).setJetCoordinate(mi, v);
  }

  TensorJet projected(int k) const {
    TensorJet out(m_, n_, slots_, k, syms_);
    for (std::size_t i = 0; i < comp_.size(); ++i) out.comp_[i] = comp_[i].truncated(k);
    return out;
  }
  TensorJet originData() const { return projected(0); }

  bool isZero() const {
    for (const auto& s : comp_)
      if (!s.isZero()) return false;
    return true;
  }

  friend bool operator==(const TensorJet& a, const TensorJet& b) {
    return a.m_ == b.m_ && a.n_ == b.n_ && a.order_ == b.order_ &&
           a.slots_ == b.slots_ && a.comp_ == b.comp_;
  }

  TensorJet& operator+=(const TensorJet& o) {
    requireShape(o);
    if (o.order_ < order_) *this = projected(o.order_);
    for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] += o.comp_[i];
    return *this;
  }
  TensorJet& operator-=(const TensorJet& o) {
    requireShape(o);
    if (o.order_ < order_) *this = projected(o.order_);
    for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] -= o.comp_[i];
    return *this;
  }
  friend TensorJet operator+(TensorJet a, const TensorJet& b) { return a += b; }
  friend TensorJet operator-(TensorJet a, const TensorJet& b) { return a -= b; }

  TensorJet scaled(const Rational& f) const {
    TensorJet out = *this;
    for (auto& s : out.comp_) s = s.scaled(f);
    return out;
  }

  /// Average over permutations of the named slot positions, with sign if
  /// anti. Idempotent; Alt of a symmetric group gives zero.
  TensorJet symmetrizedOver(const std::vector<int>& group, bool anti) const {
    checkSymGroup({group, anti});
    TensorJet out(m_, n_, slots_, order_, syms_);
    Rational weight = Rational(1) / factorial(static_cast<int>(group.size()));
    auto rgs = ranges();
    permutationsOf(static_cast<int>(group.size()), [&](const std::vector<int>& perm) {
      Rational w = weight;
      if (anti && permutationSign(perm) < 0) w = -w;
      forEachIndex(rgs, [&](const std::vector<int>& idx) {
        std::vector<int> src = idx;
        for (std::size_t p = 0; p < group.size(); ++p)
          src[group[p]] = idx[group[perm[p]]];
        out.at(idx) += at(src).scaled(w);
      });
    });
    return out;
  }

  /// Verify every declared symmetry exactly (all coefficients).
  bool auditSymmetries() const {
    for (const auto& g : syms_) {
      TensorJet s = symmetrizedOver(g.slots, g.anti);
      if (!(s == *this)) return false;
    }
    return true;
  }

  /// Contraction of an upper slot with a lower slot of equal range.
  TensorJet contracted(int up, int down) const {
    if (up == down || !slotIsUpper(slots_[up]) || slotIsUpper(slots_[down]) ||
        range(up) != range(down))
      throw std::invalid_argument("invalid contraction slots");
    std::vector<SlotKind> outSlots;
    for (int s = 0; s < slotCount(); ++s)
      if (s != up && s != down) outSlots.push_back(slots_[s]);
    TensorJet out(m_, n_, outSlots, order_);
    auto outRanges = out.ranges();
    forEachIndex(outRanges, [&](const std::vector<int>& oidx) {
      Series<C> sum(m_, order_);
      for (int c = 0; c < range(up); ++c) {
        std::vector<int> idx(slotCount());
        int pos = 0;
        for (int s = 0; s < slotCount(); ++s)
          idx[s] = (s == up || s == down) ? c : oidx[pos++];
        sum += at(idx);
      }
      out.at(oidx) = sum;
    });
    return out;
  }

  friend TensorJet tensorProduct(const TensorJet& a, const TensorJet& b) {
    if (a.m_ != b.m_) throw std::invalid_argument("dimension mismatch");
    // The fiber dimension only matters for fiber slots; purely base-valent
    // factors (e.g. classical curvature tensors) combine with any fiber.
    auto hasFiber = [](const TensorJet& t) {
      for (SlotKind s : t.slots_)
        if (slotIsFiber(s)) return true;
      return false;
    };
    int n = hasFiber(a) ? a.n_ : b.n_;
    if (hasFiber(a) && hasFiber(b) && a.n_ != b.n_)
      throw std::invalid_argument("dimension mismatch");
    std::vector<SlotKind> outSlots = a.slots_;
    outSlots.insert(outSlots.end(), b.slots_.begin(), b.slots_.end());
    int ord = std::min(a.order_, b.order_);
    TensorJet out(a.m_, n, outSlots, ord);
    auto rgs = out.ranges();
    forEachIndex(rgs, [&](const std::vector<int>& idx) {
      std::vector<int> ia(idx.begin(), idx.begin() + a.slotCount());
      std::vector<int> ib(idx.begin() + a.slotCount(), idx.end());
      out.at(idx) = a.at(ia).truncated(ord) * b.at(ib).truncated(ord);
    });
    return out;
  }

  void declareSymmetry(SlotSym g) {
    checkSymGroup(g);
    syms_.push_back(std::move(g));
  }

 private:
  int flat(const std::vector<int>& idx) const {
    if (idx.size() != slots_.size())
      throw std::invalid_argument("component index arity mismatch");
    int f = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      int r = range(static_cast<int>(s));
      if (idx[s] < 0 || idx[s] >= r) throw std::out_of_range("component index out of range");
      f = f * r + idx[s];
    }
    return f;
  }
  void requireShape(const TensorJet& o) const {
    if (m_ != o.m_ || n_ != o.n_ || slots_ != o.slots_)
      throw std::invalid_argument("tensor shape mismatch");
  }
  void checkSymGroup(const SlotSym& g) const {
    if (g.slots.size() < 2) throw std::invalid_argument("symmetry group needs >= 2 slots");
    for (int s : g.slots) {
      if (s < 0 || s >= slotCount()) throw std::invalid_argument("symmetry slot out of range");
      if (range(s) != range(g.slots[0]))
        throw std::invalid_argument("mixed-range symmetry group");
    }
  }

  int m_, n_, order_;
  std::vector<SlotKind> slots_;
  std::vector<SlotSym> syms_;
  std::vector<Series<C>> comp_;
};

using RTensor = TensorJet<Rational>;
using ATensor = TensorJet<AffineScalar>;

/// Lift a rational tensor jet into the affine coefficient ring.
inline ATensor liftToAffine(const RTensor& t) {
  ATensor out(t.dim(), t.fiberDim(), t.slots(), t.order(), t.symmetries());
  for (int c = 0; c < t.componentCount(); ++c) {
    for (int d = 0; d <= t.order(); ++d) {
      const auto& src = t.atFlat(c).coeffsOfDegree(d);
      auto& dst = out.atFlat(c).coeffsOfDegree(d);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = AffineScalar(src[i]);
    }
  }
  return out;
}

/// Drop the affine layer; throws if any coefficient still carries unknowns.
inline RTensor lowerToRational(const ATensor& t) {
  RTensor out(t.dim(), t.fiberDim(), t.slots(), t.order(), t.symmetries());
  for (int c = 0; c < t.componentCount(); ++c) {
    for (int d = 0; d <= t.order(); ++d) {
      const auto& src = t.atFlat(c).coeffsOfDegree(d);
      auto& dst = out.atFlat(c).coeffsOfDegree(d);
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (!src[i].linear().empty())
          throw std::logic_error("unresolved unknowns in tensor jet");
        dst[i] = src[i].value();
      }
    }
  }
  return out;
}

}  // namespace jetcalc
