#pragma once

#include <vector>

#include "jetcalc/tensor.hpp"

namespace jetcalc {

/// Classical connection jet: components Lam(lambda; mu, nu) = Lambda_mu^lambda_nu
/// with the two covariant base slots symmetric. Slot order: BaseUp, BaseDown,
/// BaseDown.
template <class C>
TensorJet<C> classicalZero(int m, int order) {
  return TensorJet<C>(m, 1, {SlotKind::BaseUp, SlotKind::BaseDown, SlotKind::BaseDown},
                      order, {SlotSym{{1, 2}, false}});
}

/// Linear connection jet: components K(i; j, lambda) = K_j^i_lambda. Slot
/// order: FiberUp, FiberDown, BaseDown.
template <class C>
TensorJet<C> linearZero(int m, int n, int order) {
  return TensorJet<C>(m, n, {SlotKind::FiberUp, SlotKind::FiberDown, SlotKind::BaseDown},
                      order);
}

inline bool isClassicalShape(const RTensor& t) {
  return t.slots() == std::vector<SlotKind>{SlotKind::BaseUp, SlotKind::BaseDown,
                                            SlotKind::BaseDown};
}
inline bool isLinearShape(const RTensor& t) {
  return t.slots() == std::vector<SlotKind>{SlotKind::FiberUp, SlotKind::FiberDown,
                                            SlotKind::BaseDown};
}

/// Tensor jet with the canonical slot layout for valence
/// (p1 fiber-up, q1 fiber-down, p2 base-up, q2 base-down): uppers first.
template <class C>
TensorJet<C> tensorZero(int m, int n, int p1, int q1, int p2, int q2, int order) {
  std::vector<SlotKind> slots;
  for (int i = 0; i < p1; ++i) slots.push_back(SlotKind::FiberUp);
  for (int i = 0; i < q1; ++i) slots.push_back(SlotKind::FiberDown);
  for (int i = 0; i < p2; ++i) slots.push_back(SlotKind::BaseUp);
  for (int i = 0; i < q2; ++i) slots.push_back(SlotKind::BaseDown);
  return TensorJet<C>(m, n, slots, order);
}

/// Totally symmetric jet parts used by the reduction gauge: values indexed
/// by component labels plus a sorted covariant multi-index.
/// For the classical kind components are (lambda); for the linear kind
/// (i, j). Stored as plain vectors in enumeration order.
template <class C>
std::vector<C> symmetrizedClassicalPart(const TensorJet<C>& lam, int t) {
  // s^lambda_(mu1...mu_{t+2}) = Lam_(mu1 ^lambda mu2, mu3...mu_{t+2}):
  // average over ordered choices of the two visible slots from the multiset;
  // the derivative multi-index is symmetric by construction.
  int m = lam.dim();
  auto multis = allMultisets(m, t + 2);
  std::vector<C> out;
  out.reserve(m * multis.size());
  for (int lambda = 0; lambda < m; ++lambda) {
    for (const auto& v : multis) {
      C acc(0);
      int terms = 0;
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = 0; b < v.size(); ++b) {
          if (a == b) continue;
          std::vector<int> rest;
          for (std::size_t c = 0; c < v.size(); ++c)
            if (c != a && c != b) rest.push_back(v[c]);
          acc += lam.jetCoordinate({lambda, v[a], v[b]}, MultiIndex(rest));
          ++terms;
        }
      out.push_back(coefScale(acc, Rational(1) / Rational(terms)));
    }
  }
  return out;
}

template <class C>
std::vector<C> symmetrizedLinearPart(const TensorJet<C>& k, int t) {
  // s_j^i_(mu1...mu_{t+1}) = K_j^i_(mu1, mu2...mu_{t+1}).
  int m = k.dim(), n = k.fiberDim();
  auto multis = allMultisets(m, t + 1);
  std::vector<C> out;
  out.reserve(n * n * multis.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& v : multis) {
        C acc(0);
        for (std::size_t a = 0; a < v.size(); ++a) {
          std::vector<int> rest;
          for (std::size_t c = 0; c < v.size(); ++c)
            if (c != a) rest.push_back(v[c]);
          acc += k.jetCoordinate({i, j, v[a]}, MultiIndex(rest));
        }
        out.push_back(coefScale(acc, Rational(1) / Rational(static_cast<int>(v.size()))));
      }
  return out;
}

}  // namespace jetcalc
