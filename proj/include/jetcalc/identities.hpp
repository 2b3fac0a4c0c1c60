#pragma once

#include "jetcalc/covariant.hpp"

namespace jetcalc {

namespace detail {

/// Cyclic sum of a tensor over three covariant base slot positions.
template <class C>
TensorJet<C> cyclicSum(const TensorJet<C>& t, int s1, int s2, int s3) {
  TensorJet<C> out(t.dim(), t.fiberDim(), t.slots(), t.order());
  auto rgs = t.ranges();
  forEachIndex(rgs, [&](const std::vector<int>& idx) {
    std::vector<int> a = idx, b = idx;
    a[s1] = idx[s2]; a[s2] = idx[s3]; a[s3] = idx[s1];
    b[s1] = idx[s3]; b[s2] = idx[s1]; b[s3] = idx[s2];
    out.at(idx) = t.at(idx) + t.at(a) + t.at(b);
  });
  return out;
}

}  // namespace detail

/// First Bianchi identity residual for classical curvature data
/// (slots rho; nu, lambda, mu): cyclic sum over (nu, lambda, mu).
template <class C>
TensorJet<C> bianchiFirstClassicalResidual(const TensorJet<C>& w) {
  if (w.slotCount() != 4) throw std::invalid_argument("expected classical curvature valence");
  return detail::cyclicSum(w, 1, 2, 3);
}

/// Second Bianchi identity residual for differentiated classical curvature
/// (slots rho; nu, lambda, mu, sigma): cyclic sum over (lambda, mu, sigma).
template <class C>
TensorJet<C> bianchiSecondClassicalResidual(const TensorJet<C>& dw) {
  if (dw.slotCount() != 5)
    throw std::invalid_argument("expected once-differentiated classical curvature");
  return detail::cyclicSum(dw, 2, 3, 4);
}

/// Generalized Bianchi identity residual for differentiated linear curvature
/// (slots i, j, lambda, mu, nu): cyclic sum over (lambda, mu, nu).
template <class C>
TensorJet<C> bianchiGeneralizedLinearResidual(const TensorJet<C>& du) {
  if (du.slotCount() != 5)
    throw std::invalid_argument("expected once-differentiated linear curvature");
  return detail::cyclicSum(du, 2, 3, 4);
}

/// Ricci identity residual: Alt of the second covariant differential plus
/// half the curvature action. Identically zero as a theorem; nonzero output
/// signals a convention or engine fault.
template <class C>
TensorJet<C> ricciIdentityResidual(const TensorJet<C>& phi, const TensorJet<C>* k,
                                   const TensorJet<C>* lam) {
  TensorJet<C> d2 = iteratedCovariantDifferential(phi, k, lam, 2);
  int last = d2.slotCount() - 1;
  TensorJet<C> alt = d2.symmetrizedOver({last - 1, last}, true);
  bool needU = false, needW = false;
  for (SlotKind s : phi.slots()) (slotIsFiber(s) ? needU : needW) = true;
  TensorJet<C> u = needU ? curvatureLinear(*k)
                         : TensorJet<C>(phi.dim(), phi.fiberDim(),
                                        {SlotKind::FiberUp, SlotKind::FiberDown,
                                         SlotKind::BaseDown, SlotKind::BaseDown},
                                        0);
  TensorJet<C> w = needW ? curvatureClassical(*lam)
                         : TensorJet<C>(phi.dim(), 1,
                                        {SlotKind::BaseUp, SlotKind::BaseDown,
                                         SlotKind::BaseDown, SlotKind::BaseDown},
                                        0);
  TensorJet<C> act = curvatureAction(phi, needU ? &u : nullptr, needW ? &w : nullptr);
  return alt + act.scaled(Rational(1) / Rational(2));
}

}  // namespace jetcalc
