#pragma once

#include <algorithm>
#include <stdexcept>

#include "jetcalc/connections.hpp"

namespace jetcalc {

/// Curvature field of a classical connection. Output slots (BaseUp rho,
/// BaseDown nu, BaseDown lambda, BaseDown mu) hold
/// w_nu^rho_{lambda mu} = d_mu Lam_nu^rho_lambda - d_lambda Lam_nu^rho_mu
///                        + Lam_nu^sig_mu Lam_sig^rho_lambda
///                        - Lam_nu^sig_lambda Lam_sig^rho_mu,
/// antisymmetric in the last two slots. Trust order drops by one.
template <class C>
TensorJet<C> curvatureClassical(const TensorJet<C>& lam) {
  if (lam.order() < 1) throw std::invalid_argument("curvature needs order >= 1");
  int m = lam.dim();
  int ord = lam.order() - 1;
  TensorJet<C> w(m, 1,
                 {SlotKind::BaseUp, SlotKind::BaseDown, SlotKind::BaseDown,
                  SlotKind::BaseDown},
                 ord, {SlotSym{{2, 3}, true}});
  for (int rho = 0; rho < m; ++rho)
    for (int nu = 0; nu < m; ++nu)
      for (int l = 0; l < m; ++l)
        for (int mu = 0; mu < m; ++mu) {
          Series<C> s = lam.at({rho, nu, l}).partial(mu) - lam.at({rho, nu, mu}).partial(l);
          for (int sig = 0; sig < m; ++sig)
            s += lam.at({sig, nu, mu}).truncated(ord) * lam.at({rho, sig, l}).truncated(ord) -
                 lam.at({sig, nu, l}).truncated(ord) * lam.at({rho, sig, mu}).truncated(ord);
          w.at({rho, nu, l, mu}) = s;
        }
  return w;
}

/// Curvature field of a linear connection. Output slots (FiberUp i,
/// FiberDown j, BaseDown lambda, BaseDown mu) hold
/// u_j^i_{lambda mu} = d_mu K_j^i_lambda - d_lambda K_j^i_mu
///                     + K_j^p_mu K_p^i_lambda - K_j^p_lambda K_p^i_mu.
template <class C>
TensorJet<C> curvatureLinear(const TensorJet<C>& k) {
  if (k.order() < 1) throw std::invalid_argument("curvature needs order >= 1");
  int m = k.dim(), n = k.fiberDim();
  int ord = k.order() - 1;
  TensorJet<C> u(m, n,
                 {SlotKind::FiberUp, SlotKind::FiberDown, SlotKind::BaseDown,
                  SlotKind::BaseDown},
                 ord, {SlotSym{{2, 3}, true}});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < m; ++l)
        for (int mu = 0; mu < m; ++mu) {
          Series<C> s = k.at({i, j, l}).partial(mu) - k.at({i, j, mu}).partial(l);
          for (int p = 0; p < n; ++p)
            s += k.at({p, j, mu}).truncated(ord) * k.at({i, p, l}).truncated(ord) -
                 k.at({p, j, l}).truncated(ord) * k.at({i, p, mu}).truncated(ord);
          u.at({i, j, l, mu}) = s;
        }
  return u;
}

/// Covariant differential with respect to the pair (K, Lambda): appends one
/// covariant base slot; trust order drops by one. K is consulted only for
/// fiber slots, Lambda only for base slots; pass nullptr when unused.
template <class C>
TensorJet<C> covariantDifferential(const TensorJet<C>& phi, const TensorJet<C>* k,
                                   const TensorJet<C>* lam) {
  int m = phi.dim(), n = phi.fiberDim();
  if (phi.order() < 1) throw std::invalid_argument("covariant differential: order starvation");
  int ord = phi.order() - 1;
  bool needK = false, needL = false;
  for (SlotKind s : phi.slots()) (slotIsFiber(s) ? needK : needL) = true;
  if (needK) {
    if (!k) throw std::invalid_argument("fiber slots present but no linear connection");
    ord = std::min(ord, k->order());
  }
  if (needL) {
    if (!lam) throw std::invalid_argument("base slots present but no classical connection");
    ord = std::min(ord, lam->order());
  }
  std::vector<SlotKind> outSlots = phi.slots();
  outSlots.push_back(SlotKind::BaseDown);
  TensorJet<C> out(m, n, outSlots, ord);
  auto rgs = out.ranges();
  forEachIndex(rgs, [&](const std::vector<int>& oidx) {
    std::vector<int> idx(oidx.begin(), oidx.end() - 1);
    int nu = oidx.back();
    Series<C> s = phi.at(idx).partial(nu).truncated(ord);
    for (int sl = 0; sl < phi.slotCount(); ++sl) {
      int r = phi.range(sl);
      std::vector<int> src = idx;
      for (int p = 0; p < r; ++p) {
        src[sl] = p;
        Series<C> conn(m, ord);
        switch (phi.slots()[sl]) {
          case SlotKind::FiberUp:   // -K_p^i_nu phi^p
            conn = k->at({idx[sl], p, nu}).truncated(ord).scaled(Rational(-1));
            break;
          case SlotKind::FiberDown:  // +K_j^p_nu phi_p
            conn = k->at({p, idx[sl], nu}).truncated(ord);
            break;
          case SlotKind::BaseUp:     // -Lam_rho^lam_nu phi^rho
            conn = lam->at({idx[sl], p, nu}).truncated(ord).scaled(Rational(-1));
            break;
          case SlotKind::BaseDown:   // +Lam_mu^rho_nu phi_rho
            conn = lam->at({p, idx[sl], nu}).truncated(ord);
            break;
        }
        s += conn * phi.at(src).truncated(ord);
      }
    }
    out.at(oidx) = s;
  });
  return out;
}

/// i-fold covariant differential; each step appends one covariant slot.
template <class C>
TensorJet<C> iteratedCovariantDifferential(const TensorJet<C>& phi, const TensorJet<C>* k,
                                           const TensorJet<C>* lam, int i) {
  TensorJet<C> cur = phi;
  for (int step = 0; step < i; ++step) cur = covariantDifferential(cur, k, lam);
  return cur;
}

/// Value of the i-th covariant differential of the classical curvature at
/// the origin (trust-0 tensor with 1 contravariant and 3+i covariant base
/// slots).
template <class C>
TensorJet<C> formalCurvatureClassical(const TensorJet<C>& lam, int i) {
  if (lam.order() < i + 1)
    throw std::invalid_argument("formal classical curvature map: order starvation");
  TensorJet<C> w = curvatureClassical(lam);
  return iteratedCovariantDifferential(w, static_cast<const TensorJet<C>*>(nullptr), &lam, i)
      .originData();
}

/// Value of the i-th covariant differential of the linear curvature at the
/// origin; the classical connection enters only for i >= 1 (base slots).
template <class C>
TensorJet<C> formalCurvatureLinear(const TensorJet<C>* lam, const TensorJet<C>& k, int i) {
  if (k.order() < i + 1)
    throw std::invalid_argument("formal linear curvature map: order starvation");
  if (i >= 1 && (!lam || lam->order() < i - 1))
    throw std::invalid_argument("formal linear curvature map: classical order starvation");
  TensorJet<C> u = curvatureLinear(k);
  return iteratedCovariantDifferential(u, &k, lam, i).originData();
}

/// Slot-wise curvature action R[K tensor Lambda] applied to Phi, as a field:
/// appends two covariant slots (the 2-form arguments). Signs match the
/// quadratic expansion of the antisymmetrized second covariant differential:
/// plus the curvature contraction on upper slots, minus on lower slots;
/// fiber slots use the linear curvature u, base slots the classical
/// curvature w.
template <class C>
TensorJet<C> curvatureAction(const TensorJet<C>& phi, const TensorJet<C>* u,
                             const TensorJet<C>* w) {
  int m = phi.dim(), n = phi.fiberDim();
  int ord = phi.order();
  bool needU = false, needW = false;
  for (SlotKind s : phi.slots()) (slotIsFiber(s) ? needU : needW) = true;
  if (needU) {
    if (!u) throw std::invalid_argument("fiber slots present but no linear curvature");
    ord = std::min(ord, u->order());
  }
  if (needW) {
    if (!w) throw std::invalid_argument("base slots present but no classical curvature");
    ord = std::min(ord, w->order());
  }
  std::vector<SlotKind> outSlots = phi.slots();
  outSlots.push_back(SlotKind::BaseDown);
  outSlots.push_back(SlotKind::BaseDown);
  TensorJet<C> out(m, n, outSlots, ord);
  auto rgs = out.ranges();
  forEachIndex(rgs, [&](const std::vector<int>& oidx) {
    std::vector<int> idx(oidx.begin(), oidx.end() - 2);
    int n1 = oidx[oidx.size() - 2];
    int n2 = oidx[oidx.size() - 1];
    Series<C> s(m, ord);
    for (int sl = 0; sl < phi.slotCount(); ++sl) {
      int r = phi.range(sl);
      std::vector<int> src = idx;
      for (int p = 0; p < r; ++p) {
        src[sl] = p;
        Series<C> curv(m, ord);
        switch (phi.slots()[sl]) {
          case SlotKind::FiberUp:    // +u_p^i_{n1 n2} phi^p
            curv = u->at({idx[sl], p, n1, n2}).truncated(ord);
            break;
          case SlotKind::FiberDown:  // -u_j^p_{n1 n2} phi_p
            curv = u->at({p, idx[sl], n1, n2}).truncated(ord).scaled(Rational(-1));
            break;
          case SlotKind::BaseUp:     // +w_rho^lam_{n1 n2} phi^rho
            curv = w->at({idx[sl], p, n1, n2}).truncated(ord);
            break;
          case SlotKind::BaseDown:   // -w_mu^rho_{n1 n2} phi_rho
            curv = w->at({p, idx[sl], n1, n2}).truncated(ord).scaled(Rational(-1));
            break;
        }
        s += curv * phi.at(src).truncated(ord);
      }
    }
    out.at(oidx) = s;
  });
  return out;
}

}  // namespace jetcalc
