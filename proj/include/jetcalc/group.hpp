#pragma once

#include <stdexcept>
#include <vector>

#include "jetcalc/connections.hpp"
#include "jetcalc/random.hpp"

namespace jetcalc {

/// Jet of a local diffeomorphism fixing the origin: m series with zero
/// constant term and invertible linear part.
struct DiffeoJet {
  int m = 0;
  int order = 0;
  std::vector<RSeries> comp;

  static DiffeoJet identity(int m, int order) {
    return DiffeoJet{m, order, identityMap<Rational>(m, order)};
  }
  Rational jetCoordinate(int lambda, const MultiIndex& mi) const {
    return comp[lambda].jetCoordinate(mi);
  }
  friend bool operator==(const DiffeoJet& a, const DiffeoJet& b) {
    return a.m == b.m && a.order == b.order && a.comp == b.comp;
  }
};

/// Jet of a gauge transformation: n x n matrix of series (row-major) with
/// invertible constant matrix.
struct GaugeJet {
  int m = 0;
  int n = 0;
  int order = 0;
  std::vector<RSeries> a;  // n*n, row-major: a[i*n+j] = a^i_j

  static GaugeJet identity(int m, int n, int order) {
    GaugeJet g{m, n, order, std::vector<RSeries>(n * n, RSeries(m, order))};
    for (int i = 0; i < n; ++i)
      g.a[i * n + i] = RSeries::constant(m, order, Rational(1));
    return g;
  }
  Rational jetCoordinate(int i, int j, const MultiIndex& mi) const {
    return a[i * n + j].jetCoordinate(mi);
  }
  friend bool operator==(const GaugeJet& a, const GaugeJet& b) {
    return a.m == b.m && a.n == b.n && a.order == b.order && a.a == b.a;
  }
};

/// Element of the principal jet group: pair (diffeo jet of order t1, gauge
/// jet of order t2).
struct WGroupElement {
  DiffeoJet base;
  GaugeJet gauge;

  static WGroupElement identity(int m, int n, int t1, int t2) {
    return WGroupElement{DiffeoJet::identity(m, t1), GaugeJet::identity(m, n, t2)};
  }
  friend bool operator==(const WGroupElement& a, const WGroupElement& b) {
    return a.base == b.base && a.gauge == b.gauge;
  }
};

/// Semidirect product law (phi1, g1) * (phi2, g2) = (phi1 o phi2,
/// (g1 o phi2) * g2); matrix product on the gauge parts.
inline WGroupElement groupMul(const WGroupElement& e1, const WGroupElement& e2) {
  if (e1.base.m != e2.base.m || e1.gauge.n != e2.gauge.n ||
      e1.base.order != e2.base.order || e1.gauge.order != e2.gauge.order)
    throw std::invalid_argument("group element shape mismatch");
  int m = e1.base.m, n = e1.gauge.n;
  int t1 = e1.base.order, t2 = e1.gauge.order;
  WGroupElement out = WGroupElement::identity(m, n, t1, t2);
  out.base.comp = composeMap(e1.base.comp, e2.base.comp);
  std::vector<RSeries> g1c;  // g1 composed with phi2 (truncated to t2)
  std::vector<RSeries> inner;
  for (const auto& c : e2.base.comp) inner.push_back(c.truncated(std::min(t1, t2)));
  for (const auto& s : e1.gauge.a) g1c.push_back(RSeries::compose(s, inner));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RSeries s(m, t2);
      for (int p = 0; p < n; ++p)
        s += g1c[i * n + p] * e2.gauge.a[p * n + j];
      out.gauge.a[i * n + j] = s;
    }
  return out;
}

/// Inverse element: (phi, g)^{-1} = (phi^{-1}, (g o phi^{-1})^{-1}).
inline WGroupElement groupInv(const WGroupElement& e) {
  int m = e.base.m, n = e.gauge.n;
  int t1 = e.base.order, t2 = e.gauge.order;
  WGroupElement out = WGroupElement::identity(m, n, t1, t2);
  out.base.comp = invertDiffeo(e.base.comp);
  std::vector<RSeries> inner;
  for (const auto& c : out.base.comp) inner.push_back(c.truncated(std::min(t1, t2)));
  std::vector<RSeries> gc;
  for (const auto& s : e.gauge.a) gc.push_back(RSeries::compose(s, inner));
  out.gauge.a = matrixSeriesInverse(gc, n);
  return out;
}

namespace detail {

/// Shared geometric data of an action: psi = phi^{-1}, its Jacobian Psi,
/// the Jacobian of phi composed with psi, and the gauge matrix composed
/// with psi together with its matrix inverse.
struct ActionFrames {
  std::vector<RSeries> psi;    // order t1
  std::vector<RSeries> Psi;    // m*m, order t1-1: Psi[p*m+mu] = d psi^p / d xbar^mu
  std::vector<RSeries> Jc;     // m*m, order t1-1: (d phi^lam / d x^q) o psi
  std::vector<RSeries> G;      // n*n, order min(t2, t1)
  std::vector<RSeries> Ginv;
};

inline ActionFrames makeFrames(const WGroupElement& e, bool needGauge) {
  ActionFrames f;
  int m = e.base.m, n = e.gauge.n;
  int t1 = e.base.order;
  f.psi = invertDiffeo(e.base.comp);
  f.Psi.reserve(m * m);
  for (int p = 0; p < m; ++p)
    for (int mu = 0; mu < m; ++mu) f.Psi.push_back(f.psi[p].partial(mu));
  std::vector<RSeries> J;
  for (int lam = 0; lam < m; ++lam)
    for (int q = 0; q < m; ++q) J.push_back(e.base.comp[lam].partial(q));
  std::vector<RSeries> psiLow;
  for (const auto& c : f.psi) psiLow.push_back(c.truncated(t1 - 1));
  f.Jc = composeMap(J, psiLow);
  if (needGauge) {
    int t2 = e.gauge.order;
    std::vector<RSeries> inner;
    for (const auto& c : f.psi) inner.push_back(c.truncated(std::min(t1, t2)));
    for (const auto& s : e.gauge.a) f.G.push_back(RSeries::compose(s, inner));
    f.Ginv = matrixSeriesInverse(f.G, n);
  }
  return f;
}

}  // namespace detail

/// Tensorial action on a tensor-field jet: compose with phi^{-1}, then
/// transform each slot with the gauge matrix (fiber) or the Jacobians
/// (base). Applied slot by slot.
inline RTensor actOnTensor(const WGroupElement& e, const RTensor& t) {
  int t1 = e.base.order, t2 = e.gauge.order;
  bool hasFiber = false;
  for (SlotKind k : t.slots()) hasFiber |= slotIsFiber(k);
  int ord = std::min(t.order(), t1 - 1);
  if (hasFiber) ord = std::min(ord, t2);
  if (ord < 0) throw std::invalid_argument("insufficient group order for tensor action");
  detail::ActionFrames f = detail::makeFrames(e, hasFiber);
  int m = t.dim(), n = t.fiberDim();

  // Base re-composition first.
  RTensor cur(m, n, t.slots(), ord, t.symmetries());
  std::vector<RSeries> inner;
  for (const auto& c : f.psi) inner.push_back(c.truncated(std::min(t.order(), ord)));
  for (int c = 0; c < t.componentCount(); ++c)
    cur.atFlat(c) = RSeries::compose(t.atFlat(c).truncated(std::min(t.order(), ord)), inner);

  // One matrix per slot.
  for (int s = 0; s < t.slotCount(); ++s) {
    SlotKind kind = t.slots()[s];
    int r = t.range(s);
    const std::vector<RSeries>* mat = nullptr;
    bool rowIsOut = true;  // out index is the matrix row
    switch (kind) {
      case SlotKind::FiberUp: mat = &f.G; rowIsOut = true; break;     // v^i = G^i_q v^q
      case SlotKind::FiberDown: mat = &f.Ginv; rowIsOut = false; break;  // w_j = w_p Gt^p_j
      case SlotKind::BaseUp: mat = &f.Jc; rowIsOut = true; break;
      case SlotKind::BaseDown: mat = &f.Psi; rowIsOut = false; break;
    }
    RTensor next(m, n, t.slots(), ord, t.symmetries());
    auto rgs = cur.ranges();
    forEachIndex(rgs, [&](const std::vector<int>& idx) {
      RSeries sum(m, ord);
      std::vector<int> src = idx;
      for (int b = 0; b < r; ++b) {
        src[s] = b;
        const RSeries& factor =
            rowIsOut ? (*mat)[idx[s] * r + b] : (*mat)[b * r + idx[s]];
        sum += factor.truncated(ord) * cur.at(src);
      }
      next.at(idx) = sum;
    });
    cur = next;
  }
  return cur;
}

/// Action on a classical connection jet (paper convention: the kernel shift
/// of the top jet coordinate is minus the inverse element's coordinate).
inline RTensor actOnClassical(const WGroupElement& e, const RTensor& lam) {
  if (!isClassicalShape(lam)) throw std::invalid_argument("not a classical connection jet");
  int m = lam.dim();
  int t1 = e.base.order;
  int ord = std::min(lam.order(), t1 - 2);
  if (ord < 0) throw std::invalid_argument("insufficient group order for classical action");
  detail::ActionFrames f = detail::makeFrames(e, false);

  // Second derivatives of phi, composed with psi: order t1-2.
  std::vector<RSeries> psiLow;
  for (const auto& c : f.psi) psiLow.push_back(c.truncated(t1 - 2));
  std::vector<RSeries> d2(m * m * m, RSeries(m, t1 - 2));  // [lam][p][rho]
  for (int l = 0; l < m; ++l)
    for (int p = 0; p < m; ++p)
      for (int rho = 0; rho < m; ++rho)
        d2[(l * m + p) * m + rho] =
            RSeries::compose(e.base.comp[l].partial(p).partial(rho), psiLow);

  // Homogeneous part: tensor action on the (1,2) base tensor.
  WGroupElement eTrim = e;
  RTensor hom = actOnTensor(eTrim, lam);

  RTensor out = classicalZero<Rational>(m, ord);
  for (int l = 0; l < m; ++l)
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        RSeries s = hom.at({l, mu, nu}).truncated(ord);
        for (int p = 0; p < m; ++p)
          for (int rho = 0; rho < m; ++rho)
            s += d2[(l * m + p) * m + rho].truncated(ord) *
                 f.Psi[p * m + mu].truncated(ord) * f.Psi[rho * m + nu].truncated(ord);
        out.at({l, mu, nu}) = s;
      }
  return out;
}

/// Action on a linear connection jet: Kbar = G (K o psi) Ginv Psi +
/// ((dg) o psi) Ginv Psi.
inline RTensor actOnLinear(const WGroupElement& e, const RTensor& k) {
  if (!isLinearShape(k)) throw std::invalid_argument("not a linear connection jet");
  int m = k.dim(), n = k.fiberDim();
  int t1 = e.base.order, t2 = e.gauge.order;
  int ord = std::min({k.order(), t1 - 1, t2 - 1});
  if (ord < 0) throw std::invalid_argument("insufficient group order for linear action");
  detail::ActionFrames f = detail::makeFrames(e, true);

  RTensor hom = actOnTensor(e, k);

  // ((d_rho g^i_p) o psi).
  std::vector<RSeries> psiLow;
  for (const auto& c : f.psi) psiLow.push_back(c.truncated(std::min(t1, t2 - 1)));
  std::vector<RSeries> dg(n * n * m, RSeries(m, t2 - 1));  // [i][p][rho]
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int rho = 0; rho < m; ++rho)
        dg[(i * n + p) * m + rho] =
            RSeries::compose(e.gauge.a[i * n + p].partial(rho), psiLow);

  RTensor out = linearZero<Rational>(m, n, ord);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int lam = 0; lam < m; ++lam) {
        RSeries s = hom.at({i, j, lam}).truncated(ord);
        for (int p = 0; p < n; ++p)
          for (int rho = 0; rho < m; ++rho)
            s += dg[(i * n + p) * m + rho].truncated(ord) *
                 f.Ginv[p * n + j].truncated(ord) * f.Psi[rho * m + lam].truncated(ord);
        out.at({i, j, lam}) = s;
      }
  return out;
}

/// Random group element with invertible linear/constant parts.
inline WGroupElement randomGroupElement(int m, int n, int t1, int t2, RandomGen& rng,
                                        int bound) {
  WGroupElement e = WGroupElement::identity(m, n, t1, t2);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Rational> lin(m * m);
    for (auto& v : lin) v = rng.rational(bound);
    try {
      inverseRationalMatrix(lin, m);
    } catch (const std::domain_error&) {
      continue;
    }
    for (int l = 0; l < m; ++l) {
      RSeries s(m, t1);
      for (int q = 0; q < m; ++q) {
        std::vector<int> ex(m, 0);
        ex[q] = 1;
        s.setCoeff(ex, lin[l * m + q]);
      }
      for (int d = 2; d <= t1; ++d)
        for (auto& c : s.coeffsOfDegree(d)) c = rng.rational(bound);
      e.base.comp[l] = s;
    }
    break;
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Rational> c0(n * n);
    for (auto& v : c0) v = rng.rational(bound);
    try {
      inverseRationalMatrix(c0, n);
    } catch (const std::domain_error&) {
      continue;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RSeries s(m, t2);
        std::vector<int> zero(m, 0);
        s.setCoeff(zero, c0[i * n + j]);
        for (int d = 1; d <= t2; ++d)
          for (auto& c : s.coeffsOfDegree(d)) c = rng.rational(bound);
        e.gauge.a[i * n + j] = s;
      }
    break;
  }
  return e;
}

/// Kernel element of profile (baseTop, gaugeTop, k): identity through order
/// k in both parts, random coefficients at orders k+1..baseTop (base) and
/// k+1..gaugeTop (gauge). The trust orders are raised to at least
/// (minBase, minGauge) by zero prolongation — polynomial representatives are
/// jets of themselves at every order, so this is exact.
inline WGroupElement makeKernelElement(int m, int n, int baseTop, int gaugeTop, int k,
                                       RandomGen& rng, int bound, int minBase = 0,
                                       int minGauge = 0) {
  if (k > baseTop || k > gaugeTop)
    throw std::invalid_argument("kernel profile exceeds orders");
  int t1 = std::max(baseTop, minBase);
  int t2 = std::max(gaugeTop, minGauge);
  WGroupElement e = WGroupElement::identity(m, n, t1, t2);
  for (int l = 0; l < m; ++l)
    for (int d = k + 1; d <= baseTop; ++d)
      for (auto& c : e.base.comp[l].coeffsOfDegree(d)) c = rng.rational(bound);
  for (int i = 0; i < n * n; ++i)
    for (int d = k + 1; d <= gaugeTop; ++d)
      for (auto& c : e.gauge.a[i].coeffsOfDegree(d)) c = rng.rational(bound);
  return e;
}

}  // namespace jetcalc
