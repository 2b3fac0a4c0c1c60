#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "jetcalc/group.hpp"
#include "jetcalc/identities.hpp"
#include "jetcalc/linsolve.hpp"

namespace jetcalc {

/// Invariants of a pair (classical jet of order s, linear jet of order r)
/// at level k: low-order jets plus the curvature-differential values.
struct ReducedFirst {
  int m = 0, n = 0, k = 1, s = 0, r = 0;
  std::optional<RTensor> lamLow;   // order k-2; absent when k = 1
  std::optional<RTensor> kLow;     // order k-1
  std::vector<RTensor> wList;      // classical, i = max(k-2,0)..s-1
  std::vector<RTensor> uList;      // linear,    i = k-1..r-1

  friend bool operator==(const ReducedFirst& a, const ReducedFirst& b) {
    return a.m == b.m && a.n == b.n && a.k == b.k && a.s == b.s && a.r == b.r &&
           a.lamLow == b.lamLow && a.kLow == b.kLow && a.wList == b.wList &&
           a.uList == b.uList;
  }
};

/// Invariants of a triple (classical, linear, tensor field) at level k.
struct ReducedSecond {
  int m = 0, n = 0, k = 1, s1 = 0, s2 = 0, r = 0;
  std::vector<SlotKind> phiSlots;
  std::optional<RTensor> lamLow;   // order k-2
  std::optional<RTensor> kLow;     // order k-2
  std::optional<RTensor> phiLow;   // order k-1
  std::vector<RTensor> wList;      // i = max(k-2,0)..s1-1
  std::vector<RTensor> uList;      // i = max(k-2,0)..s2-1
  std::vector<RTensor> vList;      // field differentials, i = k..r

  friend bool operator==(const ReducedSecond& a, const ReducedSecond& b) {
    return a.m == b.m && a.n == b.n && a.k == b.k && a.s1 == b.s1 && a.s2 == b.s2 &&
           a.r == b.r && a.phiSlots == b.phiSlots && a.lamLow == b.lamLow &&
           a.kLow == b.kLow && a.phiLow == b.phiLow && a.wList == b.wList &&
           a.uList == b.uList && a.vList == b.vList;
  }
};

inline ReducedFirst reduceFirst(const RTensor& lam, const RTensor& kjet, int k) {
  int s = lam.order(), r = kjet.order();
  if (!(s >= r - 2)) throw std::invalid_argument("reduce: requires s >= r-2");
  if (!(s + 2 >= k && k >= 1 && r + 1 >= k))
    throw std::invalid_argument("reduce: level k out of range");
  ReducedFirst d;
  d.m = lam.dim();
  d.n = kjet.fiberDim();
  d.k = k;
  d.s = s;
  d.r = r;
  if (k >= 2) d.lamLow = lam.projected(k - 2);
  d.kLow = kjet.projected(k - 1);
  for (int i = std::max(k - 2, 0); i <= s - 1; ++i)
    d.wList.push_back(formalCurvatureClassical(lam, i));
  for (int i = k - 1; i <= r - 1; ++i)
    d.uList.push_back(formalCurvatureLinear(i >= 1 ? &lam : nullptr, kjet, i));
  return d;
}

namespace detail {

/// Failure signal of a reconstruction: stage and jet order where the affine
/// system turned out inconsistent (non-membership of the reduced data).
struct ReconstructError {
  std::string stage;
  int order = -1;
};

inline Rational originValue(const RTensor& data, int flatComp) {
  return data.atFlat(flatComp).coeffsOfDegree(0)[0];
}

/// Solve the order-t coordinates of a classical connection jet from the
/// gauge condition (prescribed symmetrized part, canonically zero) and the
/// prescribed curvature differential of order t-1 (absent for t = 0).
inline bool solveClassicalOrder(RTensor& lam, int t, const RTensor* wData,
                                const std::vector<Rational>* symTarget,
                                std::vector<SolveReport>* reports) {
  int m = lam.dim();
  // Unknowns: one per (lambda, unordered pair (p,q), derivative multiset).
  std::vector<std::tuple<int, int, int, MultiIndex>> unknowns;
  auto multis = allMultisets(m, t);
  for (int l = 0; l < m; ++l)
    for (int p = 0; p < m; ++p)
      for (int q = p; q < m; ++q)
        for (const auto& v : multis) unknowns.emplace_back(l, p, q, MultiIndex(v));
  int nUnk = static_cast<int>(unknowns.size());
  if (t >= 1 && !wData) throw std::logic_error("missing curvature data for classical solve");

  std::ostringstream key;
  key << "C:" << m << ":" << t;
  const LinearRecipe* recipe = findCachedRecipe(key.str());
  if (!recipe) {
    // One-time symbolic build of the system's (sample-independent) linear
    // part; later samples only recompute the constants below.
    ATensor lamA = liftToAffine(lam.projected(t));
    for (int id = 0; id < nUnk; ++id) {
      const auto& [l, p, q, mi] = unknowns[id];
      lamA.setJetCoordinate({l, p, q}, mi, AffineScalar::unknown(id));
      if (p != q) lamA.setJetCoordinate({l, q, p}, mi, AffineScalar::unknown(id));
    }
    std::vector<AffineRow> rows;
    auto sym = symmetrizedClassicalPart(lamA, t);
    for (const auto& v : sym) rows.push_back({v, Rational(0)});
    if (t >= 1) {
      ATensor f = formalCurvatureClassical(lamA, t - 1);
      for (int c = 0; c < f.componentCount(); ++c)
        rows.push_back({f.atFlat(c).coeffsOfDegree(0)[0], Rational(0)});
    }
    recipe = &cachedRecipe(key.str(), rows, nUnk);
  }

  // Row constants: rational evaluation with the order-t coordinates zeroed
  // (the symbolic rows at unknowns = 0).
  RTensor lamZ = lam.projected(t);
  for (int id = 0; id < nUnk; ++id) {
    const auto& [l, p, q, mi] = unknowns[id];
    lamZ.setJetCoordinate({l, p, q}, mi, Rational(0));
    if (p != q) lamZ.setJetCoordinate({l, q, p}, mi, Rational(0));
  }
  std::vector<Rational> constants, targets;
  auto symC = symmetrizedClassicalPart(lamZ, t);
  for (std::size_t i = 0; i < symC.size(); ++i) {
    constants.push_back(symC[i]);
    targets.push_back(symTarget ? (*symTarget)[i] : Rational(0));
  }
  if (t >= 1) {
    RTensor f = formalCurvatureClassical(lamZ, t - 1);
    for (int c = 0; c < f.componentCount(); ++c) {
      constants.push_back(f.atFlat(c).coeffsOfDegree(0)[0]);
      targets.push_back(originValue(*wData, c));
    }
  }
  bool consistent = false;
  std::vector<Rational> x = recipe->solveValues(constants, targets, consistent);
  if (reports)
    reports->push_back({"classical", t, nUnk, recipe->rank(), consistent});
  if (recipe->rank() != nUnk || !consistent) return false;
  for (int id = 0; id < nUnk; ++id) {
    const auto& [l, p, q, mi] = unknowns[id];
    lam.setJetCoordinate({l, p, q}, mi, x[id]);
    if (p != q) lam.setJetCoordinate({l, q, p}, mi, x[id]);
  }
  return true;
}

/// Solve the order-t coordinates of a linear connection jet, given the full
/// classical jet, from the gauge condition and the prescribed curvature
/// differential of order t-1.
inline bool solveLinearOrder(RTensor& kjet, const RTensor& lam, int t, const RTensor* uData,
                             const std::vector<Rational>* symTarget,
                             std::vector<SolveReport>* reports) {
  int m = kjet.dim(), n = kjet.fiberDim();
  std::vector<std::tuple<int, int, int, MultiIndex>> unknowns;
  auto multis = allMultisets(m, t);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < m; ++l)
        for (const auto& v : multis) unknowns.emplace_back(i, j, l, MultiIndex(v));
  int nUnk = static_cast<int>(unknowns.size());
  if (t >= 1 && !uData) throw std::logic_error("missing curvature data for linear solve");

  std::ostringstream key;
  key << "L:" << m << ":" << n << ":" << t;
  const LinearRecipe* recipe = findCachedRecipe(key.str());
  if (!recipe) {
    ATensor kA = liftToAffine(kjet.projected(t));
    for (int id = 0; id < nUnk; ++id) {
      const auto& [i, j, l, mi] = unknowns[id];
      kA.setJetCoordinate({i, j, l}, mi, AffineScalar::unknown(id));
    }
    std::vector<AffineRow> rows;
    auto sym = symmetrizedLinearPart(kA, t);
    for (const auto& v : sym) rows.push_back({v, Rational(0)});
    if (t >= 1) {
      ATensor lamA = liftToAffine(lam.projected(std::max(t - 2, 0)));
      ATensor f = formalCurvatureLinear(t - 1 >= 1 ? &lamA : nullptr, kA, t - 1);
      for (int c = 0; c < f.componentCount(); ++c)
        rows.push_back({f.atFlat(c).coeffsOfDegree(0)[0], Rational(0)});
    }
    recipe = &cachedRecipe(key.str(), rows, nUnk);
  }

  RTensor kZ = kjet.projected(t);
  for (int id = 0; id < nUnk; ++id) {
    const auto& [i, j, l, mi] = unknowns[id];
    kZ.setJetCoordinate({i, j, l}, mi, Rational(0));
  }
  std::vector<Rational> constants, targets;
  auto symC = symmetrizedLinearPart(kZ, t);
  for (std::size_t i = 0; i < symC.size(); ++i) {
    constants.push_back(symC[i]);
    targets.push_back(symTarget ? (*symTarget)[i] : Rational(0));
  }
  if (t >= 1) {
    RTensor lamLow = lam.projected(std::max(t - 2, 0));
    RTensor f = formalCurvatureLinear(t - 1 >= 1 ? &lamLow : nullptr, kZ, t - 1);
    for (int c = 0; c < f.componentCount(); ++c) {
      constants.push_back(f.atFlat(c).coeffsOfDegree(0)[0]);
      targets.push_back(originValue(*uData, c));
    }
  }
  bool consistent = false;
  std::vector<Rational> x = recipe->solveValues(constants, targets, consistent);
  if (reports) reports->push_back({"linear", t, nUnk, recipe->rank(), consistent});
  if (recipe->rank() != nUnk || !consistent) return false;
  for (int id = 0; id < nUnk; ++id) {
    const auto& [i, j, l, mi] = unknowns[id];
    kjet.setJetCoordinate({i, j, l}, mi, x[id]);
  }
  return true;
}

/// Solve the order-t coordinates of a tensor-field jet from the prescribed
/// covariant differential of order t (the triangular inversion of the
/// pure-derivative leading term).
inline bool solveFieldOrder(RTensor& phi, const RTensor& lam, const RTensor& kjet, int t,
                            const RTensor& vData, std::vector<SolveReport>* reports) {
  int m = phi.dim();
  std::vector<std::pair<std::vector<int>, MultiIndex>> unknowns;
  auto multis = allMultisets(m, t);
  forEachIndex(phi.ranges(), [&](const std::vector<int>& idx) {
    for (const auto& v : multis) unknowns.emplace_back(idx, MultiIndex(v));
  });
  int nUnk = static_cast<int>(unknowns.size());
  bool hasFiber = false;
  for (SlotKind sk : phi.slots()) hasFiber |= slotIsFiber(sk);

  std::ostringstream key;
  key << "F:" << m << ":" << phi.fiberDim() << ":" << t;
  for (SlotKind sk : phi.slots()) key << "." << static_cast<int>(sk);
  const LinearRecipe* recipe = findCachedRecipe(key.str());
  if (!recipe) {
    ATensor phiA = liftToAffine(phi.projected(t));
    for (int id = 0; id < nUnk; ++id)
      phiA.setJetCoordinate(unknowns[id].first, unknowns[id].second,
                            AffineScalar::unknown(id));
    ATensor lamA = liftToAffine(lam.projected(std::max(t - 1, 0)));
    ATensor kA = liftToAffine(kjet.projected(std::max(t - 1, 0)));
    ATensor f = iteratedCovariantDifferential(phiA, hasFiber ? &kA : nullptr, &lamA, t)
                    .originData();
    std::vector<AffineRow> rows;
    for (int c = 0; c < f.componentCount(); ++c)
      rows.push_back({f.atFlat(c).coeffsOfDegree(0)[0], Rational(0)});
    recipe = &cachedRecipe(key.str(), rows, nUnk);
  }

  RTensor phiZ = phi.projected(t);
  for (int id = 0; id < nUnk; ++id)
    phiZ.setJetCoordinate(unknowns[id].first, unknowns[id].second, Rational(0));
  RTensor lamLow = lam.projected(std::max(t - 1, 0));
  RTensor kLow = kjet.projected(std::max(t - 1, 0));
  RTensor f =
      iteratedCovariantDifferential(phiZ, hasFiber ? &kLow : nullptr, &lamLow, t)
          .originData();
  std::vector<Rational> constants, targets;
  for (int c = 0; c < f.componentCount(); ++c) {
    constants.push_back(f.atFlat(c).coeffsOfDegree(0)[0]);
    targets.push_back(originValue(vData, c));
  }
  bool consistent = false;
  std::vector<Rational> x = recipe->solveValues(constants, targets, consistent);
  if (reports) reports->push_back({"field", t, nUnk, recipe->rank(), consistent});
  if (recipe->rank() != nUnk || !consistent) return false;
  for (int id = 0; id < nUnk; ++id)
    phi.setJetCoordinate(unknowns[id].first, unknowns[id].second, x[id]);
  return true;
}

}  // namespace detail

/// Canonical reconstruction of (classical order s, linear order r) jets from
/// reduced data: symmetrized coordinates above the known low orders are
/// gauged to zero; each order is then the unique solution of an exact
/// affine system. Returns std::nullopt (with the failing stage in *err)
/// when the data is not reconstructible, i.e. not a member of the
/// curvature-space.
inline std::optional<std::pair<RTensor, RTensor>> tryReconstructFirst(
    const ReducedFirst& d, std::vector<SolveReport>* reports = nullptr,
    detail::ReconstructError* err = nullptr) {
  int m = d.m, n = d.n, k = d.k, s = d.s, r = d.r;
  RTensor lam = classicalZero<Rational>(m, s);
  if (d.lamLow)
    for (int c = 0; c < lam.componentCount(); ++c)
      lam.atFlat(c) = d.lamLow->atFlat(c).extendedAsPolynomial(s);
  int wStart = std::max(k - 2, 0);
  for (int t = k - 1; t <= s; ++t) {
    if (t < 0) continue;
    const RTensor* wData = (t >= 1) ? &d.wList[t - 1 - wStart] : nullptr;
    if (!detail::solveClassicalOrder(lam, t, wData, nullptr, reports)) {
      if (err) *err = {"classical", t};
      return std::nullopt;
    }
  }
  RTensor kjet = linearZero<Rational>(m, n, r);
  if (d.kLow)
    for (int c = 0; c < kjet.componentCount(); ++c)
      kjet.atFlat(c) = d.kLow->atFlat(c).extendedAsPolynomial(r);
  for (int t = k; t <= r; ++t) {
    const RTensor* uData = &d.uList[t - 1 - (k - 1)];
    if (!detail::solveLinearOrder(kjet, lam, t, uData, nullptr, reports)) {
      if (err) *err = {"linear", t};
      return std::nullopt;
    }
  }
  return std::make_pair(lam, kjet);
}

inline std::pair<RTensor, RTensor> reconstructFirst(
    const ReducedFirst& d, std::vector<SolveReport>* reports = nullptr) {
  detail::ReconstructError err;
  auto out = tryReconstructFirst(d, reports, &err);
  if (!out)
    throw std::invalid_argument("reconstruct: inconsistent reduced data at " + err.stage +
                                " order " + std::to_string(err.order));
  return *out;
}

/// Membership decision for reduced curvature data: reconstructible or not,
/// with the witness jets on success and the failing order otherwise.
struct MembershipReport {
  bool member = false;
  std::string failStage;
  int failOrder = -1;
  std::optional<std::pair<RTensor, RTensor>> witness;
};

inline MembershipReport cSpaceMembership(const ReducedFirst& d) {
  MembershipReport rep;
  detail::ReconstructError err;
  auto out = tryReconstructFirst(d, nullptr, &err);
  if (out) {
    rep.member = true;
    rep.witness = out;
  } else {
    rep.failStage = err.stage;
    rep.failOrder = err.order;
  }
  return rep;
}

inline ReducedSecond reduceSecond(const RTensor& lam, const RTensor& kjet,
                                  const RTensor& phi, int k) {
  int s1 = lam.order(), s2 = kjet.order(), r = phi.order();
  if (!(s1 >= s2 - 2 && s1 >= r - 1 && s2 >= r - 1))
    throw std::invalid_argument("reduce: order profile not admissible");
  if (!(r + 1 >= k && k >= 1)) throw std::invalid_argument("reduce: level k out of range");
  ReducedSecond d;
  d.m = lam.dim();
  d.n = kjet.fiberDim();
  d.k = k;
  d.s1 = s1;
  d.s2 = s2;
  d.r = r;
  d.phiSlots = phi.slots();
  if (k >= 2) {
    d.lamLow = lam.projected(k - 2);
    d.kLow = kjet.projected(k - 2);
  }
  d.phiLow = phi.projected(k - 1);
  for (int i = std::max(k - 2, 0); i <= s1 - 1; ++i)
    d.wList.push_back(formalCurvatureClassical(lam, i));
  for (int i = std::max(k - 2, 0); i <= s2 - 1; ++i)
    d.uList.push_back(formalCurvatureLinear(i >= 1 ? &lam : nullptr, kjet, i));
  bool hasFiber = false;
  for (SlotKind sk : phi.slots()) hasFiber |= slotIsFiber(sk);
  for (int i = k; i <= r; ++i)
    d.vList.push_back(
        iteratedCovariantDifferential(phi, hasFiber ? &kjet : nullptr, &lam, i)
            .originData());
  return d;
}

inline std::optional<std::tuple<RTensor, RTensor, RTensor>> tryReconstructSecond(
    const ReducedSecond& d, std::vector<SolveReport>* reports = nullptr,
    detail::ReconstructError* err = nullptr) {
  int m = d.m, n = d.n, k = d.k;
  RTensor lam = classicalZero<Rational>(m, d.s1);
  if (d.lamLow)
    for (int c = 0; c < lam.componentCount(); ++c)
      lam.atFlat(c) = d.lamLow->atFlat(c).extendedAsPolynomial(d.s1);
  int cStart = std::max(k - 2, 0);
  for (int t = std::max(k - 1, 0); t <= d.s1; ++t) {
    const RTensor* wData = (t >= 1) ? &d.wList[t - 1 - cStart] : nullptr;
    if (!detail::solveClassicalOrder(lam, t, wData, nullptr, reports)) {
      if (err) *err = {"classical", t};
      return std::nullopt;
    }
  }
  RTensor kjet = linearZero<Rational>(m, n, d.s2);
  if (d.kLow)
    for (int c = 0; c < kjet.componentCount(); ++c)
      kjet.atFlat(c) = d.kLow->atFlat(c).extendedAsPolynomial(d.s2);
  for (int t = std::max(k - 1, 0); t <= d.s2; ++t) {
    const RTensor* uData = (t >= 1) ? &d.uList[t - 1 - cStart] : nullptr;
    if (!detail::solveLinearOrder(kjet, lam, t, uData, nullptr, reports)) {
      if (err) *err = {"linear", t};
      return std::nullopt;
    }
  }
  RTensor phi(m, n, d.phiSlots, d.r);
  if (d.phiLow)
    for (int c = 0; c < phi.componentCount(); ++c)
      phi.atFlat(c) = d.phiLow->atFlat(c).extendedAsPolynomial(d.r);
  for (int t = k; t <= d.r; ++t) {
    if (!detail::solveFieldOrder(phi, lam, kjet, t, d.vList[t - k], reports)) {
      if (err) *err = {"field", t};
      return std::nullopt;
    }
  }
  return std::make_tuple(lam, kjet, phi);
}

inline std::tuple<RTensor, RTensor, RTensor> reconstructSecond(
    const ReducedSecond& d, std::vector<SolveReport>* reports = nullptr) {
  detail::ReconstructError err;
  auto out = tryReconstructSecond(d, reports, &err);
  if (!out)
    throw std::invalid_argument("reconstruct: inconsistent reduced data at " + err.stage +
                                " order " + std::to_string(err.order));
  return *out;
}

/// Formal Ricci-equation residuals of second-kind reduced data: the
/// candidate's field differentials minus the engine-recomputed ones on the
/// reconstructed jets. All residuals vanish exactly iff the candidate lies
/// in the formal Ricci subspace (operational membership).
struct RicciReport {
  bool reconstructible = false;
  bool allZero = false;
  std::vector<RTensor> residuals;  // one per differential order i = k..r
};

inline RicciReport ricciEquationResiduals(const ReducedSecond& d) {
  RicciReport rep;
  auto out = tryReconstructSecond(d);
  if (!out) return rep;
  rep.reconstructible = true;
  const auto& [lam, kjet, phi] = *out;
  bool hasFiber = false;
  for (SlotKind sk : phi.slots()) hasFiber |= slotIsFiber(sk);
  rep.allZero = true;
  for (int i = d.k; i <= d.r; ++i) {
    RTensor engine =
        iteratedCovariantDifferential(phi, hasFiber ? &kjet : nullptr, &lam, i)
            .originData();
    RTensor res = d.vList[i - d.k] - engine;
    rep.allZero = rep.allZero && res.isZero();
    rep.residuals.push_back(std::move(res));
  }
  return rep;
}

/// Kernel-orbit solver: if the two pairs have equal reduced data at level k,
/// produce a kernel element h (identity through order k) with
/// act(h, pair2) = pair1 exactly; otherwise report failure.
inline std::optional<WGroupElement> orbitSolve(const RTensor& lam1, const RTensor& kjet1,
                                               const RTensor& lam2, const RTensor& kjet2,
                                               int k) {
  int s = lam1.order(), r = kjet1.order();
  int m = lam1.dim(), n = kjet1.fiberDim();
  if (lam2.order() != s || kjet2.order() != r)
    throw std::invalid_argument("orbit: order mismatch between pairs");
  if (!(reduceFirst(lam1, kjet1, k) == reduceFirst(lam2, kjet2, k))) return std::nullopt;

  int t1 = std::max(s + 2, r + 1);  // base part prolonged by zero when s = r-2
  int t2 = r + 1;
  WGroupElement h = WGroupElement::identity(m, n, t1, t2);
  RTensor curL = lam2, curK = kjet2;
  // Fix one jet order per pass, classical before linear: an elementary
  // kernel element shifts the symmetrized coordinates of its target order
  // by exactly its own top coefficients and disturbs only higher orders.
  for (int ell = std::max(k - 1, 0); ell <= std::max(s, r); ++ell) {
    if (ell <= s && ell >= k - 1) {
      auto target = symmetrizedClassicalPart(lam1, ell);
      auto cur = symmetrizedClassicalPart(curL, ell);
      WGroupElement eh = WGroupElement::identity(m, n, t1, t2);
      auto multis = allMultisets(m, ell + 2);
      int pos = 0;
      for (int l = 0; l < m; ++l)
        for (const auto& v : multis) {
          Rational delta = target[pos] - cur[pos];
          ++pos;
          if (delta != 0)
            eh.base.comp[l].setJetCoordinate(MultiIndex(v), delta);
        }
      curL = actOnClassical(eh, curL);
      curK = actOnLinear(eh, curK);
      h = groupMul(eh, h);
    }
    if (ell <= r && ell >= k) {
      auto target = symmetrizedLinearPart(kjet1, ell);
      auto cur = symmetrizedLinearPart(curK, ell);
      WGroupElement eh = WGroupElement::identity(m, n, t1, t2);
      auto multis = allMultisets(m, ell + 1);
      int pos = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (const auto& v : multis) {
            Rational delta = target[pos] - cur[pos];
            ++pos;
            if (delta != 0)
              eh.gauge.a[i * n + j].setJetCoordinate(MultiIndex(v), delta);
          }
      curK = actOnLinear(eh, curK);
      h = groupMul(eh, h);
    }
  }
  if (curL == lam1 && curK == kjet1) return h;
  return std::nullopt;
}

/// Named evaluation recipe built from engine primitives. Natural operators
/// consume jets only through equivariant primitives of the declared orders;
/// non-natural probes read raw jet coordinates.
struct SampleOperator {
  std::string name;
  bool natural = true;
  int sUse = 0;  // classical jet order consumed
  int rUse = 0;  // linear jet order consumed
  int phiUse = -1;  // field jet order consumed; -1 = field not used
  std::function<RTensor(const RTensor& lam, const RTensor& kjet, const RTensor* phi)> eval;
};

inline RTensor evaluateSampleOperator(const SampleOperator& op, const RTensor& lam,
                                      const RTensor& kjet, const RTensor* phi = nullptr) {
  RTensor l = lam.projected(op.sUse);
  RTensor k = kjet.projected(op.rUse);
  if (op.phiUse >= 0) {
    if (!phi) throw std::invalid_argument("operator requires a field jet");
    RTensor p = phi->projected(op.phiUse);
    return op.eval(l, k, &p);
  }
  return op.eval(l, k, nullptr);
}

struct CheckReport {
  bool equal = false;
  RTensor residual{1, 1, {}, 0};
};

/// Does the operator factor through the reduced data? Exact for natural
/// operators (first reduction theorem); expected to fail for non-natural
/// probes on generic jets.
inline CheckReport factorizationCheckFirst(const SampleOperator& op, const RTensor& lam,
                                           const RTensor& kjet, int k) {
  RTensor lhs = evaluateSampleOperator(op, lam, kjet);
  auto [rl, rk] = reconstructFirst(reduceFirst(lam, kjet, k));
  RTensor rhs = evaluateSampleOperator(op, rl, rk);
  CheckReport rep;
  rep.residual = lhs - rhs;
  rep.equal = rep.residual.isZero();
  return rep;
}

inline CheckReport factorizationCheckSecond(const SampleOperator& op, const RTensor& lam,
                                            const RTensor& kjet, const RTensor& phi, int k) {
  RTensor lhs = evaluateSampleOperator(op, lam, kjet, &phi);
  auto [rl, rk, rp] = reconstructSecond(reduceSecond(lam, kjet, phi, k));
  RTensor rhs = evaluateSampleOperator(op, rl, rk, &rp);
  CheckReport rep;
  rep.residual = lhs - rhs;
  rep.equal = rep.residual.isZero();
  return rep;
}

/// Equivariance of an operator under a group element: evaluate on the
/// transformed jets versus transform the evaluation.
inline CheckReport equivarianceCheck(const SampleOperator& op, const RTensor& lam,
                                     const RTensor& kjet, const WGroupElement& g,
                                     const RTensor* phi = nullptr) {
  RTensor lamG = actOnClassical(g, lam);
  RTensor kG = actOnLinear(g, kjet);
  RTensor lhs(1, 1, {}, 0);
  if (phi) {
    RTensor phiG = actOnTensor(g, *phi);
    lhs = evaluateSampleOperator(op, lamG, kG, &phiG);
  } else {
    lhs = evaluateSampleOperator(op, lamG, kG);
  }
  RTensor val = evaluateSampleOperator(op, lam, kjet, phi);
  RTensor rhs = actOnTensor(g, val);
  CheckReport rep;
  rep.residual = lhs.projected(rhs.order()) - rhs;
  rep.equal = rep.residual.isZero();
  return rep;
}

}  // namespace jetcalc
