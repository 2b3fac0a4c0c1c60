#pragma once

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

#include "jetcalc/io.hpp"
#include "jetcalc/sample_ops.hpp"

namespace jetcalc {
namespace acceptance {

struct Config {
  int m, n;
  int s, r;  // first-reduction jet orders used for this configuration
};

inline std::vector<Config> configurations() {
  // Orders are capped at 3 for the three-dimensional base to keep the full
  // battery within the runtime budget; both two-dimensional configurations
  // run at order 4.
  return {{2, 1, 4, 4}, {2, 2, 4, 4}, {3, 2, 3, 3}};
}

/// Pinned negative-control seeds: deterministic "generically nonzero"
/// outcomes. The committed manifest (tests/negative_controls.txt) lists the
/// same entries; the unit suite cross-checks the two.
struct NegativeControl {
  std::string kind;
  int m, n, k;
  unsigned long long seed;
  std::string expected;
};

inline std::vector<NegativeControl> pinnedNegativeControls() {
  return {
      {"nonnatural-first", 2, 1, 2, 11, "unequal"},
      {"nonnatural-first", 2, 2, 2, 12, "unequal"},
      {"nonnatural-first", 3, 2, 2, 13, "unequal"},
      {"nonnatural-second", 2, 1, 1, 21, "unequal"},
      {"nonnatural-second", 2, 2, 1, 22, "unequal"},
      {"nonnatural-second", 3, 2, 1, 23, "unequal"},
      // The cyclic identity is vacuous for m = 2 (three antisymmetrized
      // base indices), so these controls live on the 3-dimensional base.
      {"bianchi-random-tensor", 3, 1, 0, 31, "nonzero"},
      {"bianchi-random-tensor", 3, 2, 0, 32, "nonzero"},
      {"bianchi-random-tensor", 3, 2, 0, 33, "nonzero"},
      {"nonnatural-equivariance", 2, 2, 2, 41, "unequal"},
  };
}

namespace detail {

inline RTensor randomField(int m, int n, const std::vector<SlotKind>& slots, int order,
                           RandomGen& rng, int bound) {
  return randomTensor(m, n, slots, order, rng, bound);
}

inline std::vector<std::vector<SlotKind>> fieldValences() {
  return {{SlotKind::FiberUp},
          {SlotKind::FiberDown, SlotKind::BaseDown},
          {SlotKind::FiberUp, SlotKind::FiberDown}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Criterion 1: series kernel laws and inversion round trips.
inline bool criterionSeriesKernel() {
  bool ok = true;
  for (int m : {2, 3}) {
    RandomGen rng(100 + m);
    for (int sample = 0; sample < 20 && ok; ++sample) {
      RSeries a = randomSeries(m, 3, rng, 4);
      RSeries b = randomSeries(m, 3, rng, 4);
      RSeries c = randomSeries(m, 3, rng, 4);
      ok = ok && ((a + b) + c == a + (b + c));
      ok = ok && ((a * b) * c == a * (b * c));
      ok = ok && (a * (b + c) == a * b + a * c);
      // Leibniz rule at the reduced trust order.
      ok = ok && ((a * b).partial(0) ==
                  a.partial(0) * b.truncated(2) + a.truncated(2) * b.partial(0));
      // Diffeomorphism inversion round trip.
      WGroupElement g = randomGroupElement(m, 1, 3, 0, rng, 3);
      auto inv = invertDiffeo(g.base.comp);
      auto round = composeMap(g.base.comp, inv);
      auto id = identityMap<Rational>(m, 3);
      for (int ax = 0; ax < m; ++ax) ok = ok && (round[ax] == id[ax]);
      // Chain rule: differentiate the composite vs compose-and-chain.
      std::vector<RSeries> inner = g.base.comp;
      RSeries composite = RSeries::compose(a, inner);
      RSeries lhs = composite.partial(0);
      RSeries rhs(m, 2);
      std::vector<RSeries> innerLow;
      for (const auto& s : inner) innerLow.push_back(s.truncated(2));
      for (int j = 0; j < m; ++j)
        rhs += RSeries::compose(a.partial(j), innerLow) * inner[j].partial(0);
      ok = ok && (lhs == rhs);
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 2: group laws and left-action laws at orders <= 4.
inline bool criterionGroupLaws() {
  bool ok = true;
  for (const Config& cfg : configurations()) {
    RandomGen rng(200 + cfg.m * 10 + cfg.n);
    for (int sample = 0; sample < 20 && ok; ++sample) {
      WGroupElement g1 = randomGroupElement(cfg.m, cfg.n, 4, 4, rng, 2);
      WGroupElement g2 = randomGroupElement(cfg.m, cfg.n, 4, 4, rng, 2);
      WGroupElement g3 = randomGroupElement(cfg.m, cfg.n, 4, 4, rng, 2);
      ok = ok && (groupMul(groupMul(g1, g2), g3) == groupMul(g1, groupMul(g2, g3)));
      ok = ok && (groupMul(g1, groupInv(g1)) == WGroupElement::identity(cfg.m, cfg.n, 4, 4));
      ok = ok && (groupInv(groupInv(g1)) == g1);
      RTensor lam = randomClassical(cfg.m, 2, rng, 2);
      ok = ok && (actOnClassical(groupMul(g1, g2), lam) ==
                  actOnClassical(g1, actOnClassical(g2, lam)));
      RTensor kjet = randomLinear(cfg.m, cfg.n, 3, rng, 2);
      ok = ok && (actOnLinear(groupMul(g1, g2), kjet) ==
                  actOnLinear(g1, actOnLinear(g2, kjet)));
      RTensor phi = randomTensor(cfg.m, cfg.n,
                                 {SlotKind::FiberUp, SlotKind::BaseDown}, 3, rng, 2);
      ok = ok && (actOnTensor(groupMul(g1, g2), phi) ==
                  actOnTensor(g1, actOnTensor(g2, phi)));
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 3: kernel-action convention gate. An elementary kernel element
// shifts exactly the top jet coordinates, by the group element's own top
// coordinate on the merged derivative multiset; all lower coordinates are
// untouched.
inline bool criterionConventionGate() {
  bool ok = true;
  for (const Config& cfg : configurations()) {
    int m = cfg.m, n = cfg.n;
    RandomGen rng(300 + m * 10 + n);
    for (int r : {1, 2}) {
      // Gauge kernel of order r+1 acting on a linear connection jet.
      WGroupElement e = WGroupElement::identity(m, n, r + 2, r + 1);
      for (int i = 0; i < n * n; ++i)
        for (auto& c : e.gauge.a[i].coeffsOfDegree(r + 1)) c = rng.rational(3);
      RTensor kjet = randomLinear(m, n, r, rng, 3);
      RTensor kb = actOnLinear(e, kjet);
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j)
          for (int l = 0; l < m && ok; ++l)
            for (int d = 0; d <= r && ok; ++d)
              for (const auto& v : allMultisets(m, d)) {
                MultiIndex mi(v);
                Rational shift =
                    kb.jetCoordinate({i, j, l}, mi) - kjet.jetCoordinate({i, j, l}, mi);
                Rational expect = 0;
                if (d == r) {
                  std::vector<int> merged = v;
                  merged.push_back(l);
                  expect = e.gauge.jetCoordinate(i, j, MultiIndex(merged));
                }
                if (shift != expect) {
                  ok = false;
                  break;
                }
              }
    }
    for (int s : {0, 1}) {
      // Base kernel of order s+2 acting on a classical connection jet.
      WGroupElement e = WGroupElement::identity(m, n, s + 2, s + 2);
      for (int l = 0; l < m; ++l)
        for (auto& c : e.base.comp[l].coeffsOfDegree(s + 2)) c = rng.rational(3);
      RTensor lam = randomClassical(m, s, rng, 3);
      RTensor lb = actOnClassical(e, lam);
      for (int l = 0; l < m && ok; ++l)
        for (int mu = 0; mu < m && ok; ++mu)
          for (int nu = 0; nu < m && ok; ++nu)
            for (int d = 0; d <= s && ok; ++d)
              for (const auto& v : allMultisets(m, d)) {
                MultiIndex mi(v);
                Rational shift = lb.jetCoordinate({l, mu, nu}, mi) -
                                 lam.jetCoordinate({l, mu, nu}, mi);
                Rational expect = 0;
                if (d == s) {
                  std::vector<int> merged = v;
                  merged.push_back(mu);
                  merged.push_back(nu);
                  expect = e.base.jetCoordinate(l, MultiIndex(merged));
                }
                if (shift != expect) {
                  ok = false;
                  break;
                }
              }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 4: Bianchi and Ricci identity suite, plus the explicit
// curvature-action display checked against the engine term by term.
inline bool criterionIdentities() {
  bool ok = true;
  for (const Config& cfg : configurations()) {
    int m = cfg.m, n = cfg.n;
    int ord = (m == 2) ? 4 : 3;
    RandomGen rng(400 + m * 10 + n);
    RTensor lam = randomClassical(m, ord, rng, 3);
    RTensor kjet = randomLinear(m, n, ord, rng, 3);
    RTensor w = curvatureClassical(lam);
    ok = ok && bianchiFirstClassicalResidual(w).isZero();
    ok = ok && bianchiSecondClassicalResidual(
                   covariantDifferential(w, static_cast<const RTensor*>(nullptr), &lam))
                   .isZero();
    RTensor u = curvatureLinear(kjet);
    ok = ok && bianchiGeneralizedLinearResidual(covariantDifferential(u, &kjet, &lam))
                   .isZero();
    std::vector<std::vector<SlotKind>> valences = {
        {SlotKind::FiberUp},
        {SlotKind::FiberDown, SlotKind::BaseDown},
        {SlotKind::FiberUp, SlotKind::FiberDown},
        {SlotKind::BaseUp, SlotKind::BaseDown},
        {SlotKind::BaseDown, SlotKind::BaseDown},
        {SlotKind::FiberUp, SlotKind::FiberDown, SlotKind::BaseDown}};
    for (const auto& slots : valences) {
      RTensor phi = randomTensor(m, n, slots, ord, rng, 2);
      ok = ok && ricciIdentityResidual(phi, &kjet, &lam).isZero();
    }
    // Explicit four-term display of the curvature action on the linear
    // curvature field itself, compared against the engine's slot-wise sum.
    RTensor engine = curvatureAction(u, &u, &w);
    RTensor hand(m, n, engine.slots(), engine.order());
    int o = engine.order();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < m; ++l)
          for (int mu = 0; mu < m; ++mu)
            for (int n1 = 0; n1 < m; ++n1)
              for (int n2 = 0; n2 < m; ++n2) {
                RSeries s(m, o);
                for (int p = 0; p < n; ++p)
                  s += u.at({i, p, n1, n2}).truncated(o) * u.at({p, j, l, mu}).truncated(o) -
                       u.at({p, j, n1, n2}).truncated(o) * u.at({i, p, l, mu}).truncated(o);
                for (int rho = 0; rho < m; ++rho)
                  s -= w.at({rho, l, n1, n2}).truncated(o) *
                           u.at({i, j, rho, mu}).truncated(o) +
                       w.at({rho, mu, n1, n2}).truncated(o) *
                           u.at({i, j, l, rho}).truncated(o);
                hand.at({i, j, l, mu, n1, n2}) = s;
              }
    ok = ok && (engine == hand);
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: equivariance of the formal curvature maps (orders i <= 3)
// and of the iterated covariant differential, under 10 random group
// elements per configuration.
inline bool criterionEquivariance() {
  bool ok = true;
  for (const Config& cfg : configurations()) {
    int m = cfg.m, n = cfg.n;
    int iMax = 3;
    int jetOrd = iMax + 1;
    RandomGen rng(500 + m * 10 + n);
    RTensor lam = randomClassical(m, jetOrd, rng, 2);
    RTensor kjet = randomLinear(m, n, jetOrd, rng, 2);
    RTensor phi = randomTensor(m, n, {SlotKind::FiberUp, SlotKind::BaseDown}, 2, rng, 2);
    for (int trial = 0; trial < 10 && ok; ++trial) {
      WGroupElement g = randomGroupElement(m, n, jetOrd + 2, jetOrd + 2, rng, 2);
      RTensor lamG = actOnClassical(g, lam);
      RTensor kG = actOnLinear(g, kjet);
      RTensor phiG = actOnTensor(g, phi).projected(2);
      for (int i = 0; i <= iMax && ok; ++i) {
        RTensor lhsC = formalCurvatureClassical(lamG.projected(i + 1), i);
        RTensor rhsC = actOnTensor(g, formalCurvatureClassical(lam.projected(i + 1), i));
        ok = ok && (lhsC == rhsC);
        const RTensor* lamArg = i >= 1 ? &lam : nullptr;
        const RTensor* lamGArg = i >= 1 ? &lamG : nullptr;
        RTensor lhsL = formalCurvatureLinear(lamGArg, kG.projected(i + 1), i);
        RTensor rhsL =
            actOnTensor(g, formalCurvatureLinear(lamArg, kjet.projected(i + 1), i));
        ok = ok && (lhsL == rhsL);
      }
      // Iterated covariant differential of a field, at the origin.
      RTensor lhsD =
          iteratedCovariantDifferential(phiG, &kG, &lamG, 2).originData();
      RTensor rhsD = actOnTensor(
          g, iteratedCovariantDifferential(phi, &kjet, &lam, 2).originData());
      ok = ok && (lhsD == rhsD);
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: first reduction battery.
inline bool criterionFirstReduction() {
  bool ok = true;
  auto ops = builtinOperators();
  for (const Config& cfg : configurations()) {
    int m = cfg.m, n = cfg.n, s = cfg.s, r = cfg.r;
    for (int k = 1; k <= 3 && ok; ++k) {
      for (int sample = 0; sample < 20 && ok; ++sample) {
        RandomGen rng(600 + m * 100 + n * 10 + k + sample * 1000);
        RTensor lam = randomClassical(m, s, rng, 3);
        RTensor kjet = randomLinear(m, n, r, rng, 3);
        ReducedFirst d = reduceFirst(lam, kjet, k);
        // (b) reconstruct-reduce round trip.
        auto [rl, rk] = reconstructFirst(d);
        ok = ok && (reduceFirst(rl, rk, k) == d);
        // (a) kernel invariance: 10 kernel elements spread over samples.
        if (sample < 10) {
          WGroupElement h =
              makeKernelElement(m, n, s + 2, r + 1, k, rng, 2, r + 1, r + 1);
          RTensor lamH = actOnClassical(h, lam).projected(s);
          RTensor kH = actOnLinear(h, kjet).projected(r);
          ok = ok && (reduceFirst(lamH, kH, k) == d);
          // (c) orbit solver on the constructed same-orbit pair.
          if (sample < 5) ok = ok && orbitSolve(lam, kjet, lamH, kH, k).has_value();
        }
        // (d) factorization for the natural operators.
        if (sample < 3) {
          for (const auto& op : ops) {
            if (!op.natural || op.phiUse >= 0) continue;
            if (op.sUse > s || op.rUse > r) continue;
            ok = ok && factorizationCheckFirst(op, lam, kjet, k).equal;
          }
        }
      }
      // Orbit solver failure direction: independent pairs have distinct
      // reduced data on these seeds.
      RandomGen rngA(650 + m * 100 + n * 10 + k), rngB(651 + m * 100 + n * 10 + k);
      RTensor lamA = randomClassical(m, s, rngA, 3), kA = randomLinear(m, n, r, rngA, 3);
      RTensor lamB = randomClassical(m, s, rngB, 3), kB = randomLinear(m, n, r, rngB, 3);
      ok = ok && !orbitSolve(lamA, kA, lamB, kB, k).has_value();
    }
    // s = r-2 profile with zero-prolonged kernel elements (cheap dimensions).
    if (m == 2) {
      int s2 = r - 2;
      for (int k = 1; k <= 2 && ok; ++k) {
        RandomGen rng(680 + n * 10 + k);
        RTensor lam = randomClassical(m, s2, rng, 3);
        RTensor kjet = randomLinear(m, n, r, rng, 3);
        ReducedFirst d = reduceFirst(lam, kjet, k);
        auto [rl, rk] = reconstructFirst(d);
        ok = ok && (reduceFirst(rl, rk, k) == d);
        WGroupElement h =
            makeKernelElement(m, n, s2 + 2, r + 1, k, rng, 2, r + 1, r + 1);
        RTensor lamH = actOnClassical(h, lam).projected(s2);
        RTensor kH = actOnLinear(h, kjet).projected(r);
        ok = ok && (reduceFirst(lamH, kH, k) == d);
        ok = ok && orbitSolve(lam, kjet, lamH, kH, k).has_value();
      }
    }
  }
  // (e) the non-natural probe fails factorization on every pinned seed.
  const SampleOperator& probe = findOperator(ops, "rawK111d11");
  for (const auto& nc : pinnedNegativeControls()) {
    if (nc.kind != "nonnatural-first") continue;
    RandomGen rng(nc.seed);
    int s = (nc.m == 2) ? 4 : 3, r = s;
    RTensor lam = randomClassical(nc.m, s, rng, 3);
    RTensor kjet = randomLinear(nc.m, nc.n, r, rng, 3);
    ok = ok && !factorizationCheckFirst(probe, lam, kjet, nc.k).equal;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 7: second reduction battery with tensor fields, mixed orders,
// and Ricci-equation residual gates.
inline bool criterionSecondReduction() {
  bool ok = true;
  auto ops = builtinOperators();
  for (const Config& cfg : configurations()) {
    int m = cfg.m, n = cfg.n;
    int s1 = (m == 2) ? 3 : 2;
    int s2 = (m == 2) ? 2 : 2;  // mixed orders s1 != s2 on the 2d base
    int r = 2;
    auto valences = detail::fieldValences();
    for (std::size_t vi = 0; vi < valences.size(); ++vi) {
      const auto& slots = valences[vi];
      for (int k = 1; k <= std::min(3, r + 1) && ok; ++k) {
        for (int sample = 0; sample < 20 && ok; ++sample) {
          RandomGen rng(700 + m * 100 + n * 10 + k + sample * 1000 +
                        static_cast<int>(vi) * 37);
          RTensor lam = randomClassical(m, s1, rng, 2);
          RTensor kjet = randomLinear(m, n, s2, rng, 2);
          RTensor phi = randomTensor(m, n, slots, r, rng, 2);
          ReducedSecond d = reduceSecond(lam, kjet, phi, k);
          auto [rl, rk, rp] = reconstructSecond(d);
          ok = ok && (reduceSecond(rl, rk, rp, k) == d);
          RicciReport rep = ricciEquationResiduals(d);
          ok = ok && rep.reconstructible && rep.allZero;
          if (sample < 5) {
            // Kernel invariance with profile (s1+2 base, s2+1 gauge).
            WGroupElement h =
                makeKernelElement(m, n, s1 + 2, s2 + 1, k, rng, 2, r + 1, r + 1);
            RTensor lamH = actOnClassical(h, lam).projected(s1);
            RTensor kH = actOnLinear(h, kjet).projected(s2);
            RTensor phiH = actOnTensor(h, phi).projected(r);
            ok = ok && (reduceSecond(lamH, kH, phiH, k) == d);
            // Single-coordinate perturbation of the top field differential
            // is detected (non-membership or nonzero residual). Perturb a
            // mixed-derivative coordinate: it violates the Ricci-identity
            // dependency among the differential's components.
            if (!d.vList.empty() && d.vList.back().slotCount() >= 2) {
              ReducedSecond bad = d;
              std::vector<int> pidx(bad.vList.back().slotCount(), 0);
              pidx.back() = 1;
              bad.vList.back().at(pidx) += RSeries::constant(m, 0, Rational(1));
              RicciReport repBad = ricciEquationResiduals(bad);
              ok = ok && !(repBad.reconstructible && repBad.allZero);
            }
            // Factorization for the field-consuming natural operators.
            for (const auto& op : ops) {
              if (!op.natural || op.phiUse < 0) continue;
              if (op.sUse > s1 || op.rUse > s2 || op.phiUse > r) continue;
              ok = ok && factorizationCheckSecond(op, lam, kjet, phi, k).equal;
            }
          }
        }
      }
    }
  }
  // Non-natural field probe fails on every pinned seed.
  const SampleOperator& probe = findOperator(ops, "rawPhi1d1");
  for (const auto& nc : pinnedNegativeControls()) {
    if (nc.kind != "nonnatural-second") continue;
    RandomGen rng(nc.seed);
    RTensor lam = randomClassical(nc.m, 2, rng, 2);
    RTensor kjet = randomLinear(nc.m, nc.n, 2, rng, 2);
    RTensor phi = randomTensor(nc.m, nc.n, {SlotKind::FiberUp}, 2, rng, 2);
    ok = ok && !factorizationCheckSecond(probe, lam, kjet, phi, nc.k).equal;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 8: affine-solvability trace — every reconstruction system is
// square and uniquely solvable (rank = unknown count) at every order.
inline bool criterionSolverTrace() {
  bool ok = true;
  for (const Config& cfg : configurations()) {
    int m = cfg.m, n = cfg.n, s = cfg.s, r = cfg.r;
    for (int k = 1; k <= 3 && ok; ++k) {
      RandomGen rng(800 + m * 100 + n * 10 + k);
      RTensor lam = randomClassical(m, s, rng, 3);
      RTensor kjet = randomLinear(m, n, r, rng, 3);
      std::vector<SolveReport> reports;
      reconstructFirst(reduceFirst(lam, kjet, k), &reports);
      ok = ok && !reports.empty();
      for (const auto& rep : reports)
        ok = ok && rep.rank == rep.unknowns && rep.consistent;
      RTensor phi = randomTensor(m, n, {SlotKind::FiberUp, SlotKind::BaseDown}, 2, rng, 2);
      std::vector<SolveReport> reports2;
      reconstructSecond(reduceSecond(lam.projected(2), kjet.projected(2), phi, k),
                        &reports2);
      ok = ok && !reports2.empty();
      for (const auto& rep : reports2)
        ok = ok && rep.rank == rep.unknowns && rep.consistent;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
inline bool runSuite(std::ostream& out) {
  struct Entry {
    const char* label;
    bool (*fn)();
  };
  const Entry entries[] = {
      {"1 series kernel laws and inversion round trips", &criterionSeriesKernel},
      {"2 group laws and left-action laws", &criterionGroupLaws},
      {"3 kernel-action convention gate", &criterionConventionGate},
      {"4 Bianchi/Ricci identity suite with explicit display", &criterionIdentities},
      {"5 equivariance of curvature maps and differentials", &criterionEquivariance},
      {"6 first reduction battery", &criterionFirstReduction},
      {"7 second reduction battery with tensor fields", &criterionSecondReduction},
      {"8 affine-solvability trace (rank = unknowns)", &criterionSolverTrace},
  };
  bool all = true;
  for (const Entry& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = e.fn();
    auto t1 = std::chrono::steady_clock::now();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    out << (pass ? "PASS" : "FAIL") << " criterion " << e.label << " [" << ms << " ms]"
        << std::endl;
    all = all && pass;
  }
  return all;
}

}  // namespace acceptance
}  // namespace jetcalc
