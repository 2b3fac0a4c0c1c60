#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "jetcalc/acceptance.hpp"

using namespace jetcalc;

namespace {
MultiIndex mi(std::vector<int> labels) { return MultiIndex(std::move(labels)); }
}

TEST_CASE("symmetrized classical part hand oracle") {
  // m = 2, single coordinate Lambda^1_{12,1} = 6 (with its mu-nu mirror):
  // on the multiset {1,1,2}, four of the six ordered pair draws hit the
  // coordinate, so the symmetrized value is 6 * 4/6 = 4.
  RTensor lam = classicalZero<Rational>(2, 1);
  lam.setJetCoordinate({0, 0, 1}, mi({0}), Rational(6));
  lam.setJetCoordinate({0, 1, 0}, mi({0}), Rational(6));
  REQUIRE(lam.auditSymmetries());
  auto sym = symmetrizedClassicalPart(lam, 1);
  // positions: lambda * |multisets(2,3)| + index of {1,1,2} in lex order
  auto multis = allMultisets(2, 3);
  REQUIRE(multis.size() == 4);
  CHECK(sym[0 * 4 + 1] == 4);  // multiset {0,0,1}
  CHECK(sym[0 * 4 + 0] == 0);
  CHECK(sym[1 * 4 + 1] == 0);
}

TEST_CASE("first reduction round trips") {
  int m = 2, n = 1, s = 3, r = 3;
  for (int k = 1; k <= 3; ++k) {
    RandomGen rng(50 + k);
    for (int t = 0; t < 5; ++t) {
      RTensor lam = randomClassical(m, s, rng, 3);
      RTensor kjet = randomLinear(m, n, r, rng, 3);
      ReducedFirst d = reduceFirst(lam, kjet, k);
      auto [rl, rk] = reconstructFirst(d);
      CHECK(reduceFirst(rl, rk, k) == d);
    }
  }
}

TEST_CASE("reduced data is invariant under the kernel") {
  int m = 2, n = 2, s = 3, r = 3;
  for (int k = 1; k <= 2; ++k) {
    RandomGen rng(55 + k);
    RTensor lam = randomClassical(m, s, rng, 3);
    RTensor kjet = randomLinear(m, n, r, rng, 3);
    ReducedFirst d = reduceFirst(lam, kjet, k);
    for (int t = 0; t < 5; ++t) {
      WGroupElement h = makeKernelElement(m, n, s + 2, r + 1, k, rng, 2, r + 1, r + 1);
      RTensor lamH = actOnClassical(h, lam).projected(s);
      RTensor kH = actOnLinear(h, kjet).projected(r);
      CHECK(reduceFirst(lamH, kH, k) == d);
    }
  }
}

TEST_CASE("orbit solver") {
  int m = 2, n = 1, s = 2, r = 2, k = 1;
  RandomGen rng(58);
  RTensor lam = randomClassical(m, s, rng, 3);
  RTensor kjet = randomLinear(m, n, r, rng, 3);

  // equal pairs: the solver returns the identity kernel element
  auto same = orbitSolve(lam, kjet, lam, kjet, k);
  REQUIRE(same.has_value());
  CHECK(*same == WGroupElement::identity(m, n, same->base.order, same->gauge.order));

  // constructed same-orbit pair: a kernel element is recovered and verified
  WGroupElement h = makeKernelElement(m, n, s + 2, r + 1, k, rng, 2, r + 1, r + 1);
  RTensor lamH = actOnClassical(h, lam).projected(s);
  RTensor kH = actOnLinear(h, kjet).projected(r);
  auto sol = orbitSolve(lam, kjet, lamH, kH, k);
  REQUIRE(sol.has_value());
  CHECK(actOnClassical(*sol, lamH).projected(s) == lam);
  CHECK(actOnLinear(*sol, kH).projected(r) == kjet);

  // distinct reduced data: no solution
  RTensor lam2 = lam;
  lam2.setJetCoordinate({0, 0, 1}, mi({}), lam.jetCoordinate({0, 0, 1}, mi({})) + 1);
  lam2.setJetCoordinate({0, 1, 0}, mi({}), lam.jetCoordinate({0, 1, 0}, mi({})) + 1);
  CHECK_FALSE(orbitSolve(lam, kjet, lam2, kjet, k).has_value());
}

TEST_CASE("boundary profile with empty curvature lists") {
  // s = k-2, r = k-1: the reduced data is carried entirely by the low jets.
  int m = 2, n = 2, k = 2, s = 0, r = 1;
  RandomGen rng(59);
  RTensor lam = randomClassical(m, s, rng, 3);
  RTensor kjet = randomLinear(m, n, r, rng, 3);
  ReducedFirst d = reduceFirst(lam, kjet, k);
  CHECK(d.wList.empty());
  CHECK(d.uList.empty());
  auto [rl, rk] = reconstructFirst(d);
  CHECK(reduceFirst(rl, rk, k) == d);
  CHECK(rl == lam);
  CHECK(rk == kjet);
}

TEST_CASE("curvature-space membership") {
  int m = 2, n = 1, s = 2, r = 2, k = 1;
  RandomGen rng(60);
  RTensor lam = randomClassical(m, s, rng, 3);
  RTensor kjet = randomLinear(m, n, r, rng, 3);
  ReducedFirst d = reduceFirst(lam, kjet, k);
  CHECK(cSpaceMembership(d).member);

  // breaking the antisymmetry of a curvature entry leaves the subspace
  ReducedFirst bad = d;
  REQUIRE(!bad.uList.empty());
  RTensor& u = bad.uList.back();
  std::vector<int> idx(u.slotCount(), 0);
  idx[u.slotCount() - 1] = 1;  // mixed derivative pair (1,2)
  u.setJetCoordinate(idx, mi({}), u.jetCoordinate(idx, mi({})) + 1);
  MembershipReport rep = cSpaceMembership(bad);
  CHECK_FALSE(rep.member);
  CHECK(rep.failOrder >= 0);
}

TEST_CASE("second reduction: Ricci residuals and perturbation detection") {
  int m = 2, n = 1, s1 = 2, s2 = 2, r = 2, k = 1;
  RandomGen rng(61);
  RTensor lam = randomClassical(m, s1, rng, 2);
  RTensor kjet = randomLinear(m, n, s2, rng, 2);
  RTensor phi = randomTensor(m, n, {SlotKind::FiberUp}, r, rng, 2);
  ReducedSecond d = reduceSecond(lam, kjet, phi, k);
  auto [rl, rk, rp] = reconstructSecond(d);
  CHECK(reduceSecond(rl, rk, rp, k) == d);
  RicciReport rep = ricciEquationResiduals(d);
  CHECK(rep.reconstructible);
  CHECK(rep.allZero);

  ReducedSecond bad = d;
  std::vector<int> pidx(bad.vList.back().slotCount(), 0);
  pidx.back() = 1;
  bad.vList.back().at(pidx) += RSeries::constant(m, 0, Rational(1));
  RicciReport repBad = ricciEquationResiduals(bad);
  bool detected = !(repBad.reconstructible && repBad.allZero);
  CHECK(detected);
}

TEST_CASE("factorization holds for natural operators") {
  int m = 2, n = 2, s = 3, r = 3, k = 2;
  RandomGen rng(62);
  RTensor lam = randomClassical(m, s, rng, 3);
  RTensor kjet = randomLinear(m, n, r, rng, 3);
  auto ops = builtinOperators();
  int checked = 0;
  for (const auto& op : ops) {
    if (!op.natural || op.phiUse >= 0) continue;
    CHECK(factorizationCheckFirst(op, lam, kjet, k).equal);
    ++checked;
  }
  CHECK(checked >= 5);
  RTensor phi = randomTensor(m, n, {SlotKind::FiberUp, SlotKind::BaseDown}, 2, rng, 2);
  for (const auto& op : ops) {
    if (!op.natural || op.phiUse < 0) continue;
    CHECK(factorizationCheckSecond(op, lam.projected(2), kjet.projected(2), phi, 1).equal);
  }
}

TEST_CASE("non-natural probes fail on the pinned seeds") {
  auto ops = builtinOperators();
  const SampleOperator& probeK = findOperator(ops, "rawK111d11");
  const SampleOperator& probePhi = findOperator(ops, "rawPhi1d1");
  for (const auto& nc : acceptance::pinnedNegativeControls()) {
    if (nc.kind == "nonnatural-first") {
      RandomGen rng(nc.seed);
      int s = (nc.m == 2) ? 4 : 3;
      RTensor lam = randomClassical(nc.m, s, rng, 3);
      RTensor kjet = randomLinear(nc.m, nc.n, s, rng, 3);
      CHECK_FALSE(factorizationCheckFirst(probeK, lam, kjet, nc.k).equal);
    } else if (nc.kind == "nonnatural-second") {
      RandomGen rng(nc.seed);
      RTensor lam = randomClassical(nc.m, 2, rng, 2);
      RTensor kjet = randomLinear(nc.m, nc.n, 2, rng, 2);
      RTensor phi = randomTensor(nc.m, nc.n, {SlotKind::FiberUp}, 2, rng, 2);
      CHECK_FALSE(factorizationCheckSecond(probePhi, lam, kjet, phi, nc.k).equal);
    } else if (nc.kind == "nonnatural-equivariance") {
      RandomGen rng(nc.seed);
      RTensor lam = randomClassical(nc.m, 2, rng, 2);
      RTensor kjet = randomLinear(nc.m, nc.n, 2, rng, 2);
      WGroupElement g = randomGroupElement(nc.m, nc.n, 4, 4, rng, 2);
      CHECK_FALSE(equivarianceCheck(probeK, lam, kjet, g).equal);
    }
  }
}

TEST_CASE("natural operators are equivariant") {
  int m = 2, n = 2;
  RandomGen rng(63);
  RTensor lam = randomClassical(m, 3, rng, 2);
  RTensor kjet = randomLinear(m, n, 3, rng, 2);
  RTensor phi = randomTensor(m, n, {SlotKind::FiberUp, SlotKind::BaseDown}, 2, rng, 2);
  WGroupElement g = randomGroupElement(m, n, 5, 5, rng, 2);
  auto ops = builtinOperators();
  for (const auto& op : ops) {
    if (!op.natural) continue;
    const RTensor* phiArg = op.phiUse >= 0 ? &phi : nullptr;
    CHECK(equivarianceCheck(op, lam, kjet, g, phiArg).equal);
  }
}

TEST_CASE("solver reports are square and consistent") {
  int m = 2, n = 2, s = 3, r = 3;
  for (int k = 1; k <= 3; ++k) {
    RandomGen rng(64 + k);
    RTensor lam = randomClassical(m, s, rng, 3);
    RTensor kjet = randomLinear(m, n, r, rng, 3);
    std::vector<SolveReport> reports;
    reconstructFirst(reduceFirst(lam, kjet, k), &reports);
    CHECK(!reports.empty());
    for (const auto& rep : reports) {
      CHECK(rep.rank == rep.unknowns);
      CHECK(rep.consistent);
    }
  }
}

#ifdef JETCALC_MANIFEST_PATH
TEST_CASE("committed manifest matches the built-in negative controls") {
  std::ifstream in(JETCALC_MANIFEST_PATH);
  REQUIRE(in.good());
  std::vector<acceptance::NegativeControl> fromFile;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    acceptance::NegativeControl nc;
    ss >> nc.kind >> nc.m >> nc.n >> nc.k >> nc.seed >> nc.expected;
    REQUIRE(!ss.fail());
    fromFile.push_back(nc);
  }
  auto builtin = acceptance::pinnedNegativeControls();
  REQUIRE(fromFile.size() == builtin.size());
  for (std::size_t i = 0; i < builtin.size(); ++i) {
    CHECK(fromFile[i].kind == builtin[i].kind);
    CHECK(fromFile[i].m == builtin[i].m);
    CHECK(fromFile[i].n == builtin[i].n);
    CHECK(fromFile[i].k == builtin[i].k);
    CHECK(fromFile[i].seed == builtin[i].seed);
    CHECK(fromFile[i].expected == builtin[i].expected);
  }
}
#endif
