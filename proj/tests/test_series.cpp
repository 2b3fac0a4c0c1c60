#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jetcalc/random.hpp"
#include "jetcalc/group.hpp"

using namespace jetcalc;

namespace {
MultiIndex mi(std::vector<int> labels) { return MultiIndex(std::move(labels)); }
}

TEST_CASE("hand-checked arithmetic") {
  // (1/2 x1) * (5/3 x1) = 5/6 x1^2
  RSeries a(2, 2), b(2, 2);
  a.setCoeff({1, 0}, Rational(1, 2));
  b.setCoeff({1, 0}, Rational(5, 3));
  RSeries p = a * b;
  CHECK(p.coeff({2, 0}) == Rational(5, 6));
  CHECK(p.coeff({1, 0}) == 0);
  CHECK(p.coeff({0, 0}) == 0);

  // distributive hand check: (x1 + x2)^2 = x1^2 + 2 x1 x2 + x2^2
  RSeries s = RSeries::variable(2, 2, 0) + RSeries::variable(2, 2, 1);
  RSeries sq = s * s;
  CHECK(sq.coeff({2, 0}) == 1);
  CHECK(sq.coeff({1, 1}) == 2);
  CHECK(sq.coeff({0, 2}) == 1);
}

TEST_CASE("jet coordinates carry the multiplicity factorial") {
  // series (1/2) x1^2: the jet coordinate on the multiset {1,1} is
  // coefficient * 2! = 1 (Taylor convention).
  RSeries f(1, 2);
  f.setCoeff({2}, Rational(1, 2));
  CHECK(f.jetCoordinate(mi({0, 0})) == 1);
  RSeries g(1, 2);
  g.setJetCoordinate(mi({0, 0}), Rational(1));
  CHECK(g == f);
}

TEST_CASE("inversion hand examples") {
  // invert x + x^2 at order 2: x - x^2
  RSeries f = RSeries::variable(1, 2, 0);
  f.setCoeff({2}, Rational(1));
  auto inv = invertDiffeo({f});
  CHECK(inv[0].coeff({1}) == 1);
  CHECK(inv[0].coeff({2}) == -1);

  // invert 2x: x/2
  RSeries g = RSeries::variable(1, 2, 0).scaled(Rational(2));
  auto ginv = invertDiffeo({g});
  CHECK(ginv[0].coeff({1}) == Rational(1, 2));
  CHECK(ginv[0].coeff({2}) == 0);
}

TEST_CASE("matrix series inversion") {
  // 1/(1+x) = 1 - x + x^2 at order 2 (n = 1 geometric series)
  RSeries f = RSeries::constant(1, 2, Rational(1)) + RSeries::variable(1, 2, 0);
  auto inv = matrixSeriesInverse<Rational>({f}, 1);
  CHECK(inv[0].coeff({0}) == 1);
  CHECK(inv[0].coeff({1}) == -1);
  CHECK(inv[0].coeff({2}) == 1);

  // diag(2,3) constant matrix
  auto d = inverseRationalMatrix({Rational(2), Rational(0), Rational(0), Rational(3)}, 2);
  CHECK(d[0] == Rational(1, 2));
  CHECK(d[3] == Rational(1, 3));
  CHECK(d[1] == 0);
  CHECK(d[2] == 0);
}

TEST_CASE("ring and calculus laws on random series") {
  for (int m : {1, 2, 3}) {
    RandomGen rng(40 + m);
    for (int t = 0; t < 10; ++t) {
      RSeries a = randomSeries(m, 3, rng, 4);
      RSeries b = randomSeries(m, 3, rng, 4);
      RSeries c = randomSeries(m, 3, rng, 4);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      CHECK(a * (b + c) == a * b + a * c);
      // Leibniz at the reduced trust order
      CHECK((a * b).partial(0) ==
            a.partial(0) * b.truncated(2) + a.truncated(2) * b.partial(0));
    }
  }
}

TEST_CASE("chain rule through composition") {
  RandomGen rng(77);
  for (int t = 0; t < 5; ++t) {
    int m = 2;
    RSeries f = randomSeries(m, 3, rng, 3);
    WGroupElement g = randomGroupElement(m, 1, 3, 0, rng, 3);
    const auto& inner = g.base.comp;
    RSeries lhs = RSeries::compose(f, inner).partial(1);
    std::vector<RSeries> innerLow;
    for (const auto& s : inner) innerLow.push_back(s.truncated(2));
    RSeries rhs(m, 2);
    for (int j = 0; j < m; ++j)
      rhs += RSeries::compose(f.partial(j), innerLow) * inner[j].partial(1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("seeded diffeomorphism inversion round trips") {
  for (int m : {2, 3}) {
    RandomGen rng(90 + m);
    for (int t = 0; t < 20; ++t) {
      WGroupElement g = randomGroupElement(m, 1, 4, 0, rng, 3);
      auto round = composeMap(g.base.comp, invertDiffeo(g.base.comp));
      auto id = identityMap<Rational>(m, 4);
      for (int ax = 0; ax < m; ++ax) CHECK(round[ax] == id[ax]);
    }
  }
}

TEST_CASE("trust-order bookkeeping") {
  RandomGen rng(7);
  RSeries a = randomSeries(2, 3, rng, 3);
  RSeries b = randomSeries(2, 2, rng, 3);
  CHECK((a * b).order() == 2);
  CHECK((a + a).order() == 3);
  CHECK(a.partial(0).order() == 2);
  CHECK(a.truncated(1).order() == 1);
  // extending as a polynomial re-reads the same coefficients
  CHECK(a.truncated(2).extendedAsPolynomial(3).truncated(2) == a.truncated(2));
}
