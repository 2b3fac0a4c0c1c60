#pragma once

#include <cstdint>
#include <random>

#include "jetcalc/connections.hpp"

namespace jetcalc {

/// Deterministic rational sampler; identical seeds give identical streams on
/// every platform (std::mt19937_64 with explicit distributions avoided in
/// favor of modular reduction, which is implementation-independent).
class RandomGen {
 public:
  explicit RandomGen(std::uint64_t seed) : eng_(seed) {}

  /// Rational with |numerator| <= bound and 1 <= denominator <= bound;
  /// bound 0 gives exactly zero.
  Rational rational(int bound) {
    if (bound <= 0) return Rational(0);
    std::int64_t num =
        static_cast<std::int64_t>(eng_() % (2 * static_cast<std::uint64_t>(bound) + 1)) -
        bound;
    std::int64_t den = static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(bound)) + 1;
    return Rational(num) / Rational(den);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline RSeries randomSeries(int m, int order, RandomGen& rng, int bound) {
  RSeries s(m, order);
  for (int d = 0; d <= order; ++d)
    for (auto& c : s.coeffsOfDegree(d)) c = rng.rational(bound);
  return s;
}

/// Random classical connection jet; the mu-nu symmetry is imposed by
/// symmetrization after sampling.
inline RTensor randomClassical(int m, int order, RandomGen& rng, int bound) {
  RTensor lam = classicalZero<Rational>(m, order);
  for (int c = 0; c < lam.componentCount(); ++c)
    lam.atFlat(c) = randomSeries(m, order, rng, bound);
  return lam.symmetrizedOver({1, 2}, false);
}

inline RTensor randomLinear(int m, int n, int order, RandomGen& rng, int bound) {
  RTensor k = linearZero<Rational>(m, n, order);
  for (int c = 0; c < k.componentCount(); ++c)
    k.atFlat(c) = randomSeries(m, order, rng, bound);
  return k;
}

/// Random tensor jet with the given slot layout; declared symmetries are
/// imposed by symmetrization after sampling.
inline RTensor randomTensor(int m, int n, const std::vector<SlotKind>& slots, int order,
                            RandomGen& rng, int bound,
                            const std::vector<SlotSym>& syms = {}) {
  RTensor t(m, n, slots, order, syms);
  for (int c = 0; c < t.componentCount(); ++c)
    t.atFlat(c) = randomSeries(m, order, rng, bound);
  for (const auto& g : syms) t = t.symmetrizedOver(g.slots, g.anti);
  return t;
}

}  // namespace jetcalc
