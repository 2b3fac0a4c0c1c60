#pragma once

#include <utility>
#include <vector>

#include "jetcalc/rational.hpp"

namespace jetcalc {

/// Scalar that is affine in a set of formal unknowns: value + sum c_i * x_i.
///
/// Products of two unknown-carrying scalars drop the quadratic part. In the
/// reconstruction solves this is sound: an unknown-carrying monomial
/// coefficient sits at degree >= the top jet order, so a product of two of
/// them sits at a degree the remaining derivative budget can never bring
/// back to the origin; the values actually read off are affine.
class AffineScalar {
 public:
  AffineScalar() = default;
  AffineScalar(int v) : c_(v) {}  // NOLINT(google-explicit-constructor)
  AffineScalar(Rational v) : c_(std::move(v)) {}  // NOLINT

  static AffineScalar unknown(int id) {
    AffineScalar a;
    a.lin_.emplace_back(id, Rational(1));
    return a;
  }

  const Rational& value() const { return c_; }
  const std::vector<std::pair<int, Rational>>& linear() const { return lin_; }
  bool isZero() const { return c_ == 0 && lin_.empty(); }

  AffineScalar& operator+=(const AffineScalar& o) {
    c_ += o.c_;
    lin_ = merged(lin_, o.lin_, Rational(1));
    return *this;
  }
  AffineScalar& operator-=(const AffineScalar& o) {
    c_ -= o.c_;
    lin_ = merged(lin_, o.lin_, Rational(-1));
    return *this;
  }
  friend AffineScalar operator+(AffineScalar a, const AffineScalar& b) { return a += b; }
  friend AffineScalar operator-(AffineScalar a, const AffineScalar& b) { return a -= b; }
  friend AffineScalar operator-(const AffineScalar& a) {
    AffineScalar r;
    return r -= a;
  }
  friend AffineScalar operator*(const AffineScalar& a, const AffineScalar& b) {
    AffineScalar r;
    r.c_ = a.c_ * b.c_;
    if (!a.lin_.empty() && b.c_ != 0) r.lin_ = scaledTerms(a.lin_, b.c_);
    if (!b.lin_.empty() && a.c_ != 0)
      r.lin_ = merged(r.lin_, scaledTerms(b.lin_, a.c_), Rational(1));
    // a.lin_ x b.lin_ dropped (see class comment).
    return r;
  }
  friend bool operator==(const AffineScalar& a, const AffineScalar& b) {
    return a.c_ == b.c_ && a.lin_ == b.lin_;
  }

 private:
  static std::vector<std::pair<int, Rational>> scaledTerms(
      const std::vector<std::pair<int, Rational>>& t, const Rational& f) {
    std::vector<std::pair<int, Rational>> out;
    out.reserve(t.size());
    for (const auto& [id, c] : t) out.emplace_back(id, c * f);
    return out;
  }
  static std::vector<std::pair<int, Rational>> merged(
      const std::vector<std::pair<int, Rational>>& a,
      const std::vector<std::pair<int, Rational>>& b, const Rational& bf) {
    std::vector<std::pair<int, Rational>> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.emplace_back(b[j].first, b[j].second * bf);
        ++j;
      } else {
        Rational c = a[i].second + b[j].second * bf;
        if (c != 0) out.emplace_back(a[i].first, c);
        ++i;
        ++j;
      }
    }
    return out;
  }

  Rational c_ = 0;
  std::vector<std::pair<int, Rational>> lin_;  // sorted by unknown id
};

// Coefficient-ring helpers shared by the generic series/tensor code.
inline bool coefIsZero(const Rational& c) { return c == 0; }
inline bool coefIsZero(const AffineScalar& c) { return c.isZero(); }
inline Rational coefScale(const Rational& c, const Rational& f) { return c * f; }
inline AffineScalar coefScale(const AffineScalar& c, const Rational& f) {
  return c * AffineScalar(f);
}

}  // namespace jetcalc
