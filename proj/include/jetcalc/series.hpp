#pragma once

#include <algorithm>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "jetcalc/affine.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/rational.hpp"

namespace jetcalc {

/// Multivariate power series over an exact coefficient ring, truncated at a
/// total degree ("trust order"). Coefficients are MONOMIAL coefficients; the
/// jet coordinate (partial-derivative value at 0) is coefficient times the
/// multiplicity factorial, and the conversion lives in jetCoordinate /
/// setJetCoordinate only.
///
/// Trust-order bookkeeping: every binary operation outputs the weakest trust
/// order of its inputs; a derivative subtracts one.
template <class C>
class Series {
 public:
  Series(int m, int order) : m_(m), order_(order) {
    if (m < 1) throw std::invalid_argument("series dimension must be >= 1");
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
    c_.resize(order + 1);
    for (int d = 0; d <= order; ++d) c_[d].resize(MonomialBasis::get(m, d).size());
  }

  static Series constant(int m, int order, C v) {
    Series s(m, order);
    s.c_[0][0] = std::move(v);
    return s;
  }
  static Series variable(int m, int order, int axis) {
    if (order < 1) throw std::invalid_argument("variable needs order >= 1");
    Series s(m, order);
    std::vector<int> e(m, 0);
    e[axis] = 1;
    s.c_[1][MonomialBasis::get(m, 1).indexOf(e)] = C(1);
    return s;
  }

  int dim() const { return m_; }
  int order() const { return order_; }

  const C& coeff(const std::vector<int>& exps) const {
    int d = degreeOf(exps);
    return c_[d][MonomialBasis::get(m_, d).indexOf(exps)];
  }
  void setCoeff(const std::vector<int>& exps, C v) {
    int d = degreeOf(exps);
    c_[d][MonomialBasis::get(m_, d).indexOf(exps)] = std::move(v);
  }
  void addCoeff(const std::vector<int>& exps, const C& v) {
    int d = degreeOf(exps);
    c_[d][MonomialBasis::get(m_, d).indexOf(exps)] += v;
  }

  C jetCoordinate(const MultiIndex& mi) const {
    if (mi.order() > order_)
      throw std::invalid_argument("jet coordinate beyond trust order");
    return coefScale(coeff(mi.toExponents(m_)), mi.multiplicityFactorial());
  }
  void setJetCoordinate(const MultiIndex& mi, const C& v) {
    setCoeff(mi.toExponents(m_), coefScale(v, Rational(1) / mi.multiplicityFactorial()));
  }

  const std::vector<C>& coeffsOfDegree(int d) const { return c_[d]; }
  std::vector<C>& coeffsOfDegree(int d) { return c_[d]; }

  Series truncated(int k) const {
    if (k > order_) throw std::invalid_argument("cannot raise trust order by truncation");
    Series out(m_, k);
    for (int d = 0; d <= k; ++d) out.c_[d] = c_[d];
    return out;
  }

  /// Exact trust-order extension: valid only when the series is known to be
  /// a polynomial representative (all higher coefficients genuinely zero).
  Series extendedAsPolynomial(int k) const {
    if (k < order_) return truncated(k);
    Series out(m_, k);
    for (int d = 0; d <= order_; ++d) out.c_[d] = c_[d];
    return out;
  }

  bool isZero() const {
    for (const auto& deg : c_)
      for (const auto& v : deg)
        if (!coefIsZero(v)) return false;
    return true;
  }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.m_ != b.m_ || a.order_ != b.order_) return false;
    return a.c_ == b.c_;
  }

  Series& operator+=(const Series& o) { return inplace(o, Rational(1)); }
  Series& operator-=(const Series& o) { return inplace(o, Rational(-1)); }
  friend Series operator+(const Series& a, const Series& b) {
    Series r = a.truncated(std::min(a.order_, b.order_));
    return r += b;
  }
  friend Series operator-(const Series& a, const Series& b) {
    Series r = a.truncated(std::min(a.order_, b.order_));
    return r -= b;
  }
  friend Series operator-(const Series& a) { return a.scaled(Rational(-1)); }

  Series scaled(const Rational& f) const {
    Series r = *this;
    for (auto& deg : r.c_)
      for (auto& v : deg) v = coefScale(v, f);
    return r;
  }
  template <class D = C, class = std::enable_if_t<!std::is_same_v<D, Rational>>>
  Series scaled(const D& f) const {
    Series r = *this;
    for (auto& deg : r.c_)
      for (auto& v : deg) v = v * f;
    return r;
  }

  friend Series operator*(const Series& a, const Series& b) {
    if (a.m_ != b.m_) throw std::invalid_argument("series dimension mismatch");
    int ord = std::min(a.order_, b.order_);
    Series r(a.m_, ord);
    for (int da = 0; da <= ord; ++da) {
      const auto& basisA = MonomialBasis::get(a.m_, da);
      for (int ia = 0; ia < basisA.size(); ++ia) {
        if (coefIsZero(a.c_[da][ia])) continue;
        const auto& ea = basisA.exponents(ia);
        for (int db = 0; db + da <= ord; ++db) {
          const auto& basisB = MonomialBasis::get(a.m_, db);
          const auto& basisR = MonomialBasis::get(a.m_, da + db);
          for (int ib = 0; ib < basisB.size(); ++ib) {
            if (coefIsZero(b.c_[db][ib])) continue;
            std::vector<int> e = ea;
            const auto& eb = basisB.exponents(ib);
            for (int ax = 0; ax < a.m_; ++ax) e[ax] += eb[ax];
            r.c_[da + db][basisR.indexOf(e)] += a.c_[da][ia] * b.c_[db][ib];
          }
        }
      }
    }
    return r;
  }

  /// Formal partial derivative; trust order drops by one.
  Series partial(int axis) const {
    if (order_ < 1) throw std::invalid_argument("cannot differentiate an order-0 series");
    Series r(m_, order_ - 1);
    for (int d = 1; d <= order_; ++d) {
      const auto& basis = MonomialBasis::get(m_, d);
      const auto& basisLo = MonomialBasis::get(m_, d - 1);
      for (int i = 0; i < basis.size(); ++i) {
        const auto& e = basis.exponents(i);
        if (e[axis] == 0 || coefIsZero(c_[d][i])) continue;
        std::vector<int> eo = e;
        --eo[axis];
        r.c_[d - 1][basisLo.indexOf(eo)] +=
            coefScale(c_[d][i], Rational(e[axis]));
      }
    }
    return r;
  }

  /// Composition outer(inner[0], ..., inner[m-1]); each inner series must
  /// have zero constant term. Result trust order = min of all inputs.
  static Series compose(const Series& outer, const std::vector<Series>& inner) {
    if (static_cast<int>(inner.size()) != outer.m_)
      throw std::invalid_argument("composition arity mismatch");
    int m2 = inner[0].dim();
    int ord = outer.order_;
    for (const auto& g : inner) {
      if (g.dim() != m2) throw std::invalid_argument("inner dimension mismatch");
      ord = std::min(ord, g.order());
      if (!coefIsZero(g.c_[0][0]))
        throw std::invalid_argument("inner series must have zero constant term");
    }
    Series r = Series::constant(m2, ord, outer.c_[0][0]);
    // Powers of inner components built incrementally per monomial.
    for (int d = 1; d <= std::min(outer.order_, ord); ++d) {
      const auto& basis = MonomialBasis::get(outer.m_, d);
      for (int i = 0; i < basis.size(); ++i) {
        if (coefIsZero(outer.c_[d][i])) continue;
        const auto& e = basis.exponents(i);
        Series term = Series::constant(m2, ord, C(1));
        for (int ax = 0; ax < outer.m_; ++ax)
          for (int p = 0; p < e[ax]; ++p) term = term * inner[ax].truncated(ord);
        r += term.scaled(outer.c_[d][i]);
      }
    }
    return r;
  }

 private:
  int degreeOf(const std::vector<int>& exps) const {
    if (static_cast<int>(exps.size()) != m_)
      throw std::invalid_argument("exponent vector arity mismatch");
    int d = 0;
    for (int v : exps) d += v;
    if (d > order_) throw std::invalid_argument("coefficient beyond trust order");
    return d;
  }
  Series& inplace(const Series& o, const Rational& f) {
    if (m_ != o.m_) throw std::invalid_argument("series dimension mismatch");
    if (o.order_ < order_) {
      *this = truncated(o.order_);
    }
    for (int d = 0; d <= order_; ++d)
      for (std::size_t i = 0; i < c_[d].size(); ++i)
        c_[d][i] += coefScale(o.c_[d][i], f);
    return *this;
  }

  int m_;
  int order_;
  std::vector<std::vector<C>> c_;  // dense by total degree
};

using RSeries = Series<Rational>;

/// Identity map (x^0, ..., x^{m-1}) as a vector of series.
template <class C>
std::vector<Series<C>> identityMap(int m, int order) {
  std::vector<Series<C>> id;
  id.reserve(m);
  for (int ax = 0; ax < m; ++ax) id.push_back(Series<C>::variable(m, order, ax));
  return id;
}

/// Compose a vector-valued map with a vector of inner series.
template <class C>
std::vector<Series<C>> composeMap(const std::vector<Series<C>>& f,
                                  const std::vector<Series<C>>& g) {
  std::vector<Series<C>> out;
  out.reserve(f.size());
  for (const auto& comp : f) out.push_back(Series<C>::compose(comp, g));
  return out;
}

/// Exact inverse of an m x m rational matrix (row-major). Throws on a
/// singular matrix.
std::vector<Rational> inverseRationalMatrix(std::vector<Rational> a, int n);

inline std::vector<Rational> inverseRationalMatrix(std::vector<Rational> a, int n) {
  std::vector<Rational> inv(n * n, Rational(0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r * n + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("singular matrix");
    for (int c = 0; c < n; ++c) {
      std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(inv[piv * n + c], inv[col * n + c]);
    }
    Rational d = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r * n + col] == 0) continue;
      Rational f = a[r * n + col];
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

/// Compositional inverse of a formal diffeomorphism jet (zero constant
/// terms, invertible linear part), to the same trust order.
inline std::vector<RSeries> invertDiffeo(const std::vector<RSeries>& f) {
  int m = static_cast<int>(f.size());
  int ord = f[0].order();
  for (const auto& comp : f) {
    ord = std::min(ord, comp.order());
    std::vector<int> zero(m, 0);
    if (comp.coeff(zero) != 0)
      throw std::invalid_argument("diffeo jet must fix the origin");
  }
  // Linear part and its inverse.
  std::vector<Rational> lin(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<int> e(m, 0);
      e[j] = 1;
      lin[i * m + j] = f[i].coeff(e);
    }
  std::vector<Rational> linInv = inverseRationalMatrix(lin, m);  // throws if singular

  // f = L + h with h of degree >= 2; iterate g <- L^{-1} (id - h o g).
  std::vector<RSeries> h;
  for (int i = 0; i < m; ++i) {
    RSeries hi = f[i].truncated(ord);
    for (int j = 0; j < m; ++j) {
      std::vector<int> e(m, 0);
      e[j] = 1;
      hi.setCoeff(e, Rational(0));
    }
    h.push_back(hi);
  }
  auto applyLinInv = [&](const std::vector<RSeries>& v) {
    std::vector<RSeries> out;
    for (int i = 0; i < m; ++i) {
      RSeries s(m, ord);
      for (int j = 0; j < m; ++j) s += v[j].scaled(linInv[i * m + j]);
      out.push_back(s);
    }
    return out;
  };
  std::vector<RSeries> g = applyLinInv(identityMap<Rational>(m, ord));
  for (int it = 1; it < ord; ++it) {
    std::vector<RSeries> hg = composeMap(h, g);
    std::vector<RSeries> rhs;
    for (int i = 0; i < m; ++i)
      rhs.push_back(RSeries::variable(m, ord, i) - hg[i]);
    g = applyLinInv(rhs);
  }
  return g;
}

/// Inverse of an n x n matrix of series (row-major flat), exact to the
/// truncation order. The constant-term matrix must be invertible.
template <class C>
std::vector<Series<C>> matrixSeriesInverse(const std::vector<Series<C>>& mat, int n) {
  if (static_cast<int>(mat.size()) != n * n)
    throw std::invalid_argument("matrix size mismatch");
  int m = mat[0].dim();
  int ord = mat[0].order();
  for (const auto& s : mat) ord = std::min(ord, s.order());
  std::vector<int> zero(m, 0);
  std::vector<Rational> c0(n * n);
  for (int i = 0; i < n * n; ++i) {
    if constexpr (std::is_same_v<C, Rational>) {
      c0[i] = mat[i].coeff(zero);
    } else {
      c0[i] = mat[i].coeff(zero).value();
      if (!mat[i].coeff(zero).linear().empty())
        throw std::invalid_argument("matrix constant term must be numeric");
    }
  }
  std::vector<Rational> c0inv = inverseRationalMatrix(c0, n);
  // M = C0 (I + N), N nilpotent to the truncation order.
  auto mulInto = [&](const std::vector<Series<C>>& a, const std::vector<Series<C>>& b) {
    std::vector<Series<C>> out(n * n, Series<C>(m, ord));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out[i * n + j] += a[i * n + k].truncated(ord) * b[k * n + j].truncated(ord);
    return out;
  };
  std::vector<Series<C>> nser(n * n, Series<C>(m, ord));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Series<C> s(m, ord);
      for (int k = 0; k < n; ++k)
        s += mat[k * n + j].truncated(ord).scaled(c0inv[i * n + k]);
      if (i == j) s -= Series<C>::constant(m, ord, C(1));
      nser[i * n + j] = s;
    }
  // (I + N)^{-1} = sum (-N)^p truncated.
  std::vector<Series<C>> acc(n * n, Series<C>(m, ord));
  std::vector<Series<C>> pw(n * n, Series<C>(m, ord));
  for (int i = 0; i < n; ++i) {
    acc[i * n + i] = Series<C>::constant(m, ord, C(1));
    pw[i * n + i] = Series<C>::constant(m, ord, C(1));
  }
  for (int p = 1; p <= ord; ++p) {
    pw = mulInto(pw, nser);
    Rational sign = (p % 2 == 0) ? 1 : -1;
    for (int i = 0; i < n * n; ++i) acc[i] += pw[i].scaled(sign);
  }
  // result = acc * C0^{-1}
  std::vector<Series<C>> out(n * n, Series<C>(m, ord));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Series<C> s(m, ord);
      for (int k = 0; k < n; ++k) s += acc[i * n + k].scaled(c0inv[k * n + j]);
      out[i * n + j] = s;
    }
  return out;
}

}  // namespace jetcalc
