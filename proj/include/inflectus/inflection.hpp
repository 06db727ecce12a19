#pragma once

#include <cmath>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/rational.hpp"
#include "inflectus/roots.hpp"

namespace inflectus {

/// Dense real polynomial sum c[i][j] x^i y^j.
class RealBivariatePoly {
public:
  RealBivariatePoly() = default;
  explicit RealBivariatePoly(int maxDegree)
      : n_(maxDegree + 1), c_(static_cast<std::size_t>(n_ * n_), 0.0) {}

  int maxDegree() const noexcept { return n_ - 1; }

  double coeff(int i, int j) const noexcept {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return 0.0;
    return c_[static_cast<std::size_t>(i * n_ + j)];
  }
  void setCoeff(int i, int j, double v) { c_[static_cast<std::size_t>(i * n_ + j)] = v; }
  void addCoeff(int i, int j, double v) { c_[static_cast<std::size_t>(i * n_ + j)] += v; }

  double maxAbsCoeff() const noexcept {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Largest i + j with |c[i][j]| above `trimTol` times the largest
  /// coefficient; -1 for the zero polynomial.
  int totalDegree(double trimTol = kDefaultTrimTolerance) const noexcept {
    const double cut = trimTol * maxAbsCoeff();
    int d = -1;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (std::abs(coeff(i, j)) > cut && std::abs(coeff(i, j)) > 0.0) d = std::max(d, i + j);
    return d;
  }

  double operator()(double x, double y) const noexcept {
    double acc = 0.0;
    for (int i = n_ - 1; i >= 0; --i) {
      double row = 0.0;
      for (int j = n_ - 1; j >= 0; --j) row = row * y + coeff(i, j);
      acc = acc * x + row;
    }
    return acc;
  }

  /// Same zero set, largest coefficient magnitude 1.
  RealBivariatePoly normalized() const {
    RealBivariatePoly out = *this;
    const double m = maxAbsCoeff();
    if (m > 0.0)
      for (double& v : out.c_) v /= m;
    return out;
  }

private:
  int n_ = 0;
  std::vector<double> c_;
};

/// F_R = (W conj(P)^2 - conj(W) P^2) / 2i = Im(W conj(P)^2), expanded in x, y.
///
/// Unnormalized: F_R(x, y) = |P(z)|^4 Im R'(z) holds literally off the poles.
inline RealBivariatePoly definingPolynomial(const RationalFunction& r) {
  const Poly& p = r.denominator();
  const Poly w = wronskian(r.numerator(), p);
  if (w.isZero()) throw DegenerateInput("R is constant; its inflection curve is undefined");
  const Poly p2 = p * p;
  const int dw = w.degree();
  const int dp = p2.degree();
  const int total = dw + dp;

  // g[a][b]: coefficient of z^a zbar^b in W(z) conj(P(z))^2.
  auto g = [&](int a, int b) -> cplx {
    if (a > dw || b > dp) return {};
    return w[a] * std::conj(p2[b]);
  };

  std::vector<std::vector<double>> binom(static_cast<std::size_t>(total) + 1);
  for (int n = 0; n <= total; ++n)
    for (int k = 0; k <= n; ++k) binom[static_cast<std::size_t>(n)].push_back(detail::binomial(n, k));

  // i^k for k mod 4.
  const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  std::vector<cplx> acc(static_cast<std::size_t>((total + 1) * (total + 1)), cplx{});
  const int na = std::max(dw, dp);
  for (int a = 0; a <= na; ++a) {
    for (int b = 0; b <= na; ++b) {
      const cplx fab = (g(a, b) - std::conj(g(b, a))) / cplx(0.0, 2.0);
      if (fab == cplx{}) continue;
      // (x + iy)^a (x - iy)^b
      for (int s = 0; s <= a; ++s) {
        for (int t = 0; t <= b; ++t) {
          const cplx unit = ipow[s % 4] * ipow[(3 * t) % 4];
          const int xi = a + b - s - t;
          const int yj = s + t;
          acc[static_cast<std::size_t>(xi * (total + 1) + yj)] +=
              fab * binom[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)] *
              binom[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] * unit;
        }
      }
    }
  }

  RealBivariatePoly out(total);
  double scale = 0.0;
  for (const auto& v : acc) scale = std::max(scale, std::abs(v));
  for (int i = 0; i <= total; ++i)
    for (int j = 0; j <= total; ++j) {
      const cplx v = acc[static_cast<std::size_t>(i * (total + 1) + j)];
      if (std::abs(v.imag()) > 1e-9 * std::max(scale, 1e-300))
        throw NumericFailure("defining polynomial has a non-real coefficient");
      out.setCoeff(i, j, v.real());
    }
  return out;
}

/// F_R(z) = Im(W(z) conj(P(z))^2) from the factors; stays accurate next to
/// the poles where the expanded form loses every digit to cancellation.
inline double definingValue(const Poly& w, const Poly& p, cplx z) {
  const cplx pz = p(z);
  return (w(z) * std::conj(pz * pz)).imag();
}

inline double definingValue(const RationalFunction& r, cplx z) {
  return definingValue(wronskian(r.numerator(), r.denominator()), r.denominator(), z);
}

/// Im R'(z); throws PoleProximity at a pole of R'.
inline double imRPrime(const RationalFunction& r, cplx z) { return derivative(r).at(z).imag(); }

/// Same, reusing a precomputed R'.
inline double imOf(const RationalFunction& rprime, cplx z) { return rprime.at(z).imag(); }

/// u (u v_x + v v_y) - v (u u_x + v u_y) for (u, v) = (Re R, Im R), with
/// central differences of step h = 1e-4 max(1, |z|) unless given.
inline double realFieldInflectionExpression(const RationalFunction& r, cplx z, double h = 0.0) {
  if (h <= 0.0) h = 1e-4 * std::max(1.0, std::abs(z));
  const cplx c = r.at(z);
  const cplx ex = (r.at(z + h) - r.at(z - h)) / (2.0 * h);
  const cplx ey = (r.at(z + cplx(0.0, h)) - r.at(z - cplx(0.0, h))) / (2.0 * h);
  const double u = c.real(), v = c.imag();
  const double ux = ex.real(), vx = ex.imag();
  const double uy = ey.real(), vy = ey.imag();
  return u * (u * vx + v * vy) - v * (u * ux + v * uy);
}

struct DegreeReport {
  int k = 0;
  int l = 0;
  int n = 0;       // deg W
  int bound = 0;   // n + 2l
  int actual = 0;  // total degree of F_R
  int generic = 0; // k + 3l - 1, or 4l - 2 when k = l
  bool genericFormulaMatches = false;
  /// Actual degree below the generic one is explained by a degree drop in W
  /// or by cancellation of the top homogeneous part of F_R.
  bool cancellationDetected = false;
};

inline DegreeReport degreeReport(const RationalFunction& r) {
  DegreeReport d;
  d.k = std::max(r.numeratorDegree(), 0);
  d.l = r.denominatorDegree();
  const Poly w = wronskian(r.numerator(), r.denominator());
  if (w.isZero()) throw DegenerateInput("R is constant");
  d.n = w.degree();
  d.bound = d.n + 2 * d.l;
  d.actual = definingPolynomial(r).totalDegree();
  d.generic = (d.k != d.l) ? d.k + 3 * d.l - 1 : 4 * d.l - 2;
  d.genericFormulaMatches = d.actual == d.generic;
  const int genericN = (d.k != d.l) ? d.k + d.l - 1 : 2 * d.l - 2;
  d.cancellationDetected = d.n < genericN || d.actual < d.bound;
  return d;
}

} // namespace inflectus
