#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/poly.hpp"
#include "inflectus/roots.hpp"

namespace inflectus {

/// Roots of numerator and denominator closer than this (relative to
/// max(1, |z|)) are cancelled as a common factor.
inline constexpr double kCommonRootTolerance = 1e-6;

/// |P(z)| below this fraction of P's magnitude at |z| counts as a pole hit.
inline constexpr double kPoleProximity = 1e-12;

/// R = Q / P in lowest terms with P monic.
class RationalFunction {
public:
  /// The zero function.
  RationalFunction() : num_{}, den_{1.0} {}

  /// Cancels common roots of `num` and `den`, then normalizes.
  RationalFunction(Poly num, Poly den) { *this = reduce(std::move(num), std::move(den)); }

  /// Skips common-root cancellation; the caller guarantees coprimality.
  static RationalFunction fromCoprime(Poly num, Poly den) {
    if (den.isZero()) throw DegenerateInput("rational function with zero denominator");
    RationalFunction r;
    const cplx lead = den.leading();
    r.num_ = num * (1.0 / lead);
    r.den_ = den * (1.0 / lead);
    if (r.num_.isZero()) r.den_ = Poly{1.0};
    return r;
  }

  static RationalFunction polynomial(Poly p) { return fromCoprime(std::move(p), Poly{1.0}); }
  static RationalFunction constant(cplx c) { return polynomial(Poly::constant(c)); }

  const Poly& numerator() const noexcept { return num_; }
  const Poly& denominator() const noexcept { return den_; }

  /// k = deg Q (-1 for the zero function).
  int numeratorDegree() const noexcept { return num_.degree(); }
  /// l = deg P.
  int denominatorDegree() const noexcept { return den_.degree(); }
  /// Degree as a map of the sphere.
  int mapDegree() const noexcept { return std::max(std::max(num_.degree(), 0), den_.degree()); }

  bool isZero() const noexcept { return num_.isZero(); }
  bool isPolynomial() const noexcept { return den_.degree() == 0; }
  bool isConstant() const noexcept { return isPolynomial() && num_.degree() <= 0; }

  /// nullopt marks evaluation at (or numerically at) a pole.
  std::optional<cplx> operator()(cplx z) const noexcept {
    const cplx d = den_(z);
    if (std::abs(d) <= kPoleProximity * den_.magnitudeAt(std::abs(z))) return std::nullopt;
    return num_(z) / d;
  }

  /// Like operator() but throws PoleProximity at a pole.
  cplx at(cplx z) const {
    auto v = (*this)(z);
    if (!v) throw PoleProximity("evaluation at a pole");
    return *v;
  }

  /// Coefficientwise conjugate: f^sigma(w) = conj(f(conj(w))).
  RationalFunction conj() const { return fromCoprime(num_.conj(), den_.conj()); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.isPolynomial() && b.isPolynomial()) return polynomial(a.num_ + b.num_);
    if (b.isPolynomial()) return RationalFunction(a.num_ + b.num_ * a.den_, a.den_);
    if (a.isPolynomial()) return RationalFunction(a.num_ * b.den_ + b.num_, b.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    return fromCoprime(-a.num_, a.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + (-b);
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.isPolynomial() && b.isPolynomial()) return polynomial(a.num_ * b.num_);
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.isZero()) throw DegenerateInput("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }

private:
  static Poly deflate(const Poly& p, cplx r, int times) {
    Poly out = p;
    const Poly lin{-r, 1.0};
    for (int i = 0; i < times; ++i) out = divmod(out, lin).first;
    return out;
  }

  static RationalFunction reduce(Poly num, Poly den) {
    if (den.isZero()) throw DegenerateInput("rational function with zero denominator");
    if (num.isZero() || num.degree() == 0 || den.degree() == 0) return fromCoprime(std::move(num), std::move(den));
    const auto rn = roots(num);
    const auto rd = roots(den);
    std::vector<bool> taken(rn.size(), false);
    for (const auto& d : rd) {
      std::size_t best = rn.size();
      double bestDist = 0.0;
      for (std::size_t i = 0; i < rn.size(); ++i) {
        if (taken[i]) continue;
        const double dist = std::abs(rn[i].value - d.value);
        if (dist <= kCommonRootTolerance * std::max(1.0, std::abs(d.value)) &&
            (best == rn.size() || dist < bestDist)) {
          best = i;
          bestDist = dist;
        }
      }
      if (best == rn.size()) continue;
      taken[best] = true;
      const int common = std::min(d.multiplicity, rn[best].multiplicity);
      const cplx r = 0.5 * (d.value + rn[best].value);
      num = deflate(num, r, common);
      den = deflate(den, r, common);
    }
    return fromCoprime(std::move(num), std::move(den));
  }

  Poly num_;
  Poly den_;
};

inline RationalFunction pow(const RationalFunction& base, int n) {
  if (n < 0) {
    if (base.isZero()) throw DegenerateInput("negative power of zero");
    return pow(RationalFunction::fromCoprime(base.denominator(), base.numerator()), -n);
  }
  Poly num{1.0};
  Poly den{1.0};
  for (int i = 0; i < n; ++i) {
    num = num * base.numerator();
    den = den * base.denominator();
  }
  return RationalFunction::fromCoprime(std::move(num), std::move(den));
}

/// W = Q'P - QP'.
inline Poly wronskian(const Poly& q, const Poly& p) { return q.derivative() * p - q * p.derivative(); }

/// Finite poles with multiplicities (roots of the denominator).
inline std::vector<Root> poleFactorization(const RationalFunction& r) {
  if (r.denominator().degree() <= 0) return {};
  return roots(r.denominator());
}

/// R' = W / P^2, reduced. The common factor prod (z - z_j)^(s_j - 1) between
/// W and P^2 is divided out explicitly instead of by root matching.
inline RationalFunction derivative(const RationalFunction& r) {
  if (r.isPolynomial()) return RationalFunction::polynomial(r.numerator().derivative());
  const auto poles = poleFactorization(r);
  const Poly w = wronskian(r.numerator(), r.denominator());
  std::vector<Root> simple;
  std::vector<Root> excess;
  for (const auto& p : poles) {
    simple.push_back({p.value, 1});
    if (p.multiplicity > 1) excess.push_back({p.value, p.multiplicity - 1});
  }
  const Poly num = divmod(w, Poly::fromRoots(excess)).first;
  const Poly den = r.denominator() * Poly::fromRoots(simple);
  return RationalFunction::fromCoprime(num, den);
}

struct PartialFractionTerm {
  cplx pole;
  int order; // j in c_{a,j} / (z - a)^j
  cplx coefficient;
};

/// f = polynomialPart + sum_terms c / (z - a)^j.
struct PartialFractions {
  Poly polynomialPart;
  std::vector<PartialFractionTerm> terms;

  cplx operator()(cplx z) const {
    cplx acc = polynomialPart(z);
    for (const auto& t : terms) acc += t.coefficient / std::pow(z - t.pole, t.order);
    return acc;
  }
};

namespace detail {

/// First `n` coefficients of the power series a(w) / b(w), b(0) != 0.
inline std::vector<cplx> seriesDivide(const Poly& a, const Poly& b, int n) {
  std::vector<cplx> q(static_cast<std::size_t>(n), cplx{});
  for (int k = 0; k < n; ++k) {
    cplx acc = a[k];
    for (int j = 1; j <= k; ++j) acc -= b[j] * q[static_cast<std::size_t>(k - j)];
    q[static_cast<std::size_t>(k)] = acc / b[0];
  }
  return q;
}

} // namespace detail

/// Polynomial part by division, principal parts by local Laurent expansion.
inline PartialFractions partialFractions(const RationalFunction& f) {
  auto [quot, rem] = divmod(f.numerator(), f.denominator());
  PartialFractions pf{quot, {}};
  if (f.isPolynomial()) return pf;
  const auto poles = poleFactorization(f);
  for (std::size_t a = 0; a < poles.size(); ++a) {
    std::vector<Root> others;
    for (std::size_t b = 0; b < poles.size(); ++b)
      if (b != a) others.push_back(poles[b]);
    const cplx z0 = poles[a].value;
    const int m = poles[a].multiplicity;
    const Poly localNum = rem.taylorShift(z0);
    const Poly localDen = Poly::fromRoots(others).taylorShift(z0);
    const auto series = detail::seriesDivide(localNum, localDen, m);
    for (int t = 0; t < m; ++t)
      pf.terms.push_back({z0, m - t, series[static_cast<std::size_t>(t)]});
  }
  std::sort(pf.terms.begin(), pf.terms.end(), [](const auto& x, const auto& y) {
    if (x.pole != y.pole) {
      if (x.pole.real() != y.pole.real()) return x.pole.real() < y.pole.real();
      return x.pole.imag() < y.pole.imag();
    }
    return x.order < y.order;
  });
  return pf;
}

struct Residue {
  cplx pole;
  cplx residue;
};

/// Residue of f(z) dz at each finite pole (the c_{a,1} coefficient).
inline std::vector<Residue> residues(const RationalFunction& f) {
  std::vector<Residue> out;
  for (const auto& t : partialFractions(f).terms)
    if (t.order == 1) out.push_back({t.pole, t.coefficient});
  return out;
}

/// Residue of f(z) dz at infinity: minus the 1/z coefficient of the
/// expansion at infinity.
inline cplx residueAtInfinity(const RationalFunction& f) {
  if (f.isPolynomial()) return {};
  const Poly rem = divmod(f.numerator(), f.denominator()).second;
  return -rem[f.denominatorDegree() - 1];
}

} // namespace inflectus
