#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/exactness.hpp"
#include "inflectus/monodromy.hpp"
#include "inflectus/rational.hpp"

namespace inflectus {

enum class ExactClass {
  Line,                    // a z + b
  QuadPoly,                // alpha (z - p)^2 + beta
  QuadFiniteDoublePole,    // beta + alpha / (z - p)^2
  CubicPoly,               // a (z - p)^3 + b (z - p) + c
  CubicTriplePole,         // c + a / (z - p)^3 + b / (z - p)^2
  CubicDoublePlusInfinity, // a (z - p) + b + c / (z - p)^2
};

inline const char* toString(ExactClass c) {
  switch (c) {
  case ExactClass::Line: return "LINE";
  case ExactClass::QuadPoly: return "QUAD_POLY";
  case ExactClass::QuadFiniteDoublePole: return "QUAD_FINITE_DOUBLE_POLE";
  case ExactClass::CubicPoly: return "CUBIC_POLY";
  case ExactClass::CubicTriplePole: return "CUBIC_TRIPLE_POLE";
  default: return "CUBIC_DOUBLE_PLUS_INFINITY";
  }
}

/// Normal form of an exact map of degree <= 3. Unused parameters stay 0:
/// degree 1 uses (a, b); degree 2 uses (alpha, beta, p); degree 3 uses (a, b, c, p).
struct DegreeClass {
  int degree = 0;
  ExactClass cls = ExactClass::Line;
  cplx alpha, beta, a, b, c, p;

  /// The normal form evaluated at z.
  cplx operator()(cplx z) const {
    const cplx w = z - p;
    switch (cls) {
    case ExactClass::Line: return a * z + b;
    case ExactClass::QuadPoly: return alpha * w * w + beta;
    case ExactClass::QuadFiniteDoublePole: return beta + alpha / (w * w);
    case ExactClass::CubicPoly: return a * w * w * w + b * w + c;
    case ExactClass::CubicTriplePole: return c + a / (w * w * w) + b / (w * w);
    default: return a * w + b + c / (w * w);
    }
  }

  /// Largest relative deviation from f at `samples` points on a spiral that
  /// keeps away from the pole.
  double roundTripError(const RationalFunction& f, int samples = 20) const {
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      const cplx z = p + std::polar(0.4 + 0.15 * k, 2.399963 * k);
      const auto v = f(z);
      if (!v) continue;
      worst = std::max(worst, std::abs((*this)(z) - *v) / std::max(1.0, std::abs(*v)));
    }
    return worst;
  }
};

/// Class by pole partition, parameters by completing the square / cube or
/// reading the principal part.
inline DegreeClass classifyExact(const RationalFunction& f, double tol = kResidueTolerance) {
  if (f.isConstant()) throw DomainError("classification needs a nonconstant map");
  const int deg = f.mapDegree();
  if (deg > 3) throw DomainError("classification covers degrees 1 to 3, got " + std::to_string(deg));
  if (!isExact(f, tol).exact) throw DomainError("classification needs an exact f (zero residues)");

  const auto poles = poleFactorization(f);
  for (const auto& pl : poles)
    if (pl.multiplicity < 2) throw NumericFailure("exact f with a simple pole; tolerance inconsistent");
  if (poles.size() > 1) throw NumericFailure("exact f of degree <= 3 with several finite poles");

  DegreeClass d;
  d.degree = deg;
  const Poly& q = f.numerator();

  if (poles.empty()) {
    if (deg == 1) {
      d.cls = ExactClass::Line;
      d.a = q[1];
      d.b = q[0];
    } else if (deg == 2) {
      d.cls = ExactClass::QuadPoly;
      d.alpha = q[2];
      d.p = -q[1] / (2.0 * q[2]);
      d.beta = q(d.p);
    } else {
      d.cls = ExactClass::CubicPoly;
      d.p = -q[2] / (3.0 * q[3]);
      const Poly t = q.taylorShift(d.p);
      d.a = t[3];
      d.b = t[1];
      d.c = t[0];
    }
    return d;
  }

  const auto pf = partialFractions(f);
  d.p = poles.front().value;
  auto coeff = [&](int order) {
    for (const auto& t : pf.terms)
      if (t.order == order) return t.coefficient;
    return cplx{};
  };
  const int m = poles.front().multiplicity;
  const Poly& poly = pf.polynomialPart;
  if (deg == 2 && m == 2 && poly.degree() <= 0) {
    d.cls = ExactClass::QuadFiniteDoublePole;
    d.beta = poly[0];
    d.alpha = coeff(2);
  } else if (deg == 3 && m == 3 && poly.degree() <= 0) {
    d.cls = ExactClass::CubicTriplePole;
    d.a = coeff(3);
    d.b = coeff(2);
    d.c = poly[0];
  } else if (deg == 3 && m == 2 && poly.degree() == 1) {
    d.cls = ExactClass::CubicDoublePlusInfinity;
    d.a = poly[1];
    d.b = poly[1] * d.p + poly[0];
    d.c = coeff(2);
  } else {
    throw NumericFailure("pole partition does not match any exact class of degree " + std::to_string(deg));
  }
  return d;
}

inline constexpr double kImBetaTolerance = 1e-8;
/// |Im beta| within this band (relative to 1 + |beta|) around the threshold
/// is reported as near-degenerate.
inline constexpr double kNearDegenerateLow = 1e-10;
inline constexpr double kNearDegenerateHigh = 1e-6;

struct CurveVerdict {
  std::string form;       // "2xy + Im β = 0"
  double imBeta = 0.0;
  bool reducible = false;
  bool nearDegenerate = false;
  std::string geometry;   // "hyperbola" or "two-lines"
  bool inverted = false;  // u = sqrt(alpha) / (z - p) instead of sqrt(alpha) (z - p)
  cplx scale;             // sqrt(alpha)
  cplx shift;             // p
  std::string mapDescriptor;

  /// The coordinate u in which Im f = 2 Re u Im u + Im beta.
  cplx u(cplx z) const { return inverted ? scale / (z - shift) : scale * (z - shift); }
};

inline CurveVerdict degreeTwoCurveVerdict(const DegreeClass& d) {
  if (d.degree != 2) throw DomainError("curve verdict needs a degree-2 class");
  CurveVerdict v;
  v.form = "2xy + Im β = 0";
  v.imBeta = d.beta.imag();
  const double rel = std::abs(v.imBeta) / (1.0 + std::abs(d.beta));
  v.reducible = rel <= kImBetaTolerance;
  v.nearDegenerate = rel >= kNearDegenerateLow && rel <= kNearDegenerateHigh;
  v.geometry = v.reducible ? "two-lines" : "hyperbola";
  v.inverted = d.cls == ExactClass::QuadFiniteDoublePole;
  v.scale = std::sqrt(d.alpha);
  v.shift = d.p;
  v.mapDescriptor = v.inverted ? "u = sqrt(alpha) / (z - p)" : "u = sqrt(alpha) * (z - p)";
  return v;
}

struct CriticalFlag {
  std::optional<cplx> point; // nullopt: z = infinity
  cplx value;
  bool onRP1 = false;
};

/// Critical values of a degree-3 exact f other than those over its poles.
inline std::vector<CriticalFlag> cubicSingularityTrigger(const RationalFunction& f,
                                                         double realTol = kRealValueTolerance) {
  if (classifyExact(f).degree != 3) throw DomainError("singularity trigger needs degree 3");
  std::vector<CriticalFlag> out;
  for (const auto& cp : criticalData(f, realTol).points) {
    if (!cp.value) continue;
    CriticalFlag fl;
    if (!cp.atInfinity) fl.point = cp.point;
    fl.value = *cp.value;
    fl.onRP1 = cp.real;
    out.push_back(fl);
  }
  return out;
}

} // namespace inflectus
