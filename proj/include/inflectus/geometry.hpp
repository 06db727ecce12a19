#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/rational.hpp"
#include "inflectus/roots.hpp"

namespace inflectus {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAngleTolerance = 1e-9;

/// Angle in [0, 2 pi).
inline double normalizeAngle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi - kAngleTolerance) a = 0.0;
  return a;
}

/// Shortest distance between two angles on the circle.
inline double angularDistance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

/// Sorted, deduplicated set of directions in [0, 2 pi).
class DirectionSet {
public:
  DirectionSet() = default;
  explicit DirectionSet(std::vector<double> angles) {
    for (double& a : angles) a = normalizeAngle(a);
    std::sort(angles.begin(), angles.end());
    for (double a : angles)
      if (angles_.empty() || a - angles_.back() > kAngleTolerance) angles_.push_back(a);
    if (angles_.size() > 1 && angularDistance(angles_.front(), angles_.back()) <= kAngleTolerance)
      angles_.pop_back();
  }

  const std::vector<double>& angles() const noexcept { return angles_; }
  std::size_t size() const noexcept { return angles_.size(); }

  /// Equal as sets up to `tol` radians.
  bool matches(const DirectionSet& other, double tol = kAngleTolerance) const {
    if (size() != other.size()) return false;
    for (double a : angles_) {
      bool found = false;
      for (double b : other.angles_)
        if (angularDistance(a, b) <= tol) found = true;
      if (!found) return false;
    }
    return true;
  }

  /// Largest distance from a member of `measured` to its nearest member here.
  double maxDeviation(const std::vector<double>& measured) const {
    double worst = 0.0;
    for (double m : measured) {
      double best = kTwoPi;
      for (double a : angles_) best = std::min(best, angularDistance(a, m));
      worst = std::max(worst, best);
    }
    return worst;
  }

private:
  std::vector<double> angles_;
};

/// arg(z - z0) = (arg(-s a) + m pi) / (s + 1), m = 0 .. 2s + 1.
inline DirectionSet poleTangentRays(int s, cplx a) {
  if (s < 1 || std::abs(a) == 0.0) throw DomainError("pole tangent rays need s >= 1 and a != 0");
  const double base = std::arg(-static_cast<double>(s) * a);
  std::vector<double> out;
  for (int m = 0; m <= 2 * s + 1; ++m) out.push_back((base + m * std::numbers::pi) / (s + 1));
  return DirectionSet(std::move(out));
}

/// Directions where w^(s+1) / (-a) is real for the leading flow w' = -a w^-s.
inline DirectionSet separatrixDirections(int s, cplx a) {
  if (s < 1 || std::abs(a) == 0.0) throw DomainError("separatrix directions need s >= 1 and a != 0");
  const double base = std::arg(-a);
  std::vector<double> out;
  for (int j = 0; j <= 2 * s + 1; ++j) out.push_back((base + j * std::numbers::pi) / (s + 1));
  return DirectionSet(std::move(out));
}

struct PoleData {
  cplx location;
  int order = 1;                // s
  cplx leadingCoefficient;      // a in R = a (z - z0)^-s + ...
  DirectionSet tangentRays;     // 2s + 2 directions
  int branchCount() const noexcept { return order + 1; }
};

/// Finite poles with leading Laurent coefficients taken from the explicit
/// factorization a = Q(z0) / prod_{b != z0} (z0 - b)^m_b (P monic).
inline std::vector<PoleData> poles(const RationalFunction& r) {
  std::vector<PoleData> out;
  const auto fac = poleFactorization(r);
  for (std::size_t i = 0; i < fac.size(); ++i) {
    cplx denom{1.0};
    for (std::size_t j = 0; j < fac.size(); ++j)
      if (j != i) denom *= std::pow(fac[i].value - fac[j].value, fac[j].multiplicity);
    PoleData pd;
    pd.location = fac[i].value;
    pd.order = fac[i].multiplicity;
    pd.leadingCoefficient = r.numerator()(fac[i].value) / denom;
    pd.tangentRays = poleTangentRays(pd.order, pd.leadingCoefficient);
    out.push_back(std::move(pd));
  }
  return out;
}

/// Finite zeros of R'' (away from poles) where |Im R'| <= tol (1 + |R'|).
inline std::vector<cplx> singularCandidates(const RationalFunction& r, double tol = 1e-8) {
  if (r.isConstant()) throw DegenerateInput("R is constant");
  const auto d1 = derivative(r);
  const auto d2 = derivative(d1);
  std::vector<cplx> out;
  if (d2.isZero() || d2.numerator().degree() < 1) return out;
  for (const auto& root : roots(d2.numerator())) {
    const auto v = d1(root.value);
    if (!v) continue;
    if (std::abs(v->imag()) <= tol * (1.0 + std::abs(*v))) out.push_back(root.value);
  }
  return out;
}

/// Leading term c z^m of f at infinity.
struct LaurentLeading {
  cplx c;
  int m = 0;
};

inline LaurentLeading laurentLeadingAtInfinity(const RationalFunction& f) {
  if (f.isZero()) throw DegenerateInput("leading term of the zero function");
  return {f.numerator().leading() / f.denominator().leading(),
          f.numeratorDegree() - f.denominatorDegree()};
}

/// arg z = (j pi - arg c) / m mod 2 pi; 2|m| directions.
inline DirectionSet asymptoticRays(cplx c, int m) {
  if (m == 0 || std::abs(c) == 0.0) throw DomainError("asymptotic rays need c != 0 and m != 0");
  std::vector<double> out;
  const int count = 2 * std::abs(m);
  for (int j = 0; j < count; ++j) out.push_back((j * std::numbers::pi - std::arg(c)) / m);
  return DirectionSet(std::move(out));
}

enum class Boundedness { Bounded, Unbounded };

struct BoundednessResult {
  Boundedness verdict = Boundedness::Unbounded;
  int endCount = 0;
  DirectionSet rays;
  LaurentLeading leading;  // of R'
  /// Set when R' tends to a real constant and the verdict comes from the
  /// remainder R' - c.
  bool heuristic = false;
  std::optional<LaurentLeading> remainderLeading;
};

/// Relative size of Im c below which the limit of R' at infinity is real.
inline constexpr double kRealLimitTolerance = 1e-10;

inline BoundednessResult boundednessAnalysis(const RationalFunction& r) {
  if (r.isConstant()) throw DegenerateInput("R is constant");
  const auto f = derivative(r);
  BoundednessResult out;
  out.leading = laurentLeadingAtInfinity(f);
  auto ends = [&](const LaurentLeading& ll) {
    out.verdict = Boundedness::Unbounded;
    out.endCount = 2 * std::abs(ll.m);
    out.rays = asymptoticRays(ll.c, ll.m);
  };
  if (out.leading.m != 0) {
    ends(out.leading);
    return out;
  }
  const cplx c = out.leading.c;
  if (std::abs(c.imag()) > kRealLimitTolerance * std::abs(c)) {
    out.verdict = Boundedness::Bounded;
    return out;
  }
  // Im R' = Im(R' - c) for real c, so the remainder carries the same curve.
  const auto rem = f - RationalFunction::constant(c);
  if (rem.isZero()) throw DegenerateInput("R' is a real constant; every point is an inflection");
  out.heuristic = true;
  out.remainderLeading = laurentLeadingAtInfinity(rem);
  if (out.remainderLeading->m >= 0)
    throw NumericFailure("remainder of R' at infinity did not decay");
  ends(*out.remainderLeading);
  return out;
}

} // namespace inflectus
