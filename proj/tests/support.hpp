#pragma once

// Shared generators and comparison helpers for the test suites.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "inflectus/rational.hpp"

namespace testsupport {

using inflectus::cplx;
using inflectus::Poly;
using inflectus::RationalFunction;

inline cplx randomComplex(std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> n(0.0, sigma);
  return {n(rng), n(rng)};
}

inline Poly randomPoly(std::mt19937_64& rng, int degree) {
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = randomComplex(rng);
  return Poly(std::move(c));
}

/// Random R = Q / P with deg Q = k, deg P = l (monic P).
inline RationalFunction randomRational(std::mt19937_64& rng, int k, int l) {
  Poly q = randomPoly(rng, k);
  Poly p = randomPoly(rng, l);
  return RationalFunction(std::move(q), std::move(p));
}

/// Random nonconstant R with k, l <= maxDeg.
inline RationalFunction randomNonconstant(std::mt19937_64& rng, int maxDeg) {
  std::uniform_int_distribution<int> d(0, maxDeg);
  for (;;) {
    const int k = d(rng);
    const int l = d(rng);
    if (k == 0 && l == 0) continue;
    return randomRational(rng, k, l);
  }
}

/// Random point at distance >= minDist from every given point.
inline cplx randomPointAway(std::mt19937_64& rng, const std::vector<cplx>& avoid, double minDist,
                            double sigma = 1.5) {
  for (;;) {
    const cplx z = randomComplex(rng, sigma);
    bool ok = true;
    for (const auto& a : avoid)
      if (std::abs(z - a) < minDist) ok = false;
    if (ok) return z;
  }
}

inline std::vector<cplx> poleLocations(const RationalFunction& r) {
  std::vector<cplx> out;
  for (const auto& p : inflectus::poleFactorization(r)) out.push_back(p.value);
  return out;
}

inline double relErr(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace testsupport
