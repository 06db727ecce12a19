#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/poly.hpp"

namespace inflectus {

struct RootOptions {
  int maxIterations = 200;
  /// A group of m approximations is merged into an m-fold root when the
  /// Taylor coefficients t_0..t_{m-1} at the group centroid are below this
  /// fraction of their natural size (a backward-error test).
  double clusterTolerance = 1e-10;
  /// Candidate groups are drawn from this radius, relative to max(1, |z|).
  double clusterSearchRadius = 1e-2;
  /// Residual accepted after the iteration cap, relative to the coefficient
  /// scale at |z|.
  double residualTolerance = 1e-7;
};

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Size of the j-th Taylor coefficient of p at c if every coefficient of p
/// were perturbed by its own magnitude.
inline double taylorScale(const Poly& p, int j, double radius) {
  double s = 0.0;
  for (int i = j; i <= p.degree(); ++i)
    s += std::abs(p[i]) * binomial(i, j) * std::pow(radius, i - j);
  return s;
}

/// Aberth-Ehrlich simultaneous iteration. `p` has degree >= 1 and p(0) != 0.
inline std::vector<cplx> aberth(const Poly& p, const RootOptions& opts) {
  const int n = p.degree();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double radius = std::pow(std::abs(p[0] / p.leading()), 1.0 / n);
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<std::size_t>(k)] =
        std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.7);
  std::vector<bool> done(z.size(), false);

  for (int it = 0; it < opts.maxIterations; ++it) {
    bool all = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (done[i]) continue;
      const auto [v, dv] = p.evalWithDerivative(z[i]);
      if (std::abs(v) <= 8.0 * n * eps * p.magnitudeAt(std::abs(z[i]))) {
        done[i] = true;
        continue;
      }
      all = false;
      if (dv == cplx{}) {
        z[i] += cplx(1e-3, 1e-3) * std::max(1.0, std::abs(z[i]));
        continue;
      }
      const cplx ratio = v / dv;
      cplx sum{};
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      z[i] -= step;
      if (std::abs(step) <= 4.0 * eps * std::abs(z[i])) done[i] = true;
    }
    if (all) break;
  }

  for (const auto& r : z) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
        std::abs(p(r)) > opts.residualTolerance * p.magnitudeAt(std::max(1.0, std::abs(r))))
      throw NumericFailure("root finding did not converge (ill-conditioned polynomial of degree " +
                           std::to_string(n) + ")");
  }
  return z;
}

/// True when `c` is an m-fold root of a polynomial within the clustering
/// tolerance of `p`.
inline bool isMultipleRoot(const Poly& p, cplx c, int m, double tol) {
  const Poly t = p.taylorShift(c);
  const double radius = std::max(1.0, std::abs(c));
  for (int j = 0; j < m; ++j)
    if (std::abs(t[j]) > tol * taylorScale(p, j, radius)) return false;
  return true;
}

/// Newton on p^(m-1), where an m-fold root of p is a simple root.
inline cplx polishMultiple(const Poly& p, cplx c, int m) {
  Poly q = p;
  for (int k = 0; k < m - 1; ++k) q = q.derivative();
  for (int k = 0; k < 6; ++k) {
    const auto [v, dv] = q.evalWithDerivative(c);
    if (dv == cplx{}) break;
    const cplx next = c - v / dv;
    if (std::abs(q(next)) >= std::abs(v)) break;
    c = next;
  }
  return c;
}

inline std::vector<Root> clusterRoots(const Poly& p, const std::vector<cplx>& approx,
                                      const RootOptions& opts) {
  std::vector<Root> out;
  std::vector<bool> used(approx.size(), false);
  for (std::size_t i = 0; i < approx.size(); ++i) {
    if (used[i]) continue;
    const double search = opts.clusterSearchRadius * std::max(1.0, std::abs(approx[i]));
    std::vector<std::size_t> near;
    for (std::size_t j = 0; j < approx.size(); ++j)
      if (j != i && !used[j] && std::abs(approx[j] - approx[i]) <= search) near.push_back(j);
    std::sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(approx[a] - approx[i]) < std::abs(approx[b] - approx[i]);
    });

    int chosen = 1;
    cplx centre = approx[i];
    for (int m = static_cast<int>(near.size()) + 1; m >= 2; --m) {
      cplx c = approx[i];
      for (int k = 0; k < m - 1; ++k) c += approx[near[static_cast<std::size_t>(k)]];
      c = polishMultiple(p, c / static_cast<double>(m), m);
      if (isMultipleRoot(p, c, m, opts.clusterTolerance)) {
        chosen = m;
        centre = c;
        break;
      }
    }
    used[i] = true;
    for (int k = 0; k < chosen - 1; ++k) used[near[static_cast<std::size_t>(k)]] = true;
    out.push_back({centre, chosen});
  }
  return out;
}

} // namespace detail

/// All complex roots of a nonzero polynomial, with multiplicities summing to
/// its degree. Constants have no roots.
inline std::vector<Root> roots(const Poly& p, const RootOptions& opts = {}) {
  if (p.isZero()) throw DegenerateInput("roots of the zero polynomial");
  std::vector<Root> out;
  int zeroMult = 0;
  while (zeroMult < p.degree() && p[zeroMult] == cplx{}) ++zeroMult;
  if (zeroMult > 0) out.push_back({cplx{}, zeroMult});
  if (zeroMult == p.degree()) return out;

  std::vector<cplx> rest(p.coeffs().begin() + zeroMult, p.coeffs().end());
  const Poly q(std::move(rest), 0.0);
  if (q.degree() == 1) {
    out.push_back({-q[0] / q[1], 1});
    return out;
  }
  const auto approx = detail::aberth(q, opts);
  auto clustered = detail::clusterRoots(q, approx, opts);
  out.insert(out.end(), clustered.begin(), clustered.end());
  return out;
}

} // namespace inflectus
