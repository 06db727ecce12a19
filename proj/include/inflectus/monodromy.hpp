#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/rational.hpp"
#include "inflectus/roots.hpp"

namespace inflectus {

inline constexpr double kRealValueTolerance = 1e-9;

struct CriticalPoint {
  cplx point;               // ignored when atInfinity
  bool atInfinity = false;
  int order = 1;            // ramification index minus one
  std::optional<cplx> value; // nullopt: the value is infinity
  bool real = false;         // value on the real projective line
};

struct CriticalData {
  std::vector<CriticalPoint> points;

  /// Finite critical values, one per critical point that has one.
  std::vector<cplx> finiteValues() const {
    std::vector<cplx> out;
    for (const auto& p : points)
      if (p.value) out.push_back(*p.value);
    return out;
  }
};

inline bool onRealLine(cplx v, double tol) { return std::abs(v.imag()) <= tol * (1.0 + std::norm(v)); }

/// Critical points of f on the sphere: zeros of f', multiple poles, and the
/// point at infinity when f is ramified there.
inline CriticalData criticalData(const RationalFunction& f, double realTol = kRealValueTolerance) {
  if (f.isConstant()) throw DegenerateInput("critical data of a constant map");
  CriticalData out;
  const auto fp = derivative(f);
  if (fp.numerator().degree() >= 1) {
    for (const auto& r : roots(fp.numerator())) {
      CriticalPoint cp;
      cp.point = r.value;
      cp.order = r.multiplicity;
      cp.value = f.at(r.value);
      cp.real = onRealLine(*cp.value, realTol);
      out.points.push_back(cp);
    }
  }
  for (const auto& p : poleFactorization(f)) {
    if (p.multiplicity < 2) continue;
    CriticalPoint cp;
    cp.point = p.value;
    cp.order = p.multiplicity - 1;
    cp.real = true;
    out.points.push_back(cp);
  }
  const Poly& a = f.numerator();
  const Poly& b = f.denominator();
  const int k = a.degree(), l = b.degree();
  CriticalPoint inf;
  inf.atInfinity = true;
  if (k > l) {
    if (k - l >= 2) {
      inf.order = k - l - 1;
      inf.real = true;
      out.points.push_back(inf);
    }
  } else {
    const cplx c = (k == l) ? a.leading() / b.leading() : cplx{};
    const Poly rem = a - b * c;
    const int e = l - rem.degree();
    if (e >= 2) {
      inf.order = e - 1;
      inf.value = c;
      inf.real = onRealLine(c, realTol);
      out.points.push_back(inf);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fiber product connectivity by path continuation.

struct ContinuationOptions {
  int degreeCap = 5;
  int minSteps = 64;   // per path piece
  int maxSteps = 4096; // finest subdivision per path piece
  int retryCap = 3;    // lasso radius halvings before giving up
  std::uint64_t seed = 0;
  double realTol = kRealValueTolerance;
};

enum class Connectivity { Connected, Disconnected, Undetermined };

inline const char* toString(Connectivity c) {
  switch (c) {
  case Connectivity::Connected: return "connected";
  case Connectivity::Disconnected: return "disconnected";
  default: return "undetermined";
  }
}

using Permutation = std::vector<int>;

/// One-line cycle notation, fixed points omitted; "()" for the identity.
inline std::string cycleString(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == static_cast<int>(i)) continue;
    os << '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      os << (first ? "" : " ") << j;
      first = false;
      j = static_cast<std::size_t>(p[j]);
    }
    os << ')';
    any = true;
  }
  return any ? os.str() : "()";
}

inline Permutation compose(const Permutation& first, const Permutation& then) {
  Permutation out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = then[static_cast<std::size_t>(first[i])];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return out;
}

inline bool isBijection(const Permutation& p) {
  std::vector<bool> hit(p.size(), false);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

struct LoopRecord {
  bool aroundInfinity = false;
  cplx center;   // encircled critical value (unused for the loop at infinity)
  double radius = 0.0;
  Permutation fiber;     // on the fiber of f
  Permutation conjFiber; // on the fiber of f^sigma
  Permutation pairs;     // on pairs (i, j) -> index i * d + j

  std::string descriptor() const {
    std::ostringstream os;
    os.precision(12);
    if (aroundInfinity)
      os << "infinity: clockwise circle |t| = " << radius;
    else
      os << "lasso around " << center.real() << (center.imag() < 0 ? "" : "+") << center.imag()
         << "i, radius " << radius;
    return os.str();
  }
};

struct FiberProductResult {
  int degree = 0;     // deg f
  int conjDegree = 0; // deg f^sigma
  Connectivity verdict = Connectivity::Undetermined;
  int orbitCount = 0;
  std::vector<LoopRecord> loopLog;
  bool relationHolds = false;
  cplx basePoint;
  int retries = 0;
  std::string note;
  bool connected() const noexcept { return verdict == Connectivity::Connected; }
};

namespace detail {

struct ContinuationFailure {};

/// Fiber equation A(u) - t B(u) = 0 in a coordinate where u = infinity lies
/// over t = infinity, so the degree in u never drops along a path.
struct FiberEquation {
  Poly a, b;
  Poly da, db;

  explicit FiberEquation(const RationalFunction& f) {
    a = f.numerator();
    b = f.denominator();
    const auto poles = poleFactorization(f);
    if (!poles.empty() && a.degree() <= b.degree()) {
      // z = p + 1/u sends u = infinity to the pole p.
      const int d = std::max(a.degree(), b.degree());
      const cplx p = poles.front().value;
      a = a.taylorShift(p).reversed(d);
      b = b.taylorShift(p).reversed(d);
    }
    da = a.derivative();
    db = b.derivative();
  }

  int degree() const { return std::max(a.degree(), b.degree()); }
  cplx value(cplx u, cplx t) const { return a(u) - t * b(u); }
  cplx slope(cplx u, cplx t) const { return da(u) - t * db(u); }
};

inline double minSeparation(const std::vector<cplx>& u, std::size_t i) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.size(); ++j)
    if (j != i) best = std::min(best, std::abs(u[i] - u[j]));
  return best;
}

/// Newton at fixed t; nullopt when it does not settle.
inline std::optional<cplx> correct(const FiberEquation& eq, cplx u, cplx t) {
  for (int it = 0; it < 12; ++it) {
    const cplx d = eq.slope(u, t);
    if (d == cplx{}) return std::nullopt;
    const cplx step = eq.value(u, t) / d;
    u -= step;
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) return std::nullopt;
    if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(u))) return u;
  }
  return std::nullopt;
}

/// Carries every root along t(s), s in [0, 1].
inline std::vector<cplx> trackPiece(const FiberEquation& eq, std::vector<cplx> u,
                                    const std::function<cplx(double)>& path,
                                    const ContinuationOptions& opts) {
  const double maxStep = 1.0 / opts.minSteps;
  const double minStep = 1.0 / opts.maxSteps;
  double s = 0.0, ds = maxStep;
  while (s < 1.0) {
    const double next = std::min(1.0, s + ds);
    const cplx t0 = path(s), t1 = path(next);
    std::vector<cplx> moved(u.size());
    bool ok = true;
    for (std::size_t i = 0; i < u.size() && ok; ++i) {
      // Tangent predictor du/dt = B / (A' - t B').
      const cplx sl = eq.slope(u[i], t0);
      cplx guess = u[i];
      if (sl != cplx{}) guess += eq.b(u[i]) / sl * (t1 - t0);
      const auto c = correct(eq, guess, t1);
      const double sep = minSeparation(u, i);
      if (!c || std::abs(*c - u[i]) > 0.25 * sep) ok = false;
      else moved[i] = *c;
    }
    if (ok) {
      for (std::size_t i = 0; i < moved.size() && ok; ++i)
        if (minSeparation(moved, i) <= 1e-10 * std::max(1.0, std::abs(moved[i]))) ok = false;
    }
    if (!ok) {
      ds *= 0.5;
      if (ds < minStep) throw ContinuationFailure{};
      continue;
    }
    u = std::move(moved);
    s = next;
    ds = std::min(maxStep, ds * 1.5);
  }
  return u;
}

/// Index of the start root each end root landed on.
inline Permutation matchFiber(const std::vector<cplx>& start, const std::vector<cplx>& end) {
  Permutation p(start.size(), -1);
  for (std::size_t i = 0; i < start.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < end.size(); ++j)
      if (std::abs(end[i] - start[j]) < std::abs(end[i] - start[best])) best = j;
    if (std::abs(end[i] - start[best]) > 1e-3 * minSeparation(start, best)) throw ContinuationFailure{};
    p[i] = static_cast<int>(best);
  }
  if (!isBijection(p)) throw ContinuationFailure{};
  return p;
}

inline Permutation lift(const FiberEquation& eq, const std::vector<cplx>& fiber,
                        const std::vector<std::function<cplx(double)>>& pieces,
                        const ContinuationOptions& opts) {
  std::vector<cplx> u = fiber;
  for (const auto& piece : pieces) u = trackPiece(eq, std::move(u), piece, opts);
  return matchFiber(fiber, u);
}

inline double distanceToSegment(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

inline int findRoot(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

inline int orbitCount(const std::vector<Permutation>& gens, int n) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  for (const auto& g : gens)
    for (int i = 0; i < n; ++i) {
      const int a = findRoot(parent, i), b = findRoot(parent, g[static_cast<std::size_t>(i)]);
      if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
  int count = 0;
  for (int i = 0; i < n; ++i) count += findRoot(parent, i) == i;
  return count;
}

inline std::vector<cplx> simpleFiber(const FiberEquation& eq, cplx t) {
  const Poly g = eq.a - eq.b * t;
  std::vector<cplx> out;
  for (const auto& r : roots(g)) {
    if (r.multiplicity != 1) throw ContinuationFailure{};
    out.push_back(r.value);
  }
  if (static_cast<int>(out.size()) != eq.degree()) throw ContinuationFailure{};
  return out;
}

} // namespace detail

/// Connectivity of the fiber product of f and f^sigma over the t-sphere:
/// orbits of the joint monodromy on pairs (z, w) with f(z) = f^sigma(w) = t.
inline FiberProductResult fiberProductConnected(const RationalFunction& f,
                                                const ContinuationOptions& opts = {}) {
  if (f.isConstant()) throw DegenerateInput("fiber product of a constant map");
  const int d = f.mapDegree();
  if (d > opts.degreeCap)
    throw DomainError("degree " + std::to_string(d) + " exceeds the continuation cap of " +
                      std::to_string(opts.degreeCap));
  const RationalFunction g = f.conj();
  FiberProductResult out;
  out.degree = d;
  out.conjDegree = g.mapDegree();

  // Branch values of both covers, merged.
  std::vector<cplx> values;
  auto addValue = [&](cplx v) {
    for (const auto& w : values)
      if (std::abs(w - v) <= 1e-9 * (1.0 + std::abs(v))) return;
    values.push_back(v);
  };
  for (const auto& v : criticalData(f, opts.realTol).finiteValues()) {
    addValue(v);
    addValue(std::conj(v));
  }

  if (d == 1) {
    out.verdict = Connectivity::Connected;
    out.orbitCount = 1;
    out.relationHolds = true;
    return out;
  }

  double maxAbs = 0.0;
  for (const auto& v : values) maxAbs = std::max(maxAbs, std::abs(v));
  const double baseRadius = maxAbs + 1.0;

  const detail::FiberEquation eqF(f), eqG(g);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(0.1, std::numbers::pi / 2 - 0.1);

  double radiusScale = 1.0;
  for (int attempt = 0; attempt <= opts.retryCap; ++attempt) {
    out.retries = attempt;
    out.loopLog.clear();
    try {
      // Base point off the real line, outside every critical value, with
      // straight tails that keep clear of the other branch values.
      cplx t0 = std::polar(baseRadius, std::numbers::pi / 4);
      std::vector<double> rho(values.size());
      bool placed = false;
      for (int tries = 0; tries < 64 && !placed; ++tries) {
        if (tries > 0) t0 = std::polar(baseRadius, angle(rng) + (tries % 2 ? std::numbers::pi : 0.0));
        for (std::size_t i = 0; i < values.size(); ++i) {
          double r = std::abs(t0 - values[i]);
          for (std::size_t j = 0; j < values.size(); ++j)
            if (j != i) r = std::min(r, std::abs(values[i] - values[j]));
          rho[i] = 0.5 * r * radiusScale;
        }
        placed = true;
        for (std::size_t i = 0; i < values.size() && placed; ++i)
          for (std::size_t j = 0; j < values.size() && placed; ++j)
            if (j != i && detail::distanceToSegment(values[j], t0, values[i]) < rho[j]) placed = false;
      }
      if (!placed) throw detail::ContinuationFailure{};
      out.basePoint = t0;

      const auto fiberF = detail::simpleFiber(eqF, t0);
      const auto fiberG = detail::simpleFiber(eqG, t0);

      // Lassos ordered by the angle of their tail against the inward direction.
      std::vector<std::size_t> order(values.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      auto tailAngle = [&](std::size_t i) { return std::arg((values[i] - t0) * std::conj(-t0)); };
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return tailAngle(x) < tailAngle(y); });

      auto pairPerm = [&](const Permutation& pf, const Permutation& pg) {
        Permutation p(static_cast<std::size_t>(d * d));
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            p[static_cast<std::size_t>(i * d + j)] = pf[static_cast<std::size_t>(i)] * d + pg[static_cast<std::size_t>(j)];
        return p;
      };

      for (std::size_t i : order) {
        const cplx v = values[i];
        const double r = rho[i];
        const cplx dir = (t0 - v) / std::abs(t0 - v);
        const cplx rim = v + r * dir;
        const double phase = std::arg(dir);
        // Tails are spaced geometrically in the distance to v: roots move like
        // a power of (t - v) near v, so uniform spacing starves the last stretch
        // when the lasso is much smaller than the tail.
        const double len = std::abs(t0 - v);
        std::vector<std::function<cplx(double)>> pieces{
            [=](double s) { return s == 0.0 ? t0 : v + dir * (len * std::pow(r / len, s)); },
            [=](double s) { return v + std::polar(r, phase + 2.0 * std::numbers::pi * s); },
            [=](double s) { return s == 1.0 ? t0 : v + dir * (r * std::pow(len / r, s)); }};
        LoopRecord rec;
        rec.center = v;
        rec.radius = r;
        rec.fiber = detail::lift(eqF, fiberF, pieces, opts);
        rec.conjFiber = detail::lift(eqG, fiberG, pieces, opts);
        rec.pairs = pairPerm(rec.fiber, rec.conjFiber);
        out.loopLog.push_back(std::move(rec));
      }

      // Clockwise circle through t0 around every finite branch value.
      {
        const double R = std::abs(t0);
        const double phase = std::arg(t0);
        std::vector<std::function<cplx(double)>> pieces{
            [=](double s) { return std::polar(R, phase - 2.0 * std::numbers::pi * s); }};
        LoopRecord rec;
        rec.aroundInfinity = true;
        rec.radius = R;
        rec.fiber = detail::lift(eqF, fiberF, pieces, opts);
        rec.conjFiber = detail::lift(eqG, fiberG, pieces, opts);
        rec.pairs = pairPerm(rec.fiber, rec.conjFiber);
        out.loopLog.push_back(std::move(rec));
      }

      // Lassos in tail order compose to a counterclockwise circle, the inverse
      // of the loop at infinity.
      Permutation total(static_cast<std::size_t>(d * d));
      for (int i = 0; i < d * d; ++i) total[static_cast<std::size_t>(i)] = i;
      for (std::size_t k = 0; k + 1 < out.loopLog.size(); ++k) total = compose(total, out.loopLog[k].pairs);
      out.relationHolds = total == inverse(out.loopLog.back().pairs);

      std::vector<Permutation> gens;
      for (const auto& rec : out.loopLog) gens.push_back(rec.pairs);
      out.orbitCount = detail::orbitCount(gens, d * d);
      out.verdict = out.orbitCount == 1 ? Connectivity::Connected : Connectivity::Disconnected;
      if (!out.relationHolds) {
        // A broken relation means some lift is wrong; do not trust the orbits.
        throw detail::ContinuationFailure{};
      }
      return out;
    } catch (const detail::ContinuationFailure&) {
      radiusScale *= 0.5;
    } catch (const NumericFailure&) {
      radiusScale *= 0.5;
    }
  }
  out.verdict = Connectivity::Undetermined;
  out.orbitCount = 0;
  out.note = "path continuation failed after " + std::to_string(opts.retryCap) + " retries";
  return out;
}

} // namespace inflectus
