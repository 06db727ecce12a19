#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace inflectus {

using cplx = std::complex<double>;

/// Trailing coefficients at or below this fraction of the largest
/// coefficient magnitude are treated as zero.
inline constexpr double kDefaultTrimTolerance = 1e-10;

/// A root together with its multiplicity.
struct Root {
  cplx value;
  int multiplicity = 1;
};

/// Dense univariate polynomial with complex coefficients, ascending powers.
///
/// The zero polynomial has no coefficients and degree -1.
class Poly {
public:
  Poly() = default;
  Poly(std::initializer_list<cplx> coeffs) : Poly(std::vector<cplx>(coeffs)) {}

  /// `refScale` lets arithmetic trim relative to the operands' magnitude so
  /// that cancellation noise does not survive as a fake leading term.
  explicit Poly(std::vector<cplx> coeffs, double trimTol = kDefaultTrimTolerance,
                double refScale = 0.0)
      : c_(std::move(coeffs)) {
    trim(trimTol, refScale);
  }

  static Poly constant(cplx c) { return Poly(std::vector<cplx>{c}); }

  static Poly monomial(cplx c, int power) {
    std::vector<cplx> v(static_cast<std::size_t>(power) + 1, cplx{});
    v.back() = c;
    return Poly(std::move(v));
  }

  /// Monic product of (z - r)^m over the given roots.
  static Poly fromRoots(std::span<const Root> roots) {
    std::vector<cplx> v{1.0};
    for (const auto& r : roots) {
      for (int k = 0; k < r.multiplicity; ++k) {
        std::vector<cplx> next(v.size() + 1, cplx{});
        for (std::size_t i = 0; i < v.size(); ++i) {
          next[i + 1] += v[i];
          next[i] -= r.value * v[i];
        }
        v = std::move(next);
      }
    }
    return Poly(std::move(v), 0.0);
  }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool isZero() const noexcept { return c_.empty(); }
  std::span<const cplx> coeffs() const noexcept { return c_; }

  cplx operator[](int i) const noexcept {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : cplx{};
  }

  cplx leading() const noexcept { return c_.empty() ? cplx{} : c_.back(); }

  cplx operator()(cplx z) const noexcept {
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Value and first derivative in one Horner pass.
  std::pair<cplx, cplx> evalWithDerivative(cplx z) const noexcept {
    cplx p{}, dp{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      dp = dp * z + p;
      p = p * z + *it;
    }
    return {p, dp};
  }

  double scale() const noexcept {
    double s = 0.0;
    for (const auto& c : c_) s = std::max(s, std::abs(c));
    return s;
  }

  /// Sum of |a_i| r^i: the natural size of p(z) for |z| = r.
  double magnitudeAt(double r) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<cplx> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<double>(i);
    return Poly(std::move(v), 0.0);
  }

  /// Primitive with zero constant term.
  Poly antiderivative() const {
    if (c_.empty()) return {};
    std::vector<cplx> v(c_.size() + 1, cplx{});
    for (std::size_t i = 0; i < c_.size(); ++i) v[i + 1] = c_[i] / static_cast<double>(i + 1);
    return Poly(std::move(v), 0.0);
  }

  Poly conj() const {
    std::vector<cplx> v(c_);
    for (auto& c : v) c = std::conj(c);
    return Poly(std::move(v), 0.0);
  }

  /// Coefficients of p(z + a): the Taylor coefficients of p at a.
  Poly taylorShift(cplx a) const {
    std::vector<cplx> v(c_);
    const std::size_t n = v.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t j = n - 1; j > k; --j) v[j - 1] += a * v[j];
    return Poly(std::move(v), 0.0);
  }

  /// u^d p(1/u); requires d >= degree().
  Poly reversed(int d) const {
    std::vector<cplx> v(static_cast<std::size_t>(d) + 1, cplx{});
    for (int i = 0; i <= degree(); ++i) v[static_cast<std::size_t>(d - i)] = c_[static_cast<std::size_t>(i)];
    return Poly(std::move(v));
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return combine(a, b, 1.0); }
  friend Poly operator-(const Poly& a, const Poly& b) { return combine(a, b, -1.0); }
  friend Poly operator-(const Poly& a) { return a * cplx(-1.0); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.isZero() || b.isZero()) return {};
    std::vector<cplx> v(a.c_.size() + b.c_.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(v), 0.0);
  }

  friend Poly operator*(const Poly& a, cplx s) {
    if (s == cplx{}) return {};
    std::vector<cplx> v(a.c_);
    for (auto& c : v) c *= s;
    return Poly(std::move(v), 0.0);
  }
  friend Poly operator*(cplx s, const Poly& a) { return a * s; }

  friend bool operator==(const Poly&, const Poly&) = default;

private:
  static Poly combine(const Poly& a, const Poly& b, double sign) {
    std::vector<cplx> v(std::max(a.c_.size(), b.c_.size()), cplx{});
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += sign * b.c_[i];
    return Poly(std::move(v), kDefaultTrimTolerance, std::max(a.scale(), b.scale()));
  }

  void trim(double tol, double refScale) {
    const double s = std::max(scale(), refScale);
    if (s == 0.0) {
      c_.clear();
      return;
    }
    while (!c_.empty() && std::abs(c_.back()) <= tol * s) c_.pop_back();
  }

  std::vector<cplx> c_;
};

/// Quotient and remainder of polynomial long division.
inline std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den) {
  const int n = num.degree();
  const int m = den.degree();
  if (m < 0) return {Poly{}, num};
  if (n < m) return {Poly{}, num};
  std::vector<cplx> rem(num.coeffs().begin(), num.coeffs().end());
  std::vector<cplx> quot(static_cast<std::size_t>(n - m) + 1, cplx{});
  const cplx lead = den.leading();
  for (int k = n - m; k >= 0; --k) {
    const cplx q = rem[static_cast<std::size_t>(k + m)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= m; ++j) rem[static_cast<std::size_t>(k + j)] -= q * den[j];
  }
  rem.resize(static_cast<std::size_t>(m));
  return {Poly(std::move(quot), 0.0), Poly(std::move(rem), kDefaultTrimTolerance, num.scale())};
}

} // namespace inflectus
