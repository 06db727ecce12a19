#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "inflectus/rational.hpp"
#include "support.hpp"

using namespace inflectus;
using testsupport::relErr;

namespace {

const cplx I{0.0, 1.0};

bool samePoly(const Poly& a, const Poly& b, double tol = 1e-12) {
  if (a.degree() != b.degree()) return false;
  for (int i = 0; i <= a.degree(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

RationalFunction rat(Poly q, Poly p) { return RationalFunction(std::move(q), std::move(p)); }

/// (1 / 2 pi i) times the contour integral of f over |z| = radius, trapezoid rule.
cplx contourIntegral(const RationalFunction& f, double radius, int n = 4096) {
  cplx acc{};
  for (int k = 0; k < n; ++k) {
    const cplx z = std::polar(radius, 2.0 * std::numbers::pi * k / n);
    acc += f.at(z) * z;
  }
  return acc / static_cast<double>(n);
}

} // namespace

TEST_CASE("wronskian") {
  CHECK(samePoly(wronskian(Poly{1.0}, Poly{0.0, 1.0}), Poly{-1.0}));
  CHECK(samePoly(wronskian(Poly{0.0, 1.0}, Poly{1.0}), Poly{1.0}));
  // Q = z^k, P = z^l: W = (k - l) z^(k + l - 1); vanishes identically for k = l.
  for (int k = 0; k <= 4; ++k)
    for (int l = 0; l <= 4; ++l) {
      const Poly w = wronskian(Poly::monomial(1.0, k), Poly::monomial(1.0, l));
      if (k == l || k + l == 0) {
        CHECK(w.isZero());
      } else {
        CHECK(samePoly(w, Poly::monomial(static_cast<double>(k - l), k + l - 1)));
      }
    }
}

TEST_CASE("derivative examples") {
  SECTION("1/z") {
    const auto d = derivative(rat(Poly{1.0}, Poly{0.0, 1.0}));
    CHECK(samePoly(d.numerator(), Poly{-1.0}));
    CHECK(samePoly(d.denominator(), Poly{0.0, 0.0, 1.0}));
  }
  SECTION("z + 1/z") {
    const auto d = derivative(rat(Poly{1.0, 0.0, 1.0}, Poly{0.0, 1.0}));
    CHECK(samePoly(d.numerator(), Poly{-1.0, 0.0, 1.0}));
    CHECK(samePoly(d.denominator(), Poly{0.0, 0.0, 1.0}));
  }
  SECTION("constant") {
    CHECK(derivative(RationalFunction::constant(3.0 + I)).isZero());
  }
  SECTION("double pole gives a triple pole") {
    // R = 1/z^2 + 1/z = (1 + z)/z^2, R' = -(z + 2)/z^3.
    const auto d = derivative(rat(Poly{1.0, 1.0}, Poly{0.0, 0.0, 1.0}));
    CHECK(samePoly(d.numerator(), Poly{-2.0, -1.0}));
    CHECK(samePoly(d.denominator(), Poly{0.0, 0.0, 0.0, 1.0}));
  }
}

TEST_CASE("evaluation and pole marker") {
  const auto inv = rat(Poly{1.0}, Poly{0.0, 1.0});
  REQUIRE(inv(2.0).has_value());
  CHECK(std::abs(*inv(2.0) - 0.5) < 1e-15);
  CHECK_FALSE(inv(0.0).has_value());
  CHECK_THROWS_AS(inv.at(0.0), PoleProximity);
  const auto r = rat(Poly{1.0, 0.0, 1.0}, Poly{-1.0, 1.0});
  CHECK(std::abs(r.at(I)) < 1e-15);
}

TEST_CASE("reduction cancels common factors") {
  const auto one = rat(Poly{-1.0, 1.0}, Poly{-1.0, 1.0});
  CHECK(one.isConstant());
  CHECK(std::abs(one.at(5.0) - 1.0) < 1e-12);
  // (z^2 - 1)/(z^2 + z) = (z - 1)/z
  const auto r = rat(Poly{-1.0, 0.0, 1.0}, Poly{0.0, 1.0, 1.0});
  CHECK(r.numeratorDegree() == 1);
  CHECK(r.denominatorDegree() == 1);
  CHECK(samePoly(r.denominator(), Poly{0.0, 1.0}));
  CHECK_THROWS_AS(rat(Poly{1.0}, Poly{}), DegenerateInput);
}

TEST_CASE("conjugate map") {
  CHECK(samePoly(RationalFunction::polynomial(Poly{0.0, I}).conj().numerator(), Poly{0.0, -I}));
  const auto real = rat(Poly{1.0, 2.0}, Poly{3.0, 0.0, 1.0});
  CHECK(samePoly(real.conj().numerator(), real.numerator()));
  CHECK(samePoly(real.conj().denominator(), real.denominator()));
  CHECK(samePoly(RationalFunction::polynomial(Poly{I, 0.0, 1.0}).conj().numerator(),
                 Poly{-I, 0.0, 1.0}));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto f = testsupport::randomNonconstant(rng, 4);
    const auto g = f.conj();
    const cplx w = testsupport::randomPointAway(rng, testsupport::poleLocations(g), 1e-2);
    CHECK(relErr(g.at(w), std::conj(f.at(std::conj(w)))) < 1e-9);
    const auto gg = g.conj();
    CHECK(samePoly(gg.numerator(), f.numerator(), 1e-12));
    CHECK(samePoly(gg.denominator(), f.denominator(), 1e-12));
  }
}

TEST_CASE("partial fractions") {
  SECTION("(z^2 + 1)/z") {
    const auto pf = partialFractions(rat(Poly{1.0, 0.0, 1.0}, Poly{0.0, 1.0}));
    CHECK(samePoly(pf.polynomialPart, Poly{0.0, 1.0}));
    REQUIRE(pf.terms.size() == 1);
    CHECK(std::abs(pf.terms[0].pole) < 1e-14);
    CHECK(pf.terms[0].order == 1);
    CHECK(std::abs(pf.terms[0].coefficient - 1.0) < 1e-12);
  }
  SECTION("1/z^2") {
    const auto pf = partialFractions(rat(Poly{1.0}, Poly{0.0, 0.0, 1.0}));
    CHECK(pf.polynomialPart.isZero());
    REQUIRE(pf.terms.size() == 2);
    CHECK(pf.terms[0].order == 1);
    CHECK(std::abs(pf.terms[0].coefficient) < 1e-14);
    CHECK(pf.terms[1].order == 2);
    CHECK(std::abs(pf.terms[1].coefficient - 1.0) < 1e-14);
  }
  SECTION("1/(z(z - 1)) by cover-up") {
    const auto pf = partialFractions(rat(Poly{1.0}, Poly{0.0, -1.0, 1.0}));
    REQUIRE(pf.terms.size() == 2);
    CHECK(std::abs(pf.terms[0].pole) < 1e-12);
    CHECK(std::abs(pf.terms[0].coefficient + 1.0) < 1e-12);
    CHECK(std::abs(pf.terms[1].pole - 1.0) < 1e-12);
    CHECK(std::abs(pf.terms[1].coefficient - 1.0) < 1e-12);
  }
}

TEST_CASE("partial fractions reconstruct the function") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto f = testsupport::randomNonconstant(rng, 5);
    const auto pf = partialFractions(f);
    const int samples = 3 * (f.numeratorDegree() + f.denominatorDegree()) + 1;
    const auto poles = testsupport::poleLocations(f);
    for (int s = 0; s < samples; ++s) {
      const cplx z = testsupport::randomPointAway(rng, poles, 1e-2);
      CHECK(relErr(pf(z), f.at(z)) < 1e-7);
    }
  }
}

TEST_CASE("residue examples") {
  auto res = residues(rat(Poly{1.0}, Poly{0.0, 1.0}));
  REQUIRE(res.size() == 1);
  CHECK(std::abs(res[0].residue - 1.0) < 1e-14);

  res = residues(rat(Poly{1.0}, Poly{0.0, 0.0, 1.0}));
  REQUIRE(res.size() == 1);
  CHECK(std::abs(res[0].residue) < 1e-14);

  res = residues(rat(Poly{0.0, 2.0}, Poly{1.0, 0.0, 1.0}));
  REQUIRE(res.size() == 2);
  for (const auto& r : res) CHECK(std::abs(r.residue - 1.0) < 1e-12);
}

TEST_CASE("residue theorem on the sphere") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> deg(1, 6);
  int checked = 0;
  while (checked < 100) {
    const int l = deg(rng);
    std::uniform_int_distribution<int> kd(0, std::min(6, l + 1));
    const auto f = testsupport::randomRational(rng, kd(rng), l);
    if (f.isPolynomial()) continue;
    cplx sum{};
    double maxPole = 0.0;
    for (const auto& r : residues(f)) {
      sum += r.residue;
      maxPole = std::max(maxPole, std::abs(r.pole));
    }
    CHECK(std::abs(sum + residueAtInfinity(f)) <= 1e-7);
    // Independent route: contour integral on a circle enclosing every pole.
    CHECK(std::abs(contourIntegral(f, 2.0 * maxPole + 1.0) - sum) <= 1e-7 * std::max(1.0, std::abs(sum)));
    ++checked;
  }
}

TEST_CASE("reduction is idempotent") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const auto f = testsupport::randomNonconstant(rng, 4);
    const auto g = RationalFunction(f.numerator(), f.denominator());
    const auto poles = testsupport::poleLocations(f);
    for (int s = 0; s < 50; ++s) {
      const cplx z = testsupport::randomPointAway(rng, poles, 1e-2);
      CHECK(relErr(g.at(z), f.at(z)) <= 1e-9);
    }
  }
}

TEST_CASE("derivative is linear") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 40; ++t) {
    const auto a = testsupport::randomNonconstant(rng, 3);
    const auto b = testsupport::randomNonconstant(rng, 3);
    const auto lhs = derivative(a + b);
    const auto da = derivative(a);
    const auto db = derivative(b);
    auto poles = testsupport::poleLocations(a);
    for (auto p : testsupport::poleLocations(b)) poles.push_back(p);
    for (int s = 0; s < 50; ++s) {
      const cplx z = testsupport::randomPointAway(rng, poles, 5e-2);
      CHECK(relErr(lhs.at(z), da.at(z) + db.at(z)) <= 1e-8);
    }
  }
}

TEST_CASE("derivative agrees with finite differences") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    const auto r = testsupport::randomNonconstant(rng, 4);
    const auto d = derivative(r);
    const auto poles = testsupport::poleLocations(r);
    const cplx z = testsupport::randomPointAway(rng, poles, 0.2);
    const double h = 1e-5;
    const cplx fd = (r.at(z + h) - r.at(z - h)) / (2.0 * h);
    CHECK(relErr(d.at(z), fd) < 1e-5 * std::max(1.0, std::abs(r.at(z))));
  }
}
