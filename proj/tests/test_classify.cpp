#include <catch_amalgamated.hpp>

#include <random>

#include "inflectus/classify.hpp"
#include "support.hpp"

using namespace inflectus;

namespace {

const cplx I{0.0, 1.0};

RationalFunction rat(Poly q, Poly p) { return RationalFunction(std::move(q), std::move(p)); }
RationalFunction poly(Poly p) { return RationalFunction::polynomial(std::move(p)); }
RationalFunction polePower(cplx c, cplx p, int order) {
  return rat(Poly{c}, Poly::fromRoots(std::vector<Root>{{p, order}}));
}

cplx nonzero(std::mt19937_64& rng) {
  for (;;) {
    const cplx c = testsupport::randomComplex(rng);
    if (std::abs(c) > 0.2) return c;
  }
}

/// Random exact map of the requested degree-3 class, as the derivative of a
/// rational function with the matching pole divisor.
RationalFunction randomCubic(std::mt19937_64& rng, ExactClass cls) {
  const cplx p = testsupport::randomComplex(rng);
  switch (cls) {
  case ExactClass::CubicPoly: {
    Poly r = testsupport::randomPoly(rng, 3);
    r = r + Poly::monomial(nonzero(rng), 4);
    return derivative(poly(r));
  }
  case ExactClass::CubicTriplePole:
    return derivative(poly(Poly{0.0, nonzero(rng)}) + polePower(nonzero(rng), p, 2) +
                      polePower(testsupport::randomComplex(rng), p, 1));
  default:
    return derivative(poly(Poly{0.0, testsupport::randomComplex(rng), nonzero(rng)}) +
                      polePower(nonzero(rng), p, 1));
  }
}

} // namespace

TEST_CASE("classification examples") {
  auto d = classifyExact(poly(Poly{I, 0.0, 1.0}));
  CHECK(d.cls == ExactClass::QuadPoly);
  CHECK(std::abs(d.alpha - 1.0) < 1e-14);
  CHECK(std::abs(d.p) < 1e-14);
  CHECK(std::abs(d.beta - I) < 1e-14);

  d = classifyExact(RationalFunction::constant(2.0) + polePower(3.0, 1.0, 2));
  CHECK(d.cls == ExactClass::QuadFiniteDoublePole);
  CHECK(std::abs(d.beta - 2.0) < 1e-10);
  CHECK(std::abs(d.alpha - 3.0) < 1e-10);
  CHECK(std::abs(d.p - 1.0) < 1e-10);

  d = classifyExact(poly(Poly{0.0, 1.0}) + polePower(1.0, 0.0, 2));
  CHECK(d.cls == ExactClass::CubicDoublePlusInfinity);
  CHECK(std::abs(d.a - 1.0) < 1e-12);
  CHECK(std::abs(d.b) < 1e-12);
  CHECK(std::abs(d.c - 1.0) < 1e-12);

  d = classifyExact(poly(Poly{2.0, 3.0}));
  CHECK(d.cls == ExactClass::Line);
  CHECK(d.degree == 1);

  CHECK_THROWS_AS(classifyExact(rat(Poly{1.0}, Poly{0.0, 1.0})), DomainError);
  CHECK_THROWS_AS(classifyExact(poly(Poly::monomial(1.0, 4))), DomainError);
}

TEST_CASE("degree-two curve verdict examples") {
  auto v = degreeTwoCurveVerdict(classifyExact(poly(Poly{I, 0.0, 1.0})));
  CHECK_FALSE(v.reducible);
  CHECK(v.geometry == "hyperbola");
  CHECK(v.form == "2xy + Im β = 0");
  CHECK(v.imBeta == 1.0);

  v = degreeTwoCurveVerdict(classifyExact(poly(Poly{0.0, 0.0, 1.0})));
  CHECK(v.reducible);
  CHECK(v.geometry == "two-lines");

  v = degreeTwoCurveVerdict(classifyExact(poly(Poly{5.0, 0.0, 1.0})));
  CHECK(v.reducible);

  v = degreeTwoCurveVerdict(classifyExact(poly(Poly{cplx(5.0, 1e-9), 0.0, 1.0})));
  CHECK(v.nearDegenerate);

  CHECK_THROWS_AS(degreeTwoCurveVerdict(classifyExact(poly(Poly{0.0, 1.0}))), DomainError);
}

TEST_CASE("normal-form coordinate turns Im f into 2xy + Im beta") {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 40; ++t) {
    const cplx alpha = nonzero(rng), beta = testsupport::randomComplex(rng), p = testsupport::randomComplex(rng);
    const auto f = (t % 2 == 0) ? poly(Poly{alpha * p * p + beta, -2.0 * alpha * p, alpha})
                                : RationalFunction::constant(beta) + polePower(alpha, p, 2);
    const auto d = classifyExact(f);
    CHECK(d.cls == (t % 2 == 0 ? ExactClass::QuadPoly : ExactClass::QuadFiniteDoublePole));
    const auto v = degreeTwoCurveVerdict(d);
    for (int s = 0; s < 10; ++s) {
      const cplx z = testsupport::randomPointAway(rng, {p}, 0.2);
      const cplx u = v.u(z);
      const double lhs = f.at(z).imag();
      const double rhs = 2.0 * u.real() * u.imag() + v.imBeta;
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(f.at(z))));
    }
  }
}

TEST_CASE("degree-three trichotomy with parameter round trip") {
  std::mt19937_64 rng(113);
  const ExactClass classes[] = {ExactClass::CubicPoly, ExactClass::CubicTriplePole,
                                ExactClass::CubicDoublePlusInfinity};
  for (int t = 0; t < 300; ++t) {
    const ExactClass want = classes[t % 3];
    const auto f = randomCubic(rng, want);
    const auto d = classifyExact(f);
    CHECK(d.degree == 3);
    CHECK(d.cls == want);
    CHECK(d.roundTripError(f) <= 1e-7);
  }
}

TEST_CASE("cubic singularity trigger examples") {
  auto flags = cubicSingularityTrigger(poly(Poly{0.0, 0.0, 0.0, 1.0}));
  REQUIRE(flags.size() == 1);
  CHECK(std::abs(flags[0].value) < 1e-12);
  CHECK(flags[0].onRP1);

  // z^3 + i z: critical points z^2 = -i/3, values off the real line.
  flags = cubicSingularityTrigger(poly(Poly{0.0, I, 0.0, 1.0}));
  REQUIRE(flags.size() == 2);
  for (const auto& fl : flags) {
    REQUIRE(fl.point.has_value());
    const cplx z = *fl.point;
    CHECK(std::abs(3.0 * z * z + I) < 1e-12);
    CHECK(std::abs(fl.value - (z * z * z + I * z)) < 1e-12);
    CHECK(fl.onRP1 == (std::abs(fl.value.imag()) <= 1e-9 * (1.0 + std::norm(fl.value))));
    CHECK_FALSE(fl.onRP1);
  }

  // 1 + 1/z^3 + 1/z^2: remaining critical points at z = -3/2 and z = infinity.
  flags = cubicSingularityTrigger(RationalFunction::constant(1.0) + polePower(1.0, 0.0, 3) + polePower(1.0, 0.0, 2));
  REQUIRE(flags.size() == 2);
  for (const auto& fl : flags) {
    if (fl.point) {
      CHECK(std::abs(*fl.point + 1.5) < 1e-10);
      CHECK(std::abs(fl.value - (1.0 - 1.0 / 3.375 + 1.0 / 2.25)) < 1e-10);
    } else {
      CHECK(std::abs(fl.value - 1.0) < 1e-12);
    }
    CHECK(fl.onRP1);
  }
}

TEST_CASE("curve verdict agrees with fiber product connectivity") {
  std::mt19937_64 rng(127);
  for (int t = 0; t < 50; ++t) {
    const cplx alpha = nonzero(rng), p = testsupport::randomComplex(rng);
    cplx beta = testsupport::randomComplex(rng);
    if (t % 2 == 1) beta = beta.real();
    const auto f = (t % 4 < 2) ? poly(Poly{alpha * p * p + beta, -2.0 * alpha * p, alpha})
                               : RationalFunction::constant(beta) + polePower(alpha, p, 2);
    const auto v = degreeTwoCurveVerdict(classifyExact(f));
    const auto r = fiberProductConnected(f);
    REQUIRE(r.verdict != Connectivity::Undetermined);
    CHECK(r.connected() == !v.reducible);
  }
}
