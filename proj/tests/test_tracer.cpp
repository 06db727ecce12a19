#include <catch_amalgamated.hpp>

#include <random>

#include "inflectus/tracer.hpp"
#include "support.hpp"

using namespace inflectus;

namespace {

const cplx I{0.0, 1.0};

RationalFunction rat(Poly q, Poly p) { return RationalFunction(std::move(q), std::move(p)); }
RationalFunction poly(Poly p) { return RationalFunction::polynomial(std::move(p)); }

Window square(cplx c, double half, int res = 512) {
  Window w;
  w.center = c;
  w.halfWidth = w.halfHeight = half;
  w.resolution = res;
  return w;
}

int interiorVertices(const CurveGraph& g, VertexKind k) {
  int n = 0;
  for (const auto& v : g.vertices) n += v.kind == k;
  return n;
}

} // namespace

TEST_CASE("1/z: the axes through a pole node") {
  const auto r = rat(Poly{1.0}, Poly{0.0, 1.0});
  const auto g = traceCurve(r, square(0.0, 2.0));
  REQUIRE(g.components.size() == 1);
  CHECK_FALSE(g.components[0].bounded);
  CHECK(g.components[0].poles == std::vector<int>{0});
  const int pv = g.poleVertex(0);
  REQUIRE(pv >= 0);
  CHECK(g.vertices[static_cast<std::size_t>(pv)].valency == 4);
  CHECK(std::abs(g.vertices[static_cast<std::size_t>(pv)].position) < 1e-12);
  CHECK(g.boundaryExits() == 4);
  const auto rep = componentReport(g);
  CHECK_FALSE(rep[0].violation);
}

TEST_CASE("z^3: junction of valency four and four exits") {
  const auto g = traceCurve(poly(Poly::monomial(1.0, 3)), square(0.0, 2.0));
  CHECK(g.boundaryExits() == 4);
  REQUIRE(interiorVertices(g, VertexKind::Junction) == 1);
  for (const auto& v : g.vertices)
    if (v.kind == VertexKind::Junction) {
      CHECK(v.valency == 4);
      CHECK(std::abs(v.position) < 1e-9);
    }
  REQUIRE(g.components.size() == 1);
  CHECK_FALSE(g.components[0].bounded);
}

TEST_CASE("(1+i) z + 1/(z-1): bounded curve through the pole") {
  const auto r = poly(Poly{0.0, cplx(1.0, 1.0)}) + rat(Poly{1.0}, Poly{-1.0, 1.0});
  const auto res = traceAuto(r);
  CHECK(res.boundedness.verdict == Boundedness::Bounded);
  REQUIRE(res.graph.components.size() == 1);
  CHECK(res.graph.components[0].bounded);
  CHECK(res.graph.components[0].poles == std::vector<int>{0});
  CHECK(res.graph.boundaryExits() == 0);
  CHECK(res.violations == 0);

  // Oracle: Im R'(z) = Im(1+i) - Im(1/(z-1)^2) keeps one sign on a dense
  // polar grid outside |z - 1| <= 3.
  int pos = 0, neg = 0;
  for (int i = 0; i < 400; ++i)
    for (int k = 0; k < 720; ++k) {
      const double rad = 3.0 * std::pow(1000.0, i / 399.0);
      const cplx u = std::polar(rad, k * kTwoPi / 720);
      const double h = 1.0 - (1.0 / (u * u)).imag();
      (h > 0 ? pos : neg)++;
    }
  CHECK(neg == 0);
  CHECK(pos > 0);
  for (const auto& e : res.graph.edges)
    for (const auto& p : e.points) CHECK(std::abs(p - 1.0) <= 3.0);
}

TEST_CASE("auto window strictly contains the poles") {
  std::mt19937_64 rng(131);
  for (int t = 0; t < 20; ++t) {
    const auto r = testsupport::randomRational(rng, 2, 3);
    const auto w = autoWindow(r);
    CHECK(w.halfWidth >= 1.0);
    for (const auto& p : testsupport::poleLocations(r)) {
      CHECK(std::abs(p.real() - w.center.real()) < w.halfWidth);
      CHECK(std::abs(p.imag() - w.center.imag()) < w.halfHeight);
    }
  }
  Window bad;
  bad.resolution = 8;
  CHECK_THROWS_AS(traceCurve(poly(Poly{0.0, 0.0, 1.0}), bad), DomainError);
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(traceCurve(RationalFunction::constant(I), square(0.0, 1.0)), DegenerateInput);
  // R' = 2 real: F_R vanishes identically.
  CHECK_THROWS_AS(traceCurve(poly(Poly{I, 2.0}), square(0.0, 1.0)), DegenerateInput);
}

TEST_CASE("sign correctness, even valency, pole valency on random R") {
  std::mt19937_64 rng(137);
  for (int t = 0; t < 12; ++t) {
    const auto r = testsupport::randomRational(rng, 1 + t % 3, 1 + t % 2);
    const auto w = autoWindow(r);
    const auto g = traceCurve(r, w);
    const Poly& p = r.denominator();
    const Poly wr = wronskian(r.numerator(), p);
    const double cell = w.cell();
    // Sampled: |F(p)| <= 10 h |grad F| with a central-difference gradient.
    for (const auto& e : g.edges) {
      for (std::size_t k = 0; k < e.points.size(); k += 7) {
        const cplx z = e.points[k];
        bool atVertex = false;
        for (const auto& v : g.vertices)
          if (v.kind != VertexKind::BoundaryExit && std::abs(z - v.position) < 1e-12) atVertex = true;
        if (atVertex) continue;
        const double h = 1e-3 * cell;
        const double gx = (definingValue(wr, p, z + h) - definingValue(wr, p, z - h)) / (2 * h);
        const double gy = (definingValue(wr, p, z + I * h) - definingValue(wr, p, z - I * h)) / (2 * h);
        CHECK(std::abs(definingValue(wr, p, z)) <= 10.0 * cell * std::hypot(gx, gy) + 1e-300);
      }
    }
    for (const auto& v : g.vertices) {
      if (v.kind == VertexKind::BoundaryExit) continue;
      CHECK(v.valency % 2 == 0);
      CHECK(v.valency >= 2);
    }
    for (std::size_t i = 0; i < g.poles.size(); ++i) {
      const int pv = g.poleVertex(static_cast<int>(i));
      REQUIRE(pv >= 0);
      CHECK(g.vertices[static_cast<std::size_t>(pv)].valency == 2 * g.poles[i].order + 2);
    }
  }
}

TEST_CASE("pole local model: valency 2s+2 and tangent directions") {
  std::mt19937_64 rng(139);
  for (int s = 1; s <= 3; ++s) {
    for (int t = 0; t < 4; ++t) {
      const cplx a = testsupport::randomComplex(rng);
      const auto r = rat(Poly{a}, Poly::fromRoots(std::vector<Root>{{0.0, s}})) +
                     poly(Poly{testsupport::randomComplex(rng), testsupport::randomComplex(rng)});
      const auto g = traceCurve(r, square(0.0, 1.0));
      const int pv = g.poleVertex(0);
      REQUIRE(pv >= 0);
      CHECK(g.vertices[static_cast<std::size_t>(pv)].valency == 2 * s + 2);
      const auto measured = branchAngles(g, pv, 6 * g.window.cell(), 0.15);
      REQUIRE(measured.size() == static_cast<std::size_t>(2 * s + 2));
      CHECK(g.poles[0].tangentRays.maxDeviation(measured) <= 2.0 * std::numbers::pi / 180.0);
    }
  }
}

TEST_CASE("maximum principle on random R with simple poles") {
  std::mt19937_64 rng(149);
  for (int t = 0; t < 10; ++t) {
    const int l = 1 + t % 3;
    std::vector<Root> ps;
    for (int j = 0; j < l; ++j) ps.push_back({testsupport::randomComplex(rng), 1});
    const auto r = rat(testsupport::randomPoly(rng, 1 + t % 4), Poly::fromRoots(ps));
    const auto res = traceAuto(r);
    CHECK(res.violations == 0);
  }
  for (int t = 0; t < 6; ++t) {
    const auto r = poly(testsupport::randomPoly(rng, 2 + t % 4));
    const auto g = traceAuto(r).graph;
    for (const auto& c : g.components) CHECK_FALSE(c.bounded);
  }
}

TEST_CASE("far-field exits match the asymptotic rays") {
  std::mt19937_64 rng(151);
  int tested = 0;
  while (tested < 8) {
    std::uniform_int_distribution<int> d(0, 3);
    const int k = d(rng), l = d(rng);
    if (k == l + 1 || (k == 0 && l == 0) || (k <= 1 && l == 0)) continue;
    const auto r = testsupport::randomRational(rng, k, l);
    const auto bd = boundednessAnalysis(r);
    const auto ends = traceEnds(r);
    CHECK(ends.exits == bd.endCount);
    if (k != l) CHECK(ends.exits == 2 * std::abs(k - l - 1));
    if (ends.exits == bd.endCount)
      CHECK(bd.rays.maxDeviation(ends.exitAngles) <= 3.0 * std::numbers::pi / 180.0);
    ++tested;
  }
}

TEST_CASE("degree-two consistency: hyperbola or X") {
  std::mt19937_64 rng(157);
  for (int t = 0; t < 6; ++t) {
    const cplx alpha = testsupport::randomComplex(rng) + 0.5;
    const cplx p = 0.3 * testsupport::randomComplex(rng);
    cplx beta = testsupport::randomComplex(rng);
    if (t % 2 == 1) beta = beta.real();
    else beta += I * 0.5;
    // R' = alpha (z - p)^2 + beta.
    const Poly cube = Poly::fromRoots(std::vector<Root>{{p, 3}}) * (alpha / 3.0);
    const auto r = poly(cube + Poly{0.0, beta});
    const auto g = traceCurve(r, square(p, 3.0));
    if (t % 2 == 0) {
      CHECK(g.components.size() == 2);
      CHECK(interiorVertices(g, VertexKind::Junction) == 0);
    } else {
      CHECK(g.components.size() == 1);
      REQUIRE(interiorVertices(g, VertexKind::Junction) == 1);
      for (const auto& v : g.vertices)
        if (v.kind == VertexKind::Junction) CHECK(v.valency == 4);
    }
  }
}

TEST_CASE("trajectory examples") {
  const auto w = square(0.0, 2.0);
  SECTION("R = z flows into the zero along the real axis") {
    const auto t = integrateTrajectories(poly(Poly{0.0, 1.0}), w, {1.0});
    REQUIRE(t.size() == 1);
    CHECK(t[0].forwardStop == "stop-radius");
    CHECK(std::abs(t[0].points.back()) <= 1.01e-3);
    for (const auto& p : t[0].points) CHECK(std::abs(p.imag()) < 1e-12);
    CHECK_FALSE(t[0].truncated);
  }
  SECTION("R = i is a straight line in direction -i") {
    const auto t = integrateTrajectories(RationalFunction::constant(I), w, {0.0});
    REQUIRE(t.size() == 1);
    CHECK(t[0].points.back().imag() < -1.9);
    for (const auto& p : t[0].points) CHECK(std::abs(p.real()) < 1e-12);
  }
  SECTION("R = 1/z conserves Im z^2") {
    const auto t = integrateTrajectories(rat(Poly{1.0}, Poly{0.0, 1.0}), w, {cplx(1.0, 1.0)});
    REQUIRE(t.size() == 1);
    CHECK(t[0].points.size() > 50);
    for (const auto& p : t[0].points) CHECK(std::abs((p * p).imag() - 2.0) < 1e-6);
  }
  SECTION("seeds on equilibria are skipped") {
    CHECK(integrateTrajectories(poly(Poly{0.0, 1.0}), w, {0.0}).empty());
  }
}

TEST_CASE("inflection cross-check on closed-form cases") {
  const auto w = square(0.0, 2.0);
  SECTION("constant field") {
    const auto r = RationalFunction::constant(I);
    for (const auto& t : integrateTrajectories(r, w, {0.0, cplx(0.5, 0.3)})) {
      const auto rep = inflectionCrossCheck(r, t.points);
      CHECK(rep.curvatureChanges.empty());
      CHECK(rep.fieldChanges.empty());
    }
  }
  // Here the inflection curve is invariant: trajectories are circles through 0
  // (images of lines parallel to (1+i)R under 1/w), never crossing y = -x.
  SECTION("(1+i) z^2: no trajectory crosses the invariant line y = -x") {
    const auto r = poly(Poly{0.0, 0.0, cplx(1.0, 1.0)});
    for (const auto& t : integrateTrajectories(r, w, {1.0, cplx(0.5, 1.0), cplx(-1.0, 0.2)})) {
      const auto rep = inflectionCrossCheck(r, t.points);
      CHECK(rep.ok());
      CHECK(rep.curvatureChanges.empty());
      CHECK(rep.fieldChanges.empty());
    }
    // On the line itself: a straight trajectory.
    const auto on = integrateTrajectories(r, w, {cplx(1.0, -1.0)});
    REQUIRE(on.size() == 1);
    for (const auto& p : on[0].points) CHECK(std::abs(p.real() + p.imag()) < 1e-9);
  }
  SECTION("1/z: hyperbolas xy = const never meet the axes") {
    const auto r = rat(Poly{1.0}, Poly{0.0, 1.0});
    for (const auto& t : integrateTrajectories(r, w, {cplx(1.0, 1.0), cplx(-0.3, 1.2)})) {
      const auto rep = inflectionCrossCheck(r, t.points);
      CHECK(rep.ok());
      CHECK(rep.crossings.empty());
    }
  }
  SECTION("random R: every curvature change sits on a crossing of F_R") {
    std::mt19937_64 rng(163);
    int crossings = 0;
    for (int n = 0; n < 6; ++n) {
      const auto r = testsupport::randomRational(rng, 2, 1);
      const auto win = autoWindow(r);
      for (const auto& t : integrateTrajectories(r, win, gridSeeds(win, 4))) {
        const auto rep = inflectionCrossCheck(r, t.points);
        CHECK(rep.ok());
        crossings += static_cast<int>(rep.crossings.size());
      }
    }
    CHECK(crossings >= 5);
  }
}
