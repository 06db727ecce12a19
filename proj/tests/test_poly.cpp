#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "inflectus/poly.hpp"
#include "inflectus/roots.hpp"
#include "support.hpp"

using namespace inflectus;
using Catch::Approx;

namespace {

bool samePoly(const Poly& a, const Poly& b, double tol = 1e-12) {
  if (a.degree() != b.degree()) return false;
  for (int i = 0; i <= a.degree(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

const Root* findRoot(const std::vector<Root>& rs, cplx z, double tol) {
  for (const auto& r : rs)
    if (std::abs(r.value - z) <= tol) return &r;
  return nullptr;
}

} // namespace

TEST_CASE("polynomial arithmetic") {
  const cplx i{0.0, 1.0};
  CHECK(samePoly(Poly{1.0, 1.0} * Poly{1.0, -1.0}, Poly{1.0, 0.0, -1.0}));
  const Poly p{2.0, i, 3.0};
  CHECK(samePoly(p + Poly{}, p));
  CHECK(samePoly(Poly{0.0, i} * Poly{0.0, i}, Poly{0.0, 0.0, -1.0}));
}

TEST_CASE("zero polynomial and trimming") {
  Poly z;
  CHECK(z.isZero());
  CHECK(z.degree() == -1);
  const Poly p{1.0, 2.0, 3.0};
  CHECK((p - p).isZero());
  // Trailing noise relative to the largest coefficient is dropped.
  CHECK(Poly(std::vector<cplx>{1.0, 2.0, 1e-14}).degree() == 1);
  CHECK(Poly(std::vector<cplx>{1.0, 2.0, 1e-14}, 0.0).degree() == 2);
}

TEST_CASE("division, shift and reversal") {
  const Poly num{-1.0, 0.0, 0.0, 1.0}; // z^3 - 1
  const auto [q, r] = divmod(num, Poly{-1.0, 1.0});
  CHECK(samePoly(q, Poly{1.0, 1.0, 1.0}));
  CHECK(r.isZero());

  const Poly sq{0.0, 0.0, 1.0};
  CHECK(samePoly(sq.taylorShift(1.0), Poly{1.0, 2.0, 1.0}));
  CHECK(samePoly(Poly{1.0, 2.0}.reversed(3), Poly{0.0, 0.0, 2.0, 1.0}));
}

TEST_CASE("roots of simple polynomials") {
  SECTION("z^2 + 1") {
    const auto rs = roots(Poly{1.0, 0.0, 1.0});
    REQUIRE(rs.size() == 2);
    CHECK(findRoot(rs, {0.0, 1.0}, 1e-12));
    CHECK(findRoot(rs, {0.0, -1.0}, 1e-12));
    for (const auto& r : rs) CHECK(r.multiplicity == 1);
  }
  SECTION("(z - 1)^3 expanded re-clusters to a triple root") {
    const auto rs = roots(Poly{-1.0, 3.0, -3.0, 1.0});
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].multiplicity == 3);
    CHECK(std::abs(rs[0].value - 1.0) < 1e-9);
  }
  SECTION("constants have no roots") {
    CHECK(roots(Poly{5.0}).empty());
  }
  SECTION("zero roots are exact") {
    const auto rs = roots(Poly{0.0, 0.0, 2.0, 1.0});
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].value == cplx{});
    CHECK(rs[0].multiplicity == 2);
  }
  SECTION("zero polynomial is rejected") {
    CHECK_THROWS_AS(roots(Poly{}), DegenerateInput);
  }
}

TEST_CASE("multiplicities of products of random linear factors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Root> truth;
    std::uniform_int_distribution<int> mult(1, 4);
    const int distinct = 1 + trial % 3;
    for (int k = 0; k < distinct; ++k) {
      cplx z = testsupport::randomPointAway(rng, {}, 0.0);
      bool far = true;
      for (const auto& t : truth)
        if (std::abs(t.value - z) < 0.3) far = false;
      if (!far) continue;
      truth.push_back({z, mult(rng)});
    }
    const Poly p = Poly::fromRoots(truth);
    const auto rs = roots(p);
    REQUIRE(rs.size() == truth.size());
    for (const auto& t : truth) {
      const Root* r = findRoot(rs, t.value, 1e-6);
      REQUIRE(r != nullptr);
      CHECK(r->multiplicity == t.multiplicity);
    }
  }
}

TEST_CASE("root residuals are bounded") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + trial % 12;
    const Poly p = testsupport::randomPoly(rng, deg);
    const auto rs = roots(p);
    int total = 0;
    for (const auto& r : rs) {
      total += r.multiplicity;
      const double bound =
          1e-7 * p.scale() * std::pow(std::max(1.0, std::abs(r.value)), p.degree());
      CHECK(std::abs(p(r.value)) <= bound);
    }
    CHECK(total == p.degree());
  }
}
