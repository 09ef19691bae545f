#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "coneproc/polynomial.hpp"

using namespace coneproc;

namespace {

UniPoly poly(std::initializer_list<long> coeffsLowFirst) {
  std::vector<Rational> c;
  for (long v : coeffsLowFirst) c.emplace_back(v);
  return UniPoly(std::move(c));
}

// Independent root counter: exact evaluation of the square-free part on a
// dense grid, counting grid zeros and sign flips between them.
int gridRootCount(const UniPoly& p, const Rational& from) {
  UniPoly s = squareFreePart(p);
  if (s.degree() < 1) return 0;
  Rational hi = detail::cauchyRootBound(s);
  if (from >= hi) return 0;
  const int cells = 4096;
  Rational step = (hi - from) / cells;
  int count = 0;
  int lastSign = 0;
  for (int i = 0; i <= cells; ++i) {
    int sg = sgn(s.eval(from + Rational(i) * step));
    if (sg == 0) {
      ++count;      // root exactly on the grid
      lastSign = 0;  // the flip around it is this same root
      continue;
    }
    if (lastSign != 0 && sg != lastSign) ++count;
    lastSign = sg;
  }
  return count;
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(poly({-1, 0, 1}).eval(makeRational(1, 2)) == makeRational(-3, 4));
  CHECK(UniPoly().eval(Rational(7)) == 0);
  CHECK(poly({0, 1, 1}).eval(Rational(-1)) == 0);
}

TEST_CASE("divmod and gcd") {
  UniPoly p = poly({-2, 0, 1});           // t^2 - 2
  UniPoly q = poly({-1, 1});              // t - 1
  auto [quo, rem] = divmod(p, q);
  CHECK(quo * q + rem == p);
  CHECK(rem.degree() == 0);

  UniPoly a = poly({-2, 0, 1}) * poly({1, 1});
  UniPoly b = poly({-2, 0, 1}) * poly({3, 1});
  CHECK(gcdPoly(a, b) == poly({-2, 0, 1}).monic());
}

TEST_CASE("square-free part strips multiplicities") {
  UniPoly dbl = poly({-1, 1}) * poly({-1, 1}) * poly({2, 1});
  UniPoly s = squareFreePart(dbl);
  CHECK(s == (poly({-1, 1}) * poly({2, 1})).monic());
}

TEST_CASE("argument transforms") {
  UniPoly p = poly({1, 2, 3});
  Rational x = makeRational(5, 7), c = makeRational(-2, 3);
  CHECK(shiftArg(p, c).eval(x) == p.eval(x + c));
  CHECK(scaleArg(p, c).eval(x) == p.eval(c * x));
  CHECK(reverseCoeffs(poly({1, 2, 3})) == poly({3, 2, 1}));
}

TEST_CASE("root isolation: plain factorizations") {
  auto r1 = isolateRealRoots(poly({-1, 0, 1}), Rational(0));  // t^2 - 1
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].isRational());
  CHECK(r1[0].rationalValue() == 1);

  auto r2 = isolateRealRoots(poly({0, 1, 1}), Rational(0));  // t^2 + t
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].isRational());
  CHECK(r2[0].rationalValue() == 0);

  CHECK_THROWS_AS(isolateRealRoots(UniPoly(), Rational(0)),
                  std::invalid_argument);
}

TEST_CASE("root isolation: irrational root is certified by its interval") {
  auto roots = isolateRealRoots(poly({-2, 0, 1}), Rational(0));
  REQUIRE(roots.size() == 1);
  const AlgebraicPoint& rt = roots[0];
  CHECK_FALSE(rt.isRational());
  CHECK(rt.defining() == poly({-2, 0, 1}).monic());
  // Bisection oracle: defining changes sign across the interval, and the
  // point sits strictly between 1 and 3/2.
  CHECK(sgn(rt.defining().eval(rt.lower())) *
            sgn(rt.defining().eval(rt.upper())) <
        0);
  CHECK(comparePoints(rt, AlgebraicPoint::ofRational(Rational(1))) > 0);
  CHECK(comparePoints(rt, AlgebraicPoint::ofRational(makeRational(3, 2))) < 0);
}

TEST_CASE("sign evaluation at points") {
  UniPoly tMinus1 = poly({-1, 1});
  CHECK(signAt(tMinus1, AlgebraicPoint::ofRational(Rational(1))) == 0);

  AlgebraicPoint sqrt2 = AlgebraicPoint::algebraic(
      poly({-2, 0, 1}), Rational(1), makeRational(3, 2));
  CHECK(signAt(tMinus1, sqrt2) == 1);
  CHECK(signAt(poly({-2, 0, 1}), sqrt2) == 0);
  CHECK(signAt(poly({0, 1}), sqrt2) == 1);
  CHECK(signAt(poly({0, -1}), sqrt2) == -1);
}

TEST_CASE("equality across different defining polynomials") {
  AlgebraicPoint a = AlgebraicPoint::algebraic(poly({-2, 0, 1}), Rational(1),
                                               makeRational(3, 2));
  // t^4 - 4 = (t^2-2)(t^2+2) shares the root sqrt(2).
  auto roots = isolateRealRoots(poly({-4, 0, 0, 0, 1}), Rational(0));
  REQUIRE(roots.size() == 1);
  CHECK(pointsEqual(a, roots[0]));
  CHECK(comparePoints(a, AlgebraicPoint::ofRational(makeRational(141, 100))) > 0);
  CHECK(comparePoints(a, AlgebraicPoint::ofRational(makeRational(142, 100))) < 0);

  Rational mid = rationalBetween(a, AlgebraicPoint::ofRational(makeRational(3, 2)));
  CHECK(comparePoints(AlgebraicPoint::ofRational(mid), a) > 0);
  CHECK(mid < makeRational(3, 2));
}

TEST_CASE("half-line filtering keeps only roots at or above the cutoff") {
  // (t-1)(t+3)(t^2-3): roots -3, -sqrt3, 1, sqrt3; only 1 and sqrt3 >= 0.
  UniPoly p = poly({-1, 1}) * poly({3, 1}) * poly({-3, 0, 1});
  auto roots = isolateRealRoots(p, Rational(0));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].isRational());
  CHECK(roots[0].rationalValue() == 1);
  CHECK_FALSE(roots[1].isRational());
  CHECK(comparePoints(roots[0], roots[1]) < 0);
}

TEST_CASE("random polynomials agree with the grid sweep") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> degD(1, 6), coefD(-9, 9);
  for (int trial = 0; trial < 120; ++trial) {
    int deg = degD(rng);
    std::vector<Rational> c(deg + 1);
    for (auto& v : c) v = Rational(coefD(rng));
    while (sgn(c.back()) == 0) c.back() = Rational(coefD(rng));
    UniPoly p{std::vector<Rational>(c)};
    if (p.degree() < 1) continue;

    auto roots = isolateRealRoots(p, Rational(0));
    CHECK(static_cast<int>(roots.size()) == gridRootCount(p, Rational(0)));

    // Sorted strictly ascending, intervals of algebraic roots disjoint.
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
      CHECK(comparePoints(roots[i], roots[i + 1]) < 0);
      if (!roots[i].isRational() && !roots[i + 1].isRational())
        CHECK(roots[i].upper() <= roots[i + 1].lower());
    }
    // Each algebraic interval brackets exactly one sign change of the
    // square-free part.
    UniPoly s = squareFreePart(p);
    for (const auto& rt : roots) {
      if (rt.isRational()) {
        CHECK(sgn(p.eval(rt.rationalValue())) == 0);
      } else {
        CHECK(sgn(s.eval(rt.lower())) * sgn(s.eval(rt.upper())) < 0);
      }
    }
  }
}

TEST_CASE("sign at rational points matches direct evaluation") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coefD(-5, 5), valD(-8, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> c(4);
    for (auto& v : c) v = Rational(coefD(rng));
    UniPoly p{std::move(c)};
    Rational x = makeRational(valD(rng), 1 + std::abs(valD(rng)));
    CHECK(signAt(p, AlgebraicPoint::ofRational(x)) == sgn(p.eval(x)));
  }
}
