#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "coneproc/process.hpp"

using namespace coneproc;

namespace {

std::vector<Rational> vec(std::initializer_list<long> vs) {
  std::vector<Rational> v;
  for (long x : vs) v.emplace_back(x);
  return v;
}

DataSet pairSet(int n,
                std::initializer_list<std::pair<std::initializer_list<long>,
                                                std::initializer_list<long>>>
                    ps) {
  std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> raw;
  for (const auto& [x, y] : ps) raw.emplace_back(vec(x), vec(y));
  return DataSet::fromPairs(n, raw);
}

DataSet example2() { return pairSet(1, {{{0}, {1}}, {{1}, {-1}}}); }

DataSet example3() {
  return DataSet::fromTrajectories(
      2, {{vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({0, -1}), vec({-1, 0})}});
}

ConvexProcess randomProcess(std::mt19937& rng, int n, int maxGen) {
  std::uniform_int_distribution<int> entry(-3, 3), cnt(0, maxGen);
  int g = cnt(rng);
  Mat m(2 * n, g);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < g; ++j) m.at(i, j) = Rational(entry(rng));
  return ConvexProcess::fromGraphGenerators(n, m);
}

// Z and W recovered from the inequality rows [Z -W] of the graph.
std::pair<Mat, Mat> zwOf(const ConvexProcess& h) {
  Mat rows = h.graph().inequalityRows();
  const int n = h.stateDim();
  Mat z = rows.subColumns(0, n);
  Mat w = -rows.subColumns(n, n);
  return {z, w};
}

}  // namespace

TEST_CASE("dataset construction and cleanup") {
  DataSet d = pairSet(1, {{{0}, {1}}, {{0}, {0}}, {{1}, {-1}}, {{0}, {1}}});
  CHECK(d.T() == 2);  // zero pair and duplicate dropped
  CHECK(d.X == Mat::fromRows({{0, 1}}));
  CHECK(d.Y == Mat::fromRows({{1, -1}}));

  DataSet e3 = example3();
  CHECK(e3.T() == 4);
  CHECK(e3.X == Mat::fromRows({{0, 1, 0, 0}, {0, 0, 1, -1}}));
  CHECK(e3.Y == Mat::fromRows({{1, 0, 0, -1}, {0, 1, -1, 0}}));

  CHECK_THROWS_AS(pairSet(2, {{{1}, {1, 2}}}), std::invalid_argument);
}

TEST_CASE("graph built from data") {
  ConvexProcess h2 = processFromData(example2());
  CHECK(coneEqual(h2.graph(), PolyCone::fromGenerators(
                                  2, Mat::fromColumns({vec({0, 1}),
                                                       vec({1, -1})}))));

  // The four trajectory pairs are independent: the graph is simplicial with
  // four facets, two of which are the reference directions.
  ConvexProcess h3 = processFromData(example3());
  auto [z, w] = zwOf(h3);
  CHECK(z.rows() == 4);
  PolyCone rowCone =
      PolyCone::fromGenerators(4, h3.graph().inequalityRows().transpose());
  CHECK(rowCone.contains(vec({1, 0, 0, 0})));
  CHECK(rowCone.contains(vec({1, 0, 0, -1})));

  ConvexProcess empty = processFromData(DataSet::fromPairs(1, {}));
  CHECK(empty.graph().generators().cols() == 0);
}

TEST_CASE("constrained linear system as a process") {
  // x+ = u with x, u >= 0
  ConvexProcess orth = processFromConstrainedLinear(
      Mat(1, 1), Mat::identity(1),
      PolyCone::fromInequalities(2, Mat::identity(2)));
  CHECK(coneEqual(orth.graph(),
                  PolyCone::fromInequalities(2, Mat::identity(2))));

  // x+ = x unconstrained: the diagonal
  ConvexProcess diag = processFromConstrainedLinear(
      Mat::identity(2), Mat(2, 1), PolyCone::fullCone(3));
  CHECK(linearSpan(diag.graph()) ==
        Subspace::span(Mat::fromColumns({vec({1, 0, 1, 0}), vec({0, 1, 0, 1})})));

  // x+ = u constrained to 0 <= x <= u gives the graph {(x,y): 0<=x<=y}
  ConvexProcess g = processFromConstrainedLinear(
      Mat(1, 1), Mat::identity(1),
      PolyCone::fromGenerators(2, Mat::fromColumns({vec({0, 1}), vec({1, 1})})));
  CHECK(coneEqual(g.graph(), PolyCone::fromGenerators(
                                 2, Mat::fromColumns({vec({0, 1}), vec({1, 1})}))));
  CHECK(g.graph().contains(vec({1, 2})));
  CHECK_FALSE(g.graph().contains(vec({2, 1})));
}

TEST_CASE("domain and image projections") {
  ConvexProcess h3 = processFromData(example3());
  PolyCone dom = processDomain(h3);
  // nonnegative first coordinate, free second
  CHECK(coneEqual(dom, PolyCone::fromInequalities(2, Mat::fromRows({{1, 0}}))));

  ConvexProcess h2 = processFromData(example2());
  CHECK(coneEqual(processDomain(h2),
                  PolyCone::fromInequalities(1, Mat::fromRows({{1}}))));
  CHECK(isFullCone(processImage(h2)));

  ConvexProcess zero = ConvexProcess::zeroProcess(2);
  CHECK(processDomain(zero).generators().cols() == 0);
  CHECK(processImage(zero).generators().cols() == 0);
}

TEST_CASE("negative dual matches both closed forms") {
  ConvexProcess h2 = processFromData(example2());
  ConvexProcess dual = negativeDual(h2);
  PolyCone expected =
      PolyCone::fromGenerators(2, Mat::fromColumns({vec({0, 1}), vec({-1, 1})}));
  CHECK(coneEqual(dual.graph(), expected));

  // generator form [W^T; Z^T] R_+^l
  auto [z, w] = zwOf(h2);
  PolyCone genForm = PolyCone::fromGenerators(
      2, Mat::vstack(w.transpose(), z.transpose()));
  CHECK(coneEqual(dual.graph(), genForm));

  // inequality form [Y^T -X^T] v <= 0
  const DataSet d = example2();
  Mat yx = Mat::hstack(d.Y.transpose(), -d.X.transpose());
  PolyCone ineqForm = PolyCone::fromInequalities(2, -yx);
  CHECK(coneEqual(dual.graph(), ineqForm));
}

TEST_CASE("dual of the zero process is everything") {
  ConvexProcess zero = ConvexProcess::zeroProcess(2);
  CHECK(isFullCone(negativeDual(zero).graph()));
}

TEST_CASE("the diagonal graph is self-dual") {
  ConvexProcess diag = ConvexProcess::fromGraphGenerators(
      1, Mat::fromColumns({vec({1, 1}), vec({-1, -1})}));
  CHECK(coneEqual(negativeDual(diag).graph(), diag.graph()));
}

TEST_CASE("orientation of the dual rotation") {
  // H(x) = {2x} for x >= 0: graph is the single ray (1, 2). Its negative
  // dual must be {(q, p) : p >= 2q}; a sign slip in the rotation flips this
  // to {p <= 2q}, which the asymmetry here detects.
  ConvexProcess h =
      ConvexProcess::fromGraphGenerators(1, Mat::fromColumns({vec({1, 2})}));
  ConvexProcess dual = negativeDual(h);
  PolyCone expected = PolyCone::fromInequalities(2, Mat::fromRows({{-2, 1}}));
  CHECK(coneEqual(dual.graph(), expected));
  CHECK(dual.graph().contains(vec({0, 1})));
  CHECK_FALSE(dual.graph().contains(vec({0, -1})));
}

TEST_CASE("inverse swaps the coordinate blocks") {
  ConvexProcess g = ConvexProcess::fromGraphGenerators(
      1, Mat::fromColumns({vec({0, 1}), vec({1, 1})}));
  ConvexProcess inv = inverseProcess(g);
  CHECK(inv.graph().contains(vec({2, 1})));
  CHECK_FALSE(inv.graph().contains(vec({1, 2})));
  CHECK(coneEqual(inverseProcess(inv).graph(), g.graph()));

  ConvexProcess zero = ConvexProcess::zeroProcess(3);
  CHECK(coneEqual(inverseProcess(zero).graph(), zero.graph()));
}

TEST_CASE("applying a process through its graph") {
  ConvexProcess h2 = processFromData(example2());
  PolyCone r1 = applyProcess(h2, PolyCone::zeroCone(1));
  CHECK(coneEqual(r1, PolyCone::fromInequalities(1, Mat::fromRows({{1}}))));

  PolyCone r2 = applyProcess(h2, r1);
  CHECK(isFullCone(r2));

  std::mt19937 rng(8);
  ConvexProcess h = randomProcess(rng, 2, 5);
  CHECK(coneEqual(applyProcess(h, PolyCone::fullCone(2)), processImage(h)));
}

TEST_CASE("minimal and maximal linear processes") {
  Subspace diag = Subspace::span(Mat::fromColumns({vec({1, 1})}));
  ConvexProcess lin =
      ConvexProcess(1, PolyCone::fromSubspace(diag));
  CHECK(minimalLinear(lin).graph == diag);
  CHECK(maximalLinear(lin).graph == diag);

  // simplicial data graph: trivial lineality, full span
  ConvexProcess h3 = processFromData(example3());
  CHECK(minimalLinear(h3).graph.isZeroSpace());
  CHECK(maximalLinear(h3).graph.isFull());

  ConvexProcess orthant = ConvexProcess(
      1, PolyCone::fromInequalities(2, Mat::identity(2)));
  CHECK(minimalLinear(orthant).graph.isZeroSpace());
  CHECK(maximalLinear(orthant).graph.isFull());
}

TEST_CASE("graph sandwich by the linear envelopes") {
  std::mt19937 rng(1001);
  for (int t = 0; t < 60; ++t) {
    ConvexProcess h = randomProcess(rng, 1 + t % 3, 6);
    PolyCone lower = PolyCone::fromSubspace(minimalLinear(h).graph);
    PolyCone upper = PolyCone::fromSubspace(maximalLinear(h).graph);
    CHECK(coneContains(h.graph(), lower));
    CHECK(coneContains(upper, h.graph()));
  }
}

TEST_CASE("double dual restores the process") {
  std::mt19937 rng(2002);
  for (int t = 0; t < 60; ++t) {
    ConvexProcess h = randomProcess(rng, 1 + t % 3, 6);
    ConvexProcess back = negativeDual(positiveDual(h));
    CHECK(coneEqual(back.graph(), h.graph()));
  }
}

TEST_CASE("positive and negative duals mirror each other") {
  std::mt19937 rng(3003);
  for (int t = 0; t < 60; ++t) {
    ConvexProcess h = randomProcess(rng, 1 + t % 3, 6);
    PolyCone mirrored =
        linearImage(-Mat::identity(2 * h.stateDim()), negativeDual(h).graph());
    CHECK(coneEqual(positiveDual(h).graph(), mirrored));
  }
}

TEST_CASE("value at the origin equals the polar of the dual domain") {
  std::mt19937 rng(4004);
  for (int t = 0; t < 40; ++t) {
    ConvexProcess h = randomProcess(rng, 1 + t % 2, 5);
    PolyCone lhs = applyProcess(h, PolyCone::zeroCone(h.stateDim()));
    PolyCone rhs =
        polarCone(processDomain(negativeDual(h)), PolarSign::Negative);
    CHECK(coneEqual(lhs, rhs));
  }
}

TEST_CASE("linear envelopes of the duals") {
  std::mt19937 rng(5005);
  for (int t = 0; t < 40; ++t) {
    ConvexProcess h = randomProcess(rng, 1 + t % 2, 5);
    LinearProcess lminusDual = minimalLinear(negativeDual(h));
    LinearProcess expected = orthogonalLinear(maximalLinear(h));
    CHECK(lminusDual.graph == expected.graph);
    CHECK(minimalLinear(positiveDual(h)).graph == expected.graph);

    LinearProcess lplusDual = maximalLinear(negativeDual(h));
    CHECK(lplusDual.graph == orthogonalLinear(minimalLinear(h)).graph);
  }
}

TEST_CASE("dual closed forms agree on random datasets") {
  std::mt19937 rng(6006);
  std::uniform_int_distribution<int> entry(-3, 3), cnt(1, 5), dim(1, 3);
  for (int t = 0; t < 40; ++t) {
    int n = dim(rng), T = cnt(rng);
    std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> raw;
    for (int k = 0; k < T; ++k) {
      std::vector<Rational> x(n), y(n);
      for (auto& v : x) v = Rational(entry(rng));
      for (auto& v : y) v = Rational(entry(rng));
      raw.emplace_back(x, y);
    }
    DataSet d = DataSet::fromPairs(n, raw);
    if (d.T() == 0) continue;
    ConvexProcess h = processFromData(d);
    ConvexProcess dual = negativeDual(h);

    auto [z, w] = zwOf(h);
    PolyCone genForm = PolyCone::fromGenerators(
        2 * n, Mat::vstack(w.transpose(), z.transpose()));
    CHECK(coneEqual(dual.graph(), genForm));

    Mat yx = Mat::hstack(d.Y.transpose(), -d.X.transpose());
    PolyCone ineqForm = PolyCone::fromInequalities(2 * n, -yx);
    CHECK(coneEqual(dual.graph(), ineqForm));
  }
}
