#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "coneproc/simplex.hpp"

using namespace coneproc;

namespace {

using Rows = std::vector<std::vector<Rational>>;

std::vector<Rational> vec(std::initializer_list<long> vs) {
  std::vector<Rational> v;
  for (long x : vs) v.emplace_back(x);
  return v;
}

Rows rows(std::initializer_list<std::initializer_list<long>> rs) {
  Rows out;
  for (auto r : rs) out.push_back(vec(r));
  return out;
}

ConicFeasibility<Rational> solve(const Rows& a, const std::vector<Rational>& b) {
  return solveNonnegative<Rational>(a, b, Rational(0));
}

void checkCertificate(const Rows& a, const std::vector<Rational>& b,
                      const ConicFeasibility<Rational>& r) {
  if (r.feasible) {
    REQUIRE(r.solution.size() == (a.empty() ? 0 : a[0].size()));
    for (const auto& x : r.solution) CHECK(sgn(x) >= 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      Rational acc(0);
      for (std::size_t j = 0; j < a[i].size(); ++j) acc += a[i][j] * r.solution[j];
      CHECK(acc == b[i]);
    }
  } else {
    REQUIRE(r.farkas.size() == a.size());
    Rational yb(0);
    for (std::size_t i = 0; i < b.size(); ++i) yb += r.farkas[i] * b[i];
    CHECK(sgn(yb) > 0);
    for (std::size_t j = 0; j < a[0].size(); ++j) {
      Rational col(0);
      for (std::size_t i = 0; i < a.size(); ++i) col += r.farkas[i] * a[i][j];
      CHECK(sgn(col) <= 0);
    }
  }
}

}  // namespace

TEST_CASE("basic feasibility calls") {
  // e1 + e2 reach (1,1)
  auto r = solve(rows({{1, 0}, {0, 1}}), vec({1, 1}));
  CHECK(r.feasible);

  // (-1, 0) is not a nonnegative combination of the axes
  auto r2 = solve(rows({{1, 0}, {0, 1}}), vec({-1, 0}));
  CHECK_FALSE(r2.feasible);
  checkCertificate(rows({{1, 0}, {0, 1}}), vec({-1, 0}), r2);

  // zero target always feasible
  auto r3 = solve(rows({{1, -1}, {2, 2}}), vec({0, 0}));
  CHECK(r3.feasible);

  // no columns: only b = 0 is reachable
  CHECK(solve(rows({{}, {}}), vec({0, 0})).feasible);
  CHECK_FALSE(solve(rows({{}, {}}), vec({1, 0})).feasible);
}

TEST_CASE("degenerate systems terminate (Bland)") {
  // Heavily redundant columns and a degenerate rhs.
  auto a = rows({{1, 1, 1, 1, -1, 0}, {1, 1, 1, 1, 0, -1}, {1, 1, 1, 1, -1, -1}});
  auto r = solve(a, vec({0, 0, 0}));
  CHECK(r.feasible);
  checkCertificate(a, vec({0, 0, 0}), r);
}

TEST_CASE("random instances carry valid certificates") {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> entry(-4, 4), dim(1, 4), cnt(0, 6);
  for (int t = 0; t < 300; ++t) {
    int m = dim(rng), n = cnt(rng);
    Rows a(m, std::vector<Rational>(n));
    for (auto& row : a)
      for (auto& v : row) v = Rational(entry(rng));
    std::vector<Rational> b(m);
    for (auto& v : b) v = Rational(entry(rng));
    auto r = solve(a, b);
    if (n == 0) {
      bool allZero = true;
      for (const auto& v : b) allZero = allZero && sgn(v) == 0;
      CHECK(r.feasible == allZero);
      if (!r.feasible) checkCertificate(a, b, r);
      continue;
    }
    checkCertificate(a, b, r);
  }
}
