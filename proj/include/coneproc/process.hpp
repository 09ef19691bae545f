#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "coneproc/cone.hpp"

namespace coneproc {

// Set-valued map x |-> { y : (x, y) in graph }, the graph being a finitely
// generated cone in R^{2n} with the input state in the first n coordinates.
class ConvexProcess {
 public:
  ConvexProcess(int stateDim, PolyCone graph)
      : n_(stateDim), graph_(std::move(graph)) {
    if (graph_.ambient() != 2 * n_)
      throw std::invalid_argument("process graph must live in R^(2n)");
  }

  static ConvexProcess fromGraphGenerators(int stateDim, const Mat& columns) {
    return ConvexProcess(stateDim,
                         PolyCone::fromGenerators(2 * stateDim, columns));
  }

  static ConvexProcess zeroProcess(int stateDim) {
    return ConvexProcess(stateDim, PolyCone::zeroCone(2 * stateDim));
  }
  static ConvexProcess fullProcess(int stateDim) {
    return ConvexProcess(stateDim, PolyCone::fullCone(2 * stateDim));
  }

  int stateDim() const { return n_; }
  const PolyCone& graph() const { return graph_; }

 private:
  int n_;
  PolyCone graph_;
};

// Linear process: the graph is a subspace.
struct LinearProcess {
  int stateDim = 0;
  Subspace graph;  // ambient 2n
};

// Measured one-step transitions. Exact duplicates and the all-zero pair are
// dropped; X and Y keep the surviving pairs in input order.
struct DataSet {
  int n = 0;
  std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> pairs;
  Mat X, Y;  // n x T

  int T() const { return static_cast<int>(pairs.size()); }

  static DataSet fromPairs(
      int n,
      const std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>>&
          raw) {
    DataSet d;
    d.n = n;
    for (const auto& [x, y] : raw) {
      if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("data pair has wrong dimension");
      bool allZero = true;
      for (const auto& v : x) allZero = allZero && sgn(v) == 0;
      for (const auto& v : y) allZero = allZero && sgn(v) == 0;
      if (allZero) continue;
      bool dup = false;
      for (const auto& kept : d.pairs)
        dup = dup || (kept.first == x && kept.second == y);
      if (!dup) d.pairs.emplace_back(x, y);
    }
    std::vector<std::vector<Rational>> xs, ys;
    for (const auto& [x, y] : d.pairs) {
      xs.push_back(x);
      ys.push_back(y);
    }
    d.X = Mat::fromColumns(xs, n);
    d.Y = Mat::fromColumns(ys, n);
    return d;
  }

  // A q-step trajectory contributes q one-step pairs.
  static DataSet fromTrajectories(
      int n, const std::vector<std::vector<std::vector<Rational>>>& trajs) {
    std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> raw;
    for (const auto& t : trajs) {
      if (t.size() < 2)
        throw std::invalid_argument("trajectory needs at least two states");
      for (std::size_t k = 0; k + 1 < t.size(); ++k)
        raw.emplace_back(t[k], t[k + 1]);
    }
    return fromPairs(n, raw);
  }
};

namespace detail {

// [0 I; -I 0], the graph rotation taking a polar to a dual graph.
inline Mat dualRotation(int n) {
  Mat j(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j.at(i, n + i) = 1;
    j.at(n + i, i) = -1;
  }
  return j;
}

inline Mat projectFirst(int n) {
  return Mat::hstack(Mat::identity(n), Mat(n, n));
}
inline Mat projectLast(int n) {
  return Mat::hstack(Mat(n, n), Mat::identity(n));
}
inline Mat swapBlocks(int n) {
  return Mat::vstack(projectLast(n), projectFirst(n));
}

}  // namespace detail

// Smallest process whose graph contains every measured pair.
inline ConvexProcess processFromData(const DataSet& d) {
  return ConvexProcess::fromGraphGenerators(d.n, Mat::vstack(d.X, d.Y));
}

// Dynamics x+ = A x + B u constrained by (x, u) in C, as a graph cone: the
// image of C under (x, u) |-> (x, A x + B u).
inline ConvexProcess processFromConstrainedLinear(const Mat& A, const Mat& B,
                                                  const PolyCone& C) {
  const int n = A.rows(), m = B.cols();
  if (A.cols() != n || B.rows() != n)
    throw std::invalid_argument("constrained system: A must be n x n, B n x m");
  if (C.ambient() != n + m)
    throw std::invalid_argument("constrained system: constraint cone ambient");
  Mat top = Mat::hstack(Mat::identity(n), Mat(n, m));
  Mat map = Mat::vstack(top, Mat::hstack(A, B));
  return ConvexProcess(n, linearImage(map, C));
}

inline PolyCone processDomain(const ConvexProcess& h) {
  return linearImage(detail::projectFirst(h.stateDim()), h.graph());
}

inline PolyCone processImage(const ConvexProcess& h) {
  return linearImage(detail::projectLast(h.stateDim()), h.graph());
}

// Graph of the dual process: rotate the polar of the graph.
inline ConvexProcess negativeDual(const ConvexProcess& h) {
  const int n = h.stateDim();
  PolyCone polar = polarCone(h.graph(), PolarSign::Negative);
  return ConvexProcess(n, linearImage(detail::dualRotation(n), polar));
}

inline ConvexProcess positiveDual(const ConvexProcess& h) {
  const int n = h.stateDim();
  PolyCone polar = polarCone(h.graph(), PolarSign::Positive);
  return ConvexProcess(n, linearImage(detail::dualRotation(n), polar));
}

inline ConvexProcess inverseProcess(const ConvexProcess& h) {
  const int n = h.stateDim();
  return ConvexProcess(n, linearImage(detail::swapBlocks(n), h.graph()));
}

// Image of a state cone: project the graph restricted to S x R^n. Empty
// values surface naturally as empty intersections.
inline PolyCone applyProcess(const ConvexProcess& h, const PolyCone& s) {
  const int n = h.stateDim();
  if (s.ambient() != n)
    throw std::invalid_argument("applyProcess: state cone ambient mismatch");
  Mat sRows = s.inequalityRows();
  PolyCone cylinder =
      PolyCone::fromInequalities(2 * n, Mat::hstack(sRows, Mat(sRows.rows(), n)));
  return linearImage(detail::projectLast(n), intersect(h.graph(), cylinder));
}

// Largest linear process under the graph (the graph's lineality space).
inline LinearProcess minimalLinear(const ConvexProcess& h) {
  return {h.stateDim(), lineality(h.graph())};
}

// Smallest linear process over the graph (the graph's span).
inline LinearProcess maximalLinear(const ConvexProcess& h) {
  return {h.stateDim(), linearSpan(h.graph())};
}

// ---- linear process calculus ----

inline Subspace linearApply(const LinearProcess& l, const Subspace& s) {
  const int n = l.stateDim;
  if (s.ambient() != n)
    throw std::invalid_argument("linearApply: ambient mismatch");
  Subspace restricted =
      subspaceIntersect(l.graph, preimage(detail::projectFirst(n), s));
  return mapImage(detail::projectLast(n), restricted);
}

inline LinearProcess inverseLinear(const LinearProcess& l) {
  return {l.stateDim, mapImage(detail::swapBlocks(l.stateDim), l.graph)};
}

// The common negative/positive dual of a linear process.
inline LinearProcess orthogonalLinear(const LinearProcess& l) {
  const int n = l.stateDim;
  return {n, mapImage(detail::dualRotation(n),
                      orthogonalComplement(l.graph))};
}

// L^n(0): the subspace reachable from the origin (stabilizes within n steps).
inline Subspace linearReachable(const LinearProcess& l) {
  Subspace s = Subspace::zero(l.stateDim);
  for (int k = 0; k < l.stateDim; ++k) {
    Subspace next = linearApply(l, s);
    if (next == s) break;
    s = std::move(next);
  }
  return s;
}

// L^{-n}(R^n): the feasible subspace.
inline Subspace linearFeasible(const LinearProcess& l) {
  LinearProcess inv = inverseLinear(l);
  Subspace s = Subspace::full(l.stateDim);
  for (int k = 0; k < l.stateDim; ++k) {
    Subspace next = linearApply(inv, s);
    if (next == s) break;
    s = std::move(next);
  }
  return s;
}

// (L^{-1})^n(0): the subspace steerable to the origin.
inline Subspace linearNullControllable(const LinearProcess& l) {
  return linearReachable(inverseLinear(l));
}

}  // namespace coneproc
