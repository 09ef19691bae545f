#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "coneproc/number_field.hpp"
#include "coneproc/process.hpp"

namespace coneproc {

// ---- subspace iterations ----

enum class MapComposition {
  ImageAfterPreimage,  // S -> Q (P^{-1} S)
  PreimageAfterImage   // S -> P^{-1} (Q S)
};

struct LinIterResult {
  Subspace subspace;            // the stabilized limit
  int stepsToStabilize = 0;     // == chain.size() - 1
  std::vector<Subspace> chain;  // strictly increasing, chain[0] = {0}
};

namespace detail {

inline LinIterResult iterateMonotone(
    const std::function<Subspace(const Subspace&)>& step, int stateDim) {
  LinIterResult r;
  r.chain.push_back(Subspace::zero(stateDim));
  for (int k = 0; k <= stateDim; ++k) {
    Subspace next = step(r.chain.back());
    if (next == r.chain.back()) break;
    r.chain.push_back(std::move(next));
  }
  r.subspace = r.chain.back();
  r.stepsToStabilize = static_cast<int>(r.chain.size()) - 1;
  return r;
}

}  // namespace detail

// Iterates S_{k+1} = map(S_k) from S_0 = {0} until it stabilizes (at most
// stateDim strict growth steps). The two composition orders cover maps of
// the shapes Q P^{-1} and P^{-1} Q.
inline LinIterResult iterateFromOrigin(const Mat& P, const Mat& Q,
                                       MapComposition comp, int stateDim) {
  auto step = [&](const Subspace& s) {
    return comp == MapComposition::ImageAfterPreimage
               ? mapImage(Q, preimage(P, s))
               : preimage(P, mapImage(Q, s));
  };
  return detail::iterateMonotone(step, stateDim);
}

// L^k(0) through the graph.
inline LinIterResult reachChainOf(const LinearProcess& l) {
  return detail::iterateMonotone(
      [&](const Subspace& s) { return linearApply(l, s); }, l.stateDim);
}

// (L^{-1})^k(0) through the graph.
inline LinIterResult nullcChainOf(const LinearProcess& l) {
  LinearProcess inv = inverseLinear(l);
  return detail::iterateMonotone(
      [&](const Subspace& s) { return linearApply(inv, s); }, l.stateDim);
}

// ---- hypothesis checks ----

// dom H + R(L_-) = R^n
struct DomainCoverage {
  PolyCone domain;
  LinIterResult reachMinus;
  PolyCone sum;
  bool holds = false;

  DomainCoverage() : domain(PolyCone::zeroCone(0)), sum(PolyCone::zeroCone(0)) {}
};

inline DomainCoverage checkDomainCoverage(const ConvexProcess& h) {
  DomainCoverage out;
  out.domain = processDomain(h);
  out.reachMinus = reachChainOf(minimalLinear(h));
  out.sum = coneSum(out.domain, PolyCone::fromSubspace(out.reachMinus.subspace));
  out.holds = isFullCone(out.sum);
  return out;
}

// R(L_+) = R^n and im H + N(L_-) = R^n
struct ImageCoverage {
  LinIterResult reachPlus;
  bool reachPlusFull = false;
  PolyCone image;
  LinIterResult nullcMinus;
  PolyCone sum;
  bool imageSumFull = false;
  bool holds = false;

  ImageCoverage() : image(PolyCone::zeroCone(0)), sum(PolyCone::zeroCone(0)) {}
};

inline ImageCoverage checkImageCoverage(const ConvexProcess& h) {
  ImageCoverage out;
  out.reachPlus = reachChainOf(maximalLinear(h));
  out.reachPlusFull = out.reachPlus.subspace.isFull();
  out.image = processImage(h);
  out.nullcMinus = nullcChainOf(minimalLinear(h));
  out.sum = coneSum(out.image, PolyCone::fromSubspace(out.nullcMinus.subspace));
  out.imageSumFull = isFullCone(out.sum);
  out.holds = out.reachPlusFull && out.imageSumFull;
  return out;
}

// ---- eigenvalue-freeness certification ----

enum class EigenMode { NonNegative, Positive };
enum class EigenOutcome { Free, Witness, Indeterminate };

struct EigenWitness {
  AlgebraicPoint lambda = AlgebraicPoint::ofRational(Rational(0));
  // xi is exact when lambda is rational; otherwise the coordinates are
  // polynomials evaluated at lambda.
  std::vector<Rational> xi;
  std::vector<UniPoly> xiPolys;
};

struct EigenCertificate {
  EigenMode mode = EigenMode::NonNegative;
  EigenOutcome outcome = EigenOutcome::Indeterminate;
  std::vector<AlgebraicPoint> criticalPoints;  // in range, ascending
  std::vector<AlgebraicPoint> testedPoints;    // candidates, ascending
  std::optional<EigenWitness> witness;
  std::string note;
};

namespace detail {

inline UniPoly polyDet(const std::vector<std::vector<UniPoly>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return UniPoly::constant(Rational(1));
  if (n == 1) return m[0][0];
  UniPoly acc;
  for (int j = 0; j < n; ++j) {
    if (m[0][j].isZero()) continue;
    std::vector<std::vector<UniPoly>> sub(n - 1);
    for (int i = 1; i < n; ++i)
      for (int c = 0; c < n; ++c)
        if (c != j) sub[i - 1].push_back(m[i][c]);
    UniPoly term = m[0][j] * polyDet(sub);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

// Max threads for candidate evaluation; CONEPROC_THREADS caps it.
inline int candidateThreadCap() {
  unsigned hw = std::thread::hardware_concurrency();
  int cap = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* s = std::getenv("CONEPROC_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) cap = std::min(cap, v);
  }
  return cap;
}

template <class F>
void forEachIndexParallel(int count, F&& fn) {
  int workers = std::min(candidateThreadCap(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct CandidateOutcome {
  bool full = false;
  bool indeterminate = false;
  std::optional<EigenWitness> witness;
};

inline CandidateOutcome testRationalCandidate(const Mat& X, const Mat& Y,
                                              const Rational& lambda) {
  CandidateOutcome out;
  Mat m = Y;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) -= lambda * X.at(i, j);
  PolyCone cols = PolyCone::fromGenerators(X.rows(), m);
  PolyCone polar = polarCone(cols, PolarSign::Negative);
  if (polar.generators().cols() == 0) {
    out.full = true;
    return out;
  }
  EigenWitness w;
  w.lambda = AlgebraicPoint::ofRational(lambda);
  w.xi = polar.generators().column(0);
  out.witness = std::move(w);
  return out;
}

inline CandidateOutcome testAlgebraicCandidate(const Mat& X, const Mat& Y,
                                               const AlgebraicPoint& pt) {
  CandidateOutcome out;
  const int n = X.rows(), T = X.cols();
  auto ctx = std::make_shared<AlgebraicCtx>(pt);
  NFElem alpha = NFElem::generator(ctx);
  NFElem zero = NFElem::ofRational(ctx, Rational(0));
  std::vector<std::vector<NFElem>> rows(n, std::vector<NFElem>());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < T; ++j)
      rows[i].push_back(NFElem::ofRational(ctx, Y.at(i, j)) -
                        alpha * NFElem::ofRational(ctx, X.at(i, j)));
  for (int i = 0; i < n; ++i) {
    for (int s : {1, -1}) {
      std::vector<NFElem> target(n, zero);
      target[i] = NFElem::ofRational(ctx, Rational(s));
      auto r = solveNonnegative<NFElem>(rows, target, zero);
      if (!r.feasible) {
        EigenWitness w;
        w.lambda = pt;
        for (const auto& e : r.farkas) w.xiPolys.push_back(e.rep());
        out.witness = std::move(w);
        return out;
      }
    }
  }
  out.full = true;
  return out;
}

}  // namespace detail

// True iff the witness re-verifies by independent arithmetic: xi nonzero and
// every column product xi^T (Y - lambda X) nonpositive.
inline bool verifyEigenWitness(const Mat& X, const Mat& Y,
                               const EigenWitness& w) {
  const int n = X.rows(), T = X.cols();
  if (w.lambda.isRational()) {
    if (static_cast<int>(w.xi.size()) != n) return false;
    bool nonzero = false;
    for (const auto& v : w.xi) nonzero = nonzero || sgn(v) != 0;
    if (!nonzero) return false;
    const Rational& l = w.lambda.rationalValue();
    for (int j = 0; j < T; ++j) {
      Rational acc(0);
      for (int i = 0; i < n; ++i)
        acc += w.xi[i] * (Y.at(i, j) - l * X.at(i, j));
      if (sgn(acc) > 0) return false;
    }
    return true;
  }
  if (static_cast<int>(w.xiPolys.size()) != n) return false;
  auto ctx = std::make_shared<AlgebraicCtx>(w.lambda);
  NFElem alpha = NFElem::generator(ctx);
  bool nonzero = false;
  std::vector<NFElem> xi;
  for (const auto& p : w.xiPolys) {
    xi.emplace_back(ctx, p);
    nonzero = nonzero || xi.back().sign() != 0;
  }
  if (!nonzero) return false;
  for (int j = 0; j < T; ++j) {
    NFElem acc = NFElem::ofRational(ctx, Rational(0));
    for (int i = 0; i < n; ++i)
      acc = acc + xi[i] * (NFElem::ofRational(ctx, Y.at(i, j)) -
                           alpha * NFElem::ofRational(ctx, X.at(i, j)));
    if (acc.sign() > 0) return false;
  }
  return true;
}

// Decides whether any lambda in the range (>= 0 or > 0) admits a nonzero xi
// with xi^T (Y - lambda X) <= 0, i.e. whether the dual of the data process
// has an eigenvalue there. Fullness of cone(columns of Y - lambda X) can
// change only where an n x n minor vanishes: between consecutive minor roots
// every minor keeps its sign, so the sign pattern of the maximal minors --
// and with it the existence of such a xi -- is constant there. Testing each
// root in range plus one rational point per gap decides the whole half-line.
inline EigenCertificate certifyEigenFree(const Mat& X, const Mat& Y,
                                         EigenMode mode) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("eigen test: X and Y must share shape");
  const int n = X.rows(), T = X.cols();
  EigenCertificate cert;
  cert.mode = mode;

  // n x n minors of Y - lambda X as polynomials in lambda.
  std::vector<UniPoly> minors;
  bool anyNonzero = false;
  if (T >= n) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    while (true) {
      std::vector<std::vector<UniPoly>> m(n, std::vector<UniPoly>());
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          m[r].push_back(UniPoly::linear(Y.at(r, idx[c]), -X.at(r, idx[c])));
      UniPoly det = detail::polyDet(m);
      if (!det.isZero()) {
        anyNonzero = true;
        minors.push_back(std::move(det));
      }
      int k = n - 1;
      while (k >= 0 && idx[k] == T - n + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  if (!anyNonzero) {
    // rank deficient for every lambda: witness at a fixed rational point
    Rational l0 = mode == EigenMode::NonNegative ? Rational(0) : Rational(1);
    auto out = detail::testRationalCandidate(X, Y, l0);
    cert.outcome = EigenOutcome::Witness;
    cert.witness = out.witness;
    cert.testedPoints.push_back(AlgebraicPoint::ofRational(l0));
    cert.note = "every maximal minor vanishes identically";
    return cert;
  }

  // merged minor roots in [0, inf), deduplicated ascending
  std::vector<AlgebraicPoint> criticals;
  for (const UniPoly& p : minors)
    for (AlgebraicPoint& rt : isolateRealRoots(p, Rational(0)))
      criticals.push_back(std::move(rt));
  std::sort(criticals.begin(), criticals.end(),
            [](const AlgebraicPoint& a, const AlgebraicPoint& b) {
              return comparePoints(a, b) < 0;
            });
  criticals.erase(std::unique(criticals.begin(), criticals.end(),
                              [](const AlgebraicPoint& a,
                                 const AlgebraicPoint& b) {
                                return pointsEqual(a, b);
                              }),
                  criticals.end());
  const AlgebraicPoint zeroPt = AlgebraicPoint::ofRational(Rational(0));
  if (mode == EigenMode::Positive) {
    std::vector<AlgebraicPoint> pos;
    for (auto& c : criticals)
      if (comparePoints(c, zeroPt) > 0) pos.push_back(std::move(c));
    criticals = std::move(pos);
  }
  cert.criticalPoints = criticals;

  // candidate points, ascending: a left sample, every critical point, a
  // rational inside each gap, and one beyond the last critical point
  std::vector<AlgebraicPoint> cands;
  if (criticals.empty()) {
    if (mode == EigenMode::NonNegative)
      cands.push_back(zeroPt);
    cands.push_back(AlgebraicPoint::ofRational(Rational(1)));
  } else {
    if (mode == EigenMode::NonNegative)
      cands.push_back(zeroPt);
    else
      cands.push_back(AlgebraicPoint::ofRational(
          rationalBetween(zeroPt, criticals.front())));
    for (std::size_t i = 0; i < criticals.size(); ++i) {
      if (!(cands.size() == 1 && pointsEqual(cands[0], criticals[i])))
        cands.push_back(criticals[i]);
      if (i + 1 < criticals.size())
        cands.push_back(AlgebraicPoint::ofRational(
            rationalBetween(criticals[i], criticals[i + 1])));
    }
    cands.push_back(AlgebraicPoint::ofRational(rationalAbove(criticals.back())));
  }
  cert.testedPoints = cands;

  std::vector<detail::CandidateOutcome> results(cands.size());
  detail::forEachIndexParallel(
      static_cast<int>(cands.size()), [&](int i) {
        try {
          const AlgebraicPoint pt = cands[static_cast<std::size_t>(i)];
          results[i] = pt.isRational()
                           ? detail::testRationalCandidate(X, Y,
                                                           pt.rationalValue())
                           : detail::testAlgebraicCandidate(X, Y, pt);
        } catch (const RefinementLimitError&) {
          results[i].indeterminate = true;
        }
      });

  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].witness) {
      cert.outcome = EigenOutcome::Witness;
      cert.witness = results[i].witness;
      return cert;
    }
    if (results[i].indeterminate) {
      cert.outcome = EigenOutcome::Indeterminate;
      cert.note = "refinement cap tripped at candidate " + std::to_string(i);
      return cert;
    }
  }
  cert.outcome = EigenOutcome::Free;
  return cert;
}

// ---- finite-horizon oracles ----

struct ConeChainResult {
  std::vector<PolyCone> chain;
  bool reachedFull = false;
  bool stabilized = false;
};

namespace detail {

inline ConeChainResult coneChain(const ConvexProcess& step, PolyCone start,
                                 int qMax) {
  ConeChainResult r;
  r.chain.push_back(std::move(start));
  r.reachedFull = isFullCone(r.chain.back());
  for (int q = 1; q <= qMax && !r.stabilized; ++q) {
    PolyCone next = applyProcess(step, r.chain.back());
    if (coneEqual(next, r.chain.back())) {
      r.stabilized = true;
      break;
    }
    r.chain.push_back(std::move(next));
    if (isFullCone(r.chain.back())) {
      r.reachedFull = true;
      r.stabilized = true;  // a full set is a fixed point of a monotone chain
      break;
    }
  }
  return r;
}

inline int defaultHorizon(const ConvexProcess& h, int qMax) {
  return qMax > 0 ? qMax : 2 * h.stateDim();
}

}  // namespace detail

// Chain {0}, H({0}), H^2({0}), ...; reachedFull reports R^n attained.
inline ConeChainResult oracleReach(const ConvexProcess& h, int qMax = 0) {
  return detail::coneChain(h, PolyCone::zeroCone(h.stateDim()),
                           detail::defaultHorizon(h, qMax));
}

// Chain {0}, H^{-1}({0}), ...: states steered to zero in q steps.
inline ConeChainResult oracleNullControllable(const ConvexProcess& h,
                                              int qMax = 0) {
  return detail::coneChain(inverseProcess(h), PolyCone::zeroCone(h.stateDim()),
                           detail::defaultHorizon(h, qMax));
}

// Decreasing chain R^n, dom H, dom H^2, ...; stabilization certifies the
// feasible set exactly (a fixed point extends to an infinite trajectory).
inline ConeChainResult oracleFeasible(const ConvexProcess& h, int qMax = 0) {
  return detail::coneChain(inverseProcess(h), PolyCone::fullCone(h.stateDim()),
                           detail::defaultHorizon(h, qMax));
}

// ---- theorem-gated verdicts ----

enum class PropertyKind { Reachability, NullControllability };
enum class VerdictStatus { Holds, Fails, AssumptionsNotMet, Indeterminate };

struct AnalysisVerdict {
  PropertyKind property = PropertyKind::Reachability;
  VerdictStatus status = VerdictStatus::Indeterminate;
  DomainCoverage domainCoverage;
  std::optional<ImageCoverage> imageCoverage;
  std::optional<LinIterResult> reachPlus;
  std::optional<EigenCertificate> eigen;
  std::optional<ConeChainResult> reachOracle;
  std::optional<ConeChainResult> nullcOracle;
  std::optional<ConeChainResult> feasibleOracle;
  std::string failing;
};

namespace detail {

// Generator blocks of the graph: columns (x_j; y_j) split into X and Y.
inline std::pair<Mat, Mat> graphBlocks(const ConvexProcess& h) {
  const Mat& g = h.graph().generators();
  const int n = h.stateDim();
  Mat x(n, g.cols()), y(n, g.cols());
  for (int j = 0; j < g.cols(); ++j)
    for (int i = 0; i < n; ++i) {
      x.at(i, j) = g.at(i, j);
      y.at(i, j) = g.at(n + i, j);
    }
  return {x, y};
}

}  // namespace detail

inline AnalysisVerdict reachabilityVerdict(const ConvexProcess& h,
                                           int qMax = 0) {
  AnalysisVerdict v;
  v.property = PropertyKind::Reachability;
  v.domainCoverage = checkDomainCoverage(h);
  v.reachOracle = oracleReach(h, qMax);
  v.feasibleOracle = oracleFeasible(h, qMax);
  if (!v.domainCoverage.holds) {
    v.status = VerdictStatus::AssumptionsNotMet;
    v.failing = "dom H + R(L-) is not the full space";
    return v;
  }
  v.reachPlus = reachChainOf(maximalLinear(h));
  auto [x, y] = detail::graphBlocks(h);
  v.eigen = certifyEigenFree(x, y, EigenMode::NonNegative);
  if (v.eigen->outcome == EigenOutcome::Indeterminate) {
    v.status = VerdictStatus::Indeterminate;
    v.failing = v.eigen->note;
    return v;
  }
  bool rPlusFull = v.reachPlus->subspace.isFull();
  bool free = v.eigen->outcome == EigenOutcome::Free;
  if (rPlusFull && free) {
    v.status = VerdictStatus::Holds;
  } else {
    v.status = VerdictStatus::Fails;
    v.failing = !rPlusFull ? "R(L+) is not the full space"
                           : "dual process has an eigenvalue in the range";
  }
  return v;
}

inline AnalysisVerdict nullControllabilityVerdict(const ConvexProcess& h,
                                                  int qMax = 0) {
  AnalysisVerdict v;
  v.property = PropertyKind::NullControllability;
  v.domainCoverage = checkDomainCoverage(h);
  v.imageCoverage = checkImageCoverage(h);
  v.nullcOracle = oracleNullControllable(h, qMax);
  v.feasibleOracle = oracleFeasible(h, qMax);
  if (!v.domainCoverage.holds || !v.imageCoverage->holds) {
    v.status = VerdictStatus::AssumptionsNotMet;
    v.failing = !v.domainCoverage.holds
                    ? "dom H + R(L-) is not the full space"
                    : (!v.imageCoverage->reachPlusFull
                           ? "R(L+) is not the full space"
                           : "im H + N(L-) is not the full space");
    return v;
  }
  auto [x, y] = detail::graphBlocks(h);
  v.eigen = certifyEigenFree(x, y, EigenMode::Positive);
  if (v.eigen->outcome == EigenOutcome::Indeterminate) {
    v.status = VerdictStatus::Indeterminate;
    v.failing = v.eigen->note;
    return v;
  }
  if (v.eigen->outcome == EigenOutcome::Free) {
    v.status = VerdictStatus::Holds;
  } else {
    v.status = VerdictStatus::Fails;
    v.failing = "dual process has a positive eigenvalue";
  }
  return v;
}

}  // namespace coneproc
