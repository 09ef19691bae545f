#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coneproc/matrix.hpp"
#include "coneproc/simplex.hpp"
#include "coneproc/subspace.hpp"

namespace coneproc {

namespace detail {

// Positive rescale to a primitive integer vector; direction preserved.
inline void scaleToPrimitive(std::vector<Rational>& v) {
  Integer l(1);
  for (const Rational& c : v)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  Integer g(0);
  for (Rational& c : v) {
    c *= Rational(l);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
  }
  if (sgn(g) != 0)
    for (Rational& c : v) c /= Rational(g);
}

inline bool lexLess(const std::vector<Rational>& a,
                    const std::vector<Rational>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

inline Rational dot(const std::vector<Rational>& a,
                    const std::vector<Rational>& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

// Generator description of { x : A x >= 0 }: a lineality space plus pointed
// rays living in its orthogonal complement.
struct RayEnumeration {
  Mat rays;           // columns; empty matrix when the cone is a subspace
  Subspace lineality;
};

// Incremental double description. The lineality space is split off first so
// the working cone is pointed; rays are then grown one halfspace at a time,
// combining only adjacent pairs (adjacency decided by the rank of the common
// active constraints).
inline RayEnumeration enumerateRays(const Mat& A, int n) {
  if (A.rows() > 0 && A.cols() != n)
    throw std::invalid_argument("enumerateRays: ambient mismatch");
  Subspace lin = A.rows() == 0 ? Subspace::full(n) : kernelOf(A);
  if (lin.dim() == n) return {Mat(n, 0), lin};

  // Coordinates for the complement of the lineality space.
  Mat C = lin.dim() == 0 ? Mat::identity(n)
                         : kernelBasis(lin.basis().transpose());
  const int k = C.cols();
  Mat Ap = A * C;  // pointed system: rank k by construction

  // Initial simplicial cone from k independent rows.
  std::vector<int> start;
  {
    Mat acc(0, k);
    int r = 0;
    for (int i = 0; i < Ap.rows() && static_cast<int>(start.size()) < k; ++i) {
      Mat cand(static_cast<int>(start.size()) + 1, k);
      for (std::size_t s = 0; s < start.size(); ++s)
        for (int j = 0; j < k; ++j) cand.at(static_cast<int>(s), j) = Ap.at(start[s], j);
      for (int j = 0; j < k; ++j)
        cand.at(static_cast<int>(start.size()), j) = Ap.at(i, j);
      if (rankOf(cand) > r) {
        start.push_back(i);
        ++r;
      }
    }
    if (static_cast<int>(start.size()) != k)
      throw std::logic_error("enumerateRays: pointed system lost rank");
  }

  Mat AK(k, k);
  for (int s = 0; s < k; ++s)
    for (int j = 0; j < k; ++j) AK.at(s, j) = Ap.at(start[s], j);
  Mat R0 = inverseOf(AK);

  std::vector<std::vector<Rational>> rays;
  for (int j = 0; j < k; ++j) {
    auto col = R0.column(j);
    detail::scaleToPrimitive(col);
    rays.push_back(std::move(col));
  }

  std::vector<int> processed = start;
  auto isProcessed = [&](int i) {
    return std::find(processed.begin(), processed.end(), i) != processed.end();
  };

  for (int rowIdx = 0; rowIdx < Ap.rows(); ++rowIdx) {
    if (isProcessed(rowIdx)) continue;
    std::vector<Rational> a = Ap.row(rowIdx);
    std::vector<int> side(rays.size());
    for (std::size_t j = 0; j < rays.size(); ++j)
      side[j] = sgn(detail::dot(a, rays[j]));

    bool anyNeg = false, anyPos = false;
    for (int s : side) {
      anyNeg = anyNeg || s < 0;
      anyPos = anyPos || s > 0;
    }
    processed.push_back(rowIdx);
    if (!anyNeg) continue;  // halfspace inactive

    // Active-constraint rank test for adjacency of a (+,-) pair.
    auto adjacent = [&](std::size_t i, std::size_t j) {
      std::vector<int> common;
      for (int h : processed) {
        if (h == rowIdx) continue;
        std::vector<Rational> rh = Ap.row(h);
        if (sgn(detail::dot(rh, rays[i])) == 0 &&
            sgn(detail::dot(rh, rays[j])) == 0)
          common.push_back(h);
      }
      Mat Z(static_cast<int>(common.size()), k);
      for (std::size_t s = 0; s < common.size(); ++s)
        for (int c2 = 0; c2 < k; ++c2)
          Z.at(static_cast<int>(s), c2) = Ap.at(common[s], c2);
      return rankOf(Z) == k - 2;
    };

    std::vector<std::vector<Rational>> next;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (side[j] >= 0) next.push_back(rays[j]);
    if (anyPos) {
      for (std::size_t i = 0; i < rays.size(); ++i) {
        if (side[i] <= 0) continue;
        for (std::size_t j = 0; j < rays.size(); ++j) {
          if (side[j] >= 0) continue;
          if (k >= 2 && !adjacent(i, j)) continue;
          Rational wi = detail::dot(a, rays[i]);
          Rational wj = detail::dot(a, rays[j]);
          std::vector<Rational> w(k);
          for (int c2 = 0; c2 < k; ++c2)
            w[c2] = wi * rays[j][c2] - wj * rays[i][c2];
          bool zero = true;
          for (const auto& e : w) zero = zero && sgn(e) == 0;
          if (zero) continue;
          detail::scaleToPrimitive(w);
          next.push_back(std::move(w));
        }
      }
    }
    std::sort(next.begin(), next.end(), detail::lexLess);
    next.erase(std::unique(next.begin(), next.end()), next.end());
    rays = std::move(next);
  }

  std::vector<std::vector<Rational>> back;
  for (const auto& r : rays) {
    std::vector<Rational> x = C * r;
    detail::scaleToPrimitive(x);
    back.push_back(std::move(x));
  }
  std::sort(back.begin(), back.end(), detail::lexLess);
  return {Mat::fromColumns(back, n), lin};
}

// Finitely generated convex cone in R^n carrying a generator description
// (columns, cone = nonnegative combinations) and/or an inequality
// description (rows a with a.x >= 0). Both descriptions are canonicalized:
// primitive integer vectors, sorted, deduplicated, and with conic-redundant
// members removed. The missing description is derived on first use; copies
// share the cache. A cone never changes once constructed.
class PolyCone {
 public:
  static PolyCone fromGenerators(int ambient, const Mat& columns) {
    if (columns.cols() > 0 && columns.rows() != ambient)
      throw std::invalid_argument("cone generators: ambient mismatch");
    PolyCone c(ambient);
    c.reps_->gens = canonicalizeVectors(columnsOf(columns, ambient), ambient);
    return c;
  }

  static PolyCone fromInequalities(int ambient, const Mat& rows) {
    if (rows.rows() > 0 && rows.cols() != ambient)
      throw std::invalid_argument("cone inequalities: ambient mismatch");
    PolyCone c(ambient);
    c.reps_->ineqs =
        canonicalizeVectors(columnsOf(rows.transpose(), ambient), ambient);
    return c;
  }

  static PolyCone zeroCone(int ambient) {
    return fromGenerators(ambient, Mat(ambient, 0));
  }
  static PolyCone fullCone(int ambient) {
    return fromInequalities(ambient, Mat(0, ambient));
  }
  static PolyCone fromSubspace(const Subspace& s) {
    return fromGenerators(s.ambient(),
                          Mat::hstack(s.basis(), -s.basis()));
  }

  int ambient() const { return ambient_; }

  bool hasGeneratorsCached() const {
    std::scoped_lock l(reps_->mu);
    return reps_->gens.has_value();
  }
  bool hasInequalitiesCached() const {
    std::scoped_lock l(reps_->mu);
    return reps_->ineqs.has_value();
  }

  // Columns generate the cone; a lineality direction appears as a +/- pair.
  const Mat& generators() const {
    std::scoped_lock l(reps_->mu);
    if (!reps_->gens) {
      RayEnumeration e = enumerateRays(reps_->ineqs->transpose(), ambient_);
      Mat g = Mat::hstack(e.rays,
                          Mat::hstack(e.lineality.basis(), -e.lineality.basis()));
      reps_->gens = canonicalizeVectors(columnsOf(g, ambient_), ambient_);
    }
    return *reps_->gens;
  }

  // Rows a of the result mean a.x >= 0; an implied equality appears as two
  // opposite rows.
  Mat inequalityRows() const { return inequalityNormals().transpose(); }

  bool contains(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != ambient_)
      throw std::invalid_argument("cone membership: ambient mismatch");
    {
      std::scoped_lock l(reps_->mu);
      if (reps_->ineqs) {
        const Mat& q = *reps_->ineqs;  // columns are inequality normals
        for (int j = 0; j < q.cols(); ++j) {
          Rational s(0);
          for (int i = 0; i < ambient_; ++i) s += q.at(i, j) * v[i];
          if (sgn(s) < 0) return false;
        }
        return true;
      }
    }
    // Generator route: exact feasibility of G mu = v, mu >= 0.
    const Mat& g = generators();
    std::vector<std::vector<Rational>> rows(ambient_);
    for (int i = 0; i < ambient_; ++i) rows[i] = g.row(i);
    return solveNonnegative<Rational>(rows, v, Rational(0)).feasible;
  }

 private:
  explicit PolyCone(int ambient)
      : ambient_(ambient), reps_(std::make_shared<Reps>()) {}

  // Inequality normals as columns (internal storage orientation).
  const Mat& inequalityNormals() const {
    std::scoped_lock l(reps_->mu);
    if (!reps_->ineqs) {
      // Negative polar generators d satisfy d.x <= 0 on the cone.
      RayEnumeration e = enumerateRays(-reps_->gens->transpose(), ambient_);
      Mat d = Mat::hstack(e.rays,
                          Mat::hstack(e.lineality.basis(), -e.lineality.basis()));
      reps_->ineqs = canonicalizeVectors(columnsOf(-d, ambient_), ambient_);
    }
    return *reps_->ineqs;
  }

  static std::vector<std::vector<Rational>> columnsOf(const Mat& m,
                                                      int ambient) {
    std::vector<std::vector<Rational>> cols;
    for (int j = 0; j < m.cols(); ++j) {
      auto c = m.column(j);
      if (static_cast<int>(c.size()) != ambient)
        throw std::invalid_argument("cone description: ambient mismatch");
      cols.push_back(std::move(c));
    }
    return cols;
  }

  // Shared canonical form for generator and inequality vector families:
  // primitive scaling, lexicographic order, duplicate removal, then exact
  // conic-redundancy elimination (v goes if it is a nonnegative combination
  // of the survivors).
  static Mat canonicalizeVectors(std::vector<std::vector<Rational>> vecs,
                                 int ambient) {
    std::vector<std::vector<Rational>> kept;
    for (auto& v : vecs) {
      bool zero = true;
      for (const auto& e : v) zero = zero && sgn(e) == 0;
      if (zero) continue;
      detail::scaleToPrimitive(v);
      kept.push_back(std::move(v));
    }
    std::sort(kept.begin(), kept.end(), detail::lexLess);
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    std::vector<bool> alive(kept.size(), true);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      std::vector<std::vector<Rational>> rows(ambient);
      for (int r = 0; r < ambient; ++r) {
        for (std::size_t j = 0; j < kept.size(); ++j)
          if (alive[j] && j != i) rows[r].push_back(kept[j][r]);
      }
      if (rows[0].empty() && ambient > 0) continue;
      if (solveNonnegative<Rational>(rows, kept[i], Rational(0)).feasible)
        alive[i] = false;
    }
    std::vector<std::vector<Rational>> out;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (alive[i]) out.push_back(kept[i]);
    return Mat::fromColumns(out, ambient);
  }

  struct Reps {
    mutable std::mutex mu;
    std::optional<Mat> gens;   // columns
    std::optional<Mat> ineqs;  // columns are inequality normals
  };

  int ambient_;
  std::shared_ptr<Reps> reps_;
};

struct ConeRepPair {
  Mat vrep;  // generator columns
  Mat hrep;  // inequality rows
};

inline ConeRepPair completeDescriptions(const PolyCone& c) {
  return {c.generators(), c.inequalityRows()};
}

enum class PolarSign { Negative, Positive };

// Polar cone with the generator description materialized.
inline PolyCone polarCone(const PolyCone& c, PolarSign sign) {
  const int n = c.ambient();
  PolyCone p = c.hasGeneratorsCached()
                   ? PolyCone::fromInequalities(
                         n, sign == PolarSign::Negative
                                ? Mat(-c.generators().transpose())
                                : c.generators().transpose())
                   : PolyCone::fromGenerators(
                         n, sign == PolarSign::Negative
                                ? Mat(-c.inequalityRows().transpose())
                                : c.inequalityRows().transpose());
  p.generators();
  return p;
}

inline void requireSameAmbient(const PolyCone& a, const PolyCone& b) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("cone ambient mismatch");
}

inline PolyCone intersect(const PolyCone& a, const PolyCone& b) {
  requireSameAmbient(a, b);
  return PolyCone::fromInequalities(
      a.ambient(), Mat::vstack(a.inequalityRows(), b.inequalityRows()));
}

inline PolyCone coneSum(const PolyCone& a, const PolyCone& b) {
  requireSameAmbient(a, b);
  return PolyCone::fromGenerators(a.ambient(),
                                  Mat::hstack(a.generators(), b.generators()));
}

inline PolyCone linearImage(const Mat& m, const PolyCone& c) {
  if (m.cols() != c.ambient())
    throw std::invalid_argument("linearImage: shape mismatch");
  return PolyCone::fromGenerators(m.rows(), m * c.generators());
}

inline PolyCone linearPreimage(const Mat& m, const PolyCone& c) {
  if (m.rows() != c.ambient())
    throw std::invalid_argument("linearPreimage: shape mismatch");
  return PolyCone::fromInequalities(m.cols(), c.inequalityRows() * m);
}

// Largest subspace contained in the cone.
inline Subspace lineality(const PolyCone& c) {
  return kernelOf(c.inequalityRows());
}

// Smallest subspace containing the cone.
inline Subspace linearSpan(const PolyCone& c) {
  return imageOf(c.generators());
}

// True iff the cone is all of R^n, decided by a trivial polar.
inline bool isFullCone(const PolyCone& c) {
  return polarCone(c, PolarSign::Negative).generators().cols() == 0;
}

inline bool coneContains(const PolyCone& outer, const PolyCone& inner) {
  requireSameAmbient(outer, inner);
  const Mat& g = inner.generators();
  for (int j = 0; j < g.cols(); ++j)
    if (!outer.contains(g.column(j))) return false;
  return true;
}

inline bool coneEqual(const PolyCone& a, const PolyCone& b) {
  return coneContains(a, b) && coneContains(b, a);
}

}  // namespace coneproc
