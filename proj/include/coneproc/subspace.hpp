#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "coneproc/matrix.hpp"

namespace coneproc {

// Linear subspace of R^n held in a canonical basis: the reduced row-echelon
// form of any spanning set, with every basis vector scaled to a primitive
// integer vector. Two subspaces are equal iff their canonical matrices are
// identical, so == is set equality.
class Subspace {
 public:
  static Subspace span(const Mat& columns) {
    Subspace s;
    s.ambient_ = columns.rows();
    RrefResult r = rref(columns.transpose());
    std::vector<std::vector<Rational>> basis;
    for (int i = 0; i < r.rank; ++i) {
      std::vector<Rational> v = r.reduced.row(i);
      clearToPrimitive(v);
      basis.push_back(std::move(v));
    }
    s.basis_ = Mat::fromColumns(basis, s.ambient_);
    return s;
  }

  static Subspace zero(int ambient) { return span(Mat(ambient, 0)); }
  static Subspace full(int ambient) { return span(Mat::identity(ambient)); }

  int ambient() const { return ambient_; }
  int dim() const { return basis_.cols(); }
  bool isZeroSpace() const { return dim() == 0; }
  bool isFull() const { return dim() == ambient_; }
  // Columns are the canonical basis vectors.
  const Mat& basis() const { return basis_; }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

  bool contains(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != ambient_)
      throw std::invalid_argument("subspace membership: ambient mismatch");
    Mat stacked = Mat::hstack(basis_, Mat::fromColumns({v}, ambient_));
    return rankOf(stacked) == dim();
  }

 private:
  static void clearToPrimitive(std::vector<Rational>& v) {
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

  int ambient_ = 0;
  Mat basis_;
};

inline void requireSameAmbient(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("subspace ambient mismatch");
}

inline Subspace subspaceSum(const Subspace& a, const Subspace& b) {
  requireSameAmbient(a, b);
  return Subspace::span(Mat::hstack(a.basis(), b.basis()));
}

inline Subspace subspaceIntersect(const Subspace& a, const Subspace& b) {
  requireSameAmbient(a, b);
  // x = Ba u = Bb w: solve [Ba  -Bb] [u; w] = 0, read x off the u part.
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient());
  Mat k = kernelBasis(Mat::hstack(a.basis(), -b.basis()));
  std::vector<std::vector<Rational>> xs;
  for (int j = 0; j < k.cols(); ++j) {
    std::vector<Rational> u(a.dim());
    for (int i = 0; i < a.dim(); ++i) u[i] = k.at(i, j);
    xs.push_back(a.basis() * u);
  }
  return Subspace::span(Mat::fromColumns(xs, a.ambient()));
}

// { v : m v in s }
inline Subspace preimage(const Mat& m, const Subspace& s) {
  if (s.ambient() != m.rows())
    throw std::invalid_argument("preimage: ambient mismatch");
  if (s.isFull()) return Subspace::full(m.cols());
  // m v = B w  <=>  [m  -B][v; w] = 0
  Mat k = kernelBasis(Mat::hstack(m, -s.basis()));
  std::vector<std::vector<Rational>> vs;
  for (int j = 0; j < k.cols(); ++j) {
    std::vector<Rational> v(m.cols());
    for (int i = 0; i < m.cols(); ++i) v[i] = k.at(i, j);
    vs.push_back(std::move(v));
  }
  return Subspace::span(Mat::fromColumns(vs, m.cols()));
}

inline Subspace mapImage(const Mat& m, const Subspace& s) {
  if (s.ambient() != m.cols())
    throw std::invalid_argument("mapImage: ambient mismatch");
  return Subspace::span(m * s.basis());
}

inline Subspace kernelOf(const Mat& m) { return Subspace::span(kernelBasis(m)); }
inline Subspace imageOf(const Mat& m) { return Subspace::span(m); }

inline Subspace orthogonalComplement(const Subspace& s) {
  return kernelOf(s.basis().transpose());
}

inline bool subspaceContains(const Subspace& outer, const Subspace& inner) {
  requireSameAmbient(outer, inner);
  return subspaceSum(outer, inner) == outer;
}

}  // namespace coneproc
