#pragma once

#include <cassert>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coneproc/rational.hpp"

namespace coneproc {

// Dense matrix of exact rationals, row-major. Sizes here are desk scale;
// no sparsity or blocking.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static Mat fromRows(std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    Mat m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c)
        throw std::invalid_argument("ragged rows");
      int j = 0;
      for (long v : row) m.at(i, j++) = Rational(v);
      ++i;
    }
    return m;
  }

  static Mat fromColumns(const std::vector<std::vector<Rational>>& cols,
                         int rowsIfEmpty = 0) {
    if (cols.empty()) return Mat(rowsIfEmpty, 0);
    int r = static_cast<int>(cols[0].size());
    Mat m(r, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (static_cast<int>(cols[j].size()) != r)
        throw std::invalid_argument("ragged columns");
      for (int i = 0; i < r; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const Rational& at(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::vector<Rational> column(int j) const {
    std::vector<Rational> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }
  std::vector<Rational> row(int i) const {
    std::vector<Rational> v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Mat operator-() const {
    Mat r = *this;
    for (auto& v : r.a_) v = -v;
    return r;
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape");
    Mat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Rational& aik = a.at(i, k);
        if (sgn(aik) == 0) continue;
        for (int j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }

  friend std::vector<Rational> operator*(const Mat& a,
                                         const std::vector<Rational>& x) {
    if (a.cols_ != static_cast<int>(x.size()))
      throw std::invalid_argument("matrix-vector shape");
    std::vector<Rational> y(a.rows_, Rational(0));
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) y[i] += a.at(i, j) * x[j];
    return y;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  static Mat hstack(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("hstack shape");
    Mat r(a.rows_, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
      for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
  }

  static Mat vstack(const Mat& a, const Mat& b) {
    if (a.cols_ != b.cols_) throw std::invalid_argument("vstack shape");
    Mat r(a.rows_ + b.rows_, a.cols_);
    for (int j = 0; j < a.cols_; ++j) {
      for (int i = 0; i < a.rows_; ++i) r.at(i, j) = a.at(i, j);
      for (int i = 0; i < b.rows_; ++i) r.at(a.rows_ + i, j) = b.at(i, j);
    }
    return r;
  }

  Mat subColumns(int begin, int count) const {
    if (begin < 0 || count < 0 || begin + count > cols_)
      throw std::invalid_argument("subColumns range");
    Mat r(rows_, count);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < count; ++j) r.at(i, j) = at(i, begin + j);
    return r;
  }

  std::string str() const {
    std::string out = "[";
    for (int i = 0; i < rows_; ++i) {
      out += i ? "; " : "";
      for (int j = 0; j < cols_; ++j)
        out += (j ? ", " : "") + rationalToString(at(i, j));
    }
    return out + "]";
  }

 private:
  int rows_, cols_;
  std::vector<Rational> a_;
};

struct RrefResult {
  Mat reduced;
  int rank = 0;
  std::vector<int> pivotCols;
};

// Exact reduced row-echelon form (Gauss-Jordan, first nonzero pivot).
inline RrefResult rref(Mat m) {
  RrefResult res{Mat(m.rows(), m.cols()), 0, {}};
  int lead = 0;
  for (int col = 0; col < m.cols() && lead < m.rows(); ++col) {
    int piv = -1;
    for (int i = lead; i < m.rows(); ++i)
      if (sgn(m.at(i, col)) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != lead)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(lead, j));
    Rational inv = Rational(1) / m.at(lead, col);
    for (int j = 0; j < m.cols(); ++j) m.at(lead, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == lead || sgn(m.at(i, col)) == 0) continue;
      Rational f = m.at(i, col);
      for (int j = 0; j < m.cols(); ++j) m.at(i, j) -= f * m.at(lead, j);
    }
    res.pivotCols.push_back(col);
    ++lead;
  }
  res.rank = lead;
  res.reduced = std::move(m);
  return res;
}

inline int rankOf(const Mat& m) { return rref(m).rank; }

// Columns form a basis of { v : m v = 0 }.
inline Mat kernelBasis(const Mat& m) {
  RrefResult r = rref(m);
  std::vector<bool> isPivot(m.cols(), false);
  for (int c : r.pivotCols) isPivot[c] = true;
  std::vector<std::vector<Rational>> cols;
  for (int f = 0; f < m.cols(); ++f) {
    if (isPivot[f]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t p = 0; p < r.pivotCols.size(); ++p)
      v[r.pivotCols[p]] = -r.reduced.at(static_cast<int>(p), f);
    cols.push_back(std::move(v));
  }
  return Mat::fromColumns(cols, m.cols());
}

// Inverse of a square nonsingular matrix.
inline Mat inverseOf(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  RrefResult r = rref(Mat::hstack(m, Mat::identity(m.rows())));
  // Singular iff some pivot escapes the left block.
  for (int i = 0; i < m.rows(); ++i)
    if (i >= static_cast<int>(r.pivotCols.size()) || r.pivotCols[i] != i)
      throw std::domain_error("inverse: singular matrix");
  return r.reduced.subColumns(m.cols(), m.cols());
}

}  // namespace coneproc
