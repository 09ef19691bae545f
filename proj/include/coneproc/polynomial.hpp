#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coneproc/rational.hpp"

namespace coneproc {

// Safety net for interval-refinement loops. Every loop below terminates by
// construction; the cap turns a latent bug into a diagnosable error instead
// of a hang.
inline constexpr std::int64_t kRefinementCap = 1'000'000;

class RefinementLimitError : public std::runtime_error {
 public:
  explicit RefinementLimitError(const std::string& where)
      : std::runtime_error("refinement cap exceeded in " + where) {}
};

// Univariate polynomial over the rationals, coefficients lowest degree
// first. Normal form: no trailing zero coefficient; the zero polynomial has
// an empty coefficient list.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  static UniPoly constant(Rational v) { return UniPoly({std::move(v)}); }
  // c0 + c1*t
  static UniPoly linear(Rational c0, Rational c1) {
    return UniPoly({std::move(c0), std::move(c1)});
  }
  static UniPoly variable() { return UniPoly({Rational(0), Rational(1)}); }

  bool isZero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Rational(0);
  }
  const Rational& leading() const {
    if (c_.empty()) throw std::logic_error("leading coeff of zero polynomial");
    return c_.back();
  }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
      d[k - 1] = c_[k] * Rational(static_cast<long>(k));
    return UniPoly(std::move(d));
  }

  UniPoly operator-() const {
    std::vector<Rational> r(c_);
    for (auto& v : r) v = -v;
    return UniPoly(std::move(r));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    return a + (-b);
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.isZero() || b.isZero()) return UniPoly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator*(const Rational& s, const UniPoly& p) {
    std::vector<Rational> r(p.c_);
    for (auto& v : r) v *= s;
    return UniPoly(std::move(r));
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.c_ == b.c_;
  }

  // Quotient and remainder; divisor must be nonzero.
  friend std::pair<UniPoly, UniPoly> divmod(UniPoly num, const UniPoly& den) {
    if (den.isZero()) throw std::domain_error("polynomial division by zero");
    if (num.degree() < den.degree()) return {UniPoly(), std::move(num)};
    std::vector<Rational> q(num.degree() - den.degree() + 1, Rational(0));
    while (!num.isZero() && num.degree() >= den.degree()) {
      int shift = num.degree() - den.degree();
      Rational f = num.leading() / den.leading();
      q[shift] = f;
      for (int k = 0; k <= den.degree(); ++k)
        num.c_[k + shift] -= f * den.c_[k];
      num.trim();
    }
    return {UniPoly(std::move(q)), std::move(num)};
  }

  UniPoly monic() const {
    if (isZero()) return UniPoly();
    return (Rational(1) / leading()) * *this;
  }

  std::string str(const std::string& var = "t") const {
    if (isZero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const Rational& a = c_[k];
      if (sgn(a) == 0) continue;
      if (!out.empty()) out += sgn(a) > 0 ? " + " : " - ";
      else if (sgn(a) < 0) out += "-";
      Rational mag = abs(a);
      bool unitCoeff = (mag == 1) && k > 0;
      if (!unitCoeff) out += rationalToString(mag);
      if (k > 0) {
        out += var;
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

// Monic gcd (zero when both inputs are zero).
inline UniPoly gcdPoly(UniPoly a, UniPoly b) {
  while (!b.isZero()) {
    UniPoly r = divmod(std::move(a), b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// p / gcd(p, p'): same real roots, all simple.
inline UniPoly squareFreePart(const UniPoly& p) {
  if (p.isZero()) return UniPoly();
  if (p.degree() == 0) return UniPoly::constant(Rational(1));
  UniPoly g = gcdPoly(p, p.derivative());
  if (g.degree() == 0) return p.monic();
  return divmod(p, g).first.monic();
}

// p(x + c)
inline UniPoly shiftArg(const UniPoly& p, const Rational& c) {
  // Synthetic division by (x - (-c)) repeated: Horner-style Taylor shift.
  std::vector<Rational> a(p.coeffs());
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) a[j] += c * a[j + 1];
  return UniPoly(std::move(a));
}

// p(c * x)
inline UniPoly scaleArg(const UniPoly& p, const Rational& c) {
  std::vector<Rational> a(p.coeffs());
  Rational f(1);
  for (std::size_t k = 1; k < a.size(); ++k) {
    f *= c;
    a[k] *= f;
  }
  return UniPoly(std::move(a));
}

// x^deg(p) * p(1/x)
inline UniPoly reverseCoeffs(const UniPoly& p) {
  std::vector<Rational> a(p.coeffs());
  std::reverse(a.begin(), a.end());
  return UniPoly(std::move(a));
}

inline int signVariations(const UniPoly& p) {
  int count = 0, last = 0;
  for (const Rational& a : p.coeffs()) {
    int s = sgn(a);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// Sign-variation count of p mapped from (lo, hi) onto (0, inf). Zero means
// no root in the open interval; one means exactly one.
inline int descartesIntervalVariations(const UniPoly& p, const Rational& lo,
                                       const Rational& hi) {
  assert(lo < hi);
  UniPoly q = scaleArg(shiftArg(p, lo), hi - lo);  // roots now in (0, 1)
  return signVariations(shiftArg(reverseCoeffs(q), Rational(1)));
}

// A real number that is either an exact rational or the unique root of a
// square-free polynomial inside an isolating interval. The interval may be
// tightened by queries; the represented number never changes. Refinement is
// not synchronized: clone the point instead of sharing one across threads.
class AlgebraicPoint {
 public:
  static AlgebraicPoint ofRational(Rational v) {
    AlgebraicPoint p;
    p.value_ = std::move(v);
    p.lo_ = p.value_;
    p.hi_ = p.value_;
    return p;
  }

  // Requires: defining square-free, defining(lo) and defining(hi) nonzero
  // with opposite signs, exactly one real root in (lo, hi). A rational root
  // at an endpoint is rejected rather than silently accepted.
  static AlgebraicPoint algebraic(UniPoly defining, Rational lo, Rational hi) {
    if (defining.degree() < 1)
      throw std::invalid_argument("algebraic point: constant polynomial");
    if (!(lo < hi)) throw std::invalid_argument("algebraic point: empty interval");
    if (gcdPoly(defining, defining.derivative()).degree() > 0)
      throw std::invalid_argument("algebraic point: polynomial not square-free");
    int sl = sgn(defining.eval(lo)), sh = sgn(defining.eval(hi));
    if (sl == 0 || sh == 0 || sl == sh)
      throw std::invalid_argument(
          "algebraic point: endpoints must straddle a single sign change");
    AlgebraicPoint p;
    p.defining_ = std::move(defining);
    p.lo_ = std::move(lo);
    p.hi_ = std::move(hi);
    return p;
  }

  bool isRational() const { return defining_.isZero(); }
  const Rational& rationalValue() const {
    if (!isRational()) throw std::logic_error("not a rational point");
    return value_;
  }
  const UniPoly& defining() const { return defining_; }
  const Rational& lower() const { return lo_; }
  const Rational& upper() const { return hi_; }

  // Halves the isolating interval. If the midpoint happens to be the root
  // the point collapses to rational kind.
  void refine() const {
    if (isRational()) return;
    Rational mid = (lo_ + hi_) / 2;
    Rational pm = defining_.eval(mid);
    if (sgn(pm) == 0) {
      value_ = mid;
      lo_ = mid;
      hi_ = mid;
      defining_ = UniPoly();
      return;
    }
    if (sgn(pm) == sgn(defining_.eval(lo_)))
      lo_ = std::move(mid);
    else
      hi_ = std::move(mid);
  }

  void refineBelowWidth(const Rational& w) const {
    std::int64_t guard = 0;
    while (!isRational() && hi_ - lo_ > w) {
      refine();
      if (++guard > kRefinementCap) throw RefinementLimitError("refineBelowWidth");
    }
  }

  double approx() const {
    refineBelowWidth(makeRational(1, 1'000'000'000));
    return (lo_.get_d() + hi_.get_d()) / 2;
  }

  std::string str() const {
    if (isRational()) return rationalToString(value_);
    return "root of " + defining_.str() + " in [" + rationalToString(lo_) +
           ", " + rationalToString(hi_) + "]";
  }

 private:
  mutable UniPoly defining_;  // empty <=> rational kind
  mutable Rational value_;
  mutable Rational lo_, hi_;
};

namespace detail {

// True iff g (a divisor of the point's defining polynomial) vanishes at the
// point. g has at most one root in the isolating interval, so a sign change
// is conclusive.
inline bool divisorVanishesAt(const UniPoly& g, const AlgebraicPoint& pt) {
  if (g.degree() < 1) return false;
  int sl = sgn(g.eval(pt.lower()));
  int sh = sgn(g.eval(pt.upper()));
  return sl * sh < 0;
}

}  // namespace detail

// Exact sign of p at the point. Zero is decided through the gcd with the
// defining polynomial; nonzero signs by shrinking the interval until p has
// no root across it.
inline int signAt(const UniPoly& p, const AlgebraicPoint& pt) {
  if (p.isZero()) return 0;
  if (pt.isRational()) return sgn(p.eval(pt.rationalValue()));
  UniPoly g = gcdPoly(p, pt.defining());
  if (detail::divisorVanishesAt(g, pt)) return 0;
  for (std::int64_t step = 0; step <= kRefinementCap; ++step) {
    const Rational &lo = pt.lower(), &hi = pt.upper();
    if (pt.isRational()) return sgn(p.eval(pt.rationalValue()));
    int sl = sgn(p.eval(lo));
    if (sl != 0 && sl == sgn(p.eval(hi)) &&
        descartesIntervalVariations(p, lo, hi) == 0)
      return sl;
    pt.refine();
  }
  throw RefinementLimitError("signAt");
}

// Total order on algebraic points; equal numbers from different defining
// polynomials compare equal.
inline int comparePoints(const AlgebraicPoint& a, const AlgebraicPoint& b) {
  if (a.isRational() && b.isRational()) {
    return cmp(a.rationalValue(), b.rationalValue());
  }
  if (a.isRational() || b.isRational()) {
    const bool aIsRat = a.isRational();
    const AlgebraicPoint& alg = aIsRat ? b : a;
    const Rational r = (aIsRat ? a : b).rationalValue();
    int rel = 0;  // r versus alg
    if (sgn(alg.defining().eval(r)) != 0 || r < alg.lower() || r > alg.upper()) {
      for (std::int64_t step = 0;; ++step) {
        if (step > kRefinementCap) throw RefinementLimitError("comparePoints");
        if (alg.isRational()) {
          rel = cmp(r, alg.rationalValue());
          break;
        }
        if (r <= alg.lower()) {
          rel = -1;  // the root lies strictly above r
          break;
        }
        if (r >= alg.upper()) {
          rel = 1;
          break;
        }
        alg.refine();
      }
    }
    return aIsRat ? rel : -rel;
  }
  // both algebraic: equality first, then separate the intervals
  {
    Rational L = std::max(a.lower(), b.lower());
    Rational H = std::min(a.upper(), b.upper());
    if (L <= H) {
      UniPoly g = gcdPoly(a.defining(), b.defining());
      if (g.degree() >= 1 && L < H) {
        int sl = sgn(g.eval(L)), sh = sgn(g.eval(H));
        if (sl * sh < 0) return 0;
      }
    }
  }
  for (std::int64_t step = 0; step <= kRefinementCap; ++step) {
    if (a.isRational() || b.isRational()) return comparePoints(a, b);
    if (a.upper() <= b.lower()) return -1;
    if (b.upper() <= a.lower()) return 1;
    if ((a.upper() - a.lower()) >= (b.upper() - b.lower()))
      a.refine();
    else
      b.refine();
  }
  throw RefinementLimitError("comparePoints");
}

inline bool pointsEqual(const AlgebraicPoint& a, const AlgebraicPoint& b) {
  return comparePoints(a, b) == 0;
}

// A rational strictly between a and b; requires a < b.
inline Rational rationalBetween(const AlgebraicPoint& a,
                                const AlgebraicPoint& b) {
  if (a.isRational() && b.isRational())
    return (a.rationalValue() + b.rationalValue()) / 2;
  for (std::int64_t step = 0; step <= kRefinementCap; ++step) {
    const Rational ha = a.upper();
    const Rational lb = b.lower();
    if (ha < lb) return (ha + lb) / 2;
    if (ha == lb && !a.isRational() && !b.isRational())
      return ha;  // interval endpoints are never roots, so ha is strictly between
    // Overlap, or a shared endpoint occupied by a rational side: shrink an
    // algebraic side until the intervals separate.
    if (a.isRational())
      b.refine();
    else if (b.isRational())
      a.refine();
    else if ((a.upper() - a.lower()) >= (b.upper() - b.lower()))
      a.refine();
    else
      b.refine();
  }
  throw RefinementLimitError("rationalBetween");
}

// A rational strictly above the point.
inline Rational rationalAbove(const AlgebraicPoint& a) {
  return a.upper() + 1;
}

namespace detail {

// 1 + max |a_i| / |a_d|: every real root has absolute value strictly below.
inline Rational cauchyRootBound(const UniPoly& p) {
  Rational m(0);
  const Rational lead = abs(p.leading());
  for (int k = 0; k < p.degree(); ++k) {
    Rational v = abs(p.coeff(k)) / lead;
    if (v > m) m = v;
  }
  return m + 1;
}

inline constexpr unsigned long kDivisorEnumerationCap = 1'000'000'000'000UL;

// All positive divisors by trial division; empty when the magnitude is too
// large to enumerate (callers fall back to interval isolation only).
inline std::vector<Integer> positiveDivisors(Integer m) {
  m = abs(m);
  std::vector<Integer> out;
  if (sgn(m) == 0) return out;
  if (!m.fits_ulong_p() || m.get_ui() > kDivisorEnumerationCap) return out;
  unsigned long v = m.get_ui();
  for (unsigned long d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.emplace_back(d);
      if (d != v / d) out.emplace_back(v / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Clears denominators and content; sign of the leading coefficient kept.
inline UniPoly integerize(const UniPoly& p) {
  if (p.isZero()) return p;
  Integer l(1);
  for (const Rational& c : p.coeffs())
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<Rational> a;
  a.reserve(p.coeffs().size());
  Integer g(0);
  for (const Rational& c : p.coeffs()) {
    Rational v = c * Rational(l);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num().get_mpz_t());
    a.push_back(std::move(v));
  }
  if (sgn(g) != 0)
    for (auto& v : a) v /= Rational(g);
  return UniPoly(std::move(a));
}

// Rational roots of a square-free polynomial, plus the cofactor with those
// roots divided out. With oversized coefficients the candidate enumeration
// is skipped and the cofactor may still contain rational roots.
inline std::pair<std::vector<Rational>, UniPoly> extractRationalRoots(
    const UniPoly& squareFree) {
  std::vector<Rational> roots;
  UniPoly q = squareFree;
  if (q.degree() < 1) return {roots, q};

  if (sgn(q.coeff(0)) == 0) {
    roots.emplace_back(0);
    q = divmod(q, UniPoly::variable()).first;  // square-free => single factor
  }
  if (q.degree() >= 1) {
    UniPoly zp = integerize(q);
    auto ps = positiveDivisors(zp.coeff(0).get_num());
    auto qs = positiveDivisors(zp.leading().get_num());
    if (!ps.empty() && !qs.empty()) {
      std::vector<Rational> candidates;
      for (const Integer& pn : ps)
        for (const Integer& qd : qs) {
          Rational c = makeRational(pn, qd);
          candidates.push_back(c);
          candidates.push_back(-c);
        }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()),
                       candidates.end());
      for (const Rational& c : candidates) {
        if (sgn(q.eval(c)) == 0) {
          roots.push_back(c);
          q = divmod(q, UniPoly::linear(-c, Rational(1))).first;
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return {roots, q};
}

struct MidpointRootHit {
  Rational root;
};

// Bisection guided by Descartes counts; p must be square-free and nonzero at
// both endpoints. Rational roots hit at midpoints escape via MidpointRootHit.
inline void descartesIsolate(const UniPoly& p, const Rational& lo,
                             const Rational& hi,
                             std::vector<std::pair<Rational, Rational>>& out,
                             std::int64_t& budget) {
  if (--budget < 0) throw RefinementLimitError("descartesIsolate");
  int v = descartesIntervalVariations(p, lo, hi);
  if (v == 0) return;
  if (v == 1) {
    out.emplace_back(lo, hi);
    return;
  }
  Rational mid = (lo + hi) / 2;
  if (sgn(p.eval(mid)) == 0) throw MidpointRootHit{mid};
  descartesIsolate(p, lo, mid, out, budget);
  descartesIsolate(p, mid, hi, out, budget);
}

}  // namespace detail

// Every distinct real root of p in [from, +inf), sorted ascending. Rational
// roots come back in rational kind; the rest as isolated algebraic points
// with pairwise disjoint open intervals.
inline std::vector<AlgebraicPoint> isolateRealRoots(const UniPoly& p,
                                                    const Rational& from) {
  if (p.isZero()) throw std::invalid_argument("isolateRealRoots: identically zero");
  std::vector<AlgebraicPoint> out;
  if (p.degree() < 1) return out;

  auto [rationalRoots, q] = detail::extractRationalRoots(squareFreePart(p));
  for (const Rational& r : rationalRoots)
    if (r >= from) out.push_back(AlgebraicPoint::ofRational(r));

  // Deflation loop: only taken when candidate enumeration was skipped and a
  // bisection midpoint happens to be a rational root.
  while (q.degree() >= 1) {
    Rational bound = detail::cauchyRootBound(q);
    if (from >= bound) break;
    if (sgn(q.eval(from)) == 0) {
      out.push_back(AlgebraicPoint::ofRational(from));
      q = divmod(q, UniPoly::linear(-from, Rational(1))).first;
      continue;
    }
    std::vector<std::pair<Rational, Rational>> intervals;
    std::int64_t budget = kRefinementCap;
    try {
      detail::descartesIsolate(q, from, bound, intervals, budget);
    } catch (const detail::MidpointRootHit& hit) {
      if (hit.root >= from) out.push_back(AlgebraicPoint::ofRational(hit.root));
      q = divmod(q, UniPoly::linear(-hit.root, Rational(1))).first;
      continue;
    }
    for (auto& [l, h] : intervals)
      out.push_back(AlgebraicPoint::algebraic(q, std::move(l), std::move(h)));
    break;
  }

  // Shrink algebraic intervals until they exclude every rational root, so
  // each interval brackets exactly one root of the square-free part.
  for (const AlgebraicPoint& pt : out) {
    if (pt.isRational()) continue;
    for (const Rational& r : rationalRoots) {
      std::int64_t guard = 0;
      while (!pt.isRational() && pt.lower() <= r && r <= pt.upper()) {
        pt.refine();
        if (++guard > kRefinementCap)
          throw RefinementLimitError("isolateRealRoots");
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const AlgebraicPoint& a, const AlgebraicPoint& b) {
              return comparePoints(a, b) < 0;
            });
  return out;
}

}  // namespace coneproc
