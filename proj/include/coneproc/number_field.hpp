#pragma once

#include <memory>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "coneproc/polynomial.hpp"
#include "coneproc/simplex.hpp"

namespace coneproc {

// Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic (or zero).
inline std::tuple<UniPoly, UniPoly, UniPoly> xgcdPoly(UniPoly a, UniPoly b) {
  UniPoly r0 = std::move(a), r1 = std::move(b);
  UniPoly s0 = UniPoly::constant(Rational(1)), s1;
  UniPoly t0, t1 = UniPoly::constant(Rational(1));
  while (!r1.isZero()) {
    auto [q, r] = divmod(r0, r1);
    UniPoly s2 = s0 - q * s1;
    UniPoly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.isZero()) return {r0, s0, t0};
  Rational lead = r0.leading();
  Rational inv = Rational(1) / lead;
  return {inv * r0, inv * s0, inv * t0};
}

// Arithmetic over Q(alpha) for one real algebraic alpha, represented as
// polynomials modulo a square-free defining polynomial with an isolating
// interval. The modulus is not assumed irreducible: whenever a zero test or
// an inversion exposes a factor, the context splits and keeps the factor
// that still vanishes at alpha (and the whole field may collapse to Q if a
// refinement midpoint hits the root). Not thread-safe; give each thread its
// own context.
class AlgebraicCtx {
 public:
  explicit AlgebraicCtx(const AlgebraicPoint& pt) {
    if (pt.isRational()) {
      value_ = pt.rationalValue();
      collapsed_ = true;
    } else {
      d_ = pt.defining().monic();
      lo_ = pt.lower();
      hi_ = pt.upper();
    }
  }

  bool isRationalValue() const { return collapsed_; }
  const Rational& rationalValue() const {
    if (!collapsed_) throw std::logic_error("context has not collapsed");
    return value_;
  }
  const UniPoly& modulus() const { return d_; }

  AlgebraicPoint point() const {
    return collapsed_ ? AlgebraicPoint::ofRational(value_)
                      : AlgebraicPoint::algebraic(d_, lo_, hi_);
  }

  UniPoly reduce(const UniPoly& p) const {
    if (collapsed_) return UniPoly::constant(p.eval(value_));
    if (p.degree() < d_.degree()) return p;
    return divmod(p, d_).second;
  }

  // Exact sign of rep(alpha); may split the modulus or collapse to Q.
  int signOfRep(const UniPoly& repIn) {
    UniPoly rep = reduce(repIn);
    if (rep.isZero()) return 0;
    if (collapsed_) return sgn(rep.eval(value_));

    UniPoly g = gcdPoly(rep, d_);
    if (g.degree() >= 1) {
      if (vanishesHere(g)) {
        d_ = g;  // alpha is a root of the common factor, so rep(alpha) = 0
        return 0;
      }
      d_ = divmod(d_, g).first.monic();
      if (d_.degree() < 1) throw std::logic_error("modulus lost its root");
    }
    for (std::int64_t step = 0; step <= kRefinementCap; ++step) {
      if (collapsed_) return sgn(rep.eval(value_));
      int sl = sgn(rep.eval(lo_));
      if (sl != 0 && sl == sgn(rep.eval(hi_)) &&
          descartesIntervalVariations(rep, lo_, hi_) == 0)
        return sl;
      refineOnce();
    }
    throw RefinementLimitError("AlgebraicCtx::signOfRep");
  }

  // rep(alpha)^{-1} as a representative polynomial; rep(alpha) must be
  // nonzero (checked; throws std::domain_error otherwise).
  UniPoly invert(const UniPoly& repIn) {
    UniPoly rep = reduce(repIn);
    if (collapsed_) {
      Rational v = rep.eval(value_);
      if (sgn(v) == 0) throw std::domain_error("number field: divide by zero");
      return UniPoly::constant(Rational(1) / v);
    }
    for (int guard = 0; guard <= rep.degree() + d_.degree() + 2; ++guard) {
      if (rep.isZero()) throw std::domain_error("number field: divide by zero");
      auto [g, s, t] = xgcdPoly(rep, d_);
      if (g.degree() == 0) return reduce(s);  // s*rep = 1 (mod d)
      if (vanishesHere(g))
        throw std::domain_error("number field: divide by zero");
      d_ = divmod(d_, g).first.monic();
      if (d_.degree() < 1) throw std::logic_error("modulus lost its root");
      rep = reduce(rep);
    }
    throw std::logic_error("number field inversion failed to stabilize");
  }

 private:
  // g divides the modulus, so it has at most one root in the interval and
  // endpoint values are nonzero: a sign change is conclusive.
  bool vanishesHere(const UniPoly& g) const {
    return sgn(g.eval(lo_)) * sgn(g.eval(hi_)) < 0;
  }

  void refineOnce() {
    Rational mid = (lo_ + hi_) / 2;
    Rational dm = d_.eval(mid);
    if (sgn(dm) == 0) {
      collapsed_ = true;
      value_ = mid;
      return;
    }
    if (sgn(dm) == sgn(d_.eval(lo_)))
      lo_ = std::move(mid);
    else
      hi_ = std::move(mid);
  }

  UniPoly d_;
  Rational lo_, hi_;
  bool collapsed_ = false;
  Rational value_;
};

// An element of Q(alpha): a representative polynomial tied to a shared
// context. Representatives may predate a modulus split; every operation
// re-reduces, which is sound because the new modulus divides the old one.
class NFElem {
 public:
  NFElem(std::shared_ptr<AlgebraicCtx> ctx, UniPoly rep)
      : ctx_(std::move(ctx)), rep_(ctx_->reduce(rep)) {}

  static NFElem ofRational(const std::shared_ptr<AlgebraicCtx>& ctx,
                           Rational v) {
    return NFElem(ctx, UniPoly::constant(std::move(v)));
  }
  // alpha itself
  static NFElem generator(const std::shared_ptr<AlgebraicCtx>& ctx) {
    return NFElem(ctx, UniPoly::variable());
  }

  const std::shared_ptr<AlgebraicCtx>& ctx() const { return ctx_; }
  const UniPoly& rep() const { return rep_; }
  int sign() const { return ctx_->signOfRep(rep_); }
  bool isZero() const { return sign() == 0; }

  friend NFElem operator+(const NFElem& a, const NFElem& b) {
    a.requireSameCtx(b);
    return NFElem(a.ctx_, a.rep_ + b.rep_);
  }
  friend NFElem operator-(const NFElem& a, const NFElem& b) {
    a.requireSameCtx(b);
    return NFElem(a.ctx_, a.rep_ - b.rep_);
  }
  friend NFElem operator*(const NFElem& a, const NFElem& b) {
    a.requireSameCtx(b);
    return NFElem(a.ctx_, a.rep_ * b.rep_);
  }
  friend NFElem operator/(const NFElem& a, const NFElem& b) {
    a.requireSameCtx(b);
    return NFElem(a.ctx_, a.rep_ * a.ctx_->invert(b.rep_));
  }
  NFElem operator-() const { return NFElem(ctx_, -rep_); }

 private:
  void requireSameCtx(const NFElem& other) const {
    if (ctx_ != other.ctx_)
      throw std::invalid_argument("number field: mixed contexts");
  }

  std::shared_ptr<AlgebraicCtx> ctx_;
  UniPoly rep_;
};

template <>
struct ScalarTraits<NFElem> {
  static int sign(const NFElem& x) { return x.sign(); }
  static NFElem zeroLike(const NFElem& x) {
    return NFElem::ofRational(x.ctx(), Rational(0));
  }
  static NFElem oneLike(const NFElem& x) {
    return NFElem::ofRational(x.ctx(), Rational(1));
  }
};

}  // namespace coneproc
