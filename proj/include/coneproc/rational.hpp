#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace coneproc {

using Integer = mpz_class;

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator), so == and < agree with mathematical equality and
// order. Distinct values may be read concurrently; never share a value that
// another thread mutates.
using Rational = mpq_class;

inline Rational makeRational(Integer num, Integer den) {
  if (sgn(den) == 0) throw std::domain_error("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline const Rational& rationalZero() {
  static const Rational z(0);
  return z;
}

// "p/q" with q > 1, bare integer otherwise.
inline std::string rationalToString(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace detail {

inline Integer parseInteger(std::string_view text, std::string_view whole) {
  try {
    if (text.empty()) throw std::invalid_argument("empty");
    return Integer(std::string(text), 10);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not an exact number: \"" + std::string(whole) +
                                "\"");
  }
}

}  // namespace detail

// Accepts integers ("42", "-7"), fractions ("3/4", "-1/2") and exact decimal
// strings ("0.25", "-1.5e-2"). Decimal input converts exactly; there is no
// binary floating point anywhere in the parse.
inline Rational parseRational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = detail::parseInteger(text.substr(0, slash), whole);
    Integer den = detail::parseInteger(text.substr(slash + 1), whole);
    if (sgn(den) == 0)
      throw std::invalid_argument("zero denominator in \"" +
                                  std::string(whole) + "\"");
    return makeRational(num, den);
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    Integer ei = detail::parseInteger(text.substr(e + 1), whole);
    if (!ei.fits_slong_p())
      throw std::invalid_argument("exponent out of range in \"" +
                                  std::string(whole) + "\"");
    exponent = ei.get_si();
    mantissa = text.substr(0, e);
  }

  std::string digits;
  long scale = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view frac = mantissa.substr(dot + 1);
    scale = static_cast<long>(frac.size());
    digits = std::string(mantissa.substr(0, dot)) + std::string(frac);
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("not an exact number: \"" +
                                  std::string(whole) + "\"");
  } else {
    digits = std::string(mantissa);
  }

  Integer num = detail::parseInteger(digits, whole);
  Integer den(1);
  long shift = exponent - scale;
  Integer ten(10);
  if (shift >= 0) {
    Integer p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift));
    num *= p;
  } else {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(),
               static_cast<unsigned long>(-shift));
  }
  return makeRational(num, den);
}

}  // namespace coneproc
