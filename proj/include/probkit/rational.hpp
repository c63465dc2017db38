#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace probkit {

using big_int = boost::multiprecision::cpp_int;

// Exact rational, always kept in lowest terms with positive denominator.
using rational = boost::multiprecision::cpp_rational;

inline big_int rational_num(const rational& r) { return boost::multiprecision::numerator(r); }
inline big_int rational_den(const rational& r) { return boost::multiprecision::denominator(r); }

// Accepts "p" or "p/q" with an optional leading '-' on p. Throws
// std::invalid_argument on anything else (including q == 0).
inline rational parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s, bool allow_sign) -> big_int {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("missing digits");
    big_int v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad digit in rational");
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };

  auto slash = text.find('/');
  if (slash == std::string_view::npos) return rational(parse_int(text, true));
  big_int p = parse_int(text.substr(0, slash), true);
  big_int q = parse_int(text.substr(slash + 1), false);
  if (q == 0) throw std::invalid_argument("zero denominator");
  return rational(p, q);
}

// "p/q" in lowest terms, or just "p" when the denominator is 1.
inline std::string format_rational(const rational& r) {
  big_int p = rational_num(r);
  big_int q = rational_den(r);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

// Plain decimal with `significant` significant digits, round-half-even.
// Output formatting only; the engine never computes with decimals.
inline std::string format_decimal(const rational& r, int significant = 20) {
  if (significant < 1) significant = 1;
  if (r == 0) return "0";
  big_int p = rational_num(r);
  big_int q = rational_den(r);
  bool neg = p < 0;
  if (neg) p = -p;

  auto pow10 = [](long k) {
    big_int t = 1;
    for (long i = 0; i < k; ++i) t *= 10;
    return t;
  };

  // Find e with 10^e <= p/q < 10^{e+1}.
  long e = static_cast<long>(p.str().size()) - static_cast<long>(q.str().size());
  for (;;) {
    big_int lhs = p, rhs = q;
    if (e >= 0) rhs *= pow10(e); else lhs *= pow10(-e);
    if (lhs < rhs) { --e; continue; }
    if (lhs >= rhs * 10) { ++e; continue; }
    break;
  }

  // digits = round_half_even(p * 10^{sig-1-e} / q)
  long shift = significant - 1 - e;
  big_int num = p, den = q;
  if (shift >= 0) num *= pow10(shift); else den *= pow10(-shift);
  big_int quot = num / den;
  big_int rem = num % den;
  big_int twice = rem * 2;
  if (twice > den || (twice == den && quot % 2 != 0)) ++quot;
  std::string ds = quot.str();
  if (static_cast<int>(ds.size()) > significant) {
    ds.pop_back();  // rounding carried into a new leading digit
    ++e;
  }

  std::string out;
  if (e >= significant - 1) {
    out = ds + std::string(static_cast<std::size_t>(e - significant + 1), '0');
  } else if (e >= 0) {
    out = ds.substr(0, static_cast<std::size_t>(e + 1)) + "." +
          ds.substr(static_cast<std::size_t>(e + 1));
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
  }
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

}  // namespace probkit
