#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gibbsocc/logreal.hpp"

namespace gibbsocc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_factorial(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt big_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

// {n}_p = n(n-1)...(n-p+1)
inline BigInt big_falling(std::uint64_t n, std::uint64_t p) {
  if (p > n) return 0;
  BigInt r = 1;
  for (std::uint64_t i = 0; i < p; ++i) r *= (n - i);
  return r;
}

// (x)_m = x(x+1)...(x+m-1)
inline Rational rat_rising(const Rational& x, std::uint64_t m) {
  Rational r = 1;
  for (std::uint64_t i = 0; i < m; ++i) r *= (x + Rational(i));
  return r;
}

// {x}_m = x(x-1)...(x-m+1)
inline Rational rat_falling(const Rational& x, std::uint64_t m) {
  Rational r = 1;
  for (std::uint64_t i = 0; i < m; ++i) r *= (x - Rational(i));
  return r;
}

inline Rational rat_pow(const Rational& x, std::uint64_t e) {
  Rational r = 1, b = x;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Natural log of a positive big integer, overflow-safe.
inline double log_big_int(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log_big_int: argument must be positive");
  const auto bits = boost::multiprecision::msb(v);  // floor(log2 v)
  if (bits < 900) return std::log(v.convert_to<double>());
  const unsigned shift = unsigned(bits) - 64;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + double(shift) * M_LN2;
}

// Natural log of a non-negative rational; exact zero maps to -inf.
inline double log_rational(const Rational& r) {
  if (r < 0) throw std::domain_error("log_rational: argument must be non-negative");
  if (r == 0) return kNegInf;
  return log_big_int(numerator(r)) - log_big_int(denominator(r));
}

// Parses "p/q", integers, and decimal strings like "2.5" or "1e-3", exactly.
inline Rational parse_rational(std::string_view s) {
  auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(s) + "'"); };
  if (s.empty()) fail();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::string num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (num.empty() || den.empty()) fail();
    try {
      BigInt n(num), d(den);
      if (d == 0) fail();
      return Rational(n, d);
    } catch (const std::exception&) {
      fail();
    }
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
  std::string digits;
  long frac_len = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) fail();
      seen_dot = true;
    } else {
      digits += s[i];
      seen_digit = true;
      if (seen_dot) ++frac_len;
    }
  }
  if (!seen_digit) fail();
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    if (i >= s.size()) fail();
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
      exp10 = exp10 * 10 + (s[i] - '0');
      if (exp10 > 100000) fail();
    }
    if (eneg) exp10 = -exp10;
  }
  if (i != s.size()) fail();
  Rational r(BigInt(digits), 1);
  const long net = exp10 - frac_len;
  BigInt scale = 1;
  for (long j = 0; j < std::abs(net); ++j) scale *= 10;
  if (net >= 0)
    r *= scale;
  else
    r /= scale;
  return neg ? -r : r;
}

inline std::string rational_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace gibbsocc
