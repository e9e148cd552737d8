#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gibbsocc/logreal.hpp"
#include "gibbsocc/rational.hpp"

namespace gibbsocc {

// Bridge between the two numeric modes. Algorithms over non-negative
// quantities are templated on S in {LogReal, Rational} and reach integer
// combinatorics through these hooks.
template <class S>
struct num_ops;

template <>
struct num_ops<LogReal> {
  static constexpr bool exact = false;
  static LogReal zero() { return LogReal(); }
  static LogReal one() { return LogReal::from_log(0.0); }
  static LogReal from_uint(std::uint64_t u) {
    return u == 0 ? zero() : LogReal::from_log(std::log(double(u)));
  }
  static LogReal from_bigint(const BigInt& v) {
    return v == 0 ? zero() : LogReal::from_log(log_big_int(v));
  }
  static LogReal from_rational(const Rational& r) { return LogReal::from_log(log_rational(r)); }
  static LogReal factorial(std::uint64_t n) { return LogReal::from_log(log_factorial(n)); }
  static LogReal binomial(std::uint64_t n, std::uint64_t k) {
    return LogReal::from_log(log_binomial(n, k));
  }
  static LogReal falling(std::uint64_t n, std::uint64_t p) {
    if (p > n) return zero();
    return LogReal::from_log(log_falling_positive(double(n), p));
  }
  static LogReal pow(const LogReal& b, std::uint64_t e) {
    if (e == 0) return one();
    if (b.is_zero()) return zero();
    return LogReal::from_log(double(e) * b.log());
  }
  static LogReal sum(std::vector<LogReal>& buf) {
    std::vector<double> logs;
    logs.reserve(buf.size());
    for (const auto& t : buf) logs.push_back(t.log());
    return LogReal::from_log(log_sum_exp(logs));
  }
  static bool is_zero(const LogReal& v) { return v.is_zero(); }
  static double to_double(const LogReal& v) { return v.value(); }
  static double to_log(const LogReal& v) { return v.log(); }
};

template <>
struct num_ops<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_uint(std::uint64_t u) { return Rational(u); }
  static Rational from_bigint(const BigInt& v) { return Rational(v); }
  static Rational from_rational(const Rational& r) { return r; }
  static Rational factorial(std::uint64_t n) { return Rational(big_factorial(n)); }
  static Rational binomial(std::uint64_t n, std::uint64_t k) { return Rational(big_binomial(n, k)); }
  static Rational falling(std::uint64_t n, std::uint64_t p) { return Rational(big_falling(n, p)); }
  static Rational pow(const Rational& b, std::uint64_t e) { return rat_pow(b, e); }
  static Rational sum(std::vector<Rational>& buf) {
    Rational acc = 0;
    for (const auto& t : buf) acc += t;
    return acc;
  }
  static bool is_zero(const Rational& v) { return v == 0; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static double to_log(const Rational& v) { return log_rational(v); }
};

// k! / prod(counts[i]!) as S.
template <class S>
S multinomial_coeff(std::uint64_t k, std::span<const int> counts) {
  S r = num_ops<S>::factorial(k);
  for (int c : counts) r /= num_ops<S>::factorial(std::uint64_t(c));
  return r;
}

}  // namespace gibbsocc
