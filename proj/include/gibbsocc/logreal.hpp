#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace gibbsocc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sum of exponentials in log space: log(sum_i exp(logs[i])).
// Accumulates in descending order of magnitude after the max shift;
// relative precision target is 1e-12 for sums of up to 1e4 terms.
// Mutates the buffer (sorts it).
inline double log_sum_exp(std::vector<double>& logs) {
  if (logs.empty()) return kNegInf;
  std::sort(logs.begin(), logs.end(), std::greater<double>());
  double acc = logs.front();
  if (acc == kNegInf) return kNegInf;
  for (std::size_t i = 1; i < logs.size(); ++i) {
    if (logs[i] == kNegInf) break;
    acc += std::log1p(std::exp(logs[i] - acc));
  }
  return acc;
}

inline double log_sum_exp_pair(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// A non-negative real number carried as its natural logarithm.
// -inf is the distinguished representation of exact zero; it absorbs
// multiplication and is the identity for addition.
class LogReal {
 public:
  LogReal() : lg_(kNegInf) {}

  static LogReal from_log(double lg) {
    LogReal r;
    r.lg_ = lg;
    return r;
  }
  static LogReal from_value(double v) {
    if (v < 0) v = 0;  // callers guarantee non-negativity; clamp noise
    return from_log(v == 0 ? kNegInf : std::log(v));
  }

  double log() const { return lg_; }
  double value() const { return lg_ == kNegInf ? 0.0 : std::exp(lg_); }
  bool is_zero() const { return lg_ == kNegInf; }

  LogReal& operator*=(const LogReal& o) {
    lg_ = (is_zero() || o.is_zero()) ? kNegInf : lg_ + o.lg_;
    return *this;
  }
  LogReal& operator/=(const LogReal& o) {
    if (is_zero()) return *this;
    lg_ -= o.lg_;
    return *this;
  }
  LogReal& operator+=(const LogReal& o) {
    lg_ = log_sum_exp_pair(lg_, o.lg_);
    return *this;
  }

  friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }
  friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }
  friend LogReal operator+(LogReal a, const LogReal& b) { return a += b; }

  friend bool operator==(const LogReal& a, const LogReal& b) { return a.lg_ == b.lg_; }
  friend bool operator<(const LogReal& a, const LogReal& b) { return a.lg_ < b.lg_; }
  friend bool operator>(const LogReal& a, const LogReal& b) { return a.lg_ > b.lg_; }
  friend bool operator<=(const LogReal& a, const LogReal& b) { return a.lg_ <= b.lg_; }
  friend bool operator>=(const LogReal& a, const LogReal& b) { return a.lg_ >= b.lg_; }

 private:
  double lg_;
};

inline LogReal log_real_sum(std::span<const LogReal> terms) {
  std::vector<double> buf;
  buf.reserve(terms.size());
  for (const auto& t : terms) buf.push_back(t.log());
  return LogReal::from_log(log_sum_exp(buf));
}

inline double log_factorial(std::uint64_t n) { return std::lgamma(double(n) + 1.0); }

inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// log of the falling factorial x(x-1)...(x-p+1); requires all factors > 0.
inline double log_falling_positive(double x, std::uint64_t p) {
  double acc = 0;
  for (std::uint64_t i = 0; i < p; ++i) acc += std::log(x - double(i));
  return acc;
}

}  // namespace gibbsocc
