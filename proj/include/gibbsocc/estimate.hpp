#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "gibbsocc/bellpoly.hpp"
#include "gibbsocc/occupancy.hpp"
#include "gibbsocc/starlimit.hpp"

namespace gibbsocc {

struct SampleSummary {
  int k = 0;
  int P = 0;

  SampleSummary(int k_, int P_) : k(k_), P(P_) {
    if (P < 1 || P > k) throw std::invalid_argument("sample summary: need 1 <= P <= k");
  }
};

enum class EstimateMethod { mle, ratio, closed_form };

struct Estimate {
  double value = 0;
  EstimateMethod method = EstimateMethod::mle;
  long iterations = 0;
  double bracket_lo = 0, bracket_hi = 0;
  double log_likelihood = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string boundary;  // "", "P=1", "P=k", "no finite maximum", "flat likelihood"
  std::optional<std::pair<long, long>> tie;  // adjacent maximizers when the ratio hits 1
};

namespace detail {
inline double log_sigma_k_at(const WeightSequence& w, double theta_mult, int k) {
  // sigma_k(t) for a real multiplier t > 0; t == 0 degenerates to [k == 0]
  if (theta_mult == 0) return k == 0 ? 0.0 : kNegInf;
  return num_ops<LogReal>::to_log(sigma_table_log(w, theta_mult, k).v[std::size_t(k)]);
}

// log of the likelihood ratio P(P_{n,k}=P) / P(P_{n-1,k}=P); the Bell factor
// cancels, leaving n/(n-P) * sigma_k((n-1)theta)/sigma_k(n theta).
inline double log_likelihood_ratio(const WeightSequence& w, double theta, int k, int P, long n) {
  return std::log(double(n)) - std::log(double(n - P)) +
         log_sigma_k_at(w, double(n - 1) * theta, k) - log_sigma_k_at(w, double(n) * theta, k);
}
}  // namespace detail

// Maximum likelihood estimate of the box count n from (k, P) at known theta.
// Scans the likelihood ratio upward from P: the estimate is the largest n at
// which the ratio still exceeds 1. If the ratio lands exactly on 1 the
// likelihood has two adjacent maximizers; the larger one is reported and both
// appear in `tie` (a flat run longer than two is left at its start). The scan
// uses a doubling probe capped at 1e7 then bisects the crossing.
inline Estimate mle_n(const WeightSequence& w, double theta, const SampleSummary& s) {
  if (!(theta > 0)) throw std::domain_error("mle_n: theta must be > 0");
  constexpr double tol = 1e-9;
  constexpr long cap = 10'000'000;
  const int k = s.k, P = s.P;
  Estimate e;
  e.method = EstimateMethod::mle;
  long iters = 0;
  auto above = [&](long n) {
    ++iters;
    return detail::log_likelihood_ratio(w, theta, k, P, n) > tol;
  };
  long last_in = P;  // sup of the strict set, P when empty
  if (above(P + 1)) {
    long lo = P + 1, step = 1;
    while (lo + step <= cap && above(lo + step)) {
      lo += step;
      step *= 2;
    }
    if (lo + step > cap) {
      e.value = std::numeric_limits<double>::infinity();
      e.boundary = P == k ? "P=k" : "no finite maximum";
      e.iterations = iters;
      return e;
    }
    long hi = lo + step;  // above(hi) is false
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (above(mid) ? lo : hi) = mid;
    }
    last_in = lo;
  }
  long value = last_in;
  // exact-tie detection: ratio == 1 at the next n means two adjacent maxima
  const double next = detail::log_likelihood_ratio(w, theta, k, P, last_in + 1);
  if (std::abs(next) <= tol) {
    const double after = detail::log_likelihood_ratio(w, theta, k, P, last_in + 2);
    if (std::abs(after) <= tol) {
      e.boundary = "flat likelihood";  // degenerate plateau, keep the scan value
    } else {
      value = last_in + 1;
      e.tie = std::make_pair(last_in, last_in + 1);
    }
  }
  e.value = double(value);
  e.iterations = iters;
  e.bracket_lo = double(P);
  e.bracket_hi = double(value + 1);
  {
    const auto st = sigma_table_log(w, theta, k);
    const auto bphi = bell_triangle_phi<LogReal>(w, k);
    const auto bsig = bell_triangle_sigma<LogReal>(st, stirling_table(k), bphi);
    e.log_likelihood = log_falling_positive(double(value), std::uint64_t(P)) +
                       num_ops<LogReal>::to_log(bsig.at(k, P)) -
                       detail::log_sigma_k_at(w, double(value) * theta, k);
  }
  return e;
}

// Real-valued approximation of mle_n: solves
// P = n (1 - sigma_k((n-1) theta) / sigma_k(n theta)) by bracketed bisection.
inline Estimate approx_mle_n(const WeightSequence& w, double theta, const SampleSummary& s) {
  if (!(theta > 0)) throw std::domain_error("approx_mle_n: theta must be > 0");
  const int k = s.k, P = s.P;
  Estimate e;
  e.method = EstimateMethod::mle;
  long iters = 0;
  auto f = [&](double n) {
    ++iters;
    const double ratio = std::exp(detail::log_sigma_k_at(w, (n - 1.0) * theta, k) -
                                  detail::log_sigma_k_at(w, n * theta, k));
    return n * (1.0 - ratio) - double(P);
  };
  double lo = 1.0, hi = std::max<double>(P, 1.0);
  if (f(hi) < 0) {
    double step = std::max<double>(P, 1.0);
    lo = hi;
    while (f(hi + step) < 0) {
      lo = hi + step;
      step *= 2;
      if (lo > 1e9) {
        e.value = std::numeric_limits<double>::infinity();
        e.boundary = "no finite solution";
        e.iterations = iters;
        return e;
      }
    }
    hi = lo + step;
  }
  e.bracket_lo = lo;
  e.bracket_hi = hi;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  e.value = 0.5 * (lo + hi);
  e.residual = std::abs(f(e.value));
  e.iterations = iters;
  return e;
}

// Ratio estimator of n: P + B_{k,P-1}(sigma(theta)) / B_{k,P}(sigma(theta)).
// Unbiased for n whenever k >= n.
inline Estimate alt_n(const WeightSequence& w, double theta, const SampleSummary& s) {
  if (!(theta > 0)) throw std::domain_error("alt_n: theta must be > 0");
  const int k = s.k, P = s.P;
  Estimate e;
  e.method = EstimateMethod::ratio;
  if (P == 1) {
    e.value = 1.0;
    e.boundary = "P=1";
    return e;
  }
  const auto st = sigma_table_log(w, theta, k);
  const auto bsig = bell_triangle_sigma<LogReal>(st, stirling_table(k), bell_triangle_phi<LogReal>(w, k));
  if (num_ops<LogReal>::is_zero(bsig.at(k, P))) throw std::domain_error("alt_n: B_{k,P} vanishes");
  e.value = double(P) + std::exp(num_ops<LogReal>::to_log(bsig.at(k, P - 1)) -
                                 num_ops<LogReal>::to_log(bsig.at(k, P)));
  return e;
}

inline Rational alt_n_exact(const WeightSequence& w, const Rational& theta,
                            const SampleSummary& s) {
  const int k = s.k, P = s.P;
  if (P == 1) return Rational(1);
  const auto st = sigma_table_exact(w, theta, k);
  const auto bsig =
      bell_triangle_sigma<Rational>(st, stirling_table(k), bell_triangle_phi<Rational>(w, k));
  if (bsig.at(k, P) == 0) throw std::domain_error("alt_n: B_{k,P} vanishes");
  return Rational(P) + bsig.at(k, P - 1) / bsig.at(k, P);
}

// Maximum likelihood estimate of the diversity gamma from (k, P):
// the root of gamma sigma'_k(gamma) / sigma_k(gamma) = P. The left side is
// the mean of the entry index under weights B_{k,l} gamma^l, hence strictly
// increasing from 1 to k; bisection over a doubling bracket always lands.
// P = 1 and P = k are reported as boundary sentinels 0 and +inf.
inline Estimate mle_gamma(const WeightSequence& w, const SampleSummary& s) {
  const int k = s.k, P = s.P;
  Estimate e;
  e.method = EstimateMethod::mle;
  if (P == 1) {
    e.value = 0.0;
    e.boundary = "P=1";
    return e;
  }
  if (P == k) {
    e.value = std::numeric_limits<double>::infinity();
    e.boundary = "P=k";
    return e;
  }
  const auto bphi = bell_triangle_phi<LogReal>(w, k);
  std::vector<double> logb(std::size_t(k) + 1, kNegInf);
  for (int l = 1; l <= k; ++l) logb[std::size_t(l)] = num_ops<LogReal>::to_log(bphi.at(k, l));
  auto mean_index = [&](double g) {
    const double lg = std::log(g);
    std::vector<double> num, den;
    for (int l = 1; l <= k; ++l) {
      if (logb[std::size_t(l)] == kNegInf) continue;
      den.push_back(logb[std::size_t(l)] + double(l) * lg);
      num.push_back(den.back() + std::log(double(l)));
    }
    return std::exp(log_sum_exp(num) - log_sum_exp(den));
  };
  long iters = 0;
  double lo = 1.0, hi = 1.0;
  while (mean_index(lo) > double(P)) {
    lo /= 2;
    ++iters;
    if (++iters > 400) throw std::runtime_error("mle_gamma: bracket failure");
  }
  while (mean_index(hi) < double(P)) {
    hi *= 2;
    if (++iters > 400) throw std::runtime_error("mle_gamma: bracket failure");
  }
  e.bracket_lo = lo;
  e.bracket_hi = hi;
  for (int it = 0; it < 300 && hi - lo > 1e-14 * lo; ++it) {
    const double mid = std::sqrt(lo * hi);
    (mean_index(mid) < double(P) ? lo : hi) = mid;
    ++iters;
  }
  e.value = std::sqrt(lo * hi);
  e.residual = std::abs(double(P) - mean_index(e.value));
  e.iterations = iters;
  return e;
}

namespace detail {
inline bool has_closed_alt_gamma(const WeightSequence& w) {
  switch (w.family()) {
    case Family::cayley:
    case Family::gen_binomial_tree:
    case Family::new_engen_like: return true;
    case Family::neg_bin_compound: return w.alpha() == 1;
    default: return false;
  }
}

inline Rational closed_alt_gamma(const WeightSequence& w, int k, int P) {
  const Rational num(P - 1), den(k - P + 1);
  switch (w.family()) {
    case Family::neg_bin_compound:  // alpha = 1
      return Rational(P) * num / den;
    case Family::cayley: return Rational(k) * num / den;
    case Family::gen_binomial_tree:
      return w.tree_b() * num * (Rational(k) * (w.tree_a() - 1) + Rational(P)) / den;
    case Family::new_engen_like:
      return Rational(P) / den * rat_rising(w.alpha() * num, std::uint64_t(k - P + 1)) /
             rat_rising(w.alpha() * Rational(P), std::uint64_t(k - P));
    default: throw std::logic_error("no closed form");
  }
}
}  // namespace detail

// Ratio estimator of gamma: B_{k,P-1}(phi) / B_{k,P}(phi). Families with a
// published closed form short-circuit; the generic path walks the triangle.
inline Estimate alt_gamma(const WeightSequence& w, const SampleSummary& s) {
  const int k = s.k, P = s.P;
  Estimate e;
  e.method = EstimateMethod::ratio;
  if (P == 1) {
    e.value = 0.0;
    e.boundary = "P=1";
    return e;
  }
  if (detail::has_closed_alt_gamma(w)) {
    e.method = EstimateMethod::closed_form;
    e.value = detail::closed_alt_gamma(w, k, P).convert_to<double>();
    return e;
  }
  const auto bphi = bell_triangle_phi<LogReal>(w, k);
  if (num_ops<LogReal>::is_zero(bphi.at(k, P))) throw std::domain_error("alt_gamma: B_{k,P} vanishes");
  e.value = std::exp(num_ops<LogReal>::to_log(bphi.at(k, P - 1)) -
                     num_ops<LogReal>::to_log(bphi.at(k, P)));
  return e;
}

// Exact generic triangle route (also covers the closed-form families, so the
// two can be compared bit-for-bit).
inline Rational alt_gamma_exact(const WeightSequence& w, const SampleSummary& s) {
  const int k = s.k, P = s.P;
  if (P == 1) return Rational(0);
  const auto bphi = bell_triangle_phi<Rational>(w, k);
  if (bphi.at(k, P) == 0) throw std::domain_error("alt_gamma: B_{k,P} vanishes");
  return bphi.at(k, P - 1) / bphi.at(k, P);
}

inline Rational alt_gamma_closed_exact(const WeightSequence& w, const SampleSummary& s) {
  if (!detail::has_closed_alt_gamma(w))
    throw std::domain_error("alt_gamma: no closed form for family " + w.name());
  return detail::closed_alt_gamma(w, s.k, s.P);
}

// Exact expectation of an estimator of p under an exact law over p
// (law[p] = P(P = p)).
inline Rational exact_expectation(std::span<const Rational> law,
                                  const std::function<Rational(int)>& estimator) {
  Rational acc = 0;
  for (std::size_t p = 0; p < law.size(); ++p)
    if (law[p] != 0) acc += law[p] * estimator(int(p));
  return acc;
}

// E(alt_n) under the exact law of the species count; equals n when k >= n.
inline Rational expected_alt_n_exact(const WeightSequence& w, const Rational& theta, long n,
                                     int k) {
  const auto law = pnk_pmf<Rational>(w, theta, n, k);
  return exact_expectation(law, [&](int p) {
    return p == 0 ? Rational(0) : alt_n_exact(w, theta, SampleSummary(k, p));
  });
}

// E*(alt_gamma) under the star law of the species count; equals
// gamma (1 - (phi_1 gamma)^k / sigma_k(gamma)) exactly.
inline Rational expected_alt_gamma_exact(const WeightSequence& w, const Rational& gamma, int k) {
  const auto law = star_pnk_pmf<Rational>(w, gamma, k);
  return exact_expectation(law, [&](int p) {
    return p == 0 ? Rational(0) : alt_gamma_exact(w, SampleSummary(k, p));
  });
}

}  // namespace gibbsocc
