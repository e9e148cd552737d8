#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gibbsocc {

// Helpers for the statistical cross-validation suites.

inline double chi_square_pvalue(double stat, double df) {
  if (df <= 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, stat / 2.0);
}

// Goodness of fit of observed counts against expected probabilities.
// Cells with expected count below min_expected are pooled into their
// neighbor to keep the asymptotics honest.
inline double chi_square_gof_pvalue(std::span<const long> observed,
                                    std::span<const double> expected_prob, long total,
                                    double min_expected = 5.0) {
  if (observed.size() != expected_prob.size())
    throw std::invalid_argument("chi-square: size mismatch");
  std::vector<double> exp_cnt;
  std::vector<double> obs_cnt;
  double pe = 0, po = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    pe += expected_prob[i] * double(total);
    po += double(observed[i]);
    if (pe >= min_expected) {
      exp_cnt.push_back(pe);
      obs_cnt.push_back(po);
      pe = po = 0;
    }
  }
  if (pe > 0 || po > 0) {
    if (exp_cnt.empty()) {
      exp_cnt.push_back(pe);
      obs_cnt.push_back(po);
    } else {
      exp_cnt.back() += pe;
      obs_cnt.back() += po;
    }
  }
  if (exp_cnt.size() < 2) return 1.0;
  double stat = 0;
  for (std::size_t i = 0; i < exp_cnt.size(); ++i) {
    const double d = obs_cnt[i] - exp_cnt[i];
    stat += d * d / exp_cnt[i];
  }
  return chi_square_pvalue(stat, double(exp_cnt.size()) - 1.0);
}

// Two-sample chi-square homogeneity test over matching cells.
inline double chi_square_two_sample_pvalue(std::span<const long> a, std::span<const long> b,
                                           double min_expected = 5.0) {
  if (a.size() != b.size()) throw std::invalid_argument("chi-square: size mismatch");
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += double(a[i]);
    nb += double(b[i]);
  }
  if (na == 0 || nb == 0) return 1.0;
  // pool small cells by expected pooled count
  std::vector<double> ca, cb;
  double pa = 0, pb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa += double(a[i]);
    pb += double(b[i]);
    const double pooled = (pa + pb) * std::min(na, nb) / (na + nb);
    if (pooled >= min_expected) {
      ca.push_back(pa);
      cb.push_back(pb);
      pa = pb = 0;
    }
  }
  if ((pa > 0 || pb > 0) && !ca.empty()) {
    ca.back() += pa;
    cb.back() += pb;
  }
  if (ca.size() < 2) return 1.0;
  double stat = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const double tot = ca[i] + cb[i];
    const double ea = tot * na / (na + nb);
    const double eb = tot * nb / (na + nb);
    stat += (ca[i] - ea) * (ca[i] - ea) / ea + (cb[i] - eb) * (cb[i] - eb) / eb;
  }
  return chi_square_pvalue(stat, double(ca.size()) - 1.0);
}

// Asymptotic Kolmogorov-Smirnov p-value for samples against a continuous CDF.
inline double ks_test_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - double(i) / n));
    d = std::max(d, std::abs(double(i + 1) / n - f));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0;
  for (int j = 1; j <= 100; ++j)
    p += 2.0 * ((j & 1) ? 1.0 : -1.0) * std::exp(-2.0 * double(j) * double(j) * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double tv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return tv / 2.0;
}

// Least-squares slope of y against x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: bad input");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(x.size());
  my /= double(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

}  // namespace gibbsocc
