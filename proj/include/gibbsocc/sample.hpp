#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gibbsocc/bellpoly.hpp"
#include "gibbsocc/occupancy.hpp"
#include "gibbsocc/rng.hpp"
#include "gibbsocc/weights.hpp"

namespace gibbsocc {

inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("GIBBS_OCC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && unsigned(v) < hw) hw = unsigned(v);
  }
  return hw;
}

// Splits [0, total) into fixed-size chunks and hands them to worker threads.
// The chunk index doubles as the RNG stream id, so results do not depend on
// the number of workers; callers combine per-chunk partials in chunk order.
template <class Fn>
void run_chunked(long total, long chunk_size, Fn&& fn) {
  if (total <= 0) return;
  const long chunks = (total + chunk_size - 1) / chunk_size;
  const unsigned workers = std::min<unsigned>(worker_count(), unsigned(chunks));
  if (workers <= 1) {
    for (long c = 0; c < chunks; ++c)
      fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    try {
      for (long c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
        fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
    } catch (...) {
      std::lock_guard<std::mutex> lk(err_mu);
      if (!err) err = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// Sequential exact sampler for the occupancy vector: box 1 is drawn from the
// single-component law, then the remainder recurses on (n-1, k - drawn).
// Telescoping those conditionals reproduces the joint law exactly.
class OccupancySampler {
 public:
  OccupancySampler(const WeightSequence& w, double theta, long n, int k) : n_(n), k_(k) {
    if (n < 1 || k < 0) throw std::invalid_argument("occupancy sampler: need n >= 1, k >= 0");
    ls_.resize(std::size_t(n) + 1);
    for (long m = 1; m <= n; ++m) {
      const auto t = sigma_table_log(w, double(m) * theta, k);
      auto& row = ls_[std::size_t(m)];
      row.reserve(std::size_t(k) + 1);
      for (const auto& v : t.v) row.push_back(v.log());
    }
  }

  OccupancySample draw(RngStream& rng) const {
    std::vector<int> counts(std::size_t(n_), 0);
    int rem_k = k_;
    std::vector<double> cdf;
    for (long r = n_; r >= 2 && rem_k > 0; --r) {
      cdf.clear();
      double acc = 0;
      for (int l = 0; l <= rem_k; ++l) {
        const double logp = log_binomial(std::uint64_t(rem_k), std::uint64_t(l)) +
                            ls_[1][std::size_t(l)] +
                            ls_[std::size_t(r) - 1][std::size_t(rem_k - l)] -
                            ls_[std::size_t(r)][std::size_t(rem_k)];
        acc += std::exp(logp);
        cdf.push_back(acc);
      }
      const int l = int(rng.categorical_cdf(cdf));
      counts[std::size_t(n_ - r)] = l;
      rem_k -= l;
    }
    counts[std::size_t(n_) - 1] = rem_k;
    return OccupancySample::from_counts(n_, std::move(counts));
  }

 private:
  long n_;
  int k_;
  std::vector<std::vector<double>> ls_;  // ls_[m][j] = log sigma_j(m theta)
};

inline OccupancySample sample_occupancy_exact(const WeightSequence& w, double theta, long n, int k,
                                              RngStream& rng) {
  return OccupancySampler(w, theta, n, k).draw(rng);
}

// Compound-Poisson abundance draw: a Poisson(theta phi(x)) number of cluster
// jumps, each with P(delta = m) proportional to phi_m x^m / m!. The jump law
// is truncated once the neglected tail mass drops below tail_tol.
class XiSampler {
 public:
  XiSampler(const WeightSequence& w, double theta, double x, double tail_tol = 1e-12) {
    if (!(theta > 0)) throw std::domain_error("xi sampler: theta must be > 0");
    if (!(x > 0) || !(x < w.radius())) throw std::domain_error("xi sampler: x outside (0, x0)");
    const double phix = w.phi_eval(x);
    mean_ = theta * phix;
    const double lx = std::log(x), lphi = std::log(phix);
    double cum = 0;
    const std::size_t mcap = std::min<std::size_t>(w.max_index(), 1'000'000);
    for (std::size_t m = 1; m <= mcap; ++m) {
      const double p =
          std::exp(w.log_phi(m) + double(m) * lx - log_factorial(std::uint64_t(m)) - lphi);
      cum += p;
      cdf_.push_back(cum);
      if (1.0 - cum < tail_tol) break;
    }
    if (cdf_.empty() || (1.0 - cdf_.back() >= tail_tol && mcap >= 1'000'000))
      throw std::runtime_error("xi sampler: jump law truncation did not converge");
  }

  double poisson_mean() const { return mean_; }

  long draw(RngStream& rng) const {
    const long jumps = rng.poisson(mean_);
    long total = 0;
    for (long j = 0; j < jumps; ++j) total += long(rng.categorical_cdf(cdf_)) + 1;
    return total;
  }

 private:
  double mean_ = 0;
  std::vector<double> cdf_;
};

// Conditioned-abundance rejection sampler: draws n iid compound-Poisson
// abundances and accepts when they sum to k. By construction an accepted
// vector follows the same law as the sequential sampler for every admissible
// x; x only tunes the acceptance rate.
class RejectionSampler {
 public:
  // Tunes x so the expected total theta n x phi'(x) matches k, which
  // maximizes acceptance without touching the conditional law.
  RejectionSampler(const WeightSequence& w, double theta, long n, int k)
      : RejectionSampler(w, theta, n, k, tune_x(w, theta, n, k)) {}

  RejectionSampler(const WeightSequence& w, double theta, long n, int k, double x)
      : n_(n), k_(k), x_(x), xi_(w, theta, x) {
    if (n < 1 || k < 0) throw std::invalid_argument("rejection sampler: need n >= 1, k >= 0");
  }

  double x() const { return x_; }

  OccupancySample draw(RngStream& rng, long* trials_out = nullptr) const {
    std::vector<int> counts(std::size_t(n_), 0);
    for (long trial = 1; trial <= 2'000'000; ++trial) {
      long total = 0;
      for (long m = 0; m < n_ && total <= k_; ++m) {
        const long v = xi_.draw(rng);
        counts[std::size_t(m)] = int(v);
        total += v;
      }
      if (total == k_) {
        if (trials_out) *trials_out = trial;
        return OccupancySample::from_counts(n_, std::move(counts));
      }
      std::fill(counts.begin(), counts.end(), 0);
    }
    throw std::runtime_error("rejection sampler: acceptance rate below 1e-6");
  }

  static double tune_x(const WeightSequence& w, double theta, long n, int k) {
    const double target = double(k) / double(n);
    const double x0 = w.radius();
    auto g = [&](double x) { return theta * x * w.phi_prime(x); };
    double hi = std::isinf(x0) ? 1.0 : x0 * (1.0 - 1e-12);
    if (std::isinf(x0)) {
      while (g(hi) < target && hi < 1e300) hi *= 2;
    } else if (g(hi) < target) {
      return hi;  // mean saturates below k/n; best effort
    }
    double lo = hi;
    while (g(lo) > target && lo > 1e-300) lo /= 2;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  long n_;
  int k_;
  double x_;
  XiSampler xi_;
};

// Ranked jumps of the subordinator above a cutoff, built from a standard
// Poisson point process fed through the inverse Levy tail.
struct SubordinatorJumps {
  double gamma = 0;
  double cutoff = 0;
  std::vector<double> gamma_points;  // increasing PPP points for retained jumps
  std::vector<double> jumps;         // decreasing, all > cutoff
  double total = 0;                  // truncated total mass
  double truncation_bound = 0;       // gamma * int_0^cutoff s pi(ds)
};

inline SubordinatorJumps sample_subordinator(const WeightSequence& w, double gamma, double cutoff,
                                             RngStream& rng, std::size_t max_jumps = 10'000'000) {
  if (!w.levy_tail_support())
    throw std::domain_error("no Levy tail implemented for family " + w.name());
  if (!(gamma > 0)) throw std::domain_error("subordinator: gamma must be > 0");
  if (cutoff < 0 || (cutoff == 0 && !w.finite_activity()))
    throw std::domain_error("subordinator: cutoff must be > 0 for infinite-activity families");
  SubordinatorJumps out;
  out.gamma = gamma;
  out.cutoff = cutoff;
  const double threshold = gamma * (cutoff == 0 ? w.levy_total_mass() : w.levy_tail(cutoff));
  out.truncation_bound = gamma * w.small_jump_mass(cutoff);
  double point = 0;
  while (true) {
    point += rng.exponential();
    if (point > threshold) break;
    if (out.jumps.size() >= max_jumps)
      throw std::length_error("subordinator: jump count exceeds the memory cap");
    out.gamma_points.push_back(point);
    out.jumps.push_back(w.levy_tail_inverse(point / gamma));
    out.total += out.jumps.back();
  }
  return out;
}

// Weighted Monte Carlo estimate of a star-limit sampling probability via
// multinomial draws from the normalized jumps, importance-weighted by the
// k-th power of the truncated total. Statistic tags: "all-same" (one species
// in the whole sample) or "distinct=<p>".
struct BiasedEstimate {
  double estimate = 0;
  double se = 0;
  double ess = 0;
  double truncation_bound = 0;
  long runs = 0;
};

inline BiasedEstimate star_biased_estimate(const WeightSequence& w, double gamma, int k,
                                           const std::string& statistic, double cutoff, long runs,
                                           std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("star biased: need k >= 1");
  int target_p = 0;
  if (statistic == "all-same" || statistic == "all-same-species") {
    target_p = 1;
  } else if (statistic.rfind("distinct=", 0) == 0) {
    target_p = std::stoi(statistic.substr(9));
    if (target_p < 1 || target_p > k) throw std::invalid_argument("star biased: bad distinct=p");
  } else {
    throw std::invalid_argument("star biased: unknown statistic '" + statistic + "'");
  }

  struct Partial {
    double sw = 0, swf = 0, sw2 = 0, sw2f = 0;
  };
  constexpr long chunk = 4096;
  const long chunks = (runs + chunk - 1) / chunk;
  std::vector<Partial> partials;
  partials.resize(std::size_t(chunks));
  double trunc_bound = 0;
  {
    RngStream probe(seed, 0);
    trunc_bound = sample_subordinator(w, gamma, cutoff, probe).truncation_bound;
  }
  run_chunked(runs, chunk, [&](long c, long b, long e) {
    RngStream rng(seed, std::uint64_t(c) + 1);
    Partial part;
    std::vector<double> cdf;
    std::vector<std::size_t> seen;
    for (long r = b; r < e; ++r) {
      const auto jumps = sample_subordinator(w, gamma, cutoff, rng);
      if (jumps.jumps.empty()) continue;  // zero weight
      cdf.clear();
      double acc = 0;
      for (double j : jumps.jumps) {
        acc += j;
        cdf.push_back(acc);
      }
      seen.clear();
      for (int d = 0; d < k; ++d) seen.push_back(rng.categorical_cdf(cdf));
      std::sort(seen.begin(), seen.end());
      const long distinct = std::unique(seen.begin(), seen.end()) - seen.begin();
      const double weight = std::pow(jumps.total, k);
      const double f = (distinct == target_p) ? 1.0 : 0.0;
      part.sw += weight;
      part.swf += weight * f;
      part.sw2 += weight * weight;
      part.sw2f += weight * weight * f;
    }
    partials[std::size_t(c)] = part;
  });
  Partial tot;
  for (const auto& p : partials) {
    tot.sw += p.sw;
    tot.swf += p.swf;
    tot.sw2 += p.sw2;
    tot.sw2f += p.sw2f;
  }
  if (tot.sw <= 0) throw std::runtime_error("star biased: no positive-weight runs");
  const double est = tot.swf / tot.sw;
  const double ess = tot.sw * tot.sw / tot.sw2;
  if (ess < 50)
    throw std::runtime_error(
        "star biased: effective sample size below 50; increase runs or decrease k");
  // linearized ratio-estimator variance: sum (w_i (f_i - R))^2 / (sum w)^2
  const double num = tot.sw2f * (1.0 - 2.0 * est) + est * est * tot.sw2;
  BiasedEstimate out;
  out.estimate = est;
  out.se = std::sqrt(std::max(0.0, num)) / tot.sw;
  out.ess = ess;
  out.truncation_bound = trunc_bound;
  out.runs = runs;
  return out;
}

}  // namespace gibbsocc
