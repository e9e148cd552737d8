#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gibbsocc/bellpoly.hpp"
#include "gibbsocc/compositions.hpp"
#include "gibbsocc/scalar.hpp"
#include "gibbsocc/weights.hpp"

namespace gibbsocc {

// A realized allocation of k draws over n boxes with its derived statistics:
// p distinct non-empty boxes and the frequency-of-frequencies vector
// aff[i-1] = #{boxes holding exactly i draws}.
struct OccupancySample {
  long n = 0;
  int k = 0;
  std::vector<int> counts;
  int p = 0;
  std::vector<int> aff;

  static OccupancySample from_counts(long n, std::vector<int> counts) {
    if (long(counts.size()) != n) throw std::invalid_argument("occupancy sample: size mismatch");
    OccupancySample s;
    s.n = n;
    s.counts = std::move(counts);
    long total = 0;
    for (int c : s.counts) {
      if (c < 0) throw std::invalid_argument("occupancy sample: negative count");
      total += c;
      if (c > 0) ++s.p;
    }
    s.k = int(total);
    s.aff.assign(std::size_t(s.k), 0);
    for (int c : s.counts)
      if (c > 0) s.aff[std::size_t(c) - 1] += 1;
    return s;
  }
};

namespace detail {
template <class S>
S theta_times(const S& theta, long mult) {
  return theta * num_ops<S>::from_uint(std::uint64_t(mult));
}

// sigma_j(m * theta) with the m = 0 convention sigma_j(0) = [j == 0].
template <class S>
S sigma_single(const WeightSequence& w, const S& theta, long mult, int j) {
  if (mult == 0) return j == 0 ? num_ops<S>::one() : num_ops<S>::zero();
  return sigma_table<S>(w, theta_times(theta, mult), j).v[std::size_t(j)];
}

inline void check_counts(long n, int k, std::span<const int> counts) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  if (long(counts.size()) != n) throw std::invalid_argument("counts: expected n entries");
  long total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("counts: negative entry");
    total += c;
  }
  if (total != k) throw std::invalid_argument("counts: entries must sum to k");
}
}  // namespace detail

// Joint law of the occupancy vector: multinomial(k; counts) *
// prod_m sigma_{counts[m]}(theta) / sigma_k(n theta). Exchangeable in the
// boxes and independent of the abundance mean.
template <class S>
S joint_pmf(const WeightSequence& w, const S& theta, long n, int k, std::span<const int> counts) {
  detail::check_counts(n, k, counts);
  int cmax = 0;
  for (int c : counts) cmax = std::max(cmax, c);
  const auto small = sigma_table<S>(w, theta, cmax);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  S r = multinomial_coeff<S>(std::uint64_t(k), counts);
  for (int c : counts) r *= small.v[std::size_t(c)];
  return r / norm;
}

// Law of a single box count: P(l) = C(k,l) sigma_l(theta)
// sigma_{k-l}((n-1) theta) / sigma_k(n theta), l = 0..k.
template <class S>
std::vector<S> component_pmf(const WeightSequence& w, const S& theta, long n, int k) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  std::vector<S> out(std::size_t(k) + 1, num_ops<S>::zero());
  if (n == 1) {
    out[std::size_t(k)] = num_ops<S>::one();
    return out;
  }
  const auto s1 = sigma_table<S>(w, theta, k);
  const auto srest = sigma_table<S>(w, detail::theta_times(theta, n - 1), k);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  for (int l = 0; l <= k; ++l)
    out[std::size_t(l)] =
        num_ops<S>::binomial(std::uint64_t(k), std::uint64_t(l)) * s1.v[std::size_t(l)] *
        srest.v[std::size_t(k - l)] / norm;
  return out;
}

// Law of the sum of the first m box counts, 1 <= m < n.
template <class S>
std::vector<S> partialsum_pmf(const WeightSequence& w, const S& theta, long n, long m, int k) {
  if (n < 2 || m < 1 || m >= n) throw std::domain_error("partialsum_pmf: need 1 <= m < n");
  const auto sm = sigma_table<S>(w, detail::theta_times(theta, m), k);
  const auto srest = sigma_table<S>(w, detail::theta_times(theta, n - m), k);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  std::vector<S> out(std::size_t(k) + 1, num_ops<S>::zero());
  for (int l = 0; l <= k; ++l)
    out[std::size_t(l)] =
        num_ops<S>::binomial(std::uint64_t(k), std::uint64_t(l)) * sm.v[std::size_t(l)] *
        srest.v[std::size_t(k - l)] / norm;
  return out;
}

// Law of the number of non-empty boxes: P(p) = {n}_p B_{k,p}(sigma(theta)) /
// sigma_k(n theta) on p = 1..min(n,k); k = 0 is the point mass at p = 0.
// Returned vector is indexed by p.
template <class S>
std::vector<S> pnk_pmf(const WeightSequence& w, const S& theta, long n, int k) {
  if (n < 1 || k < 0) throw std::invalid_argument("pnk_pmf: need n >= 1, k >= 0");
  if (k == 0) return {num_ops<S>::one()};
  const int pmax = int(std::min<long>(n, k));
  std::vector<S> out(std::size_t(pmax) + 1, num_ops<S>::zero());
  const auto st = sigma_table<S>(w, theta, k);
  const auto bphi = bell_triangle_phi<S>(w, k);
  const auto bsig = bell_triangle_sigma<S>(st, stirling_table(k), bphi);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  for (int p = 1; p <= pmax; ++p)
    out[std::size_t(p)] =
        num_ops<S>::falling(std::uint64_t(n), std::uint64_t(p)) * bsig.at(k, p) / norm;
  return out;
}

// Mean and variance of the number of non-empty boxes, from the generating
// function: E = n (1 - r1), Var = n (r1 + (n-1) r2 - n r1^2) with
// r_j = sigma_k((n-j) theta) / sigma_k(n theta).
inline std::pair<double, double> pnk_mean_var(const WeightSequence& w, double theta, long n,
                                              int k) {
  if (n < 1 || k < 0) throw std::invalid_argument("pnk_mean_var: need n >= 1, k >= 0");
  if (k == 0) return {0.0, 0.0};
  if (n == 1) return {1.0, 0.0};
  const LogReal th = LogReal::from_value(theta);
  const double lnorm = num_ops<LogReal>::to_log(detail::sigma_single<LogReal>(w, th, n, k));
  const double r1 =
      std::exp(num_ops<LogReal>::to_log(detail::sigma_single<LogReal>(w, th, n - 1, k)) - lnorm);
  const double r2 =
      std::exp(num_ops<LogReal>::to_log(detail::sigma_single<LogReal>(w, th, n - 2, k)) - lnorm);
  const double nn = double(n);
  return {nn * (1.0 - r1), nn * (r1 + (nn - 1.0) * r2 - nn * r1 * r1)};
}

inline std::pair<Rational, Rational> pnk_mean_var_exact(const WeightSequence& w,
                                                        const Rational& theta, long n, int k) {
  if (n < 1 || k < 0) throw std::invalid_argument("pnk_mean_var: need n >= 1, k >= 0");
  if (k == 0) return {Rational(0), Rational(0)};
  if (n == 1) return {Rational(1), Rational(0)};
  const Rational norm = detail::sigma_single<Rational>(w, theta, n, k);
  const Rational r1 = detail::sigma_single<Rational>(w, theta, n - 1, k) / norm;
  const Rational r2 = detail::sigma_single<Rational>(w, theta, n - 2, k) / norm;
  const Rational nn(n);
  return {nn * (1 - r1), nn * (r1 + (nn - 1) * r2 - nn * r1 * r1)};
}

namespace detail {
inline void check_aff(int k, std::span<const int> aff, int p) {
  if (int(aff.size()) != k) throw std::invalid_argument("aff: expected k entries");
  long psum = 0, ksum = 0;
  for (int i = 1; i <= k; ++i) {
    if (aff[std::size_t(i) - 1] < 0) throw std::invalid_argument("aff: negative entry");
    psum += aff[std::size_t(i) - 1];
    ksum += long(i) * aff[std::size_t(i) - 1];
  }
  if (psum != p) throw std::invalid_argument("aff: entries must sum to p");
  if (ksum != k) throw std::invalid_argument("aff: weighted entries must sum to k");
}
}  // namespace detail

// Joint law of the frequency-of-frequencies vector and the species count:
// P(A = a; P = p) = {n}_p k! / sigma_k(n theta) *
// prod_i ((sigma_i(theta)/i!)^{a_i} / a_i!).
template <class S>
S aff_pmf(const WeightSequence& w, const S& theta, long n, int k, std::span<const int> aff,
          int p) {
  detail::check_aff(k, aff, p);
  if (p > n) return num_ops<S>::zero();
  const auto st = sigma_table<S>(w, theta, k);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  S r = num_ops<S>::falling(std::uint64_t(n), std::uint64_t(p)) *
        num_ops<S>::factorial(std::uint64_t(k)) / norm;
  for (int i = 1; i <= k; ++i) {
    const int a = aff[std::size_t(i) - 1];
    if (a == 0) continue;
    r *= num_ops<S>::pow(st.v[std::size_t(i)] / num_ops<S>::factorial(std::uint64_t(i)),
                         std::uint64_t(a));
    r /= num_ops<S>::factorial(std::uint64_t(a));
  }
  return r;
}

// Joint falling factorial moments of the frequency counts:
// E[prod {A(i)}_{r_i}] = {n}_r {k}_kappa sigma_{k-kappa}((n-r) theta) /
// sigma_k(n theta) * prod (sigma_i(theta)/i!)^{r_i}.
template <class S>
S aff_factorial_moment(const WeightSequence& w, const S& theta, long n, int k,
                       std::span<const int> r) {
  if (int(r.size()) > k) throw std::invalid_argument("aff moment: more orders than k");
  long rsum = 0, kappa = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0) throw std::invalid_argument("aff moment: negative order");
    rsum += r[i];
    kappa += long(i + 1) * r[i];
  }
  if (rsum > n || kappa > k) throw std::invalid_argument("aff moment: orders exceed n or k");
  const auto st = sigma_table<S>(w, theta, k);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  S out = num_ops<S>::falling(std::uint64_t(n), std::uint64_t(rsum)) *
          num_ops<S>::falling(std::uint64_t(k), std::uint64_t(kappa)) *
          detail::sigma_single<S>(w, theta, n - rsum, k - int(kappa)) / norm;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    out *= num_ops<S>::pow(st.v[i + 1] / num_ops<S>::factorial(std::uint64_t(i + 1)),
                           std::uint64_t(r[i]));
  }
  return out;
}

// Joint falling factorial moments of the box counts themselves:
// E[prod {K(m)}_{l_m}] = k!/sigma_k(n theta) * sum over compositions j of
// k - |l| of prod sigma_{l_m + j_m}(theta) / j_m!.
template <class S>
S k_factorial_moment(const WeightSequence& w, const S& theta, long n, int k,
                     std::span<const int> l, std::size_t max_terms = 1'000'000) {
  if (long(l.size()) != n) throw std::invalid_argument("k moment: expected n orders");
  long lsum = 0;
  for (int x : l) {
    if (x < 0) throw std::invalid_argument("k moment: negative order");
    lsum += x;
  }
  if (lsum > k) return num_ops<S>::zero();  // falling factorial vanishes
  const int rem = k - int(lsum);
  if (composition_count(rem, int(n)) > max_terms)
    throw std::length_error("k moment: composition count exceeds the cap");
  const auto st = sigma_table<S>(w, theta, k);
  const S norm = detail::sigma_single<S>(w, theta, n, k);
  std::vector<S> buf;
  for (CompositionIter it(rem, int(n)); !it.done(); it.next()) {
    const auto& j = it.value();
    S term = num_ops<S>::one();
    bool zero = false;
    for (long m = 0; m < n; ++m) {
      const S& sv = st.v[std::size_t(l[std::size_t(m)] + j[std::size_t(m)])];
      if (num_ops<S>::is_zero(sv)) {
        zero = true;
        break;
      }
      term *= sv / num_ops<S>::factorial(std::uint64_t(j[std::size_t(m)]));
    }
    if (!zero) buf.push_back(term);
  }
  return num_ops<S>::factorial(std::uint64_t(k)) * num_ops<S>::sum(buf) / norm;
}

// Brute-force ground truth: the full exact joint law over all compositions
// of k into n parts, in descending lexicographic order. Aggregations of this
// law are the oracle against which every closed-form pmf and moment is
// checked on small instances.
struct OracleLaw {
  long n = 0;
  int k = 0;
  std::vector<std::pair<std::vector<int>, Rational>> atoms;

  Rational total() const {
    Rational t = 0;
    for (const auto& [c, pr] : atoms) t += pr;
    return t;
  }

  std::vector<Rational> pnk_law() const {
    std::vector<Rational> out(std::size_t(std::min<long>(n, k)) + 1, Rational(0));
    for (const auto& [c, pr] : atoms) {
      int p = 0;
      for (int x : c)
        if (x > 0) ++p;
      out[std::size_t(p)] += pr;
    }
    return out;
  }

  std::vector<Rational> component_law() const { return partial_law(1); }

  std::vector<Rational> partial_law(long m) const {
    std::vector<Rational> out(std::size_t(k) + 1, Rational(0));
    for (const auto& [c, pr] : atoms) {
      long s = 0;
      for (long i = 0; i < m; ++i) s += c[std::size_t(i)];
      out[std::size_t(s)] += pr;
    }
    return out;
  }

  std::map<std::vector<int>, Rational> aff_law() const {
    std::map<std::vector<int>, Rational> out;
    for (const auto& [c, pr] : atoms) {
      std::vector<int> aff(std::size_t(k), 0);
      for (int x : c)
        if (x > 0) aff[std::size_t(x) - 1] += 1;
      out[aff] += pr;
    }
    return out;
  }

  Rational k_factorial_moment(std::span<const int> l) const {
    Rational acc = 0;
    for (const auto& [c, pr] : atoms) {
      Rational term = pr;
      for (std::size_t m = 0; m < c.size(); ++m)
        term *= Rational(big_falling(std::uint64_t(c[m]), std::uint64_t(l[m])));
      acc += term;
    }
    return acc;
  }

  Rational aff_factorial_moment(std::span<const int> r) const {
    Rational acc = 0;
    for (const auto& [c, pr] : atoms) {
      std::vector<int> aff(std::size_t(k), 0);
      for (int x : c)
        if (x > 0) aff[std::size_t(x) - 1] += 1;
      Rational term = pr;
      for (std::size_t i = 0; i < r.size(); ++i)
        term *= Rational(big_falling(std::uint64_t(aff[i]), std::uint64_t(r[i])));
      acc += term;
    }
    return acc;
  }
};

inline OracleLaw enumerate_oracle(const WeightSequence& w, const Rational& theta, long n, int k,
                                  std::size_t max_atoms = 1'000'000) {
  if (n < 1 || k < 0) throw std::invalid_argument("enumerate_oracle: need n >= 1, k >= 0");
  if (composition_count(k, int(n)) > max_atoms)
    throw std::length_error("enumerate_oracle: instance too large");
  OracleLaw law;
  law.n = n;
  law.k = k;
  const auto st = sigma_table<Rational>(w, theta, k);
  const Rational norm = detail::sigma_single<Rational>(w, theta, n, k);
  const BigInt kfact = big_factorial(std::uint64_t(k));
  for (CompositionIter it(k, int(n)); !it.done(); it.next()) {
    const auto& c = it.value();
    Rational pr(kfact);
    for (int x : c) pr *= st.v[std::size_t(x)] / Rational(big_factorial(std::uint64_t(x)));
    law.atoms.emplace_back(c, pr / norm);
  }
  return law;
}

}  // namespace gibbsocc
