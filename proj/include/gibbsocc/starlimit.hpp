#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gibbsocc/bellpoly.hpp"
#include "gibbsocc/scalar.hpp"
#include "gibbsocc/weights.hpp"

namespace gibbsocc {

// Infinitely-many-species regime with diversity parameter gamma. The laws
// below are implemented directly from their closed forms, never as numerical
// limits of the finite-n laws; the finite-n convergence is a test property.
struct StarConfig {
  double gamma = 1.0;
  int K = 0;
};

// Joint law of the p occupied-species counts together with the species
// count: P(counts; P_k = p) = (k!/p!) gamma^p / sigma_k(gamma) *
// prod_q phi_{counts[q]} / counts[q]!.
template <class S>
S star_joint_pmf(const WeightSequence& w, const S& gamma, std::span<const int> counts) {
  if (counts.empty()) throw std::invalid_argument("star joint: need at least one count");
  int k = 0;
  for (int c : counts) {
    if (c < 1) throw std::invalid_argument("star joint: counts must be positive");
    k += c;
  }
  const std::size_t p = counts.size();
  const S norm = sigma_table<S>(w, gamma, k).v[std::size_t(k)];
  S r = num_ops<S>::factorial(std::uint64_t(k)) / num_ops<S>::factorial(std::uint64_t(p)) *
        num_ops<S>::pow(gamma, std::uint64_t(p)) / norm;
  for (int c : counts)
    r *= phi_scalar<S>(w, std::uint64_t(c)) / num_ops<S>::factorial(std::uint64_t(c));
  return r;
}

// Law of the species count: P(P_k = p) = gamma^p B_{k,p}(phi) /
// sigma_k(gamma), indexed by p = 0..k (entry 0 is zero for k >= 1).
template <class S>
std::vector<S> star_pnk_pmf(const WeightSequence& w, const S& gamma, int k) {
  if (k < 1) throw std::invalid_argument("star pnk: need k >= 1");
  const auto bphi = bell_triangle_phi<S>(w, k);
  const S norm = sigma_table<S>(w, gamma, k).v[std::size_t(k)];
  std::vector<S> out(std::size_t(k) + 1, num_ops<S>::zero());
  S pw = num_ops<S>::one();
  for (int p = 1; p <= k; ++p) {
    pw = pw * gamma;
    out[std::size_t(p)] = pw * bphi.at(k, p) / norm;
  }
  return out;
}

// Joint law of the frequency-of-frequencies vector (aff[i-1] = a_i, with
// sum i a_i = k determining the sample size):
// P(A = a; P_k = p) = gamma^p k! / sigma_k(gamma) * prod (phi_i/i!)^{a_i}/a_i!.
template <class S>
S star_aff_pmf(const WeightSequence& w, const S& gamma, std::span<const int> aff) {
  long k = 0, p = 0;
  for (std::size_t i = 0; i < aff.size(); ++i) {
    if (aff[i] < 0) throw std::invalid_argument("star aff: negative entry");
    p += aff[i];
    k += long(i + 1) * aff[i];
  }
  if (k < 1) throw std::invalid_argument("star aff: empty configuration");
  const S norm = sigma_table<S>(w, gamma, int(k)).v[std::size_t(k)];
  S r = num_ops<S>::pow(gamma, std::uint64_t(p)) * num_ops<S>::factorial(std::uint64_t(k)) / norm;
  for (std::size_t i = 0; i < aff.size(); ++i) {
    if (aff[i] == 0) continue;
    r *= num_ops<S>::pow(
        phi_scalar<S>(w, std::uint64_t(i + 1)) / num_ops<S>::factorial(std::uint64_t(i + 1)),
        std::uint64_t(aff[i]));
    r /= num_ops<S>::factorial(std::uint64_t(aff[i]));
  }
  return r;
}

// Falling factorial moments of the frequency counts:
// E[prod {A_k(i)}_{r_i}] = gamma^r {k}_kappa sigma_{k-kappa}(gamma) /
// sigma_k(gamma) * prod (phi_i/i!)^{r_i}; kappa > k gives exact zero.
template <class S>
S star_aff_moment(const WeightSequence& w, const S& gamma, int k, std::span<const int> r) {
  long rsum = 0, kappa = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0) throw std::invalid_argument("star aff moment: negative order");
    rsum += r[i];
    kappa += long(i + 1) * r[i];
  }
  if (kappa > k) return num_ops<S>::zero();
  const auto st = sigma_table<S>(w, gamma, k);
  S out = num_ops<S>::pow(gamma, std::uint64_t(rsum)) *
          num_ops<S>::falling(std::uint64_t(k), std::uint64_t(kappa)) *
          st.v[std::size_t(k - kappa)] / st.v[std::size_t(k)];
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    out *= num_ops<S>::pow(
        phi_scalar<S>(w, std::uint64_t(i + 1)) / num_ops<S>::factorial(std::uint64_t(i + 1)),
        std::uint64_t(r[i]));
  }
  return out;
}

}  // namespace gibbsocc
