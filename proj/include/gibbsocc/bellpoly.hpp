#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gibbsocc/compositions.hpp"
#include "gibbsocc/scalar.hpp"
#include "gibbsocc/weights.hpp"

namespace gibbsocc {

// sigma_k(theta) = k! [x^k] exp(theta * phi(x)) for k = 0..K.
template <class S>
struct SigmaTable {
  S theta;
  int K = 0;
  std::vector<S> v;  // v[k] = sigma_k(theta)

  const S& operator[](std::size_t k) const { return v.at(k); }
};

namespace detail {
template <class S>
void require_positive_theta(const S& theta) {
  if constexpr (num_ops<S>::exact) {
    if (theta <= 0) throw std::domain_error("theta must be > 0");
  } else {
    if (theta.is_zero()) throw std::domain_error("theta must be > 0");
  }
}

// factorials 0..K as S, built cumulatively
template <class S>
std::vector<S> factorial_row(int K) {
  std::vector<S> f(std::size_t(K) + 1);
  f[0] = num_ops<S>::one();
  for (int i = 1; i <= K; ++i) f[std::size_t(i)] = f[std::size_t(i) - 1] * num_ops<S>::from_uint(std::uint64_t(i));
  return f;
}
}  // namespace detail

// Builds the table by the derivative recurrence
//   sigma_{k+1}(theta) = theta * sum_{l=0..k} C(k,l) phi_{k-l+1} sigma_l(theta).
template <class S>
SigmaTable<S> sigma_table(const WeightSequence& w, const S& theta, int K) {
  if (K < 0) throw std::invalid_argument("sigma_table: K must be >= 0");
  detail::require_positive_theta(theta);
  SigmaTable<S> t;
  t.theta = theta;
  t.K = K;
  t.v.assign(std::size_t(K) + 1, num_ops<S>::zero());
  t.v[0] = num_ops<S>::one();
  if (K == 0) return t;
  std::vector<S> phi(std::size_t(K) + 1, num_ops<S>::zero());
  for (int m = 1; m <= K; ++m) phi[std::size_t(m)] = phi_scalar<S>(w, std::uint64_t(m));
  const auto fact = detail::factorial_row<S>(K);
  std::vector<S> buf;
  for (int k = 0; k < K; ++k) {
    buf.clear();
    for (int l = 0; l <= k; ++l) {
      const S& ph = phi[std::size_t(k - l + 1)];
      if (num_ops<S>::is_zero(ph) || num_ops<S>::is_zero(t.v[std::size_t(l)])) continue;
      S binom = fact[std::size_t(k)] / fact[std::size_t(l)] / fact[std::size_t(k - l)];
      buf.push_back(binom * ph * t.v[std::size_t(l)]);
    }
    t.v[std::size_t(k) + 1] = theta * num_ops<S>::sum(buf);
  }
  return t;
}

inline SigmaTable<LogReal> sigma_table_log(const WeightSequence& w, double theta, int K) {
  if (!(theta > 0)) throw std::domain_error("theta must be > 0");
  return sigma_table<LogReal>(w, LogReal::from_value(theta), K);
}

// Exact mode is size-capped: the entries grow factorially.
inline SigmaTable<Rational> sigma_table_exact(const WeightSequence& w, const Rational& theta,
                                              int K, int cap = 64) {
  if (K > cap) throw std::length_error("sigma_table_exact: K exceeds the exact-mode cap");
  return sigma_table<Rational>(w, theta, K);
}

// Second-kind Stirling numbers S_{l,p}, exact, l,p = 0..K.
struct StirlingTable {
  int K = 0;
  std::vector<BigInt> s;  // packed rows l = 0..K, entries p = 0..l

  static std::size_t offset(int l) { return std::size_t(l) * std::size_t(l + 1) / 2; }
  const BigInt& at(int l, int p) const {
    static const BigInt zero = 0;
    if (l < 0 || p < 0 || p > l || l > K) return zero;
    return s[offset(l) + std::size_t(p)];
  }
};

inline StirlingTable stirling_table(int K) {
  StirlingTable t;
  t.K = K;
  t.s.assign(StirlingTable::offset(K + 1), BigInt(0));
  t.s[0] = 1;  // S_{0,0}
  for (int l = 0; l < K; ++l)
    for (int p = 0; p <= l; ++p) {
      const BigInt& cur = t.s[StirlingTable::offset(l) + std::size_t(p)];
      if (cur == 0) continue;
      // S_{l+1,p} += p S_{l,p};  S_{l+1,p+1} += S_{l,p}
      t.s[StirlingTable::offset(l + 1) + std::size_t(p)] += p * cur;
      t.s[StirlingTable::offset(l + 1) + std::size_t(p) + 1] += cur;
    }
  return t;
}

enum class BellKind { of_phi, of_sigma };

// Triangle of Bell coefficients B_{k,p}, 1 <= p <= k <= K, either of the
// weight sequence itself or of the sigma sequence at a fixed theta.
template <class S>
struct BellTriangle {
  BellKind kind = BellKind::of_phi;
  S theta;  // meaningful for of_sigma
  int K = 0;
  std::vector<S> e;  // packed rows k = 1..K, entries p = 1..k

  static std::size_t offset(int k) { return std::size_t(k - 1) * std::size_t(k) / 2; }
  const S& at(int k, int p) const {
    static const S zero = num_ops<S>::zero();
    if (k < 1 || p < 1 || p > k || k > K) return zero;
    return e[offset(k) + std::size_t(p - 1)];
  }
  S& mutable_at(int k, int p) { return e[offset(k) + std::size_t(p - 1)]; }
};

// B_{k,l}(phi) through the recurrence
//   l B_{k,l} = sum_{j=l-1..k-1} C(k,j) phi_{k-j} B_{j,l-1},
// with B_{0,0} = 1 and B_{k,0} = B_{0,l} = 0 for k,l >= 1. All terms are
// non-negative, so the recurrence is stable in log space.
template <class S>
BellTriangle<S> bell_triangle_phi(const WeightSequence& w, int K) {
  if (K < 1) throw std::invalid_argument("bell_triangle_phi: K must be >= 1");
  BellTriangle<S> t;
  t.kind = BellKind::of_phi;
  t.theta = num_ops<S>::one();
  t.K = K;
  t.e.assign(BellTriangle<S>::offset(K + 1), num_ops<S>::zero());
  std::vector<S> phi(std::size_t(K) + 1, num_ops<S>::zero());
  for (int m = 1; m <= K; ++m) phi[std::size_t(m)] = phi_scalar<S>(w, std::uint64_t(m));
  const auto fact = detail::factorial_row<S>(K);
  std::vector<S> buf;
  for (int k = 1; k <= K; ++k) {
    for (int l = 1; l <= k; ++l) {
      buf.clear();
      for (int j = l - 1; j <= k - 1; ++j) {
        const S& prev = (j == 0) ? (l == 1 ? fact[0] /* B_{0,0}=1 */ : phi[0] /* zero */)
                                 : t.at(j, l - 1);
        if (num_ops<S>::is_zero(prev) || num_ops<S>::is_zero(phi[std::size_t(k - j)])) continue;
        S binom = fact[std::size_t(k)] / fact[std::size_t(j)] / fact[std::size_t(k - j)];
        buf.push_back(binom * phi[std::size_t(k - j)] * prev);
      }
      t.mutable_at(k, l) = num_ops<S>::sum(buf) / num_ops<S>::from_uint(std::uint64_t(l));
    }
  }
  return t;
}

// B_{k,p}(sigma(theta)) = sum_{l=p..k} B_{k,l}(phi) S_{l,p} theta^l.
// Every term is non-negative; this is the numerically stable route. The
// sigma table supplies theta and is cross-checked against the phi triangle,
// so mixing tables from different families or orders is rejected.
template <class S>
BellTriangle<S> bell_triangle_sigma(const SigmaTable<S>& st, const StirlingTable& stir,
                                    const BellTriangle<S>& bphi) {
  if (bphi.kind != BellKind::of_phi)
    throw std::invalid_argument("bell_triangle_sigma: need a triangle of phi");
  const int K = st.K;
  if (bphi.K != K || stir.K < K)
    throw std::invalid_argument("bell_triangle_sigma: inconsistent K across inputs");
  // consistency of theta and weights: sigma_K(theta) must equal
  // sum_l B_{K,l}(phi) theta^l
  if (K >= 1) {
    std::vector<S> buf;
    S pw = st.theta;
    for (int l = 1; l <= K; ++l) {
      buf.push_back(bphi.at(K, l) * pw);
      pw = pw * st.theta;
    }
    const S recon = num_ops<S>::sum(buf);
    if constexpr (num_ops<S>::exact) {
      if (recon != st.v[std::size_t(K)])
        throw std::invalid_argument("bell_triangle_sigma: sigma table does not match phi triangle");
    } else {
      if (std::abs(num_ops<S>::to_log(recon) - num_ops<S>::to_log(st.v[std::size_t(K)])) > 1e-6)
        throw std::invalid_argument("bell_triangle_sigma: sigma table does not match phi triangle");
    }
  }
  BellTriangle<S> t;
  t.kind = BellKind::of_sigma;
  t.theta = st.theta;
  t.K = K;
  t.e.assign(BellTriangle<S>::offset(K + 1), num_ops<S>::zero());
  std::vector<S> buf;
  for (int k = 1; k <= K; ++k) {
    std::vector<S> theta_pow(std::size_t(k) + 1);
    theta_pow[0] = num_ops<S>::one();
    for (int l = 1; l <= k; ++l) theta_pow[std::size_t(l)] = theta_pow[std::size_t(l) - 1] * st.theta;
    for (int p = 1; p <= k; ++p) {
      buf.clear();
      for (int l = p; l <= k; ++l) {
        const BigInt& s2 = stir.at(l, p);
        if (s2 == 0 || num_ops<S>::is_zero(bphi.at(k, l))) continue;
        buf.push_back(bphi.at(k, l) * num_ops<S>::from_bigint(s2) * theta_pow[std::size_t(l)]);
      }
      t.mutable_at(k, p) = num_ops<S>::sum(buf);
    }
  }
  return t;
}

// sigma'_k(gamma) = sum_{l=1..k} l B_{k,l}(phi) gamma^(l-1).
template <class S>
S sigma_prime(const BellTriangle<S>& bphi, const S& gamma, int k) {
  if (bphi.kind != BellKind::of_phi)
    throw std::invalid_argument("sigma_prime: need a triangle of phi");
  if (k < 1 || k > bphi.K) throw std::invalid_argument("sigma_prime: k out of range");
  std::vector<S> buf;
  S pw = num_ops<S>::one();
  for (int l = 1; l <= k; ++l) {
    if (!num_ops<S>::is_zero(bphi.at(k, l)))
      buf.push_back(num_ops<S>::from_uint(std::uint64_t(l)) * bphi.at(k, l) * pw);
    pw = pw * gamma;
  }
  return num_ops<S>::sum(buf);
}

namespace detail {
// sigma_k(theta) from the values at theta = 1, by the fractional binomial
// expansion over compositions: sum_q C(theta,q) sum_{|m_q|=k, m_i>=1}
// multinomial(k; m) prod sigma_{m_i}(1). Signed arithmetic: C(theta,q)
// alternates for non-integral theta. Verification route only.
template <class T>
std::vector<T> sigma_from_sigma1_impl(std::span<const T> sigma1, const T& theta, int K) {
  std::vector<T> fact(std::size_t(K) + 1);
  fact[0] = T(1);
  for (int i = 1; i <= K; ++i) fact[std::size_t(i)] = fact[std::size_t(i) - 1] * T(i);
  std::vector<T> out(std::size_t(K) + 1, T(0));
  out[0] = T(1);
  for (int k = 1; k <= K; ++k) {
    T acc(0);
    T falling(1);  // {theta}_q
    for (int q = 1; q <= k; ++q) {
      falling *= (theta - T(q - 1));
      const T binom = falling / fact[std::size_t(q)];
      T inner(0);
      for (PositiveCompositionIter it(k, q); !it.done(); it.next()) {
        T term = fact[std::size_t(k)];
        for (int part : it.value()) term *= sigma1[std::size_t(part)] / fact[std::size_t(part)];
        inner += term;
      }
      acc += binom * inner;
    }
    out[std::size_t(k)] = acc;
  }
  return out;
}
}  // namespace detail

inline SigmaTable<Rational> sigma_from_sigma1(const SigmaTable<Rational>& s1, const Rational& theta,
                                              int K) {
  if (K > 12) throw std::length_error("sigma_from_sigma1: verification route only, K <= 12");
  if (s1.theta != 1) throw std::invalid_argument("sigma_from_sigma1: input table must be at theta = 1");
  if (s1.K < K) throw std::invalid_argument("sigma_from_sigma1: input table too short");
  detail::require_positive_theta(theta);
  std::vector<Rational> vals(s1.v.begin(), s1.v.end());
  SigmaTable<Rational> out;
  out.theta = theta;
  out.K = K;
  out.v = detail::sigma_from_sigma1_impl<Rational>(vals, theta, K);
  return out;
}

inline SigmaTable<LogReal> sigma_from_sigma1(const SigmaTable<LogReal>& s1, double theta, int K) {
  if (K > 12) throw std::length_error("sigma_from_sigma1: verification route only, K <= 12");
  if (std::abs(num_ops<LogReal>::to_log(s1.theta)) > 1e-12)
    throw std::invalid_argument("sigma_from_sigma1: input table must be at theta = 1");
  if (s1.K < K) throw std::invalid_argument("sigma_from_sigma1: input table too short");
  if (!(theta > 0)) throw std::domain_error("theta must be > 0");
  std::vector<double> vals;
  vals.reserve(s1.v.size());
  for (const auto& x : s1.v) vals.push_back(x.value());
  const auto out_d = detail::sigma_from_sigma1_impl<double>(vals, theta, K);
  SigmaTable<LogReal> out;
  out.theta = LogReal::from_value(theta);
  out.K = K;
  out.v.reserve(out_d.size());
  for (double x : out_d) out.v.push_back(LogReal::from_value(x));
  return out;
}

}  // namespace gibbsocc
