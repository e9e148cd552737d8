#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gibbsocc/compositions.hpp"
#include "gibbsocc/estimate.hpp"
#include "gibbsocc/occupancy.hpp"
#include "gibbsocc/sample.hpp"
#include "gibbsocc/starlimit.hpp"
#include "gibbsocc/stats.hpp"

// Cross-validation suites. Every identity is checked against an independent
// route implemented here (closed forms, brute-force composition sums,
// alternating sums, truncated polynomial powers), never by re-running the
// production code path on both sides.
namespace gibbsocc::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline bool all_pass(const std::vector<CheckResult>& v) {
  for (const auto& c : v)
    if (!c.pass) return false;
  return true;
}

namespace detail {
template <class Fn>
CheckResult guarded(const std::string& name, Fn&& fn) {
  CheckResult r;
  r.name = name;
  try {
    std::string detail;
    r.pass = fn(detail);
    r.detail = detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

inline std::vector<Rational> poly_mul_trunc(const std::vector<Rational>& a,
                                            const std::vector<Rational>& b, int K) {
  std::vector<Rational> c(std::size_t(K) + 1, Rational(0));
  for (int i = 0; i <= K; ++i) {
    if (a[std::size_t(i)] == 0) continue;
    for (int j = 0; i + j <= K && j <= K; ++j)
      if (b[std::size_t(j)] != 0) c[std::size_t(i + j)] += a[std::size_t(i)] * b[std::size_t(j)];
  }
  return c;
}

inline std::vector<Rational> poly_pow_trunc(const std::vector<Rational>& base, int p, int K) {
  std::vector<Rational> acc(std::size_t(K) + 1, Rational(0));
  acc[0] = 1;
  for (int i = 0; i < p; ++i) acc = poly_mul_trunc(acc, base, K);
  return acc;
}

// unsigned first-kind Stirling numbers by their own recurrence
inline std::vector<std::vector<BigInt>> stirling_first_unsigned(int K) {
  std::vector<std::vector<BigInt>> s(std::size_t(K) + 1,
                                     std::vector<BigInt>(std::size_t(K) + 1, BigInt(0)));
  s[0][0] = 1;
  for (int k = 0; k < K; ++k)
    for (int p = 0; p <= k; ++p) {
      if (s[std::size_t(k)][std::size_t(p)] == 0) continue;
      s[std::size_t(k) + 1][std::size_t(p) + 1] += s[std::size_t(k)][std::size_t(p)];
      s[std::size_t(k) + 1][std::size_t(p)] += BigInt(k) * s[std::size_t(k)][std::size_t(p)];
    }
  return s;
}
}  // namespace detail

// sigma tables against published closed forms: rising factorials for the
// logarithmic-series family and theta (k+theta)^(k-1) for the Cayley family.
inline CheckResult sigma_closed_forms(int k_max) {
  return detail::guarded("sigma closed forms", [&](std::string& d) {
    const std::vector<Rational> thetas = {Rational(1, 2), Rational(1), Rational(7, 3)};
    const auto wl = WeightSequence::log_series();
    const auto wc = WeightSequence::cayley();
    for (const auto& th : thetas) {
      const auto tl = sigma_table_exact(wl, th, k_max, 1 << 20);
      const auto tc = sigma_table_exact(wc, th, k_max, 1 << 20);
      for (int k = 0; k <= k_max; ++k) {
        if (tl.v[std::size_t(k)] != rat_rising(th, std::uint64_t(k))) {
          d = "logseries sigma mismatch at k=" + std::to_string(k);
          return false;
        }
        const Rational cay =
            k == 0 ? Rational(1) : th * rat_pow(Rational(k) + th, std::uint64_t(k - 1));
        if (tc.v[std::size_t(k)] != cay) {
          d = "cayley sigma mismatch at k=" + std::to_string(k);
          return false;
        }
      }
    }
    return true;
  });
}

// Bell triangles against published closed forms and three-term recurrences.
inline CheckResult bell_closed_forms(int k_max) {
  return detail::guarded("bell triangle closed forms", [&](std::string& d) {
    const int K = k_max;
    auto fail = [&](const std::string& what, int k, int p) {
      d = what + " mismatch at k=" + std::to_string(k) + " p=" + std::to_string(p);
      return false;
    };
    // logarithmic series: unsigned first-kind Stirling numbers
    {
      const auto bt = bell_triangle_phi<Rational>(WeightSequence::log_series(), K);
      const auto s1 = detail::stirling_first_unsigned(K);
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p)
          if (bt.at(k, p) != Rational(s1[std::size_t(k)][std::size_t(p)]))
            return fail("first-kind stirling", k, p);
      // sigma(1) triangle of the same family: Lah numbers C(k-1,p-1) k!/p!
      const auto st = sigma_table_exact(WeightSequence::log_series(), Rational(1), K, 1 << 20);
      const auto bs = bell_triangle_sigma<Rational>(st, stirling_table(K), bt);
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p) {
          const Rational lah = Rational(big_binomial(std::uint64_t(k - 1), std::uint64_t(p - 1))) *
                               Rational(big_factorial(std::uint64_t(k))) /
                               Rational(big_factorial(std::uint64_t(p)));
          if (bs.at(k, p) != lah) return fail("lah", k, p);
        }
    }
    // Cayley: C(k-1,p-1) k^(k-p)
    {
      const auto bt = bell_triangle_phi<Rational>(WeightSequence::cayley(), K);
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p) {
          const Rational v = Rational(big_binomial(std::uint64_t(k - 1), std::uint64_t(p - 1))) *
                             rat_pow(Rational(k), std::uint64_t(k - p));
          if (bt.at(k, p) != v) return fail("cayley", k, p);
        }
    }
    // generalized binomial tree: C(k-1,p-1) {ak}_{k-p} b^(k-p)
    {
      const Rational a(5, 2), b(1, 3);
      const auto bt = bell_triangle_phi<Rational>(WeightSequence::gen_binomial_tree(a, b), K);
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p) {
          const Rational v = Rational(big_binomial(std::uint64_t(k - 1), std::uint64_t(p - 1))) *
                             rat_falling(a * Rational(k), std::uint64_t(k - p)) *
                             rat_pow(b, std::uint64_t(k - p));
          if (bt.at(k, p) != v) return fail("tree", k, p);
        }
    }
    // compound generator family: C(k,p) (alpha p)_{k-p}
    {
      const Rational alpha(2, 5);
      const auto bt = bell_triangle_phi<Rational>(WeightSequence::new_engen_like(alpha), K);
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p) {
          const Rational v = Rational(big_binomial(std::uint64_t(k), std::uint64_t(p))) *
                             rat_rising(alpha * Rational(p), std::uint64_t(k - p));
          if (bt.at(k, p) != v) return fail("newengen", k, p);
        }
    }
    // extended negative binomial: B_{k+1,p} = alpha B_{k,p-1} + (k - p alpha) B_{k,p}
    {
      const Rational alpha(1, 3);
      const auto bt = bell_triangle_phi<Rational>(WeightSequence::engen(alpha), K);
      std::vector<std::vector<Rational>> ref(std::size_t(K) + 1,
                                             std::vector<Rational>(std::size_t(K) + 1, Rational(0)));
      ref[1][1] = alpha;
      for (int k = 1; k < K; ++k)
        for (int p = 1; p <= k + 1; ++p)
          ref[std::size_t(k) + 1][std::size_t(p)] =
              alpha * ref[std::size_t(k)][std::size_t(p) - 1] +
              (Rational(k) - Rational(p) * alpha) * ref[std::size_t(k)][std::size_t(p)];
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p)
          if (bt.at(k, p) != ref[std::size_t(k)][std::size_t(p)]) return fail("engen", k, p);
    }
    return true;
  });
}

// Binomial convolution: sigma_k(t + t') = sum_l C(k,l) sigma_l(t) sigma_{k-l}(t').
inline CheckResult binomial_convolution(int k_max) {
  return detail::guarded("binomial convolution", [&](std::string& d) {
    const Rational t(3, 4), tp(5, 3);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley(),
                          WeightSequence::engen(Rational(1, 2))}) {
      const auto a = sigma_table_exact(w, t, k_max, 1 << 20);
      const auto b = sigma_table_exact(w, tp, k_max, 1 << 20);
      const auto c = sigma_table_exact(w, t + tp, k_max, 1 << 20);
      for (int k = 0; k <= k_max; ++k) {
        Rational conv = 0;
        for (int l = 0; l <= k; ++l)
          conv += Rational(big_binomial(std::uint64_t(k), std::uint64_t(l))) *
                  a.v[std::size_t(l)] * b.v[std::size_t(k - l)];
        if (conv != c.v[std::size_t(k)]) {
          d = w.name() + ": convolution mismatch at k=" + std::to_string(k);
          return false;
        }
      }
    }
    return true;
  });
}

// Power-series route: B_{k,p}(sigma(theta)) = (k!/p!) [x^k] (Z_theta(x)-1)^p
// computed by truncated polynomial powers, against the Stirling-sum route.
inline CheckResult power_series_route(int k_max) {
  return detail::guarded("power series route", [&](std::string& d) {
    const Rational theta(2, 3);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
      const auto st = sigma_table_exact(w, theta, k_max, 1 << 20);
      const auto bs =
          bell_triangle_sigma<Rational>(st, stirling_table(k_max), bell_triangle_phi<Rational>(w, k_max));
      std::vector<Rational> base(std::size_t(k_max) + 1, Rational(0));
      for (int j = 1; j <= k_max; ++j)
        base[std::size_t(j)] = st.v[std::size_t(j)] / Rational(big_factorial(std::uint64_t(j)));
      for (int p = 1; p <= k_max; ++p) {
        const auto pw = detail::poly_pow_trunc(base, p, k_max);
        for (int k = p; k <= k_max; ++k) {
          const Rational v = Rational(big_factorial(std::uint64_t(k))) /
                             Rational(big_factorial(std::uint64_t(p))) * pw[std::size_t(k)];
          if (v != bs.at(k, p)) {
            d = w.name() + ": power-series mismatch at k=" + std::to_string(k) +
                " p=" + std::to_string(p);
            return false;
          }
        }
      }
    }
    return true;
  });
}

// Alternating-sum route: B_{k,p}(sigma(theta)) =
// (1/p!) sum_q (-1)^(p-q) C(p,q) sigma_k(q theta). Exact rationals only;
// the cancellation makes it useless in floating point.
inline CheckResult alternating_sum_route(int k_max) {
  return detail::guarded("alternating sum route", [&](std::string& d) {
    const Rational theta(3, 2);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::new_engen_like(Rational(1, 2))}) {
      const auto st = sigma_table_exact(w, theta, k_max, 1 << 20);
      const auto bs =
          bell_triangle_sigma<Rational>(st, stirling_table(k_max), bell_triangle_phi<Rational>(w, k_max));
      std::vector<SigmaTable<Rational>> multiples;
      for (int q = 1; q <= k_max; ++q)
        multiples.push_back(sigma_table_exact(w, Rational(q) * theta, k_max, 1 << 20));
      for (int k = 1; k <= k_max; ++k)
        for (int p = 1; p <= k; ++p) {
          Rational alt = 0;
          for (int q = 1; q <= p; ++q) {
            const Rational term = Rational(big_binomial(std::uint64_t(p), std::uint64_t(q))) *
                                  multiples[std::size_t(q) - 1].v[std::size_t(k)];
            alt += ((p - q) % 2 == 0) ? term : -term;
          }
          alt /= Rational(big_factorial(std::uint64_t(p)));
          if (alt != bs.at(k, p)) {
            d = w.name() + ": alternating mismatch at k=" + std::to_string(k) +
                " p=" + std::to_string(p);
            return false;
          }
        }
    }
    return true;
  });
}

// Partition-sum normalization: summing k!/(n-sum a)! prod (sigma_i/i!)^{a_i}/a_i!
// over admissible frequency vectors equals sigma_k(n theta)/n!.
inline CheckResult aff_normalization(int n_max, int k_max) {
  return detail::guarded("frequency normalization", [&](std::string& d) {
    const Rational theta(1, 2);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
      for (int n = 1; n <= n_max; ++n)
        for (int k = 1; k <= k_max; ++k) {
          const auto st = sigma_table_exact(w, theta, k, 1 << 20);
          Rational sum = 0;
          for (PartitionIter it(k); !it.done(); it.next()) {
            if (it.part_count() > n) continue;
            const auto aff = it.aff();
            Rational term = Rational(big_factorial(std::uint64_t(k))) /
                            Rational(big_factorial(std::uint64_t(n - it.part_count())));
            for (int i = 1; i <= k; ++i) {
              const int a = aff[std::size_t(i) - 1];
              if (a == 0) continue;
              term *= rat_pow(st.v[std::size_t(i)] / Rational(big_factorial(std::uint64_t(i))),
                              std::uint64_t(a));
              term /= Rational(big_factorial(std::uint64_t(a)));
            }
            sum += term;
          }
          const Rational rhs =
              sigma_table_exact(w, Rational(n) * theta, k, 1 << 20).v[std::size_t(k)] /
              Rational(big_factorial(std::uint64_t(n)));
          if (sum != rhs) {
            d = w.name() + ": normalization mismatch at n=" + std::to_string(n) +
                " k=" + std::to_string(k);
            return false;
          }
        }
    }
    return true;
  });
}

// For generators of the form phi(x) = x exp(phi*(x)) the Bell coefficients
// collapse: B_{k,p}(m sigma*_{m-1}(1)) = C(k,p) sigma*_{k-p}(p). Checked for
// three inner generators: alpha x, e^(alpha x) - 1, and the tree equation.
inline CheckResult compound_generator_identity(int k_max) {
  return detail::guarded("compound generator identity", [&](std::string& d) {
    const Rational alpha(2, 3);
    const int K = k_max;
    std::vector<std::pair<std::string, std::vector<Rational>>> inners;
    {
      std::vector<Rational> lin(std::size_t(K) + 1, Rational(0));
      lin[0] = alpha;  // list index m-1
      std::vector<Rational> expw(std::size_t(K) + 1);
      std::vector<Rational> treew(std::size_t(K) + 1);
      for (int m = 1; m <= K + 1; ++m) {
        expw[std::size_t(m) - 1] = rat_pow(alpha, std::uint64_t(m));
        Rational mm = 1;  // m^(m-1)
        for (int i = 1; i < m; ++i) mm *= Rational(m);
        treew[std::size_t(m) - 1] = mm * rat_pow(alpha, std::uint64_t(m - 1));
      }
      inners.emplace_back("linear", lin);
      inners.emplace_back("exp", expw);
      inners.emplace_back("tree", treew);
    }
    for (const auto& [label, inner_weights] : inners) {
      const auto w_star = WeightSequence::custom(inner_weights);
      const auto s1 = sigma_table_exact(w_star, Rational(1), K, 1 << 20);
      std::vector<Rational> outer(std::size_t(K), Rational(0));
      for (int m = 1; m <= K; ++m)
        outer[std::size_t(m) - 1] = Rational(m) * s1.v[std::size_t(m) - 1];
      const auto w_outer = WeightSequence::custom(outer);
      const auto bt = bell_triangle_phi<Rational>(w_outer, K);
      for (int k = 1; k <= K; ++k)
        for (int p = 1; p <= k; ++p) {
          const Rational rhs =
              Rational(big_binomial(std::uint64_t(k), std::uint64_t(p))) *
              (k == p ? Rational(1)
                      : sigma_table_exact(w_star, Rational(p), k - p, 1 << 20).v[std::size_t(k - p)]);
          if (bt.at(k, p) != rhs) {
            d = label + ": identity mismatch at k=" + std::to_string(k) + " p=" + std::to_string(p);
            return false;
          }
        }
    }
    return true;
  });
}

// E[A(i)] = n P(K(1) = i), exactly.
inline CheckResult expected_frequency_identity(int n, int k) {
  return detail::guarded("expected frequency counts", [&](std::string& d) {
    const Rational theta(4, 3);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::bell_exp()}) {
      const auto comp = component_pmf<Rational>(w, theta, n, k);
      for (int i = 1; i <= k; ++i) {
        std::vector<int> r(std::size_t(k), 0);
        r[std::size_t(i) - 1] = 1;
        const Rational lhs = aff_factorial_moment<Rational>(w, theta, n, k, r);
        if (lhs != Rational(n) * comp[std::size_t(i)]) {
          d = w.name() + ": mismatch at i=" + std::to_string(i);
          return false;
        }
      }
    }
    return true;
  });
}

// With r_i taken from a realized configuration, the joint falling factorial
// moment of the frequency counts equals n! times the joint pmf.
inline CheckResult joint_moment_identity() {
  return detail::guarded("joint moment identity", [&](std::string& d) {
    const Rational theta(3, 5);
    const int n = 3, k = 3;
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
      for (CompositionIter it(k, n); !it.done(); it.next()) {
        const auto& c = it.value();
        std::vector<int> r(std::size_t(k), 0);
        for (int x : c)
          if (x > 0) r[std::size_t(x) - 1] += 1;
        const Rational lhs = aff_factorial_moment<Rational>(w, theta, n, k, r);
        const Rational rhs =
            Rational(big_factorial(std::uint64_t(n))) * joint_pmf<Rational>(w, theta, n, k, c);
        if (lhs != rhs) {
          d = w.name() + ": mismatch at a composition";
          return false;
        }
      }
    }
    return true;
  });
}

// Every closed-form pmf against the brute-force enumeration oracle, exactly.
inline CheckResult oracle_equivalence(int nk_max) {
  return detail::guarded("oracle equivalence", [&](std::string& d) {
    const std::vector<std::pair<WeightSequence, Rational>> cases = {
        {WeightSequence::log_series(), Rational(1)},
        {WeightSequence::cayley(), Rational(2)},
        {WeightSequence::neg_bin_compound(Rational(1, 2)), Rational(3, 2)},
        {WeightSequence::engen(Rational(1, 3)), Rational(2)}};
    for (const auto& [w, theta] : cases) {
      for (int n = 1; n <= nk_max; ++n)
        for (int k = 1; k <= nk_max; ++k) {
          const auto law = enumerate_oracle(w, theta, n, k);
          if (law.total() != 1) {
            d = w.name() + ": oracle mass != 1";
            return false;
          }
          auto mismatch = [&](const std::string& what) {
            d = w.name() + ": " + what + " oracle mismatch at n=" + std::to_string(n) +
                " k=" + std::to_string(k);
            return false;
          };
          const auto comp = component_pmf<Rational>(w, theta, n, k);
          const auto comp_o = law.component_law();
          for (int l = 0; l <= k; ++l)
            if (comp[std::size_t(l)] != comp_o[std::size_t(l)]) return mismatch("component");
          for (long m = 1; m < n; ++m) {
            const auto part = partialsum_pmf<Rational>(w, theta, n, m, k);
            const auto part_o = law.partial_law(m);
            for (int l = 0; l <= k; ++l)
              if (part[std::size_t(l)] != part_o[std::size_t(l)]) return mismatch("partial");
          }
          const auto pnk = pnk_pmf<Rational>(w, theta, n, k);
          const auto pnk_o = law.pnk_law();
          for (std::size_t p = 0; p < pnk.size(); ++p)
            if (pnk[p] != pnk_o[p]) return mismatch("species count");
          const auto aff_o = law.aff_law();
          for (const auto& [aff, pr] : aff_o) {
            int p = 0;
            for (int a : aff) p += a;
            if (aff_pmf<Rational>(w, theta, n, k, aff, p) != pr) return mismatch("frequency");
          }
          for (const auto& [counts, pr] : law.atoms)
            if (joint_pmf<Rational>(w, theta, n, k, counts) != pr) return mismatch("joint");
        }
    }
    return true;
  });
}

// Markov (succession) recurrence of the species count for the
// logarithmic-series family, exactly.
inline CheckResult succession_recurrence(int n_max, int k_max) {
  return detail::guarded("succession recurrence", [&](std::string& d) {
    const auto w = WeightSequence::log_series();
    for (const Rational& theta : {Rational(1, 2), Rational(2)}) {
      for (int n = 2; n <= n_max; ++n)
        for (int k = 1; k < k_max; ++k) {
          const auto cur = pnk_pmf<Rational>(w, theta, n, k);
          const auto nxt = pnk_pmf<Rational>(w, theta, n, k + 1);
          const Rational denom = Rational(n) * theta + Rational(k);
          for (std::size_t p = 1; p < nxt.size(); ++p) {
            const Rational up =
                (p >= 1 && p - 1 < cur.size())
                    ? (Rational(n) - Rational(p) + 1) * theta / denom * cur[p - 1]
                    : Rational(0);
            const Rational stay =
                (p < cur.size()) ? (Rational(p) * theta + Rational(k)) / denom * cur[p]
                                 : Rational(0);
            if (nxt[p] != up + stay) {
              d = "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                  " p=" + std::to_string(p);
              return false;
            }
          }
        }
    }
    return true;
  });
}

// sigma'_k by the binomial recurrence against the triangle route.
inline CheckResult derivative_recurrence(int k_max) {
  return detail::guarded("derivative recurrence", [&](std::string& d) {
    const Rational theta(5, 7);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::new_engen_like(Rational(1, 2))}) {
      const auto st = sigma_table_exact(w, theta, k_max, 1 << 20);
      const auto bt = bell_triangle_phi<Rational>(w, k_max);
      for (int k = 1; k <= k_max; ++k) {
        Rational rec = 0;
        for (int l = 0; l <= k - 1; ++l)
          rec += Rational(big_binomial(std::uint64_t(k), std::uint64_t(l))) *
                 w.exact_phi(std::uint64_t(k - l)) * st.v[std::size_t(l)];
        if (rec != sigma_prime<Rational>(bt, theta, k)) {
          d = w.name() + ": mismatch at k=" + std::to_string(k);
          return false;
        }
      }
    }
    return true;
  });
}

// Bell coefficients straight from the defining composition sum,
// B_{k,l} = (k!/l!) sum_{|m|=k, m_i >= 1} prod phi_{m_i}/m_i!, plus the
// degree expansion sigma_k(theta) = sum_l B_{k,l} theta^l.
inline CheckResult brute_force_bell(int k_max) {
  return detail::guarded("brute force bell", [&](std::string& d) {
    const Rational theta(7, 4);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley(),
                          WeightSequence::binary_tree()}) {
      const auto bt = bell_triangle_phi<Rational>(w, k_max);
      const auto st = sigma_table_exact(w, theta, k_max, 1 << 20);
      for (int k = 1; k <= k_max; ++k) {
        Rational expansion = 0;
        for (int l = 1; l <= k; ++l) {
          Rational brute = 0;
          for (PositiveCompositionIter it(k, l); !it.done(); it.next()) {
            Rational term = 1;
            for (int m : it.value())
              term *= w.exact_phi(std::uint64_t(m)) / Rational(big_factorial(std::uint64_t(m)));
            brute += term;
          }
          brute *= Rational(big_factorial(std::uint64_t(k))) /
                   Rational(big_factorial(std::uint64_t(l)));
          if (brute != bt.at(k, l)) {
            d = w.name() + ": brute mismatch at k=" + std::to_string(k) + " l=" + std::to_string(l);
            return false;
          }
          expansion += bt.at(k, l) * rat_pow(theta, std::uint64_t(l));
        }
        if (expansion != st.v[std::size_t(k)]) {
          d = w.name() + ": degree expansion mismatch at k=" + std::to_string(k);
          return false;
        }
      }
    }
    return true;
  });
}

// Probability generating function of the species count against the
// binomial-mixture form, exactly at rational evaluation points.
inline CheckResult pgf_identity() {
  return detail::guarded("species count pgf", [&](std::string& d) {
    const std::vector<std::pair<long, int>> shapes = {{4, 6}, {5, 3}};  // includes k < n
    const std::vector<Rational> us = {Rational(3, 10), Rational(7, 10), Rational(1)};
    const Rational theta(1, 2);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
      for (const auto& [n, k] : shapes) {
        const auto law = pnk_pmf<Rational>(w, theta, n, k);
        const Rational norm = sigma_table_exact(w, Rational(n) * theta, k, 1 << 20).v[std::size_t(k)];
        for (const auto& u : us) {
          Rational lhs = 0;
          for (std::size_t p = 1; p < law.size(); ++p) lhs += rat_pow(u, p) * law[p];
          Rational rhs = 0;
          for (long p = 0; p <= n - 1; ++p) {
            const Rational mult = (n - p == 0)
                                      ? Rational(0)
                                      : sigma_table_exact(w, Rational(n - p) * theta, k, 1 << 20)
                                            .v[std::size_t(k)];
            rhs += Rational(big_binomial(std::uint64_t(n), std::uint64_t(p))) *
                   rat_pow(u, std::uint64_t(n - p)) * rat_pow(Rational(1) - u, std::uint64_t(p)) *
                   mult / norm;
          }
          if (lhs != rhs) {
            d = w.name() + ": pgf mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k);
            return false;
          }
        }
      }
    }
    return true;
  });
}

// Log-convexity of the weight sequences for the subordinator-compatible
// families with strictly positive weights.
inline CheckResult weight_log_convexity(int m_max) {
  return detail::guarded("weight log-convexity", [&](std::string& d) {
    const std::vector<WeightSequence> exact_families = {
        WeightSequence::log_series(),
        WeightSequence::neg_bin_compound(Rational(2)),
        WeightSequence::neg_bin_compound(Rational(1, 2)),
        WeightSequence::engen(Rational(1, 3)),
        WeightSequence::cayley(),
        WeightSequence::bell_exp(),
        WeightSequence::new_engen_like(Rational(1, 2)),
        WeightSequence::gen_binomial_tree(Rational(2), Rational(1))};
    for (const auto& w : exact_families) {
      std::vector<Rational> phis;
      for (int m = 1; m <= m_max + 1; ++m) phis.push_back(w.exact_phi(std::uint64_t(m)));
      for (int m = 2; m <= m_max; ++m)
        if (phis[std::size_t(m)] * phis[std::size_t(m) - 2] <
            phis[std::size_t(m) - 1] * phis[std::size_t(m) - 1]) {
          d = w.name() + ": log-convexity fails at m=" + std::to_string(m);
          return false;
        }
    }
    // series-only families, in log space with a small slack
    for (const auto& w : {WeightSequence::polylog(2.0), WeightSequence::mittag_leffler(0.5)}) {
      for (int m = 2; m <= m_max; ++m)
        if (w.log_phi(std::uint64_t(m + 1)) + w.log_phi(std::uint64_t(m - 1)) <
            2.0 * w.log_phi(std::uint64_t(m)) - 1e-9) {
          d = w.name() + ": log-convexity fails at m=" + std::to_string(m);
          return false;
        }
    }
    return true;
  });
}

// Conditional laws given the species count do not depend on gamma.
inline CheckResult conditional_gamma_free(int k) {
  return detail::guarded("gamma-free conditionals", [&](std::string& d) {
    const Rational g1(1, 2), g2(3);
    for (const auto& w : {WeightSequence::log_series(), WeightSequence::engen(Rational(1, 3))}) {
      const auto pk1 = star_pnk_pmf<Rational>(w, g1, k);
      const auto pk2 = star_pnk_pmf<Rational>(w, g2, k);
      for (int p = 1; p <= k; ++p) {
        for (PositiveCompositionIter it(k, p); !it.done(); it.next()) {
          const Rational c1 = star_joint_pmf<Rational>(w, g1, it.value()) / pk1[std::size_t(p)];
          const Rational c2 = star_joint_pmf<Rational>(w, g2, it.value()) / pk2[std::size_t(p)];
          if (c1 != c2) {
            d = w.name() + ": joint conditional depends on gamma at p=" + std::to_string(p);
            return false;
          }
        }
      }
      for (PartitionIter it(k); !it.done(); it.next()) {
        const auto aff = it.aff();
        const int p = it.part_count();
        const Rational c1 = star_aff_pmf<Rational>(w, g1, aff) / pk1[std::size_t(p)];
        const Rational c2 = star_aff_pmf<Rational>(w, g2, aff) / pk2[std::size_t(p)];
        if (c1 != c2) {
          d = w.name() + ": frequency conditional depends on gamma";
          return false;
        }
      }
    }
    return true;
  });
}

inline std::vector<CheckResult> identity_suite(int k_max = 10) {
  std::vector<CheckResult> out;
  out.push_back(sigma_closed_forms(std::max(k_max, 10)));
  out.push_back(bell_closed_forms(std::max(k_max, 8)));
  out.push_back(binomial_convolution(k_max));
  out.push_back(power_series_route(std::min(k_max, 12)));
  out.push_back(alternating_sum_route(k_max));
  out.push_back(aff_normalization(std::min(k_max, 8), std::min(k_max, 8)));
  out.push_back(compound_generator_identity(k_max));
  out.push_back(expected_frequency_identity(3, std::min(k_max, 6)));
  out.push_back(joint_moment_identity());
  out.push_back(oracle_equivalence(std::min(k_max, 6)));
  out.push_back(succession_recurrence(std::min(k_max, 12), std::min(k_max, 12)));
  out.push_back(derivative_recurrence(k_max));
  out.push_back(brute_force_bell(std::min(k_max, 8)));
  out.push_back(pgf_identity());
  out.push_back(weight_log_convexity(50));
  out.push_back(conditional_gamma_free(std::min(k_max, 6)));
  return out;
}

// Checks runnable against an arbitrary (possibly user-supplied) family.
inline std::vector<CheckResult> family_checks(const WeightSequence& w, int k_max = 6) {
  std::vector<CheckResult> out;
  out.push_back(detail::guarded("pmf normalization (" + w.name() + ")", [&](std::string& d) {
    const double theta = 0.7;
    for (int n = 1; n <= 4; ++n)
      for (int k = 1; k <= k_max; ++k) {
        const auto law = pnk_pmf<LogReal>(w, LogReal::from_value(theta), n, k);
        double mass = 0;
        for (const auto& v : law) mass += v.value();
        if (std::abs(mass - 1.0) > 1e-12) {
          d = "species-count law mass deviates at n=" + std::to_string(n) +
              " k=" + std::to_string(k);
          return false;
        }
        const auto comp = component_pmf<LogReal>(w, LogReal::from_value(theta), n, k);
        mass = 0;
        for (const auto& v : comp) mass += v.value();
        if (std::abs(mass - 1.0) > 1e-12) {
          d = "component law mass deviates at n=" + std::to_string(n) + " k=" + std::to_string(k);
          return false;
        }
      }
    return true;
  }));
  if (w.has_exact()) {
    out.push_back(detail::guarded("oracle agreement (" + w.name() + ")", [&](std::string& d) {
      const Rational theta(4, 5);
      for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= std::min(k_max, 5); ++k) {
          const auto law = enumerate_oracle(w, theta, n, k);
          if (law.total() != 1) {
            d = "oracle mass != 1";
            return false;
          }
          const auto pnk = pnk_pmf<Rational>(w, theta, n, k);
          const auto pnk_o = law.pnk_law();
          for (std::size_t p = 0; p < pnk.size(); ++p)
            if (pnk[p] != pnk_o[p]) {
              d = "species count law disagrees with oracle";
              return false;
            }
        }
      return true;
    }));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Seeded statistical cross-validation.

inline CheckResult mc_sequential_vs_oracle(std::uint64_t seed, long runs) {
  return detail::guarded("sequential sampler vs oracle", [&](std::string& d) {
    const auto w = WeightSequence::log_series();
    const long n = 3;
    const int k = 4;
    const auto law = enumerate_oracle(w, Rational(1), n, k);
    std::map<std::vector<int>, std::size_t> index;
    std::vector<double> expected;
    for (const auto& [c, pr] : law.atoms) {
      index[c] = expected.size();
      expected.push_back(pr.convert_to<double>());
    }
    const OccupancySampler sampler(w, 1.0, n, k);
    const long total = std::max<long>(runs, 200'000);
    constexpr long chunk = 8192;
    const long chunks = (total + chunk - 1) / chunk;
    std::vector<std::vector<long>> counts(std::size_t(chunks),
                                          std::vector<long>(expected.size(), 0));
    run_chunked(total, chunk, [&](long c, long b, long e) {
      RngStream rng(seed, std::uint64_t(c));
      for (long r = b; r < e; ++r) {
        const auto s = sampler.draw(rng);
        counts[std::size_t(c)][index.at(s.counts)] += 1;
      }
    });
    std::vector<double> emp(expected.size(), 0.0);
    for (const auto& cc : counts)
      for (std::size_t i = 0; i < emp.size(); ++i) emp[i] += double(cc[i]);
    for (auto& v : emp) v /= double(total);
    const double tv = total_variation(emp, expected);
    std::ostringstream os;
    os << "TV = " << tv << " (bound 0.01, N = " << total << ")";
    d = os.str();
    return tv < 0.01;
  });
}

inline CheckResult mc_rejection_consistency(std::uint64_t seed, long runs) {
  return detail::guarded("rejection vs sequential sampler", [&](std::string& d) {
    const auto w = WeightSequence::log_series();
    const long n = 4;
    const int k = 6;
    const double theta = 1.0;
    const long total = std::max<long>(runs / 2, 50'000);
    const OccupancySampler seq(w, theta, n, k);
    const RejectionSampler rej(w, theta, n, k);
    const RejectionSampler rej2(w, theta, n, k, rej.x() * 0.55);  // x-independence probe
    const int pmax = int(std::min<long>(n, k));
    std::vector<long> cs(std::size_t(pmax) + 1, 0), cr(std::size_t(pmax) + 1, 0),
        cr2(std::size_t(pmax) + 1, 0);
    std::map<std::vector<int>, std::array<long, 2>> aff_counts;
    RngStream rng(seed, 1);
    for (long r = 0; r < total; ++r) {
      const auto a = seq.draw(rng);
      const auto b = rej.draw(rng);
      const auto c = rej2.draw(rng);
      cs[std::size_t(a.p)] += 1;
      cr[std::size_t(b.p)] += 1;
      cr2[std::size_t(c.p)] += 1;
      aff_counts[a.aff][0] += 1;
      aff_counts[b.aff][1] += 1;
    }
    std::vector<long> affa, affb;
    for (const auto& [aff, cnt] : aff_counts) {
      affa.push_back(cnt[0]);
      affb.push_back(cnt[1]);
    }
    const double p1 = chi_square_two_sample_pvalue(cs, cr);
    const double p2 = chi_square_two_sample_pvalue(affa, affb);
    const double p3 = chi_square_two_sample_pvalue(cr, cr2);
    std::ostringstream os;
    os << "p(species)=" << p1 << " p(freq)=" << p2 << " p(x-indep)=" << p3 << " (bound 0.001)";
    d = os.str();
    return p1 > 0.001 && p2 > 0.001 && p3 > 0.001;
  });
}

inline CheckResult mc_subordinator_counts(std::uint64_t seed, long runs) {
  return detail::guarded("subordinator jump counts", [&](std::string& d) {
    const long total = std::max<long>(runs / 10, 10'000);
    // infinite activity: retained-jump count is Poisson(gamma * tail(t))
    const auto wl = WeightSequence::log_series();
    const double gamma = 2.0, t = 0.01;
    const double mean_target = gamma * wl.levy_tail(t);
    double sum = 0;
    std::vector<double> largest;
    RngStream rng(seed, 2);
    for (long r = 0; r < total; ++r) {
      const auto j = sample_subordinator(wl, gamma, t, rng);
      sum += double(j.jumps.size());
      largest.push_back(j.jumps.empty() ? t : j.jumps.front());
    }
    const double mean = sum / double(total);
    const double se = std::sqrt(mean_target / double(total));
    const bool mean_ok = std::abs(mean - mean_target) < 3 * se;
    const double ks_p = ks_test_pvalue(largest, [&](double s) {
      return std::exp(-gamma * wl.levy_tail(std::max(s, t)));
    });
    // finite activity: cutoff 0 gives a Poisson(gamma) total count
    const auto wn = WeightSequence::neg_bin_compound(Rational(1));
    const double gn = 3.0;
    std::vector<long> hist(31, 0);
    for (long r = 0; r < total; ++r) {
      const auto j = sample_subordinator(wn, gn, 0.0, rng);
      hist[std::min<std::size_t>(j.jumps.size(), 30)] += 1;
    }
    std::vector<double> pois(31, 0.0);
    double cum = 0;
    for (int i = 0; i < 30; ++i) {
      pois[std::size_t(i)] = std::exp(-gn + i * std::log(gn) - log_factorial(std::uint64_t(i)));
      cum += pois[std::size_t(i)];
    }
    pois[30] = 1.0 - cum;
    const double chi_p = chi_square_gof_pvalue(hist, pois, total);
    std::ostringstream os;
    os << "|mean - gamma*tail| = " << std::abs(mean - mean_target) << " (3se = " << 3 * se
       << "), KS p = " << ks_p << ", Poisson chi2 p = " << chi_p;
    d = os.str();
    return mean_ok && ks_p > 0.001 && chi_p > 0.001;
  });
}

inline CheckResult mc_xi_law(std::uint64_t seed, long runs) {
  return detail::guarded("compound-Poisson abundance law", [&](std::string& d) {
    const auto w = WeightSequence::log_series();
    const double theta = 1.5, x = 0.4;
    const long total = std::max<long>(runs, 100'000);
    const XiSampler xi(w, theta, x);
    std::vector<long> hist(11, 0);
    long zeros = 0;
    double mean = 0;
    RngStream rng(seed, 3);
    for (long r = 0; r < total; ++r) {
      const long v = xi.draw(rng);
      mean += double(v);
      if (v == 0) ++zeros;
      if (v <= 10) hist[std::size_t(v)] += 1;
    }
    mean /= double(total);
    // analytic pmf sigma_k(theta) x^k / (Z k!)
    const auto st = sigma_table_log(w, theta, 10);
    const double logz = theta * w.phi_eval(x);
    std::vector<double> expected(11, 0.0);
    for (int k = 0; k <= 10; ++k)
      expected[std::size_t(k)] = std::exp(st.v[std::size_t(k)].log() + k * std::log(x) -
                                          log_factorial(std::uint64_t(k)) - logz);
    double tv = 0;
    for (int k = 0; k <= 10; ++k)
      tv += std::abs(double(hist[std::size_t(k)]) / double(total) - expected[std::size_t(k)]);
    tv /= 2;
    const double p0 = std::exp(-theta * w.phi_eval(x));
    const double se0 = std::sqrt(p0 * (1 - p0) / double(total));
    const bool zero_ok = std::abs(double(zeros) / double(total) - p0) < 3 * se0;
    // negative binomial mean theta x/(1-x)
    const double mean_target = theta * x / (1 - x);
    const double sd = std::sqrt(theta * x / ((1 - x) * (1 - x)));  // negbin variance
    const bool mean_ok = std::abs(mean - mean_target) < 3 * sd / std::sqrt(double(total));
    std::ostringstream os;
    os << "TV(k<=10) = " << tv << ", zero-mass dev = "
       << std::abs(double(zeros) / double(total) - p0) << " (3se = " << 3 * se0 << ")";
    d = os.str();
    return tv < 0.01 && zero_ok && mean_ok;
  });
}

inline CheckResult mc_biased_sampling(std::uint64_t seed, long runs) {
  return detail::guarded("length-biased sampling estimates", [&](std::string& d) {
    const long total = std::max<long>(runs / 2, 40'000);
    std::ostringstream os;
    bool ok = true;
    // infinite activity, truncated
    {
      const auto w = WeightSequence::log_series();
      const double gamma = 2.0;
      const int k = 4;
      const auto est = star_biased_estimate(w, gamma, k, "all-same", 1e-4, total, seed + 11);
      const auto law = star_pnk_pmf<LogReal>(w, LogReal::from_value(gamma), k);
      const double target = law[1].value();
      ok = ok && std::abs(est.estimate - target) < 3 * est.se + 10 * est.truncation_bound;
      os << "logseries dev = " << std::abs(est.estimate - target) << " (3se = " << 3 * est.se
         << ")";
    }
    // finite activity, exact cutoff 0
    {
      const auto w = WeightSequence::neg_bin_compound(Rational(1));
      const double gamma = 3.0;
      const int k = 4;
      const auto est = star_biased_estimate(w, gamma, k, "all-same", 0.0, total, seed + 12);
      const auto law = star_pnk_pmf<LogReal>(w, LogReal::from_value(gamma), k);
      const double target = law[1].value();
      ok = ok && std::abs(est.estimate - target) < 3 * est.se;
      os << "; negbin dev = " << std::abs(est.estimate - target) << " (3se = " << 3 * est.se
         << ")";
    }
    d = os.str();
    return ok;
  });
}

inline std::vector<CheckResult> montecarlo_suite(std::uint64_t seed = 0, long runs = 100'000) {
  std::vector<CheckResult> out;
  out.push_back(mc_sequential_vs_oracle(seed, runs));
  out.push_back(mc_rejection_consistency(seed, runs));
  out.push_back(mc_subordinator_counts(seed, runs));
  out.push_back(mc_xi_law(seed, runs));
  out.push_back(mc_biased_sampling(seed, runs));
  return out;
}

}  // namespace gibbsocc::verify
