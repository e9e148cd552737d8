#include <doctest.h>

#include <cmath>

#include "gibbsocc/occupancy.hpp"
#include "gibbsocc/starlimit.hpp"
#include "gibbsocc/stats.hpp"
#include "gibbsocc/verify.hpp"
#include "test_util.hpp"

using namespace gibbsocc;

TEST_SUITE_BEGIN("starlimit");

TEST_CASE("joint star law") {
  const auto cay = WeightSequence::cayley();
  const Rational gamma(2);
  const int k = 5;

  // one species seen k times
  const std::vector<int> solo = {k};
  CHECK(star_joint_pmf<Rational>(cay, gamma, solo) ==
        gamma * cay.exact_phi(std::uint64_t(k)) / sigma_table_exact(cay, gamma, k).v[std::size_t(k)]);

  // total mass over species counts and their compositions
  for (const auto& w : {WeightSequence::log_series(), WeightSequence::engen(Rational(1, 3))}) {
    for (int kk = 1; kk <= 8; ++kk) {
      Rational mass = 0;
      for (int p = 1; p <= kk; ++p)
        for (PositiveCompositionIter it(kk, p); !it.done(); it.next())
          mass += star_joint_pmf<Rational>(w, gamma, it.value());
      CHECK(mass == 1);
    }
  }

  const std::vector<int> with_zero = {2, 0, 1};
  CHECK_THROWS_AS(star_joint_pmf<Rational>(cay, gamma, with_zero), std::invalid_argument);
}

TEST_CASE("conditional laws are free of the diversity parameter") {
  const auto r = verify::conditional_gamma_free(6);
  CHECK_MESSAGE(r.pass, r.detail);
}

TEST_CASE("logarithmic-series conditionals are the Ewens microcanonical laws") {
  const auto ls = WeightSequence::log_series();
  const Rational gamma(7, 5);
  const int k = 6;
  const auto s1 = testutil::stirling_first(k);
  const auto pk = star_pnk_pmf<Rational>(ls, gamma, k);
  for (int p = 1; p <= k; ++p) {
    for (PositiveCompositionIter it(k, p); !it.done(); it.next()) {
      Rational expected = Rational(big_factorial(std::uint64_t(k))) /
                          (Rational(big_factorial(std::uint64_t(p))) *
                           Rational(s1[std::size_t(k)][std::size_t(p)]));
      for (int c : it.value()) expected /= Rational(c);
      CHECK(star_joint_pmf<Rational>(ls, gamma, it.value()) / pk[std::size_t(p)] == expected);
    }
  }
}

TEST_CASE("star species-count law") {
  const auto ls = WeightSequence::log_series();
  const Rational gamma(3, 2);

  for (int k = 1; k <= 10; ++k) {
    const auto law = star_pnk_pmf<Rational>(ls, gamma, k);
    Rational mass = 0;
    for (const auto& v : law) mass += v;
    CHECK(mass == 1);
    // all species distinct
    CHECK(law[std::size_t(k)] ==
          rat_pow(gamma * ls.exact_phi(1), std::uint64_t(k)) /
              sigma_table_exact(ls, gamma, k).v[std::size_t(k)]);
  }

  CHECK(star_pnk_pmf<Rational>(ls, gamma, 1) == std::vector<Rational>{Rational(0), Rational(1)});

  // generating function identity at exact evaluation points
  const int k = 7;
  const auto law = star_pnk_pmf<Rational>(ls, gamma, k);
  for (const Rational& u : {Rational(3, 10), Rational(7, 10), Rational(1)}) {
    Rational lhs = 0;
    for (std::size_t p = 1; p < law.size(); ++p) lhs += rat_pow(u, p) * law[p];
    const Rational rhs = sigma_table_exact(ls, gamma * u, k).v[std::size_t(k)] /
                         sigma_table_exact(ls, gamma, k).v[std::size_t(k)];
    CHECK(lhs == rhs);
  }

  // mean equals gamma sigma'_k(gamma) / sigma_k(gamma)
  Rational mean = 0;
  for (std::size_t p = 0; p < law.size(); ++p) mean += Rational(p) * law[p];
  const auto bt = bell_triangle_phi<Rational>(ls, k);
  CHECK(mean == gamma * sigma_prime<Rational>(bt, gamma, k) /
                    sigma_table_exact(ls, gamma, k).v[std::size_t(k)]);
}

TEST_CASE("finite-population laws converge to the star laws") {
  const int k = 10;
  for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
    for (const double gamma : {0.5, 2.0}) {
      const auto star = star_pnk_pmf<LogReal>(w, LogReal::from_value(gamma), k);
      std::vector<double> star_d;
      for (const auto& v : star) star_d.push_back(v.value());
      double prev_tv = 1.0;
      for (const long n : {100L, 1000L, 10000L}) {
        const auto fin = pnk_pmf<LogReal>(w, LogReal::from_value(gamma / double(n)), n, k);
        std::vector<double> fin_d;
        for (const auto& v : fin) fin_d.push_back(v.value());
        const double tv = total_variation(fin_d, star_d);
        CHECK(tv < prev_tv);
        prev_tv = tv;
      }
      CHECK(prev_tv < 2e-3);
    }
  }
}

TEST_CASE("star frequency-of-frequencies law") {
  const auto ls = WeightSequence::log_series();
  const Rational gamma(4, 3);

  // k = 2 by hand: sigma_2 = gamma phi_2 + gamma^2 phi_1^2
  const Rational sigma2 = sigma_table_exact(ls, gamma, 2).v[2];
  const std::vector<int> two_singles = {2, 0};
  const std::vector<int> one_double = {0, 1};
  CHECK(star_aff_pmf<Rational>(ls, gamma, two_singles) == gamma * gamma / sigma2);
  CHECK(star_aff_pmf<Rational>(ls, gamma, one_double) == gamma * ls.exact_phi(2) / sigma2);
  CHECK(star_aff_pmf<Rational>(ls, gamma, two_singles) +
            star_aff_pmf<Rational>(ls, gamma, one_double) ==
        1);

  // partition mass is one
  for (int k = 1; k <= 8; ++k) {
    Rational mass = 0;
    for (PartitionIter it(k); !it.done(); it.next())
      mass += star_aff_pmf<Rational>(ls, gamma, it.aff());
    CHECK(mass == 1);
  }

  // two-species aggregate equals gamma^2 B_{k,2} / sigma_k
  const int k = 6;
  const auto bt = bell_triangle_phi<Rational>(ls, k);
  Rational two_mass = 0;
  for (PartitionIter it(k); !it.done(); it.next())
    if (it.part_count() == 2) two_mass += star_aff_pmf<Rational>(ls, gamma, it.aff());
  CHECK(two_mass == gamma * gamma * bt.at(k, 2) / sigma_table_exact(ls, gamma, k).v[std::size_t(k)]);
}

TEST_CASE("extended-negative-binomial conditionals via the recurrence route") {
  // the microcanonical law equals the product form with B computed by the
  // family's own three-term recurrence (the published sampling-formula shape)
  const Rational alpha(1, 3), gamma(5, 2);
  const auto en = WeightSequence::engen(alpha);
  const int K = 7;
  std::vector<std::vector<Rational>> b(std::size_t(K) + 1,
                                       std::vector<Rational>(std::size_t(K) + 1, Rational(0)));
  b[1][1] = alpha;
  for (int k = 1; k < K; ++k)
    for (int p = 1; p <= k + 1; ++p)
      b[std::size_t(k) + 1][std::size_t(p)] =
          alpha * b[std::size_t(k)][std::size_t(p) - 1] +
          (Rational(k) - Rational(p) * alpha) * b[std::size_t(k)][std::size_t(p)];
  const auto pk = star_pnk_pmf<Rational>(en, gamma, K);
  for (PartitionIter it(K); !it.done(); it.next()) {
    const auto aff = it.aff();
    const int p = it.part_count();
    Rational expected = Rational(big_factorial(std::uint64_t(K))) / b[std::size_t(K)][std::size_t(p)];
    for (int i = 1; i <= K; ++i) {
      if (aff[std::size_t(i) - 1] == 0) continue;
      expected *= rat_pow(en.exact_phi(std::uint64_t(i)) / Rational(big_factorial(std::uint64_t(i))),
                          std::uint64_t(aff[std::size_t(i) - 1]));
      expected /= Rational(big_factorial(std::uint64_t(aff[std::size_t(i) - 1])));
    }
    CHECK(star_aff_pmf<Rational>(en, gamma, aff) / pk[std::size_t(p)] == expected);
  }
}

TEST_CASE("star frequency moments") {
  const auto ls = WeightSequence::log_series();
  const Rational gamma(5, 3);
  const int k = 6;

  // r_k = 1: the expected number of species seen k times
  std::vector<int> rk(std::size_t(k), 0);
  rk[std::size_t(k) - 1] = 1;
  CHECK(star_aff_moment<Rational>(ls, gamma, k, rk) ==
        gamma * ls.exact_phi(std::uint64_t(k)) / sigma_table_exact(ls, gamma, k).v[std::size_t(k)]);

  const std::vector<int> zeros(std::size_t(k), 0);
  CHECK(star_aff_moment<Rational>(ls, gamma, k, zeros) == Rational(1));

  std::vector<int> over(std::size_t(k), 0);
  over[std::size_t(k) - 1] = 2;  // kappa = 2k > k
  CHECK(star_aff_moment<Rational>(ls, gamma, k, over) == Rational(0));

  // against the partition-enumeration expectation
  for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
    for (const auto& r : std::vector<std::vector<int>>{
             {1, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}}) {
      Rational brute = 0;
      for (PartitionIter it(k); !it.done(); it.next()) {
        const auto aff = it.aff();
        Rational term = star_aff_pmf<Rational>(w, gamma, aff);
        for (std::size_t i = 0; i < r.size(); ++i)
          term *= Rational(big_falling(std::uint64_t(aff[i]), std::uint64_t(r[i])));
        brute += term;
      }
      CHECK(star_aff_moment<Rational>(w, gamma, k, r) == brute);
    }
  }

  // Watterson form for the logarithmic-series family:
  // E(A(i)) = (gamma/i) {k}_i (gamma)_{k-i} / (gamma)_k
  for (int i = 1; i <= k; ++i) {
    std::vector<int> r(std::size_t(k), 0);
    r[std::size_t(i) - 1] = 1;
    const Rational watterson = gamma / Rational(i) *
                               Rational(big_falling(std::uint64_t(k), std::uint64_t(i))) *
                               rat_rising(gamma, std::uint64_t(k - i)) /
                               rat_rising(gamma, std::uint64_t(k));
    CHECK(star_aff_moment<Rational>(ls, gamma, k, r) == watterson);
  }
}

TEST_CASE("species-count recursions in the sample size") {
  const Rational gamma(3, 2);
  // compound negative binomial: rate k + p alpha
  {
    const Rational alpha(1, 2);
    const auto w = WeightSequence::neg_bin_compound(alpha);
    for (int k = 1; k < 15; ++k) {
      const auto cur = star_pnk_pmf<Rational>(w, gamma, k);
      const auto nxt = star_pnk_pmf<Rational>(w, gamma, k + 1);
      const Rational ratio = sigma_table_exact(w, gamma, k).v[std::size_t(k)] /
                             sigma_table_exact(w, gamma, k + 1).v[std::size_t(k) + 1];
      for (int p = 1; p <= k + 1; ++p) {
        const Rational up = (p - 1 >= 1 && p - 1 <= k) ? cur[std::size_t(p) - 1] : Rational(0);
        const Rational stay = (p <= k) ? cur[std::size_t(p)] : Rational(0);
        CHECK(nxt[std::size_t(p)] ==
              ratio * (alpha * gamma * up + (Rational(k) + Rational(p) * alpha) * stay));
      }
    }
  }
  // extended negative binomial: rate k - p alpha
  {
    const Rational alpha(1, 3);
    const auto w = WeightSequence::engen(alpha);
    for (int k = 1; k < 15; ++k) {
      const auto cur = star_pnk_pmf<Rational>(w, gamma, k);
      const auto nxt = star_pnk_pmf<Rational>(w, gamma, k + 1);
      const Rational ratio = sigma_table_exact(w, gamma, k).v[std::size_t(k)] /
                             sigma_table_exact(w, gamma, k + 1).v[std::size_t(k) + 1];
      for (int p = 1; p <= k + 1; ++p) {
        const Rational up = (p - 1 >= 1 && p - 1 <= k) ? cur[std::size_t(p) - 1] : Rational(0);
        const Rational stay = (p <= k) ? cur[std::size_t(p)] : Rational(0);
        CHECK(nxt[std::size_t(p)] ==
              ratio * (alpha * gamma * up + (Rational(k) - Rational(p) * alpha) * stay));
      }
    }
  }
}

TEST_CASE("single-species dominance at small diversity") {
  const Rational gamma(1, 10000);
  for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
    const int k = 6;
    const auto bt = bell_triangle_phi<Rational>(w, k);
    const auto law = star_pnk_pmf<Rational>(w, gamma, k);
    const Rational correction = bt.at(k, 2) / bt.at(k, 1);
    CHECK(law[1] >= 1 - Rational(10) * gamma * correction);
  }
}

TEST_SUITE_END();
