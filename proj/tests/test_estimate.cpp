#include <doctest.h>

#include <cmath>

#include "gibbsocc/estimate.hpp"
#include "gibbsocc/rng.hpp"
#include "test_util.hpp"

using namespace gibbsocc;

TEST_SUITE_BEGIN("estimate");

namespace {
// exhaustive log-likelihood argmax of n -> P(P_{n,k} = P); ties resolve to
// the larger maximizer, matching the scan's convention
long argmax_oracle(const WeightSequence& w, double theta, int k, int P, long n_hi) {
  long best = P;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (long n = P; n <= n_hi; ++n) {
    const auto st = sigma_table_log(w, theta, k);
    const auto bs =
        bell_triangle_sigma<LogReal>(st, stirling_table(k), bell_triangle_phi<LogReal>(w, k));
    const double ll = log_falling_positive(double(n), std::uint64_t(P)) +
                      num_ops<LogReal>::to_log(bs.at(k, P)) -
                      num_ops<LogReal>::to_log(sigma_table_log(w, double(n) * theta, k).v[std::size_t(k)]);
    if (ll >= best_ll - 1e-12) {
      if (ll > best_ll + 1e-12)
        best_ll = ll;
      best = n;
    }
  }
  return best;
}
}  // namespace

TEST_CASE("population-size maximum likelihood scan") {
  const auto ls = WeightSequence::log_series();
  const auto e = mle_n(ls, 1.0, SampleSummary(10, 5));
  CHECK(e.value == 9.0);
  CHECK(e.tie.has_value());
  CHECK(e.tie->first == 8);
  CHECK(e.tie->second == 9);

  // the scan reproduces floor(P(k-1)/(k-P)) across the whole small grid
  for (int k = 3; k <= 30; ++k)
    for (int P = 2; P < k; ++P) {
      const auto est = mle_n(ls, 1.0, SampleSummary(k, P));
      const long expected = long((BigInt(P) * (k - 1)) / BigInt(k - P));
      CHECK_MESSAGE(long(est.value) == expected, "k=", k, " P=", P);
    }
}

TEST_CASE("population-size scan boundary data") {
  const auto ls = WeightSequence::log_series();
  const auto one = mle_n(ls, 1.0, SampleSummary(1, 1));
  CHECK(one.value == 1.0);  // flat likelihood collapses to P

  const auto diverged = mle_n(ls, 1.0, SampleSummary(5, 5));
  CHECK(std::isinf(diverged.value));
  CHECK(diverged.boundary == "P=k");

  CHECK_THROWS_AS(SampleSummary(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(SampleSummary(3, 0), std::invalid_argument);
}

TEST_CASE("population-size scan equals the exhaustive argmax") {
  const auto cay = WeightSequence::cayley();
  const auto e = mle_n(cay, 1.0, SampleSummary(8, 4));
  CHECK(double(argmax_oracle(cay, 1.0, 8, 4, 1000)) == e.value);

  RngStream rng(2024);
  const std::vector<WeightSequence> fams = {
      WeightSequence::log_series(), WeightSequence::cayley(),
      WeightSequence::neg_bin_compound(Rational(1)),
      WeightSequence::gen_binomial_tree(Rational(2), Rational(1))};
  const double thetas[] = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto& w = fams[rng.next_u64() % fams.size()];
    const double theta = thetas[rng.next_u64() % 3];
    const int k = 3 + int(rng.next_u64() % 10);
    const int P = 2 + int(rng.next_u64() % std::uint64_t(k - 2));
    const auto est = mle_n(w, theta, SampleSummary(k, P));
    if (std::isinf(est.value)) {
      CHECK(P == k);
      continue;
    }
    CHECK_MESSAGE(double(argmax_oracle(w, theta, k, P, 500)) == est.value,
                  w.name(), " theta=", theta, " k=", k, " P=", P);
  }
}

TEST_CASE("real-valued approximation of the population-size estimate") {
  const auto ls = WeightSequence::log_series();
  const auto e = approx_mle_n(ls, 1.0, SampleSummary(10, 5));
  CHECK(e.value == doctest::Approx(9.0).epsilon(1e-8));
  CHECK(e.residual < 1e-8);

  // explicit finite-population equation for the Cayley family:
  // P = n - (n-1)(1 - theta/(k + n theta))^(k-1)
  const auto cay = WeightSequence::cayley();
  const double theta = 1.0;
  const int k = 8, P = 4;
  const auto ec = approx_mle_n(cay, theta, SampleSummary(k, P));
  auto f = [&](double n) {
    return n - (n - 1.0) * std::pow(1.0 - theta / (k + n * theta), k - 1) - double(P);
  };
  double lo = 1, hi = 100;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  CHECK(ec.value == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));

  const auto p1 = approx_mle_n(ls, 1.0, SampleSummary(7, 1));
  CHECK(p1.value >= 1.0);
  CHECK(p1.value == doctest::Approx(1.0).epsilon(1e-6));

  const auto pk = approx_mle_n(ls, 1.0, SampleSummary(6, 6));
  CHECK(std::isinf(pk.value));
  CHECK(pk.boundary == "no finite solution");
}

TEST_CASE("ratio estimator of the population size") {
  const auto ls = WeightSequence::log_series();
  CHECK(alt_n(ls, 1.0, SampleSummary(6, 1)).value == 1.0);

  // k = 4, P = 2 at theta = 1: 2 + B_{4,1}/B_{4,2} over the factorial
  // sequence = 2 + 24/36 (Lah-number ratio), frozen as 8/3
  CHECK(alt_n_exact(ls, Rational(1), SampleSummary(4, 2)) == Rational(8, 3));
  CHECK(alt_n(ls, 1.0, SampleSummary(4, 2)).value == doctest::Approx(8.0 / 3).epsilon(1e-10));
}

TEST_CASE("ratio estimator of n is exactly unbiased when k >= n") {
  for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
    for (const Rational& theta : {Rational(1), Rational(2)}) {
      for (const auto& [n, k] : std::vector<std::pair<long, int>>{{2, 3}, {3, 5}, {4, 6}}) {
        CHECK(expected_alt_n_exact(w, theta, n, k) == Rational(n));
      }
    }
  }
}

TEST_CASE("diversity maximum likelihood estimate") {
  const auto cay = WeightSequence::cayley();
  const auto e = mle_gamma(cay, SampleSummary(10, 5));
  CHECK(e.value == doctest::Approx(8.0).epsilon(1e-8));  // k(P-1)/(k-P)
  CHECK(e.residual < 1e-8);

  for (int k = 3; k <= 30; ++k)
    for (int P = 2; P < k; ++P) {
      const auto est = mle_gamma(cay, SampleSummary(k, P));
      const double closed = double(k) * double(P - 1) / double(k - P);
      CHECK_MESSAGE(std::abs(est.value - closed) <= 1e-8 * std::max(1.0, closed), "k=", k,
                    " P=", P);
    }

  // logarithmic series: the root satisfies P = sum_l gamma/(gamma + l)
  const auto ls = WeightSequence::log_series();
  const int k = 12, P = 5;
  const auto el = mle_gamma(ls, SampleSummary(k, P));
  double lhs = 0;
  for (int l = 0; l < k; ++l) lhs += el.value / (el.value + l);
  CHECK(lhs == doctest::Approx(double(P)).epsilon(1e-8));

  const auto b0 = mle_gamma(ls, SampleSummary(9, 1));
  CHECK(b0.value == 0.0);
  CHECK(b0.boundary == "P=1");
  const auto binf = mle_gamma(ls, SampleSummary(9, 9));
  CHECK(std::isinf(binf.value));
  CHECK(binf.boundary == "P=k");
}

TEST_CASE("explicit diversity ratio estimates") {
  CHECK(alt_gamma(WeightSequence::neg_bin_compound(Rational(1)), SampleSummary(10, 5)).value ==
        doctest::Approx(10.0 / 3).epsilon(1e-14));
  CHECK(alt_gamma_closed_exact(WeightSequence::neg_bin_compound(Rational(1)), SampleSummary(10, 5)) ==
        Rational(10, 3));
  CHECK(alt_gamma_closed_exact(WeightSequence::cayley(), SampleSummary(10, 5)) == Rational(20, 3));

  const Rational alpha(2, 5);
  const Rational n3 = Rational(5, 6) * rat_rising(4 * alpha, 6) / rat_rising(5 * alpha, 5);
  CHECK(alt_gamma_closed_exact(WeightSequence::new_engen_like(alpha), SampleSummary(10, 5)) == n3);

  const auto p1 = alt_gamma(WeightSequence::log_series(), SampleSummary(10, 1));
  CHECK(p1.value == 0.0);
  CHECK(p1.boundary == "P=1");
}

TEST_CASE("closed diversity forms equal the generic triangle route") {
  const std::vector<WeightSequence> closed = {
      WeightSequence::neg_bin_compound(Rational(1)), WeightSequence::cayley(),
      WeightSequence::gen_binomial_tree(Rational(5, 2), Rational(1, 3)),
      WeightSequence::new_engen_like(Rational(2, 5))};
  for (const auto& w : closed)
    for (int k = 2; k <= 12; ++k)
      for (int P = 2; P <= k; ++P)
        CHECK_MESSAGE(alt_gamma_closed_exact(w, SampleSummary(k, P)) ==
                          alt_gamma_exact(w, SampleSummary(k, P)),
                      w.name(), " k=", k, " P=", P);
  // a family without a closed form routes through the triangle
  const auto e = alt_gamma(WeightSequence::log_series(), SampleSummary(10, 5));
  CHECK(e.method == EstimateMethod::ratio);
  CHECK(e.value ==
        doctest::Approx(alt_gamma_exact(WeightSequence::log_series(), SampleSummary(10, 5))
                            .convert_to<double>())
            .epsilon(1e-10));
}

TEST_CASE("exact bias of the diversity ratio estimator") {
  // E(ratio estimate) = gamma (1 - (phi_1 gamma)^k / sigma_k(gamma)), < gamma
  for (const auto& w : {WeightSequence::cayley(), WeightSequence::log_series(),
                        WeightSequence::neg_bin_compound(Rational(1))}) {
    for (const Rational& gamma : {Rational(1, 2), Rational(2)}) {
      for (int k = 2; k <= 8; ++k) {
        const Rational got = expected_alt_gamma_exact(w, gamma, k);
        const Rational sk = sigma_table_exact(w, gamma, k).v[std::size_t(k)];
        const Rational want = gamma * (1 - rat_pow(w.exact_phi(1) * gamma, std::uint64_t(k)) / sk);
        CHECK(got == want);
        CHECK(got < gamma);
      }
    }
  }
}

TEST_CASE("exact expectation helper") {
  const std::vector<Rational> law = {Rational(0), Rational(1, 4), Rational(3, 4)};
  const Rational got = exact_expectation(law, [](int p) { return Rational(p * p); });
  CHECK(got == Rational(1, 4) + Rational(3));
}

TEST_SUITE_END();
