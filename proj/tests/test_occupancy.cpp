#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gibbsocc/occupancy.hpp"
#include "gibbsocc/rng.hpp"
#include "gibbsocc/verify.hpp"
#include "test_util.hpp"

using namespace gibbsocc;

TEST_SUITE_BEGIN("occupancy");

TEST_CASE("joint law specializations") {
  // degenerate generator: the balanced multinomial, any theta
  const auto lin = WeightSequence::linear();
  for (CompositionIter it(5, 3); !it.done(); it.next()) {
    const auto& c = it.value();
    Rational multi(big_factorial(5));
    for (int x : c) multi /= Rational(big_factorial(std::uint64_t(x)));
    multi /= rat_pow(Rational(3), 5);
    CHECK(joint_pmf<Rational>(lin, Rational(7, 3), 3, 5, c) == multi);
  }

  // single box: forced allocation
  const std::vector<int> forced = {4};
  CHECK(joint_pmf<Rational>(WeightSequence::cayley(), Rational(2), 1, 4, forced) == Rational(1));

  // logarithmic series = Dirichlet-multinomial mass
  const auto ls = WeightSequence::log_series();
  const Rational theta(1, 2);
  for (CompositionIter it(4, 3); !it.done(); it.next()) {
    const auto& c = it.value();
    Rational dm = Rational(big_factorial(4)) / rat_rising(3 * theta, 4);
    for (int x : c) dm *= rat_rising(theta, std::uint64_t(x)) / Rational(big_factorial(std::uint64_t(x)));
    CHECK(joint_pmf<Rational>(ls, theta, 3, 4, c) == dm);
  }
}

TEST_CASE("joint law is exchangeable") {
  const auto w = WeightSequence::cayley();
  const Rational theta(3, 2);
  std::vector<int> counts = {3, 0, 1, 2};
  const Rational base = joint_pmf<Rational>(w, theta, 4, 6, counts);
  RngStream rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    for (std::size_t i = counts.size() - 1; i > 0; --i)
      std::swap(counts[i], counts[rng.next_u64() % (i + 1)]);
    CHECK(joint_pmf<Rational>(w, theta, 4, 6, counts) == base);
  }
}

TEST_CASE("joint law contract violations") {
  const auto w = WeightSequence::log_series();
  const std::vector<int> bad_sum = {1, 1};
  CHECK_THROWS_AS(joint_pmf<Rational>(w, Rational(1), 2, 3, bad_sum), std::invalid_argument);
  const std::vector<int> bad_size = {1, 1, 1};
  CHECK_THROWS_AS(joint_pmf<Rational>(w, Rational(1), 2, 3, bad_size), std::invalid_argument);
  const std::vector<int> neg = {4, -1};
  CHECK_THROWS_AS(joint_pmf<Rational>(w, Rational(1), 2, 3, neg), std::invalid_argument);
}

TEST_CASE("single-component law") {
  const auto ls = WeightSequence::log_series();
  const auto uniform = component_pmf<Rational>(ls, Rational(1), 2, 2);
  CHECK(uniform == std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)});

  // degenerate generator: Binomial(k, 1/n)
  const auto lin = component_pmf<Rational>(WeightSequence::linear(), Rational(9, 4), 4, 6);
  for (int l = 0; l <= 6; ++l)
    CHECK(lin[std::size_t(l)] == Rational(big_binomial(6, std::uint64_t(l))) *
                                     rat_pow(Rational(1, 4), std::uint64_t(l)) *
                                     rat_pow(Rational(3, 4), std::uint64_t(6 - l)));

  // n = 1 degenerates to a point mass at k
  const auto point = component_pmf<Rational>(ls, Rational(1), 1, 5);
  CHECK(point[5] == Rational(1));

  // normalization in log space for a series-only family
  const auto pl = component_pmf<LogReal>(WeightSequence::polylog(2.0), LogReal::from_value(0.8), 3, 8);
  double mass = 0;
  for (const auto& v : pl) mass += v.value();
  CHECK(std::abs(mass - 1.0) < 1e-12);
}

TEST_CASE("partial-sum law") {
  const auto w = WeightSequence::cayley();
  const Rational theta(1, 2);
  const long n = 5;
  const int k = 6;
  const auto one = partialsum_pmf<Rational>(w, theta, n, 1, k);
  const auto comp = component_pmf<Rational>(w, theta, n, k);
  CHECK(one == comp);

  for (long m = 1; m < n; ++m) {
    const auto a = partialsum_pmf<Rational>(w, theta, n, m, k);
    const auto b = partialsum_pmf<Rational>(w, theta, n, n - m, k);
    Rational mass = 0;
    for (int l = 0; l <= k; ++l) {
      CHECK(a[std::size_t(l)] == b[std::size_t(k - l)]);  // box relabeling symmetry
      mass += a[std::size_t(l)];
    }
    CHECK(mass == 1);
  }

  const auto lin = partialsum_pmf<Rational>(WeightSequence::linear(), Rational(1), 5, 2, 4);
  for (int l = 0; l <= 4; ++l)
    CHECK(lin[std::size_t(l)] == Rational(big_binomial(4, std::uint64_t(l))) *
                                     rat_pow(Rational(2, 5), std::uint64_t(l)) *
                                     rat_pow(Rational(3, 5), std::uint64_t(4 - l)));

  CHECK_THROWS_AS(partialsum_pmf<Rational>(w, theta, 4, 4, 3), std::domain_error);
  CHECK_THROWS_AS(partialsum_pmf<Rational>(w, theta, 4, 0, 3), std::domain_error);
}

TEST_CASE("species-count law") {
  const auto ls = WeightSequence::log_series();

  // frozen from the enumeration oracle over the 10 compositions of 3 into 3
  const auto law = pnk_pmf<Rational>(ls, Rational(1), 3, 3);
  CHECK(law == std::vector<Rational>{Rational(0), Rational(3, 10), Rational(3, 5), Rational(1, 10)});
  const auto oracle = enumerate_oracle(ls, Rational(1), 3, 3);
  CHECK(oracle.pnk_law() == law);

  // p = 1 entry in closed form
  const Rational theta(2, 3);
  const auto law2 = pnk_pmf<Rational>(ls, theta, 4, 5);
  const Rational p1 = Rational(4) * sigma_table_exact(ls, theta, 5).v[5] /
                      sigma_table_exact(ls, Rational(4) * theta, 5).v[5];
  CHECK(law2[1] == p1);

  // two fair coin flips: distinct or not
  const auto lin = pnk_pmf<Rational>(WeightSequence::linear(), Rational(3), 2, 2);
  CHECK(lin == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1, 2)});

  // support truncates at k when k < n
  const auto small = pnk_pmf<Rational>(ls, Rational(1), 5, 3);
  CHECK(small.size() == 4);
  Rational mass = 0;
  for (const auto& v : small) mass += v;
  CHECK(mass == 1);

  // k = 0 is the point mass at p = 0
  const auto empty = pnk_pmf<Rational>(ls, Rational(1), 3, 0);
  CHECK(empty == std::vector<Rational>{Rational(1)});
}

TEST_CASE("species-count mean and variance") {
  const auto lin = pnk_mean_var_exact(WeightSequence::linear(), Rational(1), 2, 2);
  CHECK(lin.first == Rational(3, 2));
  CHECK(lin.second == Rational(1, 4));

  CHECK(pnk_mean_var(WeightSequence::log_series(), 1.0, 1, 5) ==
        std::pair<double, double>{1.0, 0.0});

  // against the law itself
  const auto w = WeightSequence::log_series();
  const Rational theta(3, 4);
  const auto law = pnk_pmf<Rational>(w, theta, 4, 6);
  Rational mean = 0, second = 0;
  for (std::size_t p = 0; p < law.size(); ++p) {
    mean += Rational(p) * law[p];
    second += Rational(p) * Rational(p) * law[p];
  }
  const auto mv = pnk_mean_var_exact(w, theta, 4, 6);
  CHECK(mv.first == mean);
  CHECK(mv.second == second - mean * mean);

  const auto mvd = pnk_mean_var(w, 0.75, 4, 6);
  CHECK(mvd.first == doctest::Approx(mean.convert_to<double>()).epsilon(1e-10));
  CHECK(mvd.second ==
        doctest::Approx((second - mean * mean).convert_to<double>()).epsilon(1e-10));

  const auto pgf = verify::pgf_identity();
  CHECK_MESSAGE(pgf.pass, pgf.detail);
}

TEST_CASE("frequency-of-frequencies law") {
  const auto ls = WeightSequence::log_series();
  const std::vector<int> two_singletons = {2, 0};
  const std::vector<int> one_pair = {0, 1};
  CHECK(aff_pmf<Rational>(ls, Rational(1), 2, 2, two_singletons, 2) == Rational(1, 3));
  CHECK(aff_pmf<Rational>(ls, Rational(1), 2, 2, one_pair, 1) == Rational(2, 3));

  // a_k = 1 alone matches the species-count law at p = 1
  const Rational theta(5, 4);
  std::vector<int> ak(6, 0);
  ak[5] = 1;
  CHECK(aff_pmf<Rational>(ls, theta, 3, 6, ak, 1) == pnk_pmf<Rational>(ls, theta, 3, 6)[1]);

  // total mass over integer partitions with at most n parts
  for (const auto& w : {WeightSequence::log_series(), WeightSequence::cayley()}) {
    for (const auto& [n, k] : std::vector<std::pair<long, int>>{{8, 8}, {5, 7}, {3, 8}}) {
      Rational mass = 0;
      for (PartitionIter it(k); !it.done(); it.next())
        mass += aff_pmf<Rational>(w, theta, n, k, it.aff(), it.part_count());
      CHECK(mass == 1);
    }
  }

  const std::vector<int> bad = {1, 1};
  CHECK_THROWS_AS(aff_pmf<Rational>(ls, theta, 3, 2, bad, 2), std::invalid_argument);
  CHECK_THROWS_AS(aff_pmf<Rational>(ls, theta, 3, 2, one_pair, 2), std::invalid_argument);
}

TEST_CASE("frequency factorial moments") {
  const auto w = WeightSequence::log_series();
  const Rational theta(1, 2);
  const long n = 3;
  const int k = 5;

  // single order: n times the component law
  const auto comp = component_pmf<Rational>(w, theta, n, k);
  for (int i = 1; i <= k; ++i) {
    std::vector<int> r(std::size_t(k), 0);
    r[std::size_t(i) - 1] = 1;
    CHECK(aff_factorial_moment<Rational>(w, theta, n, k, r) == Rational(n) * comp[std::size_t(i)]);
  }

  // sample-size conservation, in log space for a series-only family
  const auto ml = WeightSequence::mittag_leffler(0.5);
  const LogReal th = LogReal::from_value(0.8);
  double total = 0;
  for (int i = 1; i <= k; ++i) {
    std::vector<int> r(std::size_t(k), 0);
    r[std::size_t(i) - 1] = 1;
    total += double(i) * aff_factorial_moment<LogReal>(ml, th, n, k, r).value();
  }
  CHECK(std::abs(total - double(k)) < 1e-12 * k);

  const auto joint = verify::joint_moment_identity();
  CHECK_MESSAGE(joint.pass, joint.detail);
  const auto f14 = verify::expected_frequency_identity(3, 6);
  CHECK_MESSAGE(f14.pass, f14.detail);

  std::vector<int> too_many(std::size_t(k), 0);
  too_many[0] = int(n) + 1;
  CHECK_THROWS_AS(aff_factorial_moment<Rational>(w, theta, n, k, too_many),
                  std::invalid_argument);
}

TEST_CASE("box-count factorial moments") {
  const auto w = WeightSequence::log_series();
  const Rational theta(1);
  const long n = 2;
  const int k = 3;

  // full concentration: k! P(K(1) = k)
  const std::vector<int> full = {k, 0};
  const auto comp = component_pmf<Rational>(w, theta, n, k);
  CHECK(k_factorial_moment<Rational>(w, theta, n, k, full) ==
        Rational(big_factorial(std::uint64_t(k))) * comp[std::size_t(k)]);

  const std::vector<int> zeros = {0, 0};
  CHECK(k_factorial_moment<Rational>(w, theta, n, k, zeros) == Rational(1));

  const std::vector<int> mixed = {1, 1};
  const auto oracle = enumerate_oracle(w, theta, n, k);
  CHECK(k_factorial_moment<Rational>(w, theta, n, k, mixed) == oracle.k_factorial_moment(mixed));

  const std::vector<int> over = {3, 1};
  CHECK(k_factorial_moment<Rational>(w, theta, n, k, over) == Rational(0));

  CHECK_THROWS_AS(
      k_factorial_moment<Rational>(w, theta, 40, 40, std::vector<int>(40, 0), 1000),
      std::length_error);
}

TEST_CASE("enumeration oracle ground truth") {
  const auto eq = verify::oracle_equivalence(5);
  CHECK_MESSAGE(eq.pass, eq.detail);

  // aff factorial moments match too
  const auto w = WeightSequence::cayley();
  const auto law = enumerate_oracle(w, Rational(2), 3, 4);
  std::vector<int> r = {1, 1, 0, 0};
  CHECK(aff_factorial_moment<Rational>(w, Rational(2), 3, 4, r) == law.aff_factorial_moment(r));

  CHECK_THROWS_AS(enumerate_oracle(w, Rational(1), 50, 50), std::length_error);
}

TEST_CASE("succession recurrence for the logarithmic-series family") {
  const auto r = verify::succession_recurrence(12, 12);
  CHECK_MESSAGE(r.pass, r.detail);
}

TEST_CASE("sample statistics derivation") {
  const auto s = OccupancySample::from_counts(4, {2, 0, 3, 2});
  CHECK(s.k == 7);
  CHECK(s.p == 3);
  CHECK(s.aff == std::vector<int>{0, 2, 1, 0, 0, 0, 0});
  CHECK_THROWS_AS(OccupancySample::from_counts(2, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(OccupancySample::from_counts(2, {1, -1}), std::invalid_argument);
}

TEST_SUITE_END();
