#include <doctest.h>

#include <cmath>
#include <set>

#include "gibbsocc/compositions.hpp"
#include "gibbsocc/logreal.hpp"
#include "gibbsocc/rational.hpp"
#include "gibbsocc/rng.hpp"

using namespace gibbsocc;

TEST_SUITE_BEGIN("numeric");

TEST_CASE("log_sum_exp hits its precision target") {
  // 1e4 equal terms; documented target is 1e-12 relative
  std::vector<double> logs(10000, 0.0);
  const double got = log_sum_exp(logs);
  CHECK(std::abs(got - std::log(10000.0)) < 1e-12 * std::log(10000.0));

  // random magnitudes against exact rational summation
  RngStream rng(11);
  std::vector<double> ls;
  Rational exact = 0;
  for (int i = 0; i < 2000; ++i) {
    const int v = int(rng.next_u64() % 1000) + 1;
    exact += Rational(v);
    ls.push_back(std::log(double(v)));
  }
  CHECK(std::abs(log_sum_exp(ls) - log_rational(exact)) < 1e-12);
}

TEST_CASE("LogReal zero is absorbing and additive identity") {
  const LogReal zero;
  const LogReal two = LogReal::from_value(2.0);
  CHECK((zero * two).is_zero());
  CHECK((zero + two).value() == doctest::Approx(2.0));
  CHECK((two * two).value() == doctest::Approx(4.0));
  CHECK((two / two).value() == doctest::Approx(1.0));
  CHECK(zero < two);
}

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("7/3") == Rational(7, 3));
  CHECK(parse_rational("2.5") == Rational(5, 2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-4.25e2") == Rational(-425));
  CHECK(parse_rational("10") == Rational(10));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK(rational_string(Rational(10, 4)) == "5/2");
  CHECK(rational_string(Rational(6, 2)) == "3");
}

TEST_CASE("big integer logarithms") {
  BigInt big = 1;
  big <<= 1000;
  CHECK(std::abs(log_big_int(big) - 1000.0 * M_LN2) < 1e-10 * 1000.0 * M_LN2);
  CHECK(std::abs(log_big_int(big_factorial(100)) - std::lgamma(101.0)) < 1e-10);
  CHECK(log_rational(Rational(0)) == kNegInf);
  CHECK(std::abs(log_rational(Rational(1, 3)) + std::log(3.0)) < 1e-14);
}

TEST_CASE("exact combinatorial helpers") {
  CHECK(big_binomial(10, 3) == 120);
  CHECK(big_binomial(3, 7) == 0);
  CHECK(big_falling(5, 2) == 20);
  CHECK(big_falling(3, 5) == 0);
  CHECK(rat_rising(Rational(1, 2), 3) == Rational(15, 8));
  CHECK(rat_falling(Rational(5, 2), 4) == Rational(5 * 3 * 1 * -1, 16));
  CHECK(rat_pow(Rational(2, 3), 3) == Rational(8, 27));
}

TEST_CASE("compositions iterate in descending lexicographic order") {
  std::vector<std::vector<int>> all;
  for (CompositionIter it(2, 3); !it.done(); it.next()) all.push_back(it.value());
  const std::vector<std::vector<int>> expected = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                                  {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  CHECK(all == expected);

  long count = 0;
  std::set<std::vector<int>> distinct;
  for (CompositionIter it(4, 3); !it.done(); it.next()) {
    ++count;
    distinct.insert(it.value());
    int sum = 0;
    for (int v : it.value()) sum += v;
    CHECK(sum == 4);
  }
  CHECK(count == 15);  // C(6,2)
  CHECK(composition_count(4, 3) == 15);
  CHECK(long(distinct.size()) == count);
}

TEST_CASE("positive compositions") {
  long count = 0;
  for (PositiveCompositionIter it(6, 3); !it.done(); it.next()) {
    ++count;
    for (int v : it.value()) CHECK(v >= 1);
  }
  CHECK(count == 10);  // C(5,2)
}

TEST_CASE("partitions iterate with consistent frequency vectors") {
  std::vector<std::vector<int>> parts;
  for (PartitionIter it(4); !it.done(); it.next()) parts.push_back(it.parts());
  const std::vector<std::vector<int>> expected = {{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
  CHECK(parts == expected);

  long count = 0;
  for (PartitionIter it(6); !it.done(); it.next()) {
    ++count;
    const auto aff = it.aff();
    int k = 0, p = 0;
    for (std::size_t i = 0; i < aff.size(); ++i) {
      k += int(i + 1) * aff[i];
      p += aff[i];
    }
    CHECK(k == 6);
    CHECK(p == it.part_count());
  }
  CHECK(count == 11);  // p(6)
}

TEST_SUITE_END();
