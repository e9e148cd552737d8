#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gibbsocc/logreal.hpp"
#include "gibbsocc/rational.hpp"
#include "gibbsocc/scalar.hpp"

namespace gibbsocc {

enum class Family {
  log_series,        // phi(x) = -log(1-x),            phi_m = (m-1)!
  neg_bin_compound,  // phi(x) = (1-x)^-a - 1,         phi_m = (a)_m
  engen,             // phi(x) = 1 - (1-x)^a,          phi_m = a (1-a)_{m-1}
  cayley,            // phi = x e^phi,                 phi_m = m^{m-1}
  gen_binomial_tree, // phi = x (1+b phi)^a,           phi_m = {am}_{m-1} b^{m-1}
  polylog,           // phi(x) = Li_a(x),              phi_m = m! m^-a
  mittag_leffler,    // phi(x) = E_a(x) - 1,           phi_m = m! / Gamma(1+ma)
  bell_exp,          // phi(x) = e^x - 1,              phi_m = 1
  linear,            // phi(x) = x,                    phi_1 = 1, rest 0
  new_engen_like,    // phi(x) = x (1-x)^-a,           phi_m = m (a)_{m-1}
  binary_tree,       // phi = x (1 + phi^2/2),         odd coefficients only
  custom             // finite user-supplied list
};

// Membership in the class of generators whose derivative extends absolutely
// monotone to the whole half-line below the radius.
enum class SClass { yes, no, conjectured, unknown };

inline std::string_view sclass_name(SClass c) {
  switch (c) {
    case SClass::yes: return "yes";
    case SClass::no: return "no";
    case SClass::conjectured: return "conjectured";
    case SClass::unknown: return "unknown";
  }
  return "?";
}

namespace detail {
constexpr std::size_t kBinaryTreeCap = 256;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace detail

// One generator weight family: the coefficient sequence phi_m (m >= 1) of a
// local exponential generating function phi(x) = sum phi_m x^m / m!, with
// phi_1 > 0 and all phi_m >= 0. Immutable after construction; safe to share
// across threads.
class WeightSequence {
 public:
  static WeightSequence log_series() { return WeightSequence(Family::log_series); }

  static WeightSequence neg_bin_compound(Rational alpha) {
    if (alpha <= 0) throw std::invalid_argument("negbin: alpha must be > 0");
    WeightSequence w(Family::neg_bin_compound);
    w.alpha_ = std::move(alpha);
    w.alpha_d_ = w.alpha_.convert_to<double>();
    return w;
  }

  static WeightSequence engen(Rational alpha) {
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("engen: alpha must be in (0,1)");
    WeightSequence w(Family::engen);
    w.alpha_ = std::move(alpha);
    w.alpha_d_ = w.alpha_.convert_to<double>();
    return w;
  }

  static WeightSequence cayley() { return WeightSequence(Family::cayley); }

  static WeightSequence gen_binomial_tree(Rational a, Rational b) {
    const bool pos = (b > 0 && a >= 1);
    const bool neg = (a < 0 && b < 0);
    if (!pos && !neg)
      throw std::invalid_argument("tree: parameters must satisfy (b>0, a>=1) or (a<0, b<0)");
    WeightSequence w(Family::gen_binomial_tree);
    w.a_ = std::move(a);
    w.b_ = std::move(b);
    w.a_d_ = w.a_.convert_to<double>();
    w.b_d_ = w.b_.convert_to<double>();
    return w;
  }

  static WeightSequence polylog(double alpha) {
    if (!(alpha > 0)) throw std::invalid_argument("polylog: alpha must be > 0");
    WeightSequence w(Family::polylog);
    w.alpha_d_ = alpha;
    return w;
  }

  static WeightSequence mittag_leffler(double alpha) {
    if (!(alpha > 0 && alpha < 1))
      throw std::invalid_argument("mittagleffler: alpha must be in (0,1)");
    WeightSequence w(Family::mittag_leffler);
    w.alpha_d_ = alpha;
    return w;
  }

  static WeightSequence bell_exp() { return WeightSequence(Family::bell_exp); }
  static WeightSequence linear() { return WeightSequence(Family::linear); }

  static WeightSequence new_engen_like(Rational alpha) {
    if (alpha <= 0 || alpha > 1) throw std::invalid_argument("newengen: alpha must be in (0,1]");
    WeightSequence w(Family::new_engen_like);
    w.alpha_ = std::move(alpha);
    w.alpha_d_ = w.alpha_.convert_to<double>();
    return w;
  }

  static WeightSequence binary_tree() {
    WeightSequence w(Family::binary_tree);
    w.coeff_ = binary_tree_coefficients(detail::kBinaryTreeCap);
    return w;
  }

  static WeightSequence custom(std::vector<Rational> weights) {
    if (weights.empty()) throw std::invalid_argument("custom: weight list must be non-empty");
    if (weights.front() <= 0) throw std::invalid_argument("custom: phi_1 must be > 0");
    for (const auto& v : weights)
      if (v < 0) throw std::invalid_argument("custom: weights must be non-negative");
    WeightSequence w(Family::custom);
    w.custom_ = std::move(weights);
    return w;
  }

  // Parses family spec strings like "logseries", "negbin:alpha=0.5",
  // "tree:a=2,b=1". Custom lists can be given inline as
  // "custom:list=1,0.5,2"; file-backed lists are resolved by the caller.
  static WeightSequence parse(std::string_view spec);

  Family family() const { return fam_; }
  std::string name() const;

  // Convergence radius x0 of phi; +inf for entire generators.
  double radius() const {
    switch (fam_) {
      case Family::cayley: return std::exp(-1.0);
      case Family::gen_binomial_tree: {
        if (a_d_ == 1.0) return 1.0 / b_d_;  // (1-1/a)^(a-1) -> 1
        return std::pow(1.0 - 1.0 / a_d_, a_d_ - 1.0) / (a_d_ * b_d_);
      }
      case Family::mittag_leffler:
      case Family::bell_exp:
      case Family::linear:
      case Family::custom: return detail::kInf;
      case Family::binary_tree: return 1.0 / std::sqrt(2.0);
      default: return 1.0;
    }
  }

  SClass in_s() const {
    switch (fam_) {
      case Family::gen_binomial_tree: return SClass::conjectured;
      case Family::binary_tree: return SClass::no;
      case Family::custom: return SClass::unknown;
      default: return SClass::yes;
    }
  }

  // Conjectured membership is treated as true for computation.
  bool treat_as_s() const { return in_s() == SClass::yes || in_s() == SClass::conjectured; }

  bool levy_tail_support() const {
    return fam_ == Family::log_series || fam_ == Family::neg_bin_compound ||
           fam_ == Family::engen;
  }

  // The Levy measure has finite total mass (compound-Poisson subordinator,
  // atom at zero): the truncation cutoff may be taken to be 0.
  bool finite_activity() const { return fam_ == Family::neg_bin_compound; }
  double levy_total_mass() const { return finite_activity() ? 1.0 : detail::kInf; }

  bool has_exact() const {
    return fam_ != Family::polylog && fam_ != Family::mittag_leffler;
  }

  // Largest defined weight index (custom lists are finite and bound table
  // orders from above; no silent zero-padding past the end).
  std::size_t max_index() const {
    if (fam_ == Family::custom) return custom_.size();
    if (fam_ == Family::binary_tree) return detail::kBinaryTreeCap;
    return std::numeric_limits<std::size_t>::max();
  }

  double log_phi(std::uint64_t m) const;
  Rational exact_phi(std::uint64_t m) const;

  double phi_eval(double x) const;
  double phi_prime(double x) const;

  double levy_tail(double t) const;
  double levy_tail_inverse(double u) const;
  // expected mass of jumps below t: integral of s pi(ds) over (0, t]
  double small_jump_mass(double t) const;

  const Rational& alpha() const { return alpha_; }
  const Rational& tree_a() const { return a_; }
  const Rational& tree_b() const { return b_; }
  double alpha_value() const { return alpha_d_; }

 private:
  explicit WeightSequence(Family f) : fam_(f) {}

  void check_range(double x) const {
    const double x0 = radius();
    const bool ok = treat_as_s() ? (x < x0) : (x > -x0 && x < x0);
    if (!ok) throw std::domain_error("phi_eval: x outside the domain of phi");
  }

  static std::vector<Rational> binary_tree_coefficients(std::size_t cap) {
    // c_m = [x^m] phi from phi = x + (x/2) phi^2
    std::vector<Rational> c(cap + 1, Rational(0));
    c[1] = 1;
    for (std::size_t m = 2; m <= cap; ++m) {
      Rational s = 0;
      for (std::size_t i = 1; i + 1 < m; ++i) s += c[i] * c[m - 1 - i];
      c[m] = s / 2;
    }
    return c;
  }

  double polylog_series(double x, double order) const;
  double polylog_integral(double x, double order) const;         // integral of Li_order
  double polylog_integral_prime(double x, double order) const;   // derivative route

  Family fam_;
  Rational alpha_, a_, b_;
  double alpha_d_ = 0, a_d_ = 0, b_d_ = 0;
  std::vector<Rational> custom_;
  std::vector<Rational> coeff_;  // binary tree series coefficients
};

inline double WeightSequence::log_phi(std::uint64_t m) const {
  if (m < 1) throw std::domain_error("phi_m: m must be >= 1");
  switch (fam_) {
    case Family::log_series: return std::lgamma(double(m));
    case Family::neg_bin_compound: return std::lgamma(alpha_d_ + double(m)) - std::lgamma(alpha_d_);
    case Family::engen:
      return std::log(alpha_d_) + std::lgamma(double(m) - alpha_d_) - std::lgamma(1.0 - alpha_d_);
    case Family::cayley: return double(m - 1) * std::log(double(m));
    case Family::gen_binomial_tree:
      if (a_d_ >= 1) {
        const double am = a_d_ * double(m);
        return std::lgamma(am + 1.0) - std::lgamma(am - double(m) + 2.0) +
               double(m - 1) * std::log(b_d_);
      }
      return log_rational(exact_phi(m));
    case Family::polylog: return log_factorial(m) - alpha_d_ * std::log(double(m));
    case Family::mittag_leffler: return log_factorial(m) - std::lgamma(1.0 + double(m) * alpha_d_);
    case Family::bell_exp: return 0.0;
    case Family::linear: return m == 1 ? 0.0 : kNegInf;
    case Family::new_engen_like:
      return std::log(double(m)) + std::lgamma(alpha_d_ + double(m - 1)) - std::lgamma(alpha_d_);
    case Family::binary_tree:
    case Family::custom: return log_rational(exact_phi(m));
  }
  throw std::logic_error("unreachable");
}

inline Rational WeightSequence::exact_phi(std::uint64_t m) const {
  if (m < 1) throw std::domain_error("phi_m: m must be >= 1");
  switch (fam_) {
    case Family::log_series: return Rational(big_factorial(m - 1));
    case Family::neg_bin_compound: return rat_rising(alpha_, m);
    case Family::engen: return alpha_ * rat_rising(Rational(1) - alpha_, m - 1);
    case Family::cayley: {
      BigInt v = 1;
      for (std::uint64_t i = 1; i < m; ++i) v *= m;
      return Rational(v);
    }
    case Family::gen_binomial_tree: {
      const Rational v = rat_falling(a_ * Rational(m), m - 1) * rat_pow(b_, m - 1);
      if (v < 0) throw std::domain_error("tree: negative weight encountered");
      return v;
    }
    case Family::bell_exp: return Rational(1);
    case Family::linear: return Rational(m == 1 ? 1 : 0);
    case Family::new_engen_like: return Rational(m) * rat_rising(alpha_, m - 1);
    case Family::binary_tree:
      if (m > detail::kBinaryTreeCap)
        throw std::length_error("binarytree: weights computed up to m = 256 only");
      return coeff_[m] * Rational(big_factorial(m));
    case Family::custom:
      if (m > custom_.size()) throw std::out_of_range("custom: weights exhausted at m = " + std::to_string(m));
      return custom_[m - 1];
    case Family::polylog:
    case Family::mittag_leffler:
      throw std::domain_error("no exact rational form for this family");
  }
  throw std::logic_error("unreachable");
}

inline double WeightSequence::polylog_series(double x, double order) const {
  double acc = 0;
  double xm = 1;
  for (std::uint64_t m = 1; m < 10'000'000; ++m) {
    xm *= x;
    const double term = xm * std::pow(double(m), -order);
    acc += term;
    if (std::abs(term) < 1e-16 * (std::abs(acc) + 1e-300) && m > 8) return acc;
  }
  throw std::runtime_error("polylog: series did not converge");
}

inline double WeightSequence::polylog_integral(double x, double order) const {
  // Li_s(x) = x/Gamma(s) * int_0^1 (-log u)^(s-1) / (1 - x u) du, any x < 1
  boost::math::quadrature::tanh_sinh<double> integ;
  const double val = integ.integrate(
      [&](double u) { return std::pow(-std::log(u), order - 1.0) / (1.0 - x * u); }, 0.0, 1.0,
      1e-12);
  return x * val / std::tgamma(order);
}

inline double WeightSequence::polylog_integral_prime(double x, double order) const {
  boost::math::quadrature::tanh_sinh<double> integ;
  const double val = integ.integrate(
      [&](double u) {
        const double d = 1.0 - x * u;
        return std::pow(-std::log(u), order - 1.0) / (d * d);
      },
      0.0, 1.0, 1e-12);
  return val / std::tgamma(order);
}

inline double WeightSequence::phi_eval(double x) const {
  check_range(x);
  if (x == 0) return 0.0;
  switch (fam_) {
    case Family::log_series: return -std::log1p(-x);
    case Family::neg_bin_compound: return std::expm1(-alpha_d_ * std::log1p(-x));
    case Family::engen: return -std::expm1(alpha_d_ * std::log1p(-x));
    case Family::cayley: return -boost::math::lambert_w0(-x);
    case Family::gen_binomial_tree: {
      // Newton continuation for y = x (1 + b y)^a along 0 -> x
      double y = 0;
      const int steps = 64;
      for (int s = 1; s <= steps; ++s) {
        const double xs = x * double(s) / steps;
        for (int it = 0; it < 100; ++it) {
          const double base = 1.0 + b_d_ * y;
          if (base <= 0) throw std::domain_error("tree: left principal branch");
          const double g = std::pow(base, a_d_);
          const double f = y - xs * g;
          const double fp = 1.0 - xs * a_d_ * b_d_ * g / base;
          const double step = f / fp;
          y -= step;
          if (std::abs(step) < 1e-15 * (1.0 + std::abs(y))) break;
        }
      }
      return y;
    }
    case Family::polylog:
      return std::abs(x) <= 0.95 ? polylog_series(x, alpha_d_) : polylog_integral(x, alpha_d_);
    case Family::mittag_leffler: {
      double acc = 0, term;
      for (std::uint64_t m = 1; m < 1'000'000; ++m) {
        term = std::exp(double(m) * std::log(std::abs(x)) - std::lgamma(1.0 + double(m) * alpha_d_));
        if (x < 0 && (m & 1)) term = -term;
        acc += term;
        if (std::abs(term) < 1e-16 * (std::abs(acc) + 1e-300) && double(m) > std::abs(x)) return acc;
      }
      throw std::runtime_error("mittagleffler: series did not converge");
    }
    case Family::bell_exp: return std::expm1(x);
    case Family::linear: return x;
    case Family::new_engen_like: return x * std::exp(-alpha_d_ * std::log1p(-x));
    case Family::binary_tree: return 2.0 * x / (1.0 + std::sqrt(1.0 - 2.0 * x * x));
    case Family::custom: {
      double acc = 0;
      for (std::size_t m = custom_.size(); m >= 1; --m)
        acc = acc * x + custom_[m - 1].convert_to<double>() / std::exp(log_factorial(m));
      return acc * x;
    }
  }
  throw std::logic_error("unreachable");
}

inline double WeightSequence::phi_prime(double x) const {
  check_range(x);
  switch (fam_) {
    case Family::log_series: return 1.0 / (1.0 - x);
    case Family::neg_bin_compound: return alpha_d_ * std::exp(-(alpha_d_ + 1.0) * std::log1p(-x));
    case Family::engen: return alpha_d_ * std::exp((alpha_d_ - 1.0) * std::log1p(-x));
    case Family::cayley: {
      if (std::abs(x) < 1e-10) return 1.0 + 2.0 * x;
      const double p = phi_eval(x);
      return p / (x * (1.0 - p));
    }
    case Family::gen_binomial_tree: {
      const double p = phi_eval(x);
      const double base = 1.0 + b_d_ * p;
      const double g = std::pow(base, a_d_);
      return g / (1.0 - x * a_d_ * b_d_ * g / base);
    }
    case Family::polylog:
      if (std::abs(x) < 1e-12) return 1.0;
      if (x <= -0.95) return polylog_integral_prime(x, alpha_d_);
      return polylog_series(x, alpha_d_ - 1.0) / x;
    case Family::mittag_leffler: {
      double acc = 0, term;
      for (std::uint64_t m = 1; m < 1'000'000; ++m) {
        term = std::exp(double(m - 1) * std::log(std::abs(x) + 1e-300) + std::log(double(m)) -
                        std::lgamma(1.0 + double(m) * alpha_d_));
        if (x < 0 && !(m & 1)) term = -term;
        acc += term;
        if (std::abs(term) < 1e-16 * (std::abs(acc) + 1e-300) && double(m) > std::abs(x)) return acc;
      }
      throw std::runtime_error("mittagleffler: series did not converge");
    }
    case Family::bell_exp: return std::exp(x);
    case Family::linear: return 1.0;
    case Family::new_engen_like: {
      const double f = std::exp(-alpha_d_ * std::log1p(-x));
      return f * (1.0 + alpha_d_ * x / (1.0 - x));
    }
    case Family::binary_tree: {
      const double p = phi_eval(x);
      return (1.0 + p * p / 2.0) / (1.0 - x * p);
    }
    case Family::custom: {
      double acc = 0;
      for (std::size_t m = custom_.size(); m >= 1; --m)
        acc = acc * x + custom_[m - 1].convert_to<double>() / std::exp(log_factorial(m - 1));
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

inline double WeightSequence::levy_tail(double t) const {
  switch (fam_) {
    case Family::log_series:
      if (!(t > 0)) throw std::domain_error("levy_tail: t must be > 0");
      return boost::math::expint(1, t);  // E1(t)
    case Family::neg_bin_compound:
      if (t < 0) throw std::domain_error("levy_tail: t must be >= 0");
      if (t == 0) return 1.0;  // total probability mass of the Gamma(alpha,1) jump law
      return boost::math::gamma_q(alpha_d_, t);
    case Family::engen: {
      if (!(t > 0)) throw std::domain_error("levy_tail: t must be > 0");
      // alpha/Gamma(1-alpha) * int_t^inf s^(-alpha-1) e^-s ds, reduced by one
      // step of the incomplete-gamma recurrence
      const double a = alpha_d_;
      return std::exp(-a * std::log(t) - t - std::lgamma(1.0 - a)) -
             boost::math::gamma_q(1.0 - a, t);
    }
    default: throw std::domain_error("no Levy tail implemented for family " + name());
  }
}

inline double WeightSequence::levy_tail_inverse(double u) const {
  if (!levy_tail_support()) throw std::domain_error("no Levy tail implemented for family " + name());
  if (!(u > 0)) throw std::domain_error("levy_tail_inverse: u must be > 0");
  if (finite_activity()) {
    if (u > levy_total_mass()) throw std::domain_error("levy_tail_inverse: u above total mass");
    if (u == levy_total_mass()) return 0.0;
  }
  double lo = 1.0, hi = 1.0;
  while (levy_tail(lo) < u) {
    lo /= 2;
    if (lo < 1e-300) throw std::domain_error("levy_tail_inverse: u out of range");
  }
  while (levy_tail(hi) > u) {
    hi *= 2;
    if (hi > 1e300) throw std::domain_error("levy_tail_inverse: u out of range");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    (levy_tail(mid) >= u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double WeightSequence::small_jump_mass(double t) const {
  if (t < 0) throw std::domain_error("small_jump_mass: t must be >= 0");
  switch (fam_) {
    case Family::log_series: return -std::expm1(-t);  // int_0^t e^-s ds
    case Family::neg_bin_compound: return alpha_d_ * boost::math::gamma_p(alpha_d_ + 1.0, t);
    case Family::engen: return alpha_d_ * boost::math::gamma_p(1.0 - alpha_d_, t);
    default: throw std::domain_error("no Levy tail implemented for family " + name());
  }
}

inline std::string WeightSequence::name() const {
  switch (fam_) {
    case Family::log_series: return "logseries";
    case Family::neg_bin_compound: return "negbin:alpha=" + rational_string(alpha_);
    case Family::engen: return "engen:alpha=" + rational_string(alpha_);
    case Family::cayley: return "cayley";
    case Family::gen_binomial_tree:
      return "tree:a=" + rational_string(a_) + ",b=" + rational_string(b_);
    case Family::polylog: return "polylog:alpha=" + std::to_string(alpha_d_);
    case Family::mittag_leffler: return "mittagleffler:alpha=" + std::to_string(alpha_d_);
    case Family::bell_exp: return "bell";
    case Family::linear: return "linear";
    case Family::new_engen_like: return "newengen:alpha=" + rational_string(alpha_);
    case Family::binary_tree: return "binarytree";
    case Family::custom: return "custom";
  }
  return "?";
}

namespace detail {
inline std::vector<std::pair<std::string, std::string>> parse_kv(std::string_view s) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    const auto item = s.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("family spec: expected key=value, got '" + std::string(item) + "'");
    kv.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    pos = comma + 1;
  }
  return kv;
}
}  // namespace detail

inline WeightSequence WeightSequence::parse(std::string_view spec) {
  std::string head(spec);
  std::string args;
  if (auto colon = spec.find(':'); colon != std::string_view::npos) {
    head = std::string(spec.substr(0, colon));
    args = std::string(spec.substr(colon + 1));
  }
  auto need_alpha = [&]() -> Rational {
    for (auto& [k, v] : detail::parse_kv(args))
      if (k == "alpha") return parse_rational(v);
    throw std::invalid_argument("family spec: missing alpha parameter");
  };
  if (head == "logseries") return log_series();
  if (head == "negbin") return neg_bin_compound(need_alpha());
  if (head == "engen") return engen(need_alpha());
  if (head == "cayley") return cayley();
  if (head == "tree") {
    Rational a, b;
    bool ha = false, hb = false;
    for (auto& [k, v] : detail::parse_kv(args)) {
      if (k == "a") a = parse_rational(v), ha = true;
      if (k == "b") b = parse_rational(v), hb = true;
    }
    if (!ha || !hb) throw std::invalid_argument("tree: need a= and b=");
    return gen_binomial_tree(a, b);
  }
  if (head == "polylog") return polylog(need_alpha().convert_to<double>());
  if (head == "mittagleffler") return mittag_leffler(need_alpha().convert_to<double>());
  if (head == "bell") return bell_exp();
  if (head == "linear") return linear();
  if (head == "newengen") return new_engen_like(need_alpha());
  if (head == "binarytree") return binary_tree();
  if (head == "custom") {
    for (auto& [k, v] : detail::parse_kv(args)) {
      if (k == "list") {
        std::vector<Rational> ws;
        std::size_t pos = 0;
        std::string inner = v;
        // list entries are separated by ';' to coexist with k=v commas
        while (pos <= inner.size()) {
          auto semi = inner.find(';', pos);
          if (semi == std::string::npos) semi = inner.size();
          ws.push_back(parse_rational(std::string_view(inner).substr(pos, semi - pos)));
          pos = semi + 1;
          if (pos > inner.size()) break;
        }
        return custom(std::move(ws));
      }
      if (k == "file")
        throw std::invalid_argument("custom:file=... must be resolved by the caller");
    }
    throw std::invalid_argument("custom: need list=w1;w2;... or file=...");
  }
  throw std::invalid_argument("unknown family '" + std::string(spec) + "'");
}

// Weight access in either numeric mode.
template <class S>
S phi_scalar(const WeightSequence& w, std::uint64_t m) {
  if constexpr (num_ops<S>::exact)
    return w.exact_phi(m);
  else
    return LogReal::from_log(w.log_phi(m));
}

}  // namespace gibbsocc
