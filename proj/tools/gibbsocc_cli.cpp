// Command-line front end: pmf tables, moments, estimators, seeded samplers,
// and the identity / Monte Carlo verification suites.
//
// Exit codes: 0 success, 1 verification-suite failure, 2 usage/domain error
// (with a machine-readable JSON error on stderr).

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gibbsocc/estimate.hpp"
#include "gibbsocc/occupancy.hpp"
#include "gibbsocc/sample.hpp"
#include "gibbsocc/serialize.hpp"
#include "gibbsocc/starlimit.hpp"
#include "gibbsocc/verify.hpp"

namespace {

using namespace gibbsocc;

std::string double_repr(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string item = s.substr(pos, comma - pos);
    if (!item.empty()) out.push_back(std::stoi(item));
    pos = comma + 1;
    if (pos > s.size()) break;
  }
  return out;
}

struct PmfOptions {
  std::string family;
  std::string theta = "1";
  std::string gamma = "1";
  long n = 1;
  int k = 1;
  long m = 1;
  std::string counts, aff;
  bool exact = false;
  std::string format = "csv";
};

void emit_vector_pmf(const PmfOptions& opt, const std::string& label,
                     const std::vector<Rational>& exact_law, const std::vector<double>& law) {
  if (opt.format == "json") {
    Json j;
    j[label] = Json::array();
    for (std::size_t i = 0; i < (opt.exact ? exact_law.size() : law.size()); ++i) {
      Json row;
      row[label] = i;
      if (opt.exact)
        row["probability"] = rational_string(exact_law[i]);
      else
        row["probability"] = law[i];
      j[label].push_back(row);
    }
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << label << ",probability\n";
  for (std::size_t i = 0; i < (opt.exact ? exact_law.size() : law.size()); ++i) {
    if (opt.exact)
      std::cout << i << "," << rational_string(exact_law[i]) << "\n";
    else
      std::cout << i << "," << double_repr(law[i]) << "\n";
  }
}

void emit_scalar(const PmfOptions& opt, const std::string& label, const Rational& exact_v,
                 double v) {
  if (opt.format == "json") {
    Json j;
    if (opt.exact)
      j[label] = rational_string(exact_v);
    else
      j[label] = v;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << label << "\n";
  std::cout << (opt.exact ? rational_string(exact_v) : double_repr(v)) << "\n";
}

std::vector<double> to_doubles(const std::vector<LogReal>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.value());
  return out;
}

int run_pmf(const std::string& sub, const PmfOptions& opt) {
  const auto w = family_from_spec(opt.family);
  const Rational theta_q = parse_rational(opt.theta);
  const Rational gamma_q = parse_rational(opt.gamma);
  const double theta_d = theta_q.convert_to<double>();
  const double gamma_d = gamma_q.convert_to<double>();
  const LogReal theta_l = LogReal::from_value(theta_d);
  const LogReal gamma_l = LogReal::from_value(gamma_d);

  if (sub == "joint") {
    const auto counts = parse_int_list(opt.counts);
    int k = 0;
    for (int c : counts) k += c;
    if (opt.exact)
      emit_scalar(opt, "probability",
                  joint_pmf<Rational>(w, theta_q, long(counts.size()), k, counts), 0);
    else
      emit_scalar(opt, "probability", 0,
                  joint_pmf<LogReal>(w, theta_l, long(counts.size()), k, counts).value());
    return 0;
  }
  if (sub == "component") {
    if (opt.exact)
      emit_vector_pmf(opt, "l", component_pmf<Rational>(w, theta_q, opt.n, opt.k), {});
    else
      emit_vector_pmf(opt, "l", {}, to_doubles(component_pmf<LogReal>(w, theta_l, opt.n, opt.k)));
    return 0;
  }
  if (sub == "partial") {
    if (opt.exact)
      emit_vector_pmf(opt, "l", partialsum_pmf<Rational>(w, theta_q, opt.n, opt.m, opt.k), {});
    else
      emit_vector_pmf(opt, "l", {},
                      to_doubles(partialsum_pmf<LogReal>(w, theta_l, opt.n, opt.m, opt.k)));
    return 0;
  }
  if (sub == "pnk") {
    if (opt.exact)
      emit_vector_pmf(opt, "p", pnk_pmf<Rational>(w, theta_q, opt.n, opt.k), {});
    else
      emit_vector_pmf(opt, "p", {}, to_doubles(pnk_pmf<LogReal>(w, theta_l, opt.n, opt.k)));
    return 0;
  }
  if (sub == "aff") {
    const auto aff = parse_int_list(opt.aff);
    int p = 0;
    for (int a : aff) p += a;
    if (opt.exact)
      emit_scalar(opt, "probability", aff_pmf<Rational>(w, theta_q, opt.n, opt.k, aff, p), 0);
    else
      emit_scalar(opt, "probability", 0,
                  aff_pmf<LogReal>(w, theta_l, opt.n, opt.k, aff, p).value());
    return 0;
  }
  if (sub == "star-pnk") {
    if (opt.exact)
      emit_vector_pmf(opt, "p", star_pnk_pmf<Rational>(w, gamma_q, opt.k), {});
    else
      emit_vector_pmf(opt, "p", {}, to_doubles(star_pnk_pmf<LogReal>(w, gamma_l, opt.k)));
    return 0;
  }
  if (sub == "star-aff") {
    const auto aff = parse_int_list(opt.aff);
    if (opt.exact)
      emit_scalar(opt, "probability", star_aff_pmf<Rational>(w, gamma_q, aff), 0);
    else
      emit_scalar(opt, "probability", 0, star_aff_pmf<LogReal>(w, gamma_l, aff).value());
    return 0;
  }
  throw std::invalid_argument("unknown pmf kind '" + sub + "'");
}

int run_moments(const std::string& sub, const PmfOptions& opt, const std::string& orders) {
  const auto w = family_from_spec(opt.family);
  const Rational theta_q = parse_rational(opt.theta);
  const Rational gamma_q = parse_rational(opt.gamma);
  const auto ord = parse_int_list(orders);
  if (sub == "aff") {
    if (opt.exact)
      emit_scalar(opt, "moment", aff_factorial_moment<Rational>(w, theta_q, opt.n, opt.k, ord), 0);
    else
      emit_scalar(opt, "moment", 0,
                  aff_factorial_moment<LogReal>(
                      w, LogReal::from_value(theta_q.convert_to<double>()), opt.n, opt.k, ord)
                      .value());
    return 0;
  }
  if (sub == "k") {
    if (opt.exact)
      emit_scalar(opt, "moment", k_factorial_moment<Rational>(w, theta_q, opt.n, opt.k, ord), 0);
    else
      emit_scalar(opt, "moment", 0,
                  k_factorial_moment<LogReal>(
                      w, LogReal::from_value(theta_q.convert_to<double>()), opt.n, opt.k, ord)
                      .value());
    return 0;
  }
  if (sub == "star-aff") {
    if (opt.exact)
      emit_scalar(opt, "moment", star_aff_moment<Rational>(w, gamma_q, opt.k, ord), 0);
    else
      emit_scalar(opt, "moment", 0,
                  star_aff_moment<LogReal>(
                      w, LogReal::from_value(gamma_q.convert_to<double>()), opt.k, ord)
                      .value());
    return 0;
  }
  throw std::invalid_argument("unknown moment kind '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-Poisson occupancy models: exact laws, estimators, samplers"};
  app.require_subcommand(1);

  PmfOptions opt;
  std::string orders;
  std::string method = "mle";
  int P = 1;
  std::uint64_t seed = 0;
  long runs = 1;
  double cutoff = 1e-3;
  double x_param = 0;
  std::string statistic = "all-same";
  int k_max = 10;
  std::string verify_family;

  auto add_common = [&](CLI::App* cmd, bool star) {
    cmd->add_option("--family", opt.family, "weight family spec")->required();
    if (star)
      cmd->add_option("--gamma", opt.gamma, "diversity parameter");
    else
      cmd->add_option("--theta", opt.theta, "box parameter");
    cmd->add_option("--n", opt.n, "number of boxes");
    cmd->add_option("--k", opt.k, "sample size");
    cmd->add_flag("--exact", opt.exact, "exact rational output");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  // pmf
  auto* pmf = app.add_subcommand("pmf", "exact distribution tables");
  std::vector<std::string> pmf_kinds = {"joint", "component", "partial", "pnk",
                                        "aff",   "star-pnk",  "star-aff"};
  std::vector<CLI::App*> pmf_subs;
  for (const auto& kind : pmf_kinds) {
    auto* sc = pmf->add_subcommand(kind);
    const bool star = kind.rfind("star-", 0) == 0;
    add_common(sc, star);
    if (!star) sc->add_option("--gamma", opt.gamma, "diversity parameter");
    sc->add_option("--m", opt.m, "prefix length for partial sums");
    sc->add_option("--counts", opt.counts, "comma-separated occupancy vector");
    sc->add_option("--aff", opt.aff, "comma-separated frequency-of-frequencies vector");
    pmf_subs.push_back(sc);
  }
  pmf->require_subcommand(1);

  // moments
  auto* moments = app.add_subcommand("moments", "falling factorial moments");
  for (const auto& kind : {"aff", "k", "star-aff"}) {
    auto* sc = moments->add_subcommand(kind);
    add_common(sc, std::string(kind).rfind("star-", 0) == 0);
    sc->add_option("--orders", orders, "comma-separated factorial orders")->required();
  }
  moments->require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "estimators from (k, P)");
  for (const auto& kind : {"n", "gamma"}) {
    auto* sc = est->add_subcommand(kind);
    sc->add_option("--family", opt.family)->required();
    sc->add_option("--theta", opt.theta);
    sc->add_option("--k", opt.k)->required();
    sc->add_option("--P", P)->required();
    sc->add_option("--method", method, "mle | approx | ratio");
  }
  est->require_subcommand(1);

  // sample
  auto* smp = app.add_subcommand("sample", "seeded stochastic samplers");
  for (const auto& kind : {"occupancy", "xi", "subordinator", "star-biased"}) {
    auto* sc = smp->add_subcommand(kind);
    sc->add_option("--family", opt.family)->required();
    sc->add_option("--theta", opt.theta);
    sc->add_option("--gamma", opt.gamma);
    sc->add_option("--n", opt.n);
    sc->add_option("--k", opt.k);
    sc->add_option("--x", x_param, "abundance tilt; 0 tunes automatically");
    sc->add_option("--seed", seed, "RNG seed (no wall-clock seeding)");
    sc->add_option("--runs", runs, "number of draws / Monte Carlo runs");
    sc->add_option("--cutoff", cutoff, "subordinator truncation cutoff");
    sc->add_option("--statistic", statistic, "all-same | distinct=<p>");
    sc->add_option("--method", method, "occupancy sampler: sequential | rejection");
    sc->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));
  }
  smp->require_subcommand(1);

  // verify
  auto* ver = app.add_subcommand("verify", "identity and Monte Carlo cross-validation");
  auto* vid = ver->add_subcommand("identities");
  vid->add_option("--k-max", k_max, "maximum order for the identity suite");
  vid->add_option("--family", verify_family, "extra family to validate");
  auto* vmc = ver->add_subcommand("montecarlo");
  vmc->add_option("--seed", seed);
  vmc->add_option("--runs", runs);
  ver->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << error_json("usage", e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (pmf->parsed()) {
      for (std::size_t i = 0; i < pmf_subs.size(); ++i)
        if (pmf_subs[i]->parsed()) return run_pmf(pmf_kinds[i], opt);
    }
    if (moments->parsed()) {
      for (auto* sc : moments->get_subcommands())
        return run_moments(sc->get_name(), opt, orders);
    }
    if (est->parsed()) {
      const auto w = family_from_spec(opt.family);
      const auto* sc = est->get_subcommands().front();
      Estimate e;
      if (sc->get_name() == "n") {
        const double theta = parse_rational(opt.theta).convert_to<double>();
        const SampleSummary s(opt.k, P);
        if (method == "mle")
          e = mle_n(w, theta, s);
        else if (method == "approx")
          e = approx_mle_n(w, theta, s);
        else if (method == "ratio")
          e = alt_n(w, theta, s);
        else
          throw std::invalid_argument("unknown method '" + method + "'");
      } else {
        const SampleSummary s(opt.k, P);
        if (method == "mle")
          e = mle_gamma(w, s);
        else if (method == "ratio")
          e = alt_gamma(w, s);
        else
          throw std::invalid_argument("unknown method '" + method + "'");
      }
      std::cout << estimate_json(e).dump(2) << "\n";
      return 0;
    }
    if (smp->parsed()) {
      const auto w = family_from_spec(opt.family);
      const auto* sc = smp->get_subcommands().front();
      const std::string kind = sc->get_name();
      const double theta = parse_rational(opt.theta).convert_to<double>();
      const double gamma = parse_rational(opt.gamma).convert_to<double>();
      if (kind == "occupancy") {
        RngStream rng(seed);
        std::cout << "draw,counts,p\n";
        if (method == "rejection" || method == "rej") {
          const RejectionSampler sampler =
              x_param > 0 ? RejectionSampler(w, theta, opt.n, opt.k, x_param)
                          : RejectionSampler(w, theta, opt.n, opt.k);
          for (long r = 0; r < runs; ++r) {
            const auto s = sampler.draw(rng);
            std::cout << r << ",\"";
            for (std::size_t i = 0; i < s.counts.size(); ++i)
              std::cout << (i ? " " : "") << s.counts[i];
            std::cout << "\"," << s.p << "\n";
          }
        } else {
          const OccupancySampler sampler(w, theta, opt.n, opt.k);
          for (long r = 0; r < runs; ++r) {
            const auto s = sampler.draw(rng);
            std::cout << r << ",\"";
            for (std::size_t i = 0; i < s.counts.size(); ++i)
              std::cout << (i ? " " : "") << s.counts[i];
            std::cout << "\"," << s.p << "\n";
          }
        }
        return 0;
      }
      if (kind == "xi") {
        if (!(x_param > 0)) throw std::domain_error("sample xi: need --x in (0, x0)");
        const XiSampler xi(w, theta, x_param);
        RngStream rng(seed);
        std::cout << "draw,value\n";
        for (long r = 0; r < runs; ++r) std::cout << r << "," << xi.draw(rng) << "\n";
        return 0;
      }
      if (kind == "subordinator") {
        RngStream rng(seed);
        Json j = Json::array();
        for (long r = 0; r < runs; ++r) {
          const auto s = sample_subordinator(w, gamma, cutoff, rng);
          j.push_back(Json{{"count", s.jumps.size()},
                           {"total", s.total},
                           {"truncation_bound", s.truncation_bound},
                           {"largest", s.jumps.empty() ? 0.0 : s.jumps.front()}});
        }
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      if (kind == "star-biased") {
        const auto b = star_biased_estimate(w, gamma, opt.k, statistic, cutoff, runs, seed);
        std::cout << biased_estimate_json(b).dump(2) << "\n";
        return 0;
      }
    }
    if (ver->parsed()) {
      std::vector<verify::CheckResult> results;
      if (vid->parsed()) {
        if (!verify_family.empty()) {
          const auto w = family_from_spec(verify_family);
          results = verify::family_checks(w, std::min(k_max, 6));
        } else {
          results = verify::identity_suite(k_max);
        }
      } else {
        results = verify::montecarlo_suite(seed, runs);
      }
      Json report = Json::array();
      for (const auto& r : results) {
        report.push_back(Json{{"check", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                  << (r.detail.empty() ? "" : " — " + r.detail) << "\n";
      }
      std::cout << report.dump(2) << "\n";
      return verify::all_pass(results) ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << error_json("invalid_argument", e.what()).dump() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << error_json("domain_error", e.what()).dump() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << error_json("out_of_range", e.what()).dump() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << error_json("length_error", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << error_json("error", e.what()).dump() << "\n";
    return 1;
  }
  return 2;
}
