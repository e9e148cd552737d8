#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gibbsocc/rational.hpp"
#include "gibbsocc/weights.hpp"

namespace testutil {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string base = "/tmp/gibbsocc_cli_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter++);
  const std::string out = base + ".out", err = base + ".err";
  const std::string cmd = std::string(GIBBSOCC_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WEXITSTATUS(rc);
  r.out = slurp(out);
  r.err = slurp(err);
  std::remove(out.c_str());
  std::remove(err.c_str());
  return r;
}

// Truncated series evaluation of phi(x) from the weights alone; the
// independent oracle for the closed-form evaluators.
inline double phi_series_oracle(const gibbsocc::WeightSequence& w, double x,
                                std::size_t max_terms = 200000) {
  double acc = 0;
  int quiet = 0;
  for (std::size_t m = 1; m <= std::min(max_terms, w.max_index()); ++m) {
    const double term =
        std::exp(w.log_phi(m) + double(m) * std::log(std::abs(x)) -
                 gibbsocc::log_factorial(m)) *
        ((x < 0 && (m & 1)) ? -1.0 : 1.0);
    acc += term;
    if (std::abs(term) < 1e-17 * (std::abs(acc) + 1e-300)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  return acc;
}

// Unsigned first-kind Stirling numbers by their defining recurrence.
inline std::vector<std::vector<gibbsocc::BigInt>> stirling_first(int K) {
  using gibbsocc::BigInt;
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

}  // namespace testutil
