#pragma once

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <string>

#include "gibbsocc/bellpoly.hpp"
#include "gibbsocc/estimate.hpp"
#include "gibbsocc/sample.hpp"
#include "gibbsocc/weights.hpp"

namespace gibbsocc {

using Json = nlohmann::json;

inline Json sigma_table_json(const SigmaTable<LogReal>& t, const std::string& theta_repr) {
  Json j;
  j["theta"] = theta_repr;
  j["K"] = t.K;
  auto& lv = j["log_values"] = Json::array();
  for (const auto& v : t.v) lv.push_back(v.log());
  return j;
}

inline Json sigma_table_json(const SigmaTable<Rational>& t) {
  Json j;
  j["theta"] = rational_string(t.theta);
  j["K"] = t.K;
  auto& vals = j["values"] = Json::array();
  auto& lv = j["log_values"] = Json::array();
  for (const auto& v : t.v) {
    vals.push_back(rational_string(v));
    lv.push_back(log_rational(v));
  }
  return j;
}

// Re-parses an emitted table and revalidates its invariants: sigma_0 = 1,
// K consistent with the payload, entries finite except for exact zeros.
inline SigmaTable<LogReal> sigma_table_from_json(const Json& j) {
  SigmaTable<LogReal> t;
  const Rational theta = parse_rational(j.at("theta").get<std::string>());
  if (theta <= 0) throw std::invalid_argument("sigma table json: theta must be > 0");
  t.theta = LogReal::from_log(log_rational(theta));
  t.K = j.at("K").get<int>();
  const auto& lv = j.at("log_values");
  if (int(lv.size()) != t.K + 1) throw std::invalid_argument("sigma table json: K mismatch");
  for (const auto& x : lv) {
    const double v = x.get<double>();
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("sigma table json: non-finite entry");
    t.v.push_back(LogReal::from_log(v));
  }
  if (std::abs(t.v[0].log()) > 1e-12)
    throw std::invalid_argument("sigma table json: sigma_0 must be 1");
  return t;
}

template <class S>
Json bell_triangle_json(const BellTriangle<S>& t) {
  Json j;
  j["kind"] = (t.kind == BellKind::of_phi) ? "phi" : "sigma";
  j["K"] = t.K;
  if (t.kind == BellKind::of_sigma) {
    if constexpr (num_ops<S>::exact)
      j["theta"] = rational_string(t.theta);
    else
      j["theta"] = t.theta.value();
  }
  auto& lv = j["log_values"] = Json::array();
  for (const auto& v : t.e) lv.push_back(num_ops<S>::to_log(v));
  if constexpr (num_ops<S>::exact) {
    auto& vals = j["values"] = Json::array();
    for (const auto& v : t.e) vals.push_back(rational_string(v));
  }
  return j;
}

inline Json estimate_json(const Estimate& e) {
  Json j;
  if (std::isinf(e.value) || (e.boundary == "P=k" && !std::isfinite(e.value)))
    j["value"] = nullptr;
  else
    j["value"] = e.value;
  switch (e.method) {
    case EstimateMethod::mle: j["method"] = "mle"; break;
    case EstimateMethod::ratio: j["method"] = "ratio"; break;
    case EstimateMethod::closed_form: j["method"] = "closed_form"; break;
  }
  if (!std::isnan(e.residual)) j["residual"] = e.residual;
  if (!e.boundary.empty()) j["boundary"] = e.boundary;
  if (e.tie) j["tie"] = Json::array({e.tie->first, e.tie->second});
  if (e.iterations > 0) j["iterations"] = e.iterations;
  return j;
}

inline Json biased_estimate_json(const BiasedEstimate& b) {
  return Json{{"estimate", b.estimate},
              {"se", b.se},
              {"ess", b.ess},
              {"truncation_bound", b.truncation_bound},
              {"runs", b.runs}};
}

inline Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", kind}, {"message", message}};
}

// weights.json: a JSON array of non-negative decimal strings, parsed exactly
// (integers are also accepted; floats are not, to avoid silent rounding).
inline std::vector<Rational> read_weights_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weights file '" + path + "'");
  Json j;
  in >> j;
  if (!j.is_array()) throw std::invalid_argument("weights file: expected a JSON array");
  std::vector<Rational> out;
  for (const auto& x : j) {
    if (x.is_string())
      out.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer())
      out.push_back(Rational(x.get<long long>()));
    else
      throw std::invalid_argument("weights file: entries must be decimal strings");
  }
  return out;
}

// Family spec parsing with file resolution for custom weights.
inline WeightSequence family_from_spec(const std::string& spec) {
  const std::string prefix = "custom:file=";
  if (spec.rfind(prefix, 0) == 0)
    return WeightSequence::custom(read_weights_json(spec.substr(prefix.size())));
  return WeightSequence::parse(spec);
}

}  // namespace gibbsocc
