#include <cmath>
#include <set>

#include "diode/sweep.hpp"

namespace diode {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("'" + key + "' must be a number");
  return v.get<double>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ValidationError("'" + key + "' must be true or false");
  return v.get<bool>();
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"schema_version", "name",      "n",         "nbar",
                                          "omega-ratio",    "delta-ratio", "theta",   "delta-mu",
                                          "mu-envelope-delay", "mode",   "rel-tol",   "abs-tol",
                                          "settle-margin",  "tail-time", "samples",   "max-steps"};
  return keys;
}

}  // namespace

std::vector<double> parse_axis(const json& value, const std::string& key) {
  std::vector<double> out;
  if (value.is_number()) {
    out.push_back(value.get<double>());
  } else if (value.is_array()) {
    for (const auto& v : value) out.push_back(number(v, key));
  } else if (value.is_object()) {
    for (const auto& [k, _] : value.items())
      if (k != "start" && k != "stop" && k != "num" && k != "log")
        throw ValidationError("axis '" + key + "' has unknown field '" + k + "'");
    if (!value.contains("start") || !value.contains("stop") || !value.contains("num"))
      throw ValidationError("axis '" + key + "' needs start, stop and num");
    const double start = number(value["start"], key + ".start");
    const double stop = number(value["stop"], key + ".stop");
    const auto& num_v = value["num"];
    if (!num_v.is_number_integer()) throw ValidationError("'" + key + ".num' must be an integer");
    const long num = num_v.get<long>();
    if (num < 0) throw ValidationError("'" + key + ".num' must be nonnegative");
    const bool log = value.contains("log") && boolean(value["log"], key + ".log");
    if (log && !(start > 0 && stop > 0))
      throw ValidationError("log-spaced axis '" + key + "' needs positive endpoints");
    for (long i = 0; i < num; ++i) {
      const double f = num == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(num - 1);
      out.push_back(log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start))) : start + f * (stop - start));
    }
    if (num > 1) out.back() = stop;
  } else {
    throw ValidationError("axis '" + key + "' must be a number, an array or {start, stop, num, log}");
  }
  if (out.empty()) throw ValidationError("axis '" + key + "' is empty");
  return out;
}

SweepGrid parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [k, _] : doc.items())
    if (!known_keys().count(k)) throw ValidationError("unknown config key '" + k + "'");
  if (!doc.contains("schema_version")) throw ValidationError("config is missing schema_version");
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kConfigSchemaVersion)
    throw ValidationError("unsupported schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");

  SweepGrid g;
  const bool has_n = doc.contains("n");
  const bool has_nbar = doc.contains("nbar");
  if (has_n == has_nbar) throw ValidationError("config needs exactly one of 'n' (Fock) or 'nbar' (coherent)");
  g.input = has_n ? InputKind::Fock : InputKind::Coherent;
  g.photons = parse_axis(has_n ? doc["n"] : doc["nbar"], has_n ? "n" : "nbar");
  if (doc.contains("omega-ratio")) g.omega_over_gamma = parse_axis(doc["omega-ratio"], "omega-ratio");
  if (doc.contains("delta-ratio")) g.delta_over_gamma = parse_axis(doc["delta-ratio"], "delta-ratio");
  if (doc.contains("theta")) g.theta_over_2pi = parse_axis(doc["theta"], "theta");
  if (doc.contains("delta-mu")) g.delta_mu = number(doc["delta-mu"], "delta-mu");
  if (doc.contains("mu-envelope-delay")) g.mu_envelope_delay = boolean(doc["mu-envelope-delay"], "mu-envelope-delay");
  if (doc.contains("mode")) {
    const auto& m = doc["mode"];
    if (m == "steady") g.solver.mode = SolverMode::SteadyState;
    else if (m == "time") g.solver.mode = SolverMode::TimeDomain;
    else if (m == "pulse") g.solver.mode = SolverMode::Pulse;
    else throw ValidationError("'mode' must be \"steady\", \"time\" or \"pulse\"");
  }
  if (doc.contains("rel-tol")) g.solver.rel_tol = number(doc["rel-tol"], "rel-tol");
  if (doc.contains("abs-tol")) g.solver.abs_tol = number(doc["abs-tol"], "abs-tol");
  if (doc.contains("settle-margin")) g.solver.settle_margin = number(doc["settle-margin"], "settle-margin");
  if (doc.contains("tail-time")) g.solver.tail_time = number(doc["tail-time"], "tail-time");
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_integer()) throw ValidationError("'samples' must be an integer");
    g.solver.samples = doc["samples"].get<int>();
  }
  if (doc.contains("max-steps")) {
    if (!doc["max-steps"].is_number_integer()) throw ValidationError("'max-steps' must be an integer");
    g.solver.max_steps = doc["max-steps"].get<long>();
  }
  if (doc.contains("name") && !doc["name"].is_string()) throw ValidationError("'name' must be a string");
  g.validate();
  return g;
}

SweepGrid parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace diode
