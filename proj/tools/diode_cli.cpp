// diode - command-line front end: simulate, sweep, oracle, suite, preset.

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "diode/suite.hpp"
#include "diode/sweep.hpp"
#include "diode/transfer_oracle.hpp"

using namespace diode;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2 };

int fail(Exit code, const std::string& message) {
  json err{{"error", {{"kind", code == kValidation ? "validation" : "runtime"}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct PointFlags {
  std::optional<int> n;
  std::optional<double> nbar;
  double omega_ratio{1e-2};
  double delta_ratio{0};
  double theta{0.25};
  double delta_mu{0};
  bool envelope_delay{false};
  std::string mode{"steady"};
  SolverConfig<double> solver{};

  void attach(CLI::App* app) {
    auto* n_opt = app->add_option("--n", n, "Fock photon number");
    app->add_option("--nbar", nbar, "coherent mean photon number")->excludes(n_opt);
    app->add_option("--omega-ratio", omega_ratio, "pulse bandwidth Omega/gamma")->capture_default_str();
    app->add_option("--delta-ratio", delta_ratio, "left-atom detuning Delta/gamma")->capture_default_str();
    app->add_option("--theta", theta, "propagation phase theta/2pi")->capture_default_str();
    app->add_option("--delta-mu", delta_mu, "phase offset Delta*d/v_g")->capture_default_str();
    app->add_flag("--mu-envelope-delay", envelope_delay, "retard the envelope between the atoms");
    app->add_option("--mode", mode, "steady, time or pulse")->check(CLI::IsMember({"steady", "time", "pulse"}))->capture_default_str();
    app->add_option("--rel-tol", solver.rel_tol, "time-domain relative tolerance")->capture_default_str();
    app->add_option("--abs-tol", solver.abs_tol, "time-domain absolute tolerance")->capture_default_str();
    app->add_option("--settle-margin", solver.settle_margin, "late-window start as a fraction of the pulse")
        ->capture_default_str();
    app->add_option("--tail-time", solver.tail_time, "integration time after the pulse, in 1/gamma")
        ->capture_default_str();
  }

  SweepGrid grid() const {
    SweepGrid g;
    if (nbar) {
      g.input = InputKind::Coherent;
      g.photons = {*nbar};
    } else {
      g.photons = {static_cast<double>(n.value_or(1))};
    }
    g.omega_over_gamma = {omega_ratio};
    g.delta_over_gamma = {delta_ratio};
    g.theta_over_2pi = {theta};
    g.delta_mu = delta_mu;
    g.mu_envelope_delay = envelope_delay;
    g.solver = solver;
    g.solver.mode = mode == "time" ? SolverMode::TimeDomain : mode == "pulse" ? SolverMode::Pulse : SolverMode::SteadyState;
    g.validate();
    return g;
  }
};

json direction_json(const DirectionResult<double>& d) {
  return {{"transmittivity", d.transmittivity},         {"rate_ref", d.rate_ref},
          {"rate_trans", d.rate_trans},                 {"rate_trans_direct", d.rate_trans_direct},
          {"conservation_error", d.conservation_error}, {"max_residual", d.max_residual},
          {"max_condition", d.max_condition}};
}

int run_simulate(const PointFlags& flags, const std::string& format, const std::string& out_path) {
  const SweepGrid grid = flags.grid();
  const SweepPoint point = grid_point(grid, 0);
  auto params = DeviceParams<double>::from_ratios(point.delta_over_gamma, point.theta_over_2pi, grid.delta_mu);
  params.mu_envelope_delay = grid.mu_envelope_delay;
  const auto input = grid.input == InputKind::Coherent ? InputState<double>::coherent(point.photons)
                                                       : InputState<double>::fock(static_cast<int>(point.photons));
  SweepRow row;
  row.point = point;
  row.mode = grid.solver.mode;
  row.flux_over_gamma = point.photons * point.omega_over_gamma / 2;
  row.result = simulate(params, input, PulseSpec<double>{point.omega_over_gamma}, grid.solver);
  row.converged = row.result->max_residual() <= kConvergedResidual &&
                  row.result->conservation_error() <= kConvergedConservation;

  Output out(out_path);
  if (format == "csv") {
    write_csv(out.stream(), {row});
  } else {
    json j = rows_to_json({row}).at(0);
    j["forward"] = direction_json(row.result->fwd);
    j["backward"] = direction_json(row.result->bwd);
    out.stream() << j.dump(1) << '\n';
  }
  return kOk;
}

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

int run_sweep_cmd(const std::string& config_path, const std::string& format, const std::string& out_path,
                  int workers) {
  std::string text;
  if (config_path.empty() || config_path == "-") {
    text = read_all(std::cin);
  } else {
    std::ifstream f(config_path);
    if (!f) throw ValidationError("cannot read config '" + config_path + "'");
    text = read_all(f);
  }
  const SweepGrid grid = parse_config_text(text);
  const auto rows = run_sweep(grid, workers);
  Output out(out_path);
  if (format == "json") write_json(out.stream(), rows);
  else write_csv(out.stream(), rows);
  return kOk;
}

int run_oracle(double delta_ratio, const std::vector<double>& thetas, std::optional<double> omega_ratio,
               const std::string& format, const std::string& out_path) {
  if (omega_ratio && !(*omega_ratio > 0)) throw ValidationError("omega-ratio must be positive");
  json rows = json::array();
  for (double th : thetas) {
    const auto p = DeviceParams<double>::from_ratios(delta_ratio, th);
    const auto a = single_photon_amplitudes(TransferOracleParams<double>::at_offset(p));
    json r{{"delta_over_gamma", delta_ratio},   {"theta_over_2pi", th},
           {"t_fwd", std::norm(a.t_fwd)},       {"t_bwd", std::norm(a.t_bwd)},
           {"r_fwd", std::norm(a.r_fwd)},       {"r_bwd", std::norm(a.r_bwd)}};
    if (omega_ratio) {
      const auto b = finite_bandwidth_transmission(p, *omega_ratio);
      r["omega_over_gamma"] = *omega_ratio;
      r["t_fwd_pulse"] = b.fwd;
      r["t_bwd_pulse"] = b.bwd;
    }
    rows.push_back(std::move(r));
  }
  Output out(out_path);
  if (format == "json") {
    out.stream() << rows.dump(1) << '\n';
    return kOk;
  }
  std::vector<std::string> cols{"delta_over_gamma", "theta_over_2pi", "t_fwd", "t_bwd", "r_fwd", "r_bwd"};
  if (omega_ratio) cols.insert(cols.end(), {"omega_over_gamma", "t_fwd_pulse", "t_bwd_pulse"});
  for (std::size_t i = 0; i < cols.size(); ++i) out.stream() << (i ? "," : "") << cols[i];
  out.stream() << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out.stream() << (i ? "," : "") << format_double(r[cols[i]].get<double>());
    out.stream() << '\n';
  }
  return kOk;
}

int run_suite(bool fault, int workers, const std::string& out_path) {
  SuiteOptions o;
  o.workers = workers;
  if (fault) o.fault = FaultInjection::FlipAtom1CouplingPhase;
  const auto report = run_consistency_suite(default_suite_points(), o);
  Output out(out_path);
  out.stream() << report.to_json().dump(1) << '\n';
  if (!report.passed())
    return fail(kRuntime, std::to_string(report.failures()) + " consistency checks failed");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-atom waveguide diode simulator"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  int workers = 0;

  auto* sim = app.add_subcommand("simulate", "solve one parameter point in both directions");
  PointFlags point;
  point.attach(sim);
  std::string sim_format = "json";
  sim->add_option("--format", sim_format, "json or csv")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sim->add_option("--out", out_path, "output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "run a grid from a config document (stdin when no file is given)");
  std::string config_path;
  sweep->add_option("config", config_path, "config file, '-' for stdin");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sweep->add_option("--out", out_path, "output file (default stdout)");
  sweep->add_option("--workers", workers, "worker threads (default DIODE_WORKERS or all cores)");

  auto* orc = app.add_subcommand("oracle", "single-photon scattering amplitudes over a theta grid");
  double oracle_delta = 0.1;
  double theta_start = 0;
  double theta_stop = 1;
  int theta_num = 201;
  std::optional<double> oracle_omega;
  std::string oracle_format = "csv";
  orc->add_option("--delta-ratio", oracle_delta, "left-atom detuning Delta/gamma")->capture_default_str();
  orc->add_option("--theta-start", theta_start)->capture_default_str();
  orc->add_option("--theta-stop", theta_stop)->capture_default_str();
  orc->add_option("--theta-num", theta_num)->check(CLI::PositiveNumber)->capture_default_str();
  orc->add_option("--omega-ratio", oracle_omega, "also integrate over a square pulse of this bandwidth");
  orc->add_option("--format", oracle_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  orc->add_option("--out", out_path, "output file (default stdout)");

  auto* suite = app.add_subcommand("suite", "consistency checks over built-in parameter points");
  bool fault = false;
  suite->add_flag("--inject-fault", fault, "flip the left-atom coupling phase (the suite must then fail)");
  suite->add_option("--workers", workers, "worker threads");
  suite->add_option("--out", out_path, "report file (default stdout)");

  auto* preset = app.add_subcommand("preset", "print a figure config document");
  std::string preset_name;
  preset->add_option("name", preset_name, "fig2, fig3, fig4, fig5 or plateau")->required();
  preset->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kValidation, e.what());
  }

  try {
    if (*sim) return run_simulate(point, sim_format, out_path);
    if (*sweep) return run_sweep_cmd(config_path, format, out_path, workers);
    if (*orc) {
      std::vector<double> thetas;
      for (int i = 0; i < theta_num; ++i)
        thetas.push_back(theta_num == 1 ? theta_start
                                        : theta_start + (theta_stop - theta_start) * i / static_cast<double>(theta_num - 1));
      return run_oracle(oracle_delta, thetas, oracle_omega, oracle_format, out_path);
    }
    if (*suite) return run_suite(fault, workers, out_path);
    if (*preset) {
      const json cfg = preset_config(preset_name);
      Output out(out_path);
      out.stream() << cfg.dump(1) << '\n';
      return kOk;
    }
  } catch (const ValidationError& e) {
    return fail(kValidation, e.what());
  } catch (const ZeroFlux& e) {
    return fail(kValidation, e.what());
  } catch (const std::exception& e) {
    return fail(kRuntime, e.what());
  }
  return kOk;
}
