// sweep.hpp - parameter grids, config documents, row output and figure presets.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diode/simulate.hpp"

namespace diode {

inline constexpr int kConfigSchemaVersion = 1;

enum class InputKind { Fock, Coherent };

struct SweepGrid {
  InputKind input{InputKind::Fock};
  std::vector<double> photons{1};  // n for Fock input, nbar for coherent input
  std::vector<double> omega_over_gamma{0.01};
  std::vector<double> delta_over_gamma{0.0};
  std::vector<double> theta_over_2pi{0.25};
  double delta_mu{0};
  bool mu_envelope_delay{false};
  SolverConfig<double> solver{};

  std::size_t size() const;
  void validate() const;
};

struct SweepPoint {
  InputKind input{InputKind::Fock};
  double photons{1};
  double omega_over_gamma{0.01};
  double delta_over_gamma{0};
  double theta_over_2pi{0};
};

struct SweepRow {
  std::size_t index{0};
  SweepPoint point{};
  SolverMode mode{SolverMode::SteadyState};
  double flux_over_gamma{0};
  std::optional<ScatterResult<double>> result;  // empty when the point failed
  bool converged{false};
  std::string error;
};

// Thresholds on the solver diagnostics for a row to count as converged.
inline constexpr double kConvergedResidual = 1e-8;
inline constexpr double kConvergedConservation = 1e-6;

/// Grid point `index`, photon axis slowest and detuning fastest.
SweepPoint grid_point(const SweepGrid& grid, std::size_t index);

SweepRow run_point(const SweepGrid& grid, const SweepPoint& point, std::size_t index = 0,
                   const BuildOptions<double>& options = {});

/// Rows in grid order. workers <= 0 takes DIODE_WORKERS or the hardware concurrency.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, int workers = 0, const BuildOptions<double>& options = {});

// config.cpp
std::vector<double> parse_axis(const nlohmann::json& value, const std::string& key);
SweepGrid parse_config(const nlohmann::json& doc);
SweepGrid parse_config_text(const std::string& text);

// output.cpp
std::string format_double(double x);
extern const std::vector<std::string> kRowColumns;
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
nlohmann::json rows_to_json(const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);

// presets.cpp
std::vector<std::string> preset_names();
nlohmann::json preset_config(const std::string& name);

}  // namespace diode
