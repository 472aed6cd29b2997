#include <charconv>
#include <cmath>
#include <ostream>

#include "diode/sweep.hpp"

namespace diode {

const std::vector<std::string> kRowColumns{"n",     "nbar",  "omega_over_gamma", "delta_over_gamma", "theta_over_2pi",
                                           "flux_over_gamma", "t_fwd", "t_bwd", "r1", "r2", "r3", "r4",
                                           "solver_mode", "converged"};

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

// Cells in column order; std::nullopt marks a field that does not apply to the row.
using Cell = std::optional<double>;

struct RowCells {
  Cell n, nbar;
  double omega, delta, theta, flux;
  Cell t_fwd, t_bwd, r1, r2, r3, r4;
};

RowCells cells(const SweepRow& row) {
  RowCells c{};
  if (row.point.input == InputKind::Fock) c.n = row.point.photons;
  else c.nbar = row.point.photons;
  c.omega = row.point.omega_over_gamma;
  c.delta = row.point.delta_over_gamma;
  c.theta = row.point.theta_over_2pi;
  c.flux = row.flux_over_gamma;
  if (row.result) {
    const auto& r = *row.result;
    c.t_fwd = r.t_fwd;
    c.t_bwd = r.t_bwd;
    c.r1 = r.r1;
    c.r2 = r.r2;
    c.r3 = r.r3;
    c.r4 = r.r4;
  }
  return c;
}

std::string csv_cell(const Cell& c) { return c ? format_double(*c) : std::string(); }

nlohmann::json json_cell(const Cell& c) {
  return c && std::isfinite(*c) ? nlohmann::json(*c) : nlohmann::json(nullptr);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  for (std::size_t i = 0; i < kRowColumns.size(); ++i) os << (i ? "," : "") << kRowColumns[i];
  os << '\n';
  for (const auto& row : rows) {
    const auto c = cells(row);
    os << (c.n ? std::to_string(std::lround(*c.n)) : std::string()) << ',' << csv_cell(c.nbar) << ','
       << format_double(c.omega) << ',' << format_double(c.delta) << ',' << format_double(c.theta) << ','
       << format_double(c.flux) << ',' << csv_cell(c.t_fwd) << ',' << csv_cell(c.t_bwd) << ',' << csv_cell(c.r1) << ','
       << csv_cell(c.r2) << ',' << csv_cell(c.r3) << ',' << csv_cell(c.r4) << ',' << to_string(row.mode) << ','
       << (row.converged ? "true" : "false") << '\n';
  }
}

nlohmann::json rows_to_json(const std::vector<SweepRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& row : rows) {
    const auto c = cells(row);
    nlohmann::json j = nlohmann::json::object();
    j["n"] = c.n ? nlohmann::json(std::lround(*c.n)) : nlohmann::json(nullptr);
    j["nbar"] = json_cell(c.nbar);
    j["omega_over_gamma"] = c.omega;
    j["delta_over_gamma"] = c.delta;
    j["theta_over_2pi"] = c.theta;
    j["flux_over_gamma"] = c.flux;
    j["t_fwd"] = json_cell(c.t_fwd);
    j["t_bwd"] = json_cell(c.t_bwd);
    j["r1"] = json_cell(c.r1);
    j["r2"] = json_cell(c.r2);
    j["r3"] = json_cell(c.r3);
    j["r4"] = json_cell(c.r4);
    j["solver_mode"] = to_string(row.mode);
    j["converged"] = row.converged;
    out.push_back(std::move(j));
  }
  return out;
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) { os << rows_to_json(rows).dump(1) << '\n'; }

}  // namespace diode
