#include "diode/sweep.hpp"

namespace diode {

namespace {

using nlohmann::json;

json linspace(double start, double stop, int num) { return {{"start", start}, {"stop", stop}, {"num", num}}; }

json logspace(double start, double stop, int num) {
  return {{"start", start}, {"stop", stop}, {"num", num}, {"log", true}};
}

json base(const char* name) { return {{"schema_version", kConfigSchemaVersion}, {"name", name}, {"mode", "steady"}}; }

}  // namespace

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "plateau"}; }

// Axis ranges and resolutions are our choices: theta/2pi over a full period, detuning within
// half a linewidth, 101 x 101 heatmaps and 201-point line sweeps.
json preset_config(const std::string& name) {
  json c = base(name.c_str());
  if (name == "fig2") {
    c["n"] = {1, 2, 3, 4, 5};
    c["omega-ratio"] = 1e-2;
    c["theta"] = linspace(0, 1, 101);
    c["delta-ratio"] = linspace(-0.5, 0.5, 101);
  } else if (name == "fig3") {
    c["n"] = {1, 2, 3, 4, 5, 22};
    c["omega-ratio"] = 1e-2;
    c["theta"] = 0.5025;
    c["delta-ratio"] = linspace(-0.2, 0.2, 201);
  } else if (name == "fig4") {  // all four metrics over one heatmap
    c["n"] = 1;
    c["omega-ratio"] = 1e-2;
    c["theta"] = linspace(0, 1, 101);
    c["delta-ratio"] = linspace(-0.5, 0.5, 101);
  } else if (name == "fig5") {  // r1 against r4 through the reversed-direction region
    c["n"] = 22;
    c["omega-ratio"] = 1e-2;
    c["theta"] = 0.5025;
    c["delta-ratio"] = linspace(-0.2, 0.2, 201);
  } else if (name == "plateau") {  // flux nbar * omega / 2 from 1e-4 to 1
    // (0.13, 0.49) maximises coherent nbar = 2 rectification on the fig2 grid
    c["nbar"] = logspace(2e-2, 2e2, 41);
    c["omega-ratio"] = 1e-2;
    c["theta"] = 0.49;
    c["delta-ratio"] = 0.13;
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace diode
