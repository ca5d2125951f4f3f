#pragma once

// Command-line front end: ghz_sim validate | ghz | sweep.
//
// Configuration is a JSON object; command-line flags override it. At this
// boundary frequencies are angular MHz (1 MHz = 1e6 rad/s) and times are
// microseconds unless the config sets "units": "SI" (rad/s and seconds).
// Result files always report times in microseconds and couplings in MHz.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghzsim/hamiltonian.hpp"
#include "ghzsim/protocol.hpp"
#include "ghzsim/table_io.hpp"

namespace ghzsim::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

struct RunConfig {
  SystemParams params;  // rad/s
  bool tune_g = true;   // g not given: tune it for the GHZ condition
  HilbertShape shape{8, 8};
  Model model = Model::block_analytic;
  BasisLabel initial{IonLevel::g, 0, 0};
  int block_m = 1;
  int block_n = 1;
  int p = 1;
  std::optional<double> time;  // seconds
  std::optional<double> dt;    // seconds, lab-frame step
  int samples = 101;
  io::Format format = io::Format::csv;
  std::string output = "ghz_series.csv";
  // Seconds per config time unit (1e-6 for MHz/us configs, 1 for SI).
  double time_unit = 1e-6;
};

// Defaults: Omega = 8.95 MHz, eta_L = eta_c = 0.05, scaled trap and optical
// frequencies (nu = 200, omega_0 = omega_L = 4000, omega_c = 3800 MHz), g tuned.
RunConfig default_config();

// Overlays a JSON config document onto `base`. Throws ConfigurationError or
// InvalidArgument naming the offending field.
RunConfig apply_config_json(RunConfig base, std::string_view json_text);

// Checks every field against the library preconditions.
void validate_config(const RunConfig& config);

// Parses "NxM".
HilbertShape parse_shape(std::string_view text);

// "a:b:step" (inclusive of b) or "v1,v2,..." (braces optional).
std::vector<double> parse_values(std::string_view text);

// Time-series table and one-row summary of a ghz run.
struct GhzOutput {
  io::Table series;
  io::Table summary;
  ProtocolSchedule schedule;
  FidelityReport final_report;
};

GhzOutput run_ghz(const RunConfig& config);
io::Table run_sweep_table(const RunConfig& config, SweepAxis axis, const std::vector<double>& values);

// Summary file path next to the series output: "<stem>_summary.<ext>".
std::string summary_path(const std::string& output, io::Format format);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ghzsim::cli
