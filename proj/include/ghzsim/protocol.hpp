#pragma once

// Single-step GHZ preparation: tuning, schedules, target states, and scoring
// of a protocol run under each Hamiltonian level.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghzsim/evolution.hpp"
#include "ghzsim/fock.hpp"
#include "ghzsim/hamiltonian.hpp"

namespace ghzsim {

enum class Model { block_analytic, ld_full, rwa_full, lab_frame };

std::string_view to_string(Model model);
// Accepts the tags "block", "ld", "rwa", "lab" and the long names above.
Model parse_model(std::string_view text);

// Cavity coupling g for which the (1,1) block reaches mu / a = 4p:
//   g = 2 Omega / (eta_c sqrt(16 p^2 - 1)).
double tune_coupling(double Omega, double eta_c, int p = 1);

enum class Tuning {
  require,    // ConfigurationError unless mu / a = 4p within 1e-9
  retune,     // replace g so that the block is tuned (node offset compensated)
  unchecked,  // accept the parameters as they are
};

struct ProtocolSchedule {
  int p = 1;
  double t_p = 0.0;         // p pi / mu
  double a_t_product = 0.0; // a t_p, pi/4 when tuned
  double tuned_g = 0.0;     // g of `params`
  SystemParams params;      // parameters the schedule was built for
  BlockParams block;
  // Target for the initial state |g,m-1,n-1>.
  QuantumState target{HilbertShape{}, Vector::Zero(HilbertShape{}.total())};
};

ProtocolSchedule ghz_schedule(const SystemParams& params, const HilbertShape& shape, int m = 1, int n = 1, int p = 1,
                              Tuning tuning = Tuning::require);

// Post-pulse state for an initial block state:
//   (-1)^p / sqrt(2) (|x> - i |flip x>),
// with flip swapping |g,m-1,n-1> <-> |e,m,n> and |e,m-1,n-1> <-> |g,m,n>.
QuantumState target_state(const BasisLabel& initial, const HilbertShape& shape, int block_m = 1, int block_n = 1,
                          int p = 1);

// |<target|psi>|^2
double fidelity(const QuantumState& psi, const QuantumState& target);

struct FidelityReport {
  double fidelity = 0.0;
  double block_leakage = 0.0;
  std::vector<std::pair<BasisLabel, double>> populations;  // basis order, population > 1e-6
  double norm = 1.0;
  double max_truncation_leak = 0.0;
  double time = 0.0;
  std::string model_tag;
};

struct ProtocolOptions {
  HilbertShape shape{4, 4};
  // Interaction time; defaults to the schedule's t_p.
  std::optional<double> time;
  // Lab-frame integrator step; defaults to a step sized from the spectral radius
  // so the RK4 norm drift stays within half of its 1e-6 budget.
  std::optional<double> lab_dt;
  // Number of time points scored along the run (>= 2; the last is the end time).
  int samples = 65;
  double truncation_threshold = 1e-4;
};

struct ProtocolTrace {
  std::vector<FidelityReport> points;
};

// Scores a state against a target; block leakage is counted against the (m, n) block.
FidelityReport score_state(const QuantumState& psi, const QuantumState& target, int block_m, int block_n,
                           Model model, double time);

// Evolves the initial basis state under `model`, scoring every sample time.
// Does not apply the truncation guard.
ProtocolTrace trace_protocol(const SystemParams& params, const BasisLabel& initial, Model model,
                             const ProtocolSchedule& schedule, const ProtocolOptions& options = {});

// Throws TruncationError when any sample's top-level population exceeds
// options.truncation_threshold; returns the largest one otherwise.
double check_truncation(const ProtocolTrace& trace, const ProtocolOptions& options);

// Final report of trace_protocol; throws TruncationError when top-level
// population exceeds options.truncation_threshold at any sample.
FidelityReport run_protocol(const SystemParams& params, const BasisLabel& initial, Model model,
                            const ProtocolSchedule& schedule, const ProtocolOptions& options = {});

enum class SweepAxis { eta_c, eta_L, phi, p, vib_dim, cav_dim, dt };

std::string_view to_string(SweepAxis axis);
// Throws InvalidArgument listing the valid axes.
SweepAxis parse_axis(std::string_view text);
std::vector<std::string> sweep_axis_names();

struct SweepSpec {
  SystemParams params;          // template
  BasisLabel initial{IonLevel::g, 0, 0};
  Model model = Model::block_analytic;
  ProtocolOptions options;
  int block_m = 1;
  int block_n = 1;
  int p = 1;
  Tuning tuning = Tuning::retune;
  // 0: use GHZ_SIM_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

struct SweepRow {
  double value = 0.0;
  ProtocolSchedule schedule;
  FidelityReport report;
};

// One run_protocol per value; row order follows `values`.
std::vector<SweepRow> sweep(const SweepSpec& spec, SweepAxis axis, const std::vector<double>& values);

// Worker count for sweeps: GHZ_SIM_THREADS when set (>= 1), else the hardware concurrency.
unsigned sweep_thread_count();

}  // namespace ghzsim
