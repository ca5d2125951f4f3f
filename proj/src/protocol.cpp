#include "ghzsim/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "ghzsim/errors.hpp"

namespace ghzsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPopulationFloor = 1e-6;

int block_index(const BasisLabel& label, int m, int n) {
  const auto labels = block_labels(m, n);
  for (int i = 0; i < 4; ++i) {
    if (labels[static_cast<std::size_t>(i)] == label) return i;
  }
  return -1;
}

BasisLabel flipped(const BasisLabel& label, int m, int n) {
  const auto labels = block_labels(m, n);
  // (g,m,n) <-> (e,m-1,n-1), (e,m,n) <-> (g,m-1,n-1)
  const int idx = block_index(label, m, n);
  return labels[static_cast<std::size_t>(3 - idx)];
}

std::vector<double> sample_times(double t_end, int samples) {
  if (samples < 2) throw InvalidArgument("protocol: samples must be >= 2");
  if (t_end == 0.0) return {0.0};
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) times.push_back(t_end * k / (samples - 1));
  times.back() = t_end;
  return times;
}

// RK4 shrinks the norm by about (h R)^6 / 72 per step for spectral radius R,
// so the accumulated drift over [0, T] is T R (h R)^5 / 72. Pick h R to spend
// half of the 1e-6 drift budget, and never exceed the resolution guard.
double default_lab_step(const SystemParams& params, const HilbertShape& shape, double t_end) {
  const Matrix h0 = LabFrameModel(params, shape).at(0.0);
  const double radius = h0.cwiseAbs().rowwise().sum().maxCoeff();
  const double guard = params.max_frequency() > 0.0 ? 2.0 * kPi / params.max_frequency() / 50.0 : t_end;
  if (!(radius > 0.0)) return guard;
  const double z = std::min(0.1, std::pow(0.5e-6 * 72.0 / (t_end * radius), 0.2));
  return std::min(guard, z / radius);
}

}  // namespace

std::string_view to_string(Model model) {
  switch (model) {
    case Model::block_analytic:
      return "block_analytic";
    case Model::ld_full:
      return "ld_full";
    case Model::rwa_full:
      return "rwa_full";
    case Model::lab_frame:
      return "lab_frame";
  }
  return "?";
}

Model parse_model(std::string_view text) {
  if (text == "block" || text == "block_analytic") return Model::block_analytic;
  if (text == "ld" || text == "ld_full") return Model::ld_full;
  if (text == "rwa" || text == "rwa_full") return Model::rwa_full;
  if (text == "lab" || text == "lab_frame") return Model::lab_frame;
  throw InvalidArgument("unknown model '" + std::string(text) + "' (expected block, ld, rwa or lab)");
}

double tune_coupling(double Omega, double eta_c, int p) {
  if (!(eta_c > 0.0)) throw InvalidArgument("tune_coupling: eta_c must be > 0");
  if (p < 1) throw InvalidArgument("tune_coupling: p must be >= 1");
  return 2.0 * Omega / (eta_c * std::sqrt(16.0 * p * p - 1.0));
}

ProtocolSchedule ghz_schedule(const SystemParams& params, const HilbertShape& shape, int m, int n, int p,
                              Tuning tuning) {
  params.validate();
  if (p < 1) throw InvalidArgument("ghz_schedule: p must be >= 1");
  if (m < 1 || n < 1) throw InvalidArgument("ghz_schedule: block indices m, n must be >= 1");

  SystemParams tuned = params;
  if (tuning == Tuning::retune) {
    const double cos_phi = std::cos(params.phi);
    if (std::abs(cos_phi) < 1e-12) {
      throw InvalidArgument("ghz_schedule: cannot compensate node offset phi with cos(phi) = 0");
    }
    tuned.g = tune_coupling(params.Omega, params.eta_c, p) / (std::sqrt(double(m) * n) * cos_phi);
  }

  const BlockParams block = make_block_params(tuned, m, n);
  if (tuning == Tuning::require) {
    const double ratio = block.a == 0.0 ? std::numeric_limits<double>::infinity() : block.mu / block.a;
    if (!(std::abs(ratio - 4.0 * p) <= 1e-9 * 4.0 * p)) {
      throw ConfigurationError("ghz_schedule: parameters are not tuned, mu/a = " + std::to_string(ratio) +
                               " but the GHZ condition needs " + std::to_string(4 * p));
    }
  }
  if (!(block.mu > 0.0)) throw ConfigurationError("ghz_schedule: mu = 0, no dynamics");

  ProtocolSchedule schedule;
  schedule.p = p;
  schedule.t_p = p * kPi / block.mu;
  schedule.a_t_product = block.a * schedule.t_p;
  schedule.tuned_g = tuned.g;
  schedule.params = tuned;
  schedule.block = block;
  schedule.target = target_state({IonLevel::g, m - 1, n - 1}, shape, m, n, p);
  return schedule;
}

QuantumState target_state(const BasisLabel& initial, const HilbertShape& shape, int block_m, int block_n, int p) {
  if (p < 1) throw InvalidArgument("target_state: p must be >= 1");
  shape.index(initial.s, initial.m, initial.n);
  if (block_index(initial, block_m, block_n) < 0) {
    throw InvalidArgument("target_state: " + initial.to_string() + " is not a state of block (" +
                          std::to_string(block_m) + "," + std::to_string(block_n) + ")");
  }
  const BasisLabel partner = flipped(initial, block_m, block_n);
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  const double amp = sign / std::numbers::sqrt2;
  Vector amps = Vector::Zero(shape.total());
  amps(shape.index(initial.s, initial.m, initial.n)) = amp;
  amps(shape.index(partner.s, partner.m, partner.n)) = Complex(0.0, -amp);
  return QuantumState(shape, std::move(amps));
}

double fidelity(const QuantumState& psi, const QuantumState& target) { return std::norm(target.inner(psi)); }

FidelityReport score_state(const QuantumState& psi, const QuantumState& target, int block_m, int block_n,
                           Model model, double time) {
  FidelityReport report;
  report.fidelity = fidelity(psi, target);
  report.norm = psi.norm();
  report.time = time;
  report.model_tag = std::string(to_string(model));
  report.max_truncation_leak = model == Model::block_analytic ? 0.0 : top_level_population(psi);

  for (const BasisLabel& label : basis_labels(psi.shape())) {
    const double pop = psi.population(label);
    if (pop > kPopulationFloor) report.populations.emplace_back(label, pop);
    if (block_index(label, block_m, block_n) < 0) report.block_leakage += pop;
  }
  return report;
}

ProtocolTrace trace_protocol(const SystemParams& params, const BasisLabel& initial, Model model,
                             const ProtocolSchedule& schedule, const ProtocolOptions& options) {
  const HilbertShape& shape = options.shape;
  const int m = schedule.block.m;
  const int n = schedule.block.n;
  const double t_end = options.time.value_or(schedule.t_p);
  if (!(t_end >= 0.0)) throw InvalidArgument("protocol: interaction time must be >= 0");
  const std::vector<double> times = sample_times(t_end, options.samples);

  const QuantumState target = target_state(initial, shape, m, n, schedule.p);
  const QuantumState psi0 = basis_state(shape, initial);

  ProtocolTrace trace;
  switch (model) {
    case Model::block_analytic: {
      const BlockParams block = make_block_params(params, m, n);
      const BlockState start = BlockState::basis(block, block_index(initial, m, n));
      for (double t : times) {
        trace.points.push_back(score_state(embed_block_state(block_propagate(start, t), shape), target, m, n, model, t));
      }
      break;
    }
    case Model::ld_full:
    case Model::rwa_full: {
      const OperatorMatrix h =
          model == Model::ld_full ? build_ld_hamiltonian(params, shape) : build_rwa_hamiltonian(params, shape);
      const EvolutionResult run = evolve_static(h, psi0, times, std::string(to_string(model)));
      for (std::size_t k = 0; k < run.states.size(); ++k) {
        trace.points.push_back(score_state(run.states[k], target, m, n, model, run.times[k]));
      }
      break;
    }
    case Model::lab_frame: {
      require_resonances(params);
      if (t_end == 0.0) {
        trace.points.push_back(score_state(psi0, target, m, n, model, 0.0));
        break;
      }
      const TimeDependentHamiltonian source = lab_frame_source(params, shape);
      const double dt = options.lab_dt.value_or(default_lab_step(params, shape, t_end));
      const std::size_t intervals = times.size() - 1;
      std::size_t steps = timedep_step_count(t_end, dt);
      if (intervals > 0) steps = ((steps + intervals - 1) / intervals) * intervals;
      if (steps == 0) steps = 1;
      TimeDependentOptions opts;
      opts.record_every = intervals > 0 ? steps / intervals : 0;
      opts.model_tag = std::string(to_string(model));
      const EvolutionResult run = evolve_timedep(source, psi0, t_end, t_end / static_cast<double>(steps), opts);
      for (std::size_t k = 0; k < run.states.size(); ++k) {
        const QuantumState rotated = to_interaction_picture(run.states[k], params, run.times[k]);
        trace.points.push_back(score_state(rotated, target, m, n, model, run.times[k]));
      }
      break;
    }
  }
  return trace;
}

double check_truncation(const ProtocolTrace& trace, const ProtocolOptions& options) {
  double worst = 0.0;
  for (const FidelityReport& point : trace.points) worst = std::max(worst, point.max_truncation_leak);
  if (worst > options.truncation_threshold) {
    const HilbertShape& s = options.shape;
    throw TruncationError("truncation " + to_string(s) + " too small: top-level population " + std::to_string(worst) +
                              " exceeds " + std::to_string(options.truncation_threshold) + "; use a larger shape, e.g. " +
                              std::to_string(s.vib_dim + 2) + "x" + std::to_string(s.cav_dim + 2),
                          worst);
  }
  return worst;
}

FidelityReport run_protocol(const SystemParams& params, const BasisLabel& initial, Model model,
                            const ProtocolSchedule& schedule, const ProtocolOptions& options) {
  const ProtocolTrace trace = trace_protocol(params, initial, model, schedule, options);
  const double worst = check_truncation(trace, options);
  FidelityReport report = trace.points.back();
  report.max_truncation_leak = worst;
  return report;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::eta_c:
      return "eta_c";
    case SweepAxis::eta_L:
      return "eta_L";
    case SweepAxis::phi:
      return "phi";
    case SweepAxis::p:
      return "p";
    case SweepAxis::vib_dim:
      return "vib_dim";
    case SweepAxis::cav_dim:
      return "cav_dim";
    case SweepAxis::dt:
      return "dt";
  }
  return "?";
}

std::vector<std::string> sweep_axis_names() {
  std::vector<std::string> names;
  for (SweepAxis axis : {SweepAxis::eta_c, SweepAxis::eta_L, SweepAxis::phi, SweepAxis::p, SweepAxis::vib_dim,
                         SweepAxis::cav_dim, SweepAxis::dt}) {
    names.emplace_back(to_string(axis));
  }
  return names;
}

SweepAxis parse_axis(std::string_view text) {
  for (SweepAxis axis : {SweepAxis::eta_c, SweepAxis::eta_L, SweepAxis::phi, SweepAxis::p, SweepAxis::vib_dim,
                         SweepAxis::cav_dim, SweepAxis::dt}) {
    if (text == to_string(axis)) return axis;
  }
  std::string valid;
  for (const std::string& name : sweep_axis_names()) valid += (valid.empty() ? "" : ", ") + name;
  throw InvalidArgument("unknown sweep axis '" + std::string(text) + "'; valid axes: " + valid);
}

unsigned sweep_thread_count() {
  if (const char* env = std::getenv("GHZ_SIM_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

int as_count(double value, std::string_view axis) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9 || rounded < 1) {
    throw InvalidArgument("sweep axis " + std::string(axis) + " needs positive integers, got " + std::to_string(value));
  }
  return static_cast<int>(rounded);
}

SweepRow run_sweep_point(const SweepSpec& spec, SweepAxis axis, double value) {
  SystemParams params = spec.params;
  ProtocolOptions options = spec.options;
  int p = spec.p;
  switch (axis) {
    case SweepAxis::eta_c:
      params.eta_c = value;
      break;
    case SweepAxis::eta_L:
      params.eta_L = value;
      break;
    case SweepAxis::phi:
      params.phi = value;
      break;
    case SweepAxis::p:
      p = as_count(value, "p");
      break;
    case SweepAxis::vib_dim:
      options.shape = HilbertShape(as_count(value, "vib_dim"), options.shape.cav_dim);
      break;
    case SweepAxis::cav_dim:
      options.shape = HilbertShape(options.shape.vib_dim, as_count(value, "cav_dim"));
      break;
    case SweepAxis::dt:
      options.lab_dt = value;
      break;
  }
  SweepRow row;
  row.value = value;
  row.schedule = ghz_schedule(params, options.shape, spec.block_m, spec.block_n, p, spec.tuning);
  row.report = run_protocol(row.schedule.params, spec.initial, spec.model, row.schedule, options);
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, SweepAxis axis, const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("sweep: no values given");
  const unsigned requested = spec.threads > 0 ? spec.threads : sweep_thread_count();
  const unsigned workers = std::max(1u, std::min<unsigned>(requested, static_cast<unsigned>(values.size())));

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        rows[i] = run_sweep_point(spec, axis, values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return rows;
}

}  // namespace ghzsim
