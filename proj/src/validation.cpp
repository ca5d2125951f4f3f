#include "ghzsim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "ghzsim/evolution.hpp"
#include "ghzsim/hamiltonian.hpp"
#include "ghzsim/protocol.hpp"

namespace ghzsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI(0.0, 1.0);

struct Check {
  std::string name;
  double threshold;
  std::function<double(const ValidationOptions&)> measure;
};

// Deterministic (Omega, coupling, t) triples.
struct BlockSample {
  double omega;
  double coupling;
  double t;
};

std::vector<BlockSample> block_samples(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> omega(0.2, 2.0);
  std::uniform_real_distribution<double> coupling(0.05, 2.0);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  std::vector<BlockSample> out;
  for (int i = 0; i < count; ++i) out.push_back({omega(rng), coupling(rng), time(rng)});
  return out;
}

double schrodinger_residual(const ValidationOptions&) {
  double worst = 0.0;
  for (const BlockSample& s : block_samples(20, 11)) {
    const BlockParams block = make_block_params(s.omega, s.coupling, 1, 1);
    const Eigen::Matrix4cd h = block_ld_matrix(block);
    const double step = 1e-6 / block.mu;
    const double t = std::max(s.t, step);
    const Eigen::Matrix4cd deriv =
        (block_propagator(block, t + step) - block_propagator(block, t - step)) / (2.0 * step);
    const Eigen::Matrix4cd u = block_propagator(block, t);
    for (int col = 0; col < 4; ++col) {
      const Eigen::Vector4cd hpsi = h * u.col(col);
      worst = std::max(worst, (kI * deriv.col(col) - hpsi).norm() / hpsi.norm());
    }
  }
  return worst;
}

double propagator_vs_eigen(const ValidationOptions&) {
  double worst = 0.0;
  for (const BlockSample& s : block_samples(5, 23)) {
    const BlockParams block = make_block_params(s.omega, s.coupling, 1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(block_ld_matrix(block));
    for (int k = 0; k < 100; ++k) {
      const double t = s.t * k / 99.0;
      Eigen::Vector4cd phases;
      for (int i = 0; i < 4; ++i) phases(i) = std::exp(-kI * solver.eigenvalues()(i) * t);
      const Eigen::Matrix4cd u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
      worst = std::max(worst, (u - block_propagator(block, t)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double swap_symmetry(const ValidationOptions&) {
  const Eigen::Matrix4cd p = block_swap_permutation();
  double worst = 0.0;
  for (const BlockSample& s : block_samples(5, 31)) {
    const Eigen::Matrix4cd h = block_ld_matrix(make_block_params(s.omega, s.coupling, 1, 1));
    worst = std::max(worst, (p * h - h * p).cwiseAbs().maxCoeff());
  }
  return worst;
}

double propagator_composition(const ValidationOptions&) {
  double worst = 0.0;
  for (const BlockSample& s : block_samples(10, 47)) {
    const BlockParams block = make_block_params(s.omega, s.coupling, 2, 3);
    const double t2 = 0.37 * s.t;
    const Eigen::Matrix4cd lhs = block_propagator(block, t2) * block_propagator(block, s.t);
    worst = std::max(worst, (lhs - block_propagator(block, s.t + t2)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double ok_vs_laguerre(const ValidationOptions& options) {
  double worst = 0.0;
  const int dim = 10;
  for (int k = 0; k <= 2; ++k) {
    for (double eta : {0.05, 0.1, 0.3}) {
      const Matrix ok = build_O_k(k, eta, dim).entries();
      for (int m = 0; m < dim; ++m) {
        // m!/(m+k)! L_m^(k)(eta^2) e^{-eta^2/2}
        double ratio = 1.0;
        for (int j = m + 1; j <= m + k; ++j) ratio /= j;
        const double expected =
            std::exp(-0.5 * eta * eta) * ratio * std::assoc_laguerre(static_cast<unsigned>(m), static_cast<unsigned>(k), eta * eta);
        const double got = ok(m, m).real() + options.ok_perturbation;
        worst = std::max(worst, std::abs(got - expected));
      }
    }
  }
  return worst;
}

double rwa_structure(const ValidationOptions& options) {
  const SystemParams params = SystemParams::resonant(1.0, 3.0, 0.12, 0.08, 50.0, 1000.0);
  const HilbertShape shape(5, 4);
  const Matrix h = build_rwa_hamiltonian(params, shape).entries();
  double worst = 0.0;
  for (const BasisLabel& row : basis_labels(shape)) {
    for (const BasisLabel& col : basis_labels(shape)) {
      double expected = 0.0;
      const BasisLabel& lower = row.s == IonLevel::g ? row : col;
      const BasisLabel& upper = row.s == IonLevel::g ? col : row;
      if (row.s != col.s) {
        if (upper.m == lower.m && upper.n == lower.n) {
          expected = params.Omega * (matrix_element_F_L(lower.m, params.eta_L) + options.ok_perturbation);
        } else if (upper.m == lower.m - 1 && upper.n == lower.n - 1) {
          expected = params.g * matrix_element_F_c(lower.m, params.eta_c) * std::sqrt(double(lower.n));
        }
      }
      const Complex got = h(shape.index(row.s, row.m, row.n), shape.index(col.s, col.m, col.n));
      worst = std::max(worst, std::abs(got - expected));
    }
  }
  return worst;
}

double ld_restriction(const ValidationOptions&) {
  const SystemParams params = SystemParams::resonant(1.3, 2.1, 0.05, 0.07, 40.0, 900.0, 0.4);
  const HilbertShape shape(4, 5);
  const Matrix h = build_ld_hamiltonian(params, shape).entries();
  double worst = 0.0;
  for (int m = 1; m < shape.vib_dim; ++m) {
    for (int n = 1; n < shape.cav_dim; ++n) {
      const Matrix block = build_block_hamiltonian(params, m, n, true).matrix.entries();
      const auto labels = block_labels(m, n);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const BasisLabel& r = labels[static_cast<std::size_t>(i)];
          const BasisLabel& c = labels[static_cast<std::size_t>(j)];
          worst = std::max(worst, std::abs(block(i, j) - h(shape.index(r.s, r.m, r.n), shape.index(c.s, c.m, c.n))));
        }
      }
    }
  }
  return worst;
}

double hermiticity(const ValidationOptions&) {
  const SystemParams params = SystemParams::resonant(1.1, 2.3, 0.09, 0.11, 30.0, 700.0, 0.3);
  const HilbertShape shape(5, 3);
  double worst = 0.0;
  worst = std::max(worst, build_rwa_hamiltonian(params, shape).hermiticity_error());
  worst = std::max(worst, build_ld_hamiltonian(params, shape).hermiticity_error());
  worst = std::max(worst, build_block_hamiltonian(params, 2, 2, false).matrix.hermiticity_error());
  for (double t : {0.0, 0.013, 0.71}) worst = std::max(worst, build_lab_hamiltonian(params, shape, t).hermiticity_error());
  return worst;
}

double tuning_identities(const ValidationOptions&) {
  double worst = 0.0;
  const HilbertShape shape(2, 2);
  for (int p = 1; p <= 5; ++p) {
    SystemParams params = SystemParams::resonant(8.95, 0.0, 0.05, 0.05, 100.0, 2000.0);
    params.g = tune_coupling(params.Omega, params.eta_c, p);
    const BlockParams block = make_block_params(params, 1, 1);
    worst = std::max(worst, std::abs(block.mu / block.a - 4.0 * p) / (4.0 * p));
    const ProtocolSchedule schedule = ghz_schedule(params, shape, 1, 1, p);
    worst = std::max(worst, std::abs(schedule.a_t_product - kPi / 4) / (kPi / 4));
    worst = std::max(worst, std::abs(block.mu * schedule.t_p - p * kPi) / (p * kPi));
  }
  return worst;
}

double ghz_table(const ValidationOptions&) {
  const HilbertShape shape(2, 2);
  double worst = 0.0;
  for (int p = 1; p <= 2; ++p) {
    const SystemParams base = SystemParams::resonant(1.0, 0.0, 0.05, 0.05, 20.0, 400.0);
    const ProtocolSchedule schedule = ghz_schedule(base, shape, 1, 1, p, Tuning::retune);
    const BlockParams block = schedule.block;
    for (int idx = 0; idx < 4; ++idx) {
      const QuantumState psi = embed_block_state(block_propagate(BlockState::basis(block, idx), schedule.t_p), shape);
      const BasisLabel label = block_labels(1, 1)[static_cast<std::size_t>(idx)];
      const QuantumState target = target_state(label, shape, 1, 1, p);
      worst = std::max(worst, (psi.amplitudes() - target.amplitudes()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double operation_time_check(const ValidationOptions&) {
  const double omega = 8.95e6;
  SystemParams params = SystemParams::resonant(omega, 0.0, 0.05, 0.05, 2e8, 4e9);
  const ProtocolSchedule schedule = ghz_schedule(params, HilbertShape(2, 2), 1, 1, 1, Tuning::retune);
  return std::abs(schedule.t_p - 0.34e-6) / 0.34e-6;
}

double target_marginals(const ValidationOptions&) {
  const HilbertShape shape(3, 3);
  double worst = 0.0;
  for (int p = 1; p <= 2; ++p) {
    for (const BasisLabel& label : block_labels(1, 1)) {
      const QuantumState target = target_state(label, shape, 1, 1, p);
      for (Slot slot : {Slot::ion, Slot::vib, Slot::cav}) {
        const Matrix rho = partial_trace(target, {slot}).rho;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
        // Largest two eigenvalues carry the occupied levels.
        const Eigen::VectorXd ev = solver.eigenvalues();
        const Eigen::Index top = ev.size() - 1;
        worst = std::max({worst, std::abs(ev(top) - 0.5), std::abs(ev(top - 1) - 0.5)});
        for (Eigen::Index i = 0; i + 2 < ev.size(); ++i) worst = std::max(worst, std::abs(ev(i)));
      }
    }
  }
  return worst;
}

double ld_convergence(const ValidationOptions&) {
  const HilbertShape shape(6, 6);
  auto difference = [&](double eta) {
    SystemParams params = SystemParams::resonant(1.0, 0.0, eta, eta, 50.0, 1000.0);
    params.g = tune_coupling(params.Omega, eta, 1);
    return (build_rwa_hamiltonian(params, shape).entries() - build_ld_hamiltonian(params, shape).entries())
        .cwiseAbs()
        .maxCoeff();
  };
  return std::abs(difference(0.1) / difference(0.05) - 4.0);
}

double node_offset(const ValidationOptions&) {
  const HilbertShape shape(2, 2);
  double worst = 0.0;
  for (double phi : {0.0, kPi / 6, kPi / 3}) {
    SystemParams offset = SystemParams::resonant(1.0, 0.0, 0.05, 0.05, 20.0, 400.0, phi);
    const ProtocolSchedule tuned = ghz_schedule(offset, shape, 1, 1, 1, Tuning::retune);
    SystemParams at_node = tuned.params;
    at_node.g = effective_coupling(tuned.params.g, phi);
    at_node.phi = 0.0;
    ProtocolOptions options;
    options.shape = shape;
    const ProtocolTrace a = trace_protocol(tuned.params, {IonLevel::g, 0, 0}, Model::block_analytic, tuned, options);
    const ProtocolTrace b = trace_protocol(at_node, {IonLevel::g, 0, 0}, Model::block_analytic, tuned, options);
    for (std::size_t k = 0; k < a.points.size(); ++k) {
      worst = std::max(worst, std::abs(a.points[k].fidelity - b.points[k].fidelity));
    }
  }
  return worst;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"block_schrodinger_residual", 1e-5, schrodinger_residual},
      {"block_propagator_vs_eigendecomposition", 1e-10, propagator_vs_eigen},
      {"block_swap_symmetry", 0.0, swap_symmetry},
      {"block_propagator_composition", 1e-10, propagator_composition},
      {"ok_series_vs_laguerre", 1e-12, ok_vs_laguerre},
      {"rwa_block_structure", 1e-14, rwa_structure},
      {"ld_block_restriction", 0.0, ld_restriction},
      {"hamiltonian_hermiticity", 1e-12, hermiticity},
      {"tuning_identities", 1e-12, tuning_identities},
      {"ghz_state_table", 1e-10, ghz_table},
      {"operation_time_0.34us", 1e-2, operation_time_check},
      {"target_marginals_maximally_mixed", 1e-12, target_marginals},
      {"ld_convergence_ratio_minus_4", 0.8, ld_convergence},
      {"node_offset_compensation", 1e-6, node_offset},
  };
  return all;
}

}  // namespace

std::vector<std::string> validation_check_names() {
  std::vector<std::string> names;
  for (const Check& check : checks()) names.push_back(check.name);
  return names;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> results;
  for (const Check& check : checks()) {
    CheckResult r;
    r.name = check.name;
    r.threshold = check.threshold;
    try {
      r.measured = check.measure(options);
      r.passed = r.measured <= check.threshold;
    } catch (const std::exception&) {
      r.measured = std::numeric_limits<double>::infinity();
      r.passed = false;
    }
    results.push_back(r);
  }
  return results;
}

}  // namespace ghzsim
