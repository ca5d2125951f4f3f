#include "ghzsim/evolution.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghzsim {

namespace {

constexpr Complex kI(0.0, 1.0);

// sin(mu t) / mu, continuous at mu = 0.
double sin_over(double mu, double t) { return mu == 0.0 ? t : std::sin(mu * t) / mu; }

Eigen::Vector4cd swap_block(const Eigen::Vector4cd& v) { return Eigen::Vector4cd(v(3), v(2), v(1), v(0)); }

double norm_of(const Vector& v) { return v.norm(); }

}  // namespace

double BlockState::norm() const {
  double sum = 0.0;
  for (const Complex& c : amplitudes) sum += std::norm(c);
  return std::sqrt(sum);
}

BlockState BlockState::basis(const BlockParams& block, int index) {
  if (index < 0 || index > 3) throw IndexError("block basis index must be in [0, 4)");
  BlockState state;
  state.block = block;
  state.amplitudes[static_cast<std::size_t>(index)] = 1.0;
  return state;
}

Eigen::Matrix4cd block_ld_matrix(const BlockParams& block) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(0, 1) = h(1, 0) = block.omega;
  h(2, 3) = h(3, 2) = block.omega;
  h(0, 3) = h(3, 0) = block.coupling;
  return h;
}

Eigen::Matrix4cd block_swap_permutation() {
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 3) = p(3, 0) = 1.0;
  p(1, 2) = p(2, 1) = 1.0;
  return p;
}

Eigen::Matrix4cd block_propagator(const BlockParams& block, double t) {
  const double a = block.a;
  const double omega = block.omega;
  const double s = std::sin(a * t);
  const double c = std::cos(a * t);
  const double cos_mu = std::cos(block.mu * t);
  const double sin_mu = sin_over(block.mu, t);

  Eigen::Vector4cd from_g_lower;  // initial |g,m-1,n-1>
  from_g_lower(2) = a * s * sin_mu + c * cos_mu;
  from_g_lower(3) = -kI * omega * c * sin_mu;
  from_g_lower(0) = -omega * s * sin_mu;
  from_g_lower(1) = kI * (a * c * sin_mu - s * cos_mu);

  Eigen::Vector4cd from_e_lower;  // initial |e,m-1,n-1>
  from_e_lower(3) = c * cos_mu - a * s * sin_mu;
  from_e_lower(2) = -kI * omega * c * sin_mu;
  from_e_lower(1) = -omega * s * sin_mu;
  from_e_lower(0) = -kI * (a * c * sin_mu + s * cos_mu);

  Eigen::Matrix4cd u;
  u.col(0) = swap_block(from_e_lower);
  u.col(1) = swap_block(from_g_lower);
  u.col(2) = from_g_lower;
  u.col(3) = from_e_lower;
  return u;
}

BlockState block_propagate(const BlockState& initial, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("block_propagate: t must be >= 0");
  const BlockParams& b = initial.block;
  if (!std::isfinite(b.a) || !std::isfinite(b.mu) || !std::isfinite(b.omega)) {
    throw InvalidArgument("block_propagate: non-finite block parameters");
  }
  Eigen::Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = initial.amplitudes[static_cast<std::size_t>(i)];
  const Eigen::Vector4cd out = block_propagator(b, t) * v;
  BlockState result;
  result.block = b;
  for (int i = 0; i < 4; ++i) result.amplitudes[static_cast<std::size_t>(i)] = out(i);
  return result;
}

QuantumState embed_block_state(const BlockState& state, const HilbertShape& shape) {
  Vector amps = Vector::Zero(shape.total());
  const auto labels = block_labels(state.block.m, state.block.n);
  for (std::size_t i = 0; i < 4; ++i) {
    amps(shape.index(labels[i].s, labels[i].m, labels[i].n)) = state.amplitudes[i];
  }
  return QuantumState(shape, std::move(amps));
}

EvolutionResult evolve_static(const OperatorMatrix& hamiltonian, const QuantumState& initial,
                              std::span<const double> times, std::string model_tag) {
  if (hamiltonian.dim() != initial.shape().total()) {
    throw ShapeError("evolve_static: Hamiltonian dimension does not match the state");
  }
  const double herm = hamiltonian.hermiticity_error();
  if (herm > 1e-9) {
    throw ModelError("evolve_static: Hamiltonian is not Hermitian (max deviation " + std::to_string(herm) + ")");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("evolve_static: times must be strictly increasing");
  }

  const Matrix h = 0.5 * (hamiltonian.entries() + hamiltonian.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Matrix& v = solver.eigenvectors();
  const Eigen::VectorXd& energies = solver.eigenvalues();
  const Vector coeffs = v.adjoint() * initial.amplitudes();
  const double norm0 = initial.norm();

  EvolutionResult result;
  result.model_tag = std::move(model_tag);
  for (double t : times) {
    Vector rotated(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) rotated(k) = std::exp(-kI * energies(k) * t) * coeffs(k);
    QuantumState state(initial.shape(), v * rotated);
    result.times.push_back(t);
    result.truncation_leak.push_back(top_level_population(state));
    result.norm_drift.push_back(std::abs(state.norm() - norm0));
    result.states.push_back(std::move(state));
  }
  return result;
}

TimeDependentHamiltonian lab_frame_source(const SystemParams& params, const HilbertShape& shape) {
  auto model = std::make_shared<const LabFrameModel>(params, shape);
  return {[model](double t) { return model->at(t); }, model->max_frequency()};
}

std::size_t timedep_step_count(double t_end, double dt) {
  if (!(dt > 0.0)) throw ConfigurationError("evolve_timedep: dt must be > 0");
  if (!(t_end >= 0.0)) throw InvalidArgument("evolve_timedep: t_end must be >= 0");
  const double ratio = t_end / dt;
  auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    steps = static_cast<std::size_t>(std::ceil(ratio));
  }
  return steps;
}

EvolutionResult evolve_timedep(const TimeDependentHamiltonian& hamiltonian, const QuantumState& initial,
                               double t_end, double dt, const TimeDependentOptions& options) {
  const std::size_t steps = timedep_step_count(t_end, dt);
  if (hamiltonian.max_frequency > 0.0) {
    const double limit = (2.0 * std::numbers::pi / hamiltonian.max_frequency) / 50.0;
    if (dt > limit * (1.0 + 1e-12)) {
      throw ConfigurationError("evolve_timedep: dt=" + std::to_string(dt) +
                               " does not resolve the largest frequency; need dt <= " + std::to_string(limit));
    }
  }
  const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);
  const double norm0 = initial.norm();
  const HilbertShape shape = initial.shape();

  EvolutionResult result;
  result.model_tag = options.model_tag;
  auto record = [&](double t, const Vector& psi) {
    QuantumState state(shape, psi);
    result.times.push_back(t);
    result.truncation_leak.push_back(top_level_population(state));
    result.norm_drift.push_back(std::abs(state.norm() - norm0));
    result.states.push_back(std::move(state));
  };

  Vector psi = initial.amplitudes();
  record(0.0, psi);
  Matrix h_start = steps > 0 ? hamiltonian.at(0.0) : Matrix();
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const Matrix h_mid = hamiltonian.at(t + 0.5 * h);
    Matrix h_end = hamiltonian.at(t + h);
    if (h_start.rows() != psi.size()) throw ShapeError("evolve_timedep: Hamiltonian dimension does not match the state");

    const Vector k1 = -kI * (h_start * psi);
    const Vector k2 = -kI * (h_mid * (psi + 0.5 * h * k1));
    const Vector k3 = -kI * (h_mid * (psi + 0.5 * h * k2));
    const Vector k4 = -kI * (h_end * (psi + h * k3));
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_start = std::move(h_end);

    const double drift = std::abs(norm_of(psi) - norm0);
    if (drift > options.max_norm_drift) {
      throw AccuracyError("evolve_timedep: norm drift " + std::to_string(drift) + " exceeds " +
                              std::to_string(options.max_norm_drift) + " at step " + std::to_string(k + 1),
                          drift);
    }
    const bool last = k + 1 == steps;
    if (last || (options.record_every > 0 && (k + 1) % options.record_every == 0)) {
      // Use the exact grid time to avoid accumulated rounding in t.
      record(last ? t_end : static_cast<double>(k + 1) * h, psi);
    }
  }
  return result;
}

QuantumState to_interaction_picture(const QuantumState& state, const SystemParams& params, double t) {
  const HilbertShape& shape = state.shape();
  Vector amps = state.amplitudes();
  for (const BasisLabel& label : basis_labels(shape)) {
    const double ion = label.s == IonLevel::e ? 0.5 : -0.5;
    const double energy = params.nu * (label.m + 0.5) + params.omega_c * label.n + params.omega_0 * ion;
    const Eigen::Index idx = shape.index(label.s, label.m, label.n);
    amps(idx) *= std::exp(kI * energy * t);
  }
  return QuantumState(shape, std::move(amps));
}

}  // namespace ghzsim
