#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ghzsim/errors.hpp"
#include "ghzsim/evolution.hpp"
#include "ghzsim/protocol.hpp"
#include "test_support.hpp"

namespace ghzsim {
namespace {

using testing::max_abs;
constexpr double kPi = std::numbers::pi;

Eigen::Vector4cd as_vector(const BlockState& s) {
  return Eigen::Vector4cd(s.amplitudes[0], s.amplitudes[1], s.amplitudes[2], s.amplitudes[3]);
}

BlockParams random_block() {
  return make_block_params(testing::uniform(0.0, 3.0), testing::uniform(0.0, 3.0), 1, 1);
}

TEST(BlockPropagator, IdentityAtTimeZero) {
  for (int i = 0; i < 4; ++i) {
    const BlockState s = block_propagate(BlockState::basis(make_block_params(1.0, 0.5, 1, 1), i), 0.0);
    for (int j = 0; j < 4; ++j) EXPECT_EQ(s.amplitudes[j], Complex(i == j ? 1.0 : 0.0));
  }
}

TEST(BlockPropagator, MatchesMatrixExponential) {
  for (int trial = 0; trial < 50; ++trial) {
    const BlockParams b = random_block();
    const double t = testing::uniform(0.0, 10.0);
    const Eigen::MatrixXcd expected = testing::propagator(block_ld_matrix(b), t);
    EXPECT_LT(max_abs(block_propagator(b, t) - expected), 1e-10) << "Omega=" << b.omega << " coupling=" << b.coupling;
  }
}

TEST(BlockPropagator, DegenerateParameters) {
  // Omega = 0: a pure sideband oscillation at the full coupling.
  const BlockParams sideband = make_block_params(0.0, 2.0, 1, 1);
  EXPECT_LT(max_abs(block_propagator(sideband, 0.7) - testing::propagator(block_ld_matrix(sideband), 0.7)), 1e-13);
  // Both zero: the identity.
  const BlockParams idle = make_block_params(0.0, 0.0, 1, 1);
  EXPECT_LT(max_abs(block_propagator(idle, 3.0) - Eigen::Matrix4cd::Identity()), 0.0 + 1e-300);
}

TEST(BlockPropagator, UnitaryAndNormPreserving) {
  for (int trial = 0; trial < 100; ++trial) {
    const BlockParams b = random_block();
    const double t = testing::uniform(0.0, 20.0);
    const Eigen::Matrix4cd u = block_propagator(b, t);
    EXPECT_LT(max_abs(u.adjoint() * u - Eigen::Matrix4cd::Identity()), 1e-12);
    BlockState s;
    s.block = b;
    Eigen::Vector4cd v = Eigen::Vector4cd::Random();
    v.normalize();
    for (int i = 0; i < 4; ++i) s.amplitudes[i] = v(i);
    EXPECT_NEAR(block_propagate(s, t).norm(), 1.0, 1e-12);
  }
}

TEST(BlockPropagator, CompositionAndSymmetry) {
  const Eigen::Matrix4cd swap = block_swap_permutation();
  for (int trial = 0; trial < 50; ++trial) {
    const BlockParams b = random_block();
    const double t1 = testing::uniform(0.0, 5.0);
    const double t2 = testing::uniform(0.0, 5.0);
    EXPECT_LT(max_abs(block_propagator(b, t1 + t2) - block_propagator(b, t2) * block_propagator(b, t1)), 1e-10);
    const Eigen::Matrix4cd u = block_propagator(b, t1);
    EXPECT_LT(max_abs(swap * u * swap - u), 1e-15);
  }
}

TEST(BlockPropagator, SolvesSchrodingerEquation) {
  for (int trial = 0; trial < 20; ++trial) {
    const BlockParams b = random_block();
    const double t = testing::uniform(0.1, 5.0);
    const double h = 1e-5;
    const Eigen::Matrix4cd derivative = (block_propagator(b, t + h) - block_propagator(b, t - h)) / (2.0 * h);
    const Eigen::Matrix4cd rhs = Complex(0.0, -1.0) * block_ld_matrix(b) * block_propagator(b, t);
    EXPECT_LT(max_abs(derivative - rhs), 1e-6);
  }
}

TEST(BlockPropagator, NegativeTimeIsRejected) {
  EXPECT_THROW(block_propagate(BlockState::basis(make_block_params(1.0, 1.0, 1, 1), 2), -1e-9), InvalidArgument);
  EXPECT_THROW(BlockState::basis(make_block_params(1.0, 1.0, 1, 1), 4), IndexError);
}

TEST(BlockPropagator, GhzAtFirstSolution) {
  const double omega = 8.95e6;
  const BlockParams b = make_block_params(omega, tune_coupling(omega, 0.05, 1) * 0.05, 1, 1);
  const double t1 = kPi / b.mu;
  EXPECT_NEAR(t1 * 1e6, 0.33987, 1e-5);
  const BlockState out = block_propagate(BlockState::basis(b, 2), t1);
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector4cd expected(0.0, Complex(0.0, r), -r, 0.0);
  EXPECT_LT((as_vector(out) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BlockPropagator, GhzTableForAllInitialStates) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  for (int p = 1; p <= 4; ++p) {
    const BlockParams b = make_block_params(1.0, tune_coupling(1.0, 0.1, p) * 0.1, 1, 1);
    const Eigen::Matrix4cd u = block_propagator(b, p * kPi / b.mu);
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    // Column j: initial block state j; flip maps j -> 3 - j.
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4cd expected = Eigen::Vector4cd::Zero();
      expected(j) = sign * r;
      expected(3 - j) = -sign * i * r;
      EXPECT_LT((u.col(j) - expected).cwiseAbs().maxCoeff(), 1e-10) << "p=" << p << " column " << j;
    }
  }
}

TEST(EvolveStatic, ZeroHamiltonianLeavesStateUnchanged) {
  const HilbertShape shape(3, 3);
  const QuantumState psi = basis_state(shape, IonLevel::e, 1, 2);
  const std::vector<double> times = {0.0, 1.0, 100.0};
  const auto result = evolve_static(OperatorMatrix(Matrix::Zero(shape.total(), shape.total())), psi, times);
  for (const QuantumState& s : result.states) EXPECT_LT((s.amplitudes() - psi.amplitudes()).norm(), 1e-15);
}

TEST(EvolveStatic, RabiOscillation) {
  // Omega = 1, eta = 0 carrier only: |g,0,0> -> cos t |g> - i sin t |e>.
  const HilbertShape shape(1, 1);
  SystemParams p = SystemParams::resonant(1.0, 0.0, 0.0, 0.0, 20.0, 400.0);
  const OperatorMatrix h = build_ld_hamiltonian(p, shape);
  const std::vector<double> times = {kPi / 2.0};
  const auto result = evolve_static(h, basis_state(shape, IonLevel::g, 0, 0), times);
  EXPECT_NEAR(result.states.back().population({IonLevel::e, 0, 0}), 1.0, 1e-12);
}

TEST(EvolveStatic, MatchesPadeExponentialAndConservesEnergy) {
  const HilbertShape shape(4, 4);
  const SystemParams p = SystemParams::resonant(1.0, 30.0, 0.1, 0.05, 20.0, 400.0);
  const OperatorMatrix h = build_rwa_hamiltonian(p, shape);
  Vector amps = Vector::Random(shape.total());
  amps.normalize();
  const QuantumState psi(shape, amps);
  const std::vector<double> times = {0.5, 1.0, 3.0, 7.5};
  const auto result = evolve_static(h, psi, times);
  const double e0 = (amps.adjoint() * h.entries() * amps)(0, 0).real();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Vector expected = testing::propagator(h.entries(), times[k]) * amps;
    EXPECT_LT((result.states[k].amplitudes() - expected).norm(), 1e-10);
    const Vector& v = result.states[k].amplitudes();
    EXPECT_NEAR((v.adjoint() * h.entries() * v)(0, 0).real(), e0, 1e-10);
    EXPECT_LT(result.norm_drift[k], 1e-12);
  }
}

TEST(EvolveStatic, AgreesWithBlockPropagatorInsideTheBlock) {
  // At 2x2 the (1,1) block is closed: the sideband out of |e,1,1> needs m = 2.
  const HilbertShape shape(2, 2);
  const SystemParams p = SystemParams::resonant(1.0, tune_coupling(1.0, 0.05, 1), 0.05, 0.05, 20.0, 400.0);
  const BlockParams b = make_block_params(p, 1, 1);
  const std::vector<double> times = {0.4, kPi / b.mu};
  const auto result = evolve_static(build_ld_hamiltonian(p, shape), basis_state(shape, IonLevel::e, 0, 0), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const QuantumState block = embed_block_state(block_propagate(BlockState::basis(b, 3), times[k]), shape);
    EXPECT_LT((result.states[k].amplitudes() - block.amplitudes()).norm(), 1e-12);
  }
}

TEST(EvolveStatic, Errors) {
  const HilbertShape shape(2, 2);
  Matrix bad = Matrix::Zero(shape.total(), shape.total());
  bad(0, 1) = 1.0;
  const QuantumState psi = basis_state(shape, IonLevel::g, 0, 0);
  const std::vector<double> times = {1.0};
  EXPECT_THROW(evolve_static(OperatorMatrix(bad), psi, times), ModelError);
  const std::vector<double> unordered = {1.0, 0.5};
  EXPECT_THROW(evolve_static(OperatorMatrix(Matrix::Zero(8, 8)), psi, unordered), InvalidArgument);
  EXPECT_THROW(evolve_static(OperatorMatrix(Matrix::Zero(4, 4)), psi, times), ShapeError);
}

TimeDependentHamiltonian constant(const Matrix& h) { return {[h](double) { return h; }, 0.0}; }

TEST(EvolveTimedep, ConstantHamiltonianMatchesStaticEngine) {
  const HilbertShape shape(4, 4);
  const SystemParams p = SystemParams::resonant(1.0, tune_coupling(1.0, 0.05, 1), 0.05, 0.05, 20.0, 400.0);
  const OperatorMatrix h = build_ld_hamiltonian(p, shape);
  const QuantumState psi = basis_state(shape, IonLevel::g, 0, 0);
  const double t = 3.0;
  const auto rk = evolve_timedep(constant(h.entries()), psi, t, 1e-3);
  const std::vector<double> times = {t};
  const auto exact = evolve_static(h, psi, times);
  EXPECT_LT((rk.states.back().amplitudes() - exact.states.back().amplitudes()).norm(), 1e-8);
  EXPECT_EQ(rk.times.back(), t);
}

TEST(EvolveTimedep, FreeEvolutionPhases) {
  // Omega = g = 0: only the phases of H0 evolve, undone exactly by the
  // interaction-picture transform.
  const HilbertShape shape(3, 3);
  SystemParams p = SystemParams::resonant(0.0, 0.0, 0.05, 0.05, 2.0, 40.0);
  Vector amps = Vector::Random(shape.total());
  amps.normalize();
  const QuantumState psi(shape, amps);
  const double t = 0.5;
  const auto result = evolve_timedep(lab_frame_source(p, shape), psi, t, 5e-5);
  const QuantumState back = to_interaction_picture(result.states.back(), p, t);
  EXPECT_LT((back.amplitudes() - amps).norm(), 1e-9);
}

TEST(EvolveTimedep, ZeroDurationReturnsInitialState) {
  const QuantumState psi = basis_state(HilbertShape(2, 2), IonLevel::g, 1, 1);
  const auto result = evolve_timedep(constant(Matrix::Identity(8, 8)), psi, 0.0, 0.1);
  ASSERT_EQ(result.states.size(), 1u);
  EXPECT_EQ(result.states[0].amplitudes(), psi.amplitudes());
}

TEST(EvolveTimedep, RecordsEveryKthStepOnTheGrid) {
  const QuantumState psi = basis_state(HilbertShape(2, 2), IonLevel::g, 1, 1);
  TimeDependentOptions opts;
  opts.record_every = 2;
  const auto result = evolve_timedep(constant(Matrix::Zero(8, 8)), psi, 1.0, 0.1, opts);
  ASSERT_EQ(result.times.size(), 6u);
  EXPECT_NEAR(result.times[1], 0.2, 1e-15);
  EXPECT_EQ(result.times.back(), 1.0);
  EXPECT_EQ(timedep_step_count(1.0, 0.3), 4u);
  EXPECT_EQ(timedep_step_count(0.3, 0.1), 3u);
}

TEST(EvolveTimedep, UnresolvedStepIsConfigurationError) {
  const HilbertShape shape(2, 2);
  const SystemParams p = SystemParams::resonant(1.0, 1.0, 0.05, 0.05, 20.0, 400.0);
  const double limit = 2.0 * kPi / p.max_frequency() / 50.0;
  const QuantumState psi = basis_state(shape, IonLevel::g, 0, 0);
  EXPECT_THROW(evolve_timedep(lab_frame_source(p, shape), psi, 0.01, limit * 1.01), ConfigurationError);
  EXPECT_THROW(evolve_timedep(constant(Matrix::Zero(8, 8)), psi, 1.0, 0.0), ConfigurationError);
}

TEST(EvolveTimedep, NormDriftIsAccuracyError) {
  // h * |H| = 1 loses about 1/72 of the norm in the first step.
  const QuantumState psi = basis_state(HilbertShape(1, 1), IonLevel::g, 0, 0);
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = h(1, 0) = 1.0;
  try {
    evolve_timedep(constant(h), psi, 10.0, 1.0);
    FAIL() << "expected AccuracyError";
  } catch (const AccuracyError& e) {
    EXPECT_GT(e.drift(), 1e-6);
  }
}

TEST(EvolveTimedep, FourthOrderConvergence) {
  // Smooth time dependence: a Rabi drive with a chirped phase.
  TimeDependentHamiltonian h{[](double t) {
                               Matrix m = Matrix::Zero(2, 2);
                               const Complex drive = std::exp(Complex(0.0, 0.7 * t * t));
                               m(1, 0) = drive;
                               m(0, 1) = std::conj(drive);
                               m(1, 1) = 0.3;
                               return m;
                             },
                             0.0};
  const QuantumState psi = basis_state(HilbertShape(1, 1), IonLevel::g, 0, 0);
  const double t = 2.0;
  const Vector ref = evolve_timedep(h, psi, t, 1e-4).states.back().amplitudes();
  std::vector<double> errors;
  for (double dt : {0.04, 0.02, 0.01}) {
    errors.push_back((evolve_timedep(h, psi, t, dt).states.back().amplitudes() - ref).norm());
  }
  EXPECT_NEAR(std::log2(errors[0] / errors[1]), 4.0, 0.3);
  EXPECT_NEAR(std::log2(errors[1] / errors[2]), 4.0, 0.3);
}

TEST(EvolveTimedep, LabFrameApproachesRwaAsHierarchyGrows) {
  // Same truncation in both pictures, so any difference is dynamical.
  const HilbertShape shape(3, 3);
  std::vector<double> infidelity;
  for (double nu : {20.0, 40.0}) {
    const double omega_0 = 20.0 * nu;
    const SystemParams p =
        SystemParams::resonant(1.0, tune_coupling(1.0, 0.05, 1), 0.05, 0.05, nu, omega_0);
    const double t = kPi / make_block_params(p, 1, 1).mu;
    const QuantumState psi = basis_state(shape, IonLevel::g, 0, 0);
    const std::vector<double> times = {t};
    const QuantumState rwa = evolve_static(build_rwa_hamiltonian(p, shape), psi, times).states.back();
    // Step sized from the spectral radius so the RK4 norm loss stays far below its budget.
    const double radius = LabFrameModel(p, shape).at(0.0).cwiseAbs().rowwise().sum().maxCoeff();
    const double dt = 0.02 / radius;
    const QuantumState lab = evolve_timedep(lab_frame_source(p, shape), psi, t, dt).states.back();
    const QuantumState rotated = to_interaction_picture(lab, p, t);
    infidelity.push_back(1.0 - std::norm(rotated.inner(rwa)));
  }
  EXPECT_LT(infidelity[0], 0.05);
  EXPECT_LT(infidelity[1], infidelity[0]);
}

}  // namespace
}  // namespace ghzsim
