#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ghzsim/fock.hpp"
#include "ghzsim/hamiltonian.hpp"

namespace ghzsim {

// Amplitudes over (|g,m,n>, |e,m,n>, |g,m-1,n-1>, |e,m-1,n-1>).
struct BlockState {
  std::array<Complex, 4> amplitudes{};
  BlockParams block;

  double norm() const;
  static BlockState basis(const BlockParams& block, int index);
};

// Lamb-Dicke block matrix: carrier Omega on (0,1) and (2,3), sideband
// `coupling` = 2a on (0,3).
Eigen::Matrix4cd block_ld_matrix(const BlockParams& block);

// Closed-form propagator exp(-i H t) of the Lamb-Dicke block. Columns 2 and 3
// (initial |g,m-1,n-1>, |e,m-1,n-1>) are the textbook expressions in a and mu;
// columns 0 and 1 follow from the block symmetry that swaps
// |g,m,n> <-> |e,m-1,n-1> and |e,m,n> <-> |g,m-1,n-1>.
Eigen::Matrix4cd block_propagator(const BlockParams& block, double t);

// The swap permutation above, as a matrix.
Eigen::Matrix4cd block_swap_permutation();

// Throws InvalidArgument for t < 0 or non-finite block parameters.
BlockState block_propagate(const BlockState& initial, double t);

// Places block amplitudes into a full state of the given shape.
QuantumState embed_block_state(const BlockState& state, const HilbertShape& shape);

struct EvolutionResult {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<double> truncation_leak;  // top-level population per time
  std::vector<double> norm_drift;       // | |psi(t)| - |psi(0)| |
  std::string model_tag;
};

// psi(t) = exp(-i H t) psi(0) from the eigendecomposition of H.
// Throws ModelError when H deviates from Hermitian by more than 1e-9.
EvolutionResult evolve_static(const OperatorMatrix& hamiltonian, const QuantumState& initial,
                              std::span<const double> times, std::string model_tag = "static");

struct TimeDependentHamiltonian {
  std::function<Matrix(double)> at;
  // Largest physical frequency; the step must resolve it 50 times per period.
  double max_frequency = 0.0;
};

TimeDependentHamiltonian lab_frame_source(const SystemParams& params, const HilbertShape& shape);

struct TimeDependentOptions {
  // Store every k-th step (0: only the endpoints). The final state is always stored.
  std::size_t record_every = 0;
  double max_norm_drift = 1e-6;
  std::string model_tag = "timedep";
};

// Fixed-step classical Runge-Kutta (fourth order), with the Hamiltonian
// evaluated at t, t + dt/2 and t + dt. The step is shrunk to
// t_end / ceil(t_end / dt) so the grid lands on t_end. No renormalization.
//
// Throws ConfigurationError when dt > (1/50) 2 pi / max_frequency and
// AccuracyError when the norm drifts by more than max_norm_drift.
EvolutionResult evolve_timedep(const TimeDependentHamiltonian& hamiltonian, const QuantumState& initial,
                               double t_end, double dt, const TimeDependentOptions& options = {});

// Number of steps evolve_timedep takes for (t_end, dt).
std::size_t timedep_step_count(double t_end, double dt);

// Applies U_0^dagger(t) = exp(+i H_0 t), with H_0 the free ion + trap + cavity Hamiltonian.
QuantumState to_interaction_picture(const QuantumState& state, const SystemParams& params, double t);

}  // namespace ghzsim
