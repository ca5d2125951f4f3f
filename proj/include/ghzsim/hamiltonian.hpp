#pragma once

// Hamiltonians of a trapped two-level ion driven by a resonant laser and
// coupled to a red-sideband tuned cavity mode, at four levels of
// approximation:
//
//   lab frame      H0 + H_int(t), exact operator exponential / sine of the
//                  position quadrature eta (a + a^dagger)
//   rwa            time-independent interaction-picture Hamiltonian with the
//                  diagonal O_k operators kept to all orders in eta
//   lamb-dicke     lowest order in eta_L, eta_c
//   block          the 4x4 restriction to {|g,m,n>, |e,m,n>, |g,m-1,n-1>, |e,m-1,n-1>}
//
// Units: hbar = 1, every frequency is an angular frequency, all in one
// consistent unit system chosen by the caller (the CLI uses rad/s).

#include <array>

#include "ghzsim/fock.hpp"

namespace ghzsim {

struct SystemParams {
  double Omega = 0.0;    // ion-laser coupling
  double g = 0.0;        // ion-cavity coupling
  double eta_L = 0.0;    // Lamb-Dicke parameter of the laser
  double eta_c = 0.0;    // Lamb-Dicke parameter of the cavity
  double nu = 0.0;       // trap frequency
  double omega_0 = 0.0;  // ion transition frequency
  double omega_c = 0.0;  // cavity frequency
  double omega_L = 0.0;  // laser frequency
  double phi = 0.0;      // standing-wave node offset phase, radians

  // Fills omega_L = omega_0 (carrier) and omega_c = omega_0 - nu (red sideband).
  static SystemParams resonant(double Omega, double g, double eta_L, double eta_c, double nu, double omega_0,
                               double phi = 0.0);

  // Throws InvalidArgument on negative frequencies or LD parameters, or non-finite values.
  void validate() const;

  bool carrier_resonant(double rel_tol = 1e-9) const;
  bool sideband_resonant(double rel_tol = 1e-9) const;

  // Largest frequency scale among the parameters; sets the step-resolution
  // guard of the time-dependent integrator.
  double max_frequency() const;
};

// Throws ConfigurationError naming the violated condition.
void require_resonances(const SystemParams& params, double rel_tol = 1e-9);

// g cos(phi): the cavity coupling seen by an ion displaced from the node.
double effective_coupling(double g, double phi);

// Derived quantities of one four-state block (m, n >= 1).
//
// `coupling` is the sideband matrix element g_eff eta_c sqrt(m n) of the
// block Hamiltonian. The closed-form propagator oscillates at half that
// rate, a = coupling / 2, and at mu = sqrt(a^2 + Omega^2).
struct BlockParams {
  int m = 1;
  int n = 1;
  double omega = 0.0;
  double coupling = 0.0;
  double a = 0.0;
  double mu = 0.0;
};

BlockParams make_block_params(double Omega, double coupling, int m, int n);
BlockParams make_block_params(const SystemParams& params, int m, int n);

// <m|O_k(eta)|m> = exp(-eta^2/2) sum_{p=0}^{m} (-eta^2)^p m! / (p! (p+k)! (m-p)!)
double ok_diagonal_element(int k, double eta, int m);

// Diagonal O_k on a vibrational space of dimension dim.
OperatorMatrix build_O_k(int k, double eta, int dim);

double matrix_element_F_L(int m, double eta_L);
// eta_c sqrt(m) <m-1|O_1(eta_c)|m-1>; requires m >= 1.
double matrix_element_F_c(int m, double eta_c);

// exp(i eta (a + a^dagger)) and sin(eta (a + a^dagger) + phi) on a truncated mode,
// through the eigendecomposition of the quadrature.
Matrix exp_i_quadrature(double eta, int dim);
Matrix sin_quadrature(double eta, double phi, int dim);

// Lab-frame Hamiltonian with its time-independent parts assembled once.
//
//   H(t) = nu (a^dag a + 1/2) + omega_c b^dag b + (omega_0/2) sigma_z
//        + Omega [sigma_+ exp(i eta_L X) e^{-i omega_L t} + h.c.]
//        + g (sigma_+ + sigma_-)(b^dag + b) sin(eta_c X + phi)
class LabFrameModel {
 public:
  LabFrameModel(const SystemParams& params, const HilbertShape& shape);

  Matrix at(double t) const;
  const SystemParams& params() const { return params_; }
  const HilbertShape& shape() const { return shape_; }
  double max_frequency() const { return params_.max_frequency(); }

 private:
  SystemParams params_;
  HilbertShape shape_;
  Matrix static_part_;
  Matrix laser_part_;  // Omega sigma_+ exp(i eta_L X); the h.c. is added in at()
};

OperatorMatrix build_lab_hamiltonian(const SystemParams& params, const HilbertShape& shape, double t);

// Interaction-picture RWA Hamiltonian, O_k kept to all orders:
//   Omega (sigma_+ + sigma_-) O_0(eta_L) + g_eff [sigma_+ (eta_c O_1(eta_c) a) b + h.c.]
OperatorMatrix build_rwa_hamiltonian(const SystemParams& params, const HilbertShape& shape);

// Lowest order in eta: Omega (sigma_+ + sigma_-) + g_eff eta_c (sigma_+ a b + sigma_- a^dag b^dag).
OperatorMatrix build_ld_hamiltonian(const SystemParams& params, const HilbertShape& shape);

struct BlockHamiltonian {
  OperatorMatrix matrix;  // 4x4, basis (|g,m,n>, |e,m,n>, |g,m-1,n-1>, |e,m-1,n-1>)
  BlockParams block;
};

BlockHamiltonian build_block_hamiltonian(const SystemParams& params, int m, int n, bool ld_limit);

// The block labels in block-basis order.
std::array<BasisLabel, 4> block_labels(int m, int n);

}  // namespace ghzsim
