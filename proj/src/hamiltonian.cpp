#include "ghzsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghzsim {

namespace {

bool close_rel(double x, double y, double rel_tol) {
  const double scale = std::max({std::abs(x), std::abs(y), 0.0});
  return std::abs(x - y) <= rel_tol * scale;
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix quadrature(int dim) {
  const LadderOps ops = ladder_ops(dim);
  return ops.lower.entries() + ops.raise.entries();
}

// Applies f elementwise to the spectrum of eta X, with X = a + a^dagger real symmetric.
template <typename F>
Matrix quadrature_function(double eta, int dim, F f) {
  if (dim < 1) throw InvalidDimension("quadrature function: dim must be >= 1");
  const Eigen::MatrixXd x = quadrature(dim).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Vector diag(dim);
  for (int i = 0; i < dim; ++i) diag(i) = f(eta * solver.eigenvalues()(i));
  const Matrix vc = v.cast<Complex>();
  return vc * diag.asDiagonal() * vc.adjoint();
}

}  // namespace

SystemParams SystemParams::resonant(double Omega, double g, double eta_L, double eta_c, double nu, double omega_0,
                                    double phi) {
  SystemParams p;
  p.Omega = Omega;
  p.g = g;
  p.eta_L = eta_L;
  p.eta_c = eta_c;
  p.nu = nu;
  p.omega_0 = omega_0;
  p.omega_c = omega_0 - nu;
  p.omega_L = omega_0;
  p.phi = phi;
  return p;
}

void SystemParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"Omega", Omega}, {"g", g},         {"eta_L", eta_L},     {"eta_c", eta_c},   {"nu", nu},
      {"omega_0", omega_0}, {"omega_c", omega_c}, {"omega_L", omega_L}, {"phi", phi},
  };
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) throw InvalidArgument(std::string("parameter ") + name + " is not finite");
    if (std::string(name) != "phi" && value < 0.0) {
      throw InvalidArgument(std::string("parameter ") + name + " must be >= 0");
    }
  }
}

bool SystemParams::carrier_resonant(double rel_tol) const { return close_rel(omega_L, omega_0, rel_tol); }

bool SystemParams::sideband_resonant(double rel_tol) const {
  const double scale = std::max({std::abs(omega_0), std::abs(omega_c), std::abs(nu)});
  return std::abs(omega_0 - omega_c - nu) <= rel_tol * scale;
}

double SystemParams::max_frequency() const { return std::max({Omega, g, nu, omega_0, omega_c, omega_L}); }

void require_resonances(const SystemParams& params, double rel_tol) {
  if (!params.carrier_resonant(rel_tol)) {
    throw ConfigurationError("carrier condition omega_L = omega_0 violated (omega_L=" +
                             std::to_string(params.omega_L) + ", omega_0=" + std::to_string(params.omega_0) + ")");
  }
  if (!params.sideband_resonant(rel_tol)) {
    throw ConfigurationError("red-sideband condition omega_0 - omega_c = nu violated (omega_0 - omega_c=" +
                             std::to_string(params.omega_0 - params.omega_c) +
                             ", nu=" + std::to_string(params.nu) + ")");
  }
}

double effective_coupling(double g, double phi) { return g * std::cos(phi); }

BlockParams make_block_params(double Omega, double coupling, int m, int n) {
  if (m < 1 || n < 1) throw InvalidArgument("block indices m, n must be >= 1");
  BlockParams b;
  b.m = m;
  b.n = n;
  b.omega = Omega;
  b.coupling = coupling;
  b.a = 0.5 * coupling;
  b.mu = std::hypot(b.a, Omega);
  return b;
}

BlockParams make_block_params(const SystemParams& params, int m, int n) {
  // Same operation order as the full-space builders so block restrictions agree bitwise.
  const double coupling =
      (effective_coupling(params.g, params.phi) * params.eta_c) * (std::sqrt(double(m)) * std::sqrt(double(n)));
  return make_block_params(params.Omega, coupling, m, n);
}

double ok_diagonal_element(int k, double eta, int m) {
  if (k < 0 || m < 0) throw InvalidArgument("O_k element needs k >= 0 and m >= 0");
  const double x = eta * eta;
  // term_0 = 1/k!; term_{p+1}/term_p = -x (m-p) / ((p+1)(p+k+1))
  double term = 1.0;
  for (int j = 2; j <= k; ++j) term /= j;
  double sum = term;
  for (int p = 0; p < m; ++p) {
    term *= -x * (m - p) / (double(p + 1) * (p + k + 1));
    sum += term;
  }
  return std::exp(-0.5 * x) * sum;
}

OperatorMatrix build_O_k(int k, double eta, int dim) {
  if (dim < 1) throw InvalidDimension("build_O_k: dim must be >= 1");
  Matrix op = Matrix::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) op(m, m) = ok_diagonal_element(k, eta, m);
  return OperatorMatrix(std::move(op));
}

double matrix_element_F_L(int m, double eta_L) { return ok_diagonal_element(0, eta_L, m); }

double matrix_element_F_c(int m, double eta_c) {
  if (m < 1) throw InvalidArgument("F^c_{m,m-1} needs m >= 1");
  return eta_c * std::sqrt(double(m)) * ok_diagonal_element(1, eta_c, m - 1);
}

Matrix exp_i_quadrature(double eta, int dim) {
  return quadrature_function(eta, dim, [](double x) { return std::exp(Complex(0.0, x)); });
}

Matrix sin_quadrature(double eta, double phi, int dim) {
  return quadrature_function(eta, dim, [phi](double x) { return Complex(std::sin(x + phi), 0.0); });
}

LabFrameModel::LabFrameModel(const SystemParams& params, const HilbertShape& shape) : params_(params), shape_(shape) {
  params_.validate();
  const PauliOps pauli = pauli_ops();
  const LadderOps a = ladder_ops(shape.vib_dim);
  const LadderOps b = ladder_ops(shape.cav_dim);
  const Matrix id_ion = identity(2);
  const Matrix id_vib = identity(shape.vib_dim);
  const Matrix id_cav = identity(shape.cav_dim);

  const Matrix vib_energy = params.nu * (a.raise.entries() * a.lower.entries() + 0.5 * id_vib);
  const Matrix cav_energy = params.omega_c * (b.raise.entries() * b.lower.entries());
  const Matrix ion_energy = 0.5 * params.omega_0 * pauli.sigma_z.entries();
  const Matrix sigma_x = pauli.sigma_plus.entries() + pauli.sigma_minus.entries();

  static_part_ = kron(kron(id_ion, vib_energy), id_cav) + kron(kron(id_ion, id_vib), cav_energy) +
                 kron(kron(ion_energy, id_vib), id_cav) +
                 params.g * kron(kron(sigma_x, sin_quadrature(params.eta_c, params.phi, shape.vib_dim)),
                                 b.lower.entries() + b.raise.entries());
  laser_part_ = params.Omega * kron(kron(pauli.sigma_plus.entries(), exp_i_quadrature(params.eta_L, shape.vib_dim)),
                                    id_cav);
}

Matrix LabFrameModel::at(double t) const {
  const Complex phase = std::exp(Complex(0.0, -params_.omega_L * t));
  return static_part_ + phase * laser_part_ + std::conj(phase) * laser_part_.adjoint();
}

OperatorMatrix build_lab_hamiltonian(const SystemParams& params, const HilbertShape& shape, double t) {
  return OperatorMatrix(LabFrameModel(params, shape).at(t), shape);
}

OperatorMatrix build_rwa_hamiltonian(const SystemParams& params, const HilbertShape& shape) {
  params.validate();
  require_resonances(params);
  const PauliOps pauli = pauli_ops();
  const Matrix sigma_x = pauli.sigma_plus.entries() + pauli.sigma_minus.entries();
  const Matrix o0 = build_O_k(0, params.eta_L, shape.vib_dim).entries();
  const Matrix o1 = build_O_k(1, params.eta_c, shape.vib_dim).entries();
  const Matrix a = ladder_ops(shape.vib_dim).lower.entries();
  const Matrix b = ladder_ops(shape.cav_dim).lower.entries();
  const Matrix sideband_vib = params.eta_c * o1 * a;
  const double g_eff = effective_coupling(params.g, params.phi);

  Matrix h = params.Omega * kron(kron(sigma_x, o0), identity(shape.cav_dim));
  const Matrix absorb = kron(kron(pauli.sigma_plus.entries(), sideband_vib), b);
  h += g_eff * (absorb + Matrix(absorb.adjoint()));
  return OperatorMatrix(std::move(h), shape);
}

OperatorMatrix build_ld_hamiltonian(const SystemParams& params, const HilbertShape& shape) {
  params.validate();
  require_resonances(params);
  const PauliOps pauli = pauli_ops();
  const Matrix sigma_x = pauli.sigma_plus.entries() + pauli.sigma_minus.entries();
  const Matrix a = ladder_ops(shape.vib_dim).lower.entries();
  const Matrix b = ladder_ops(shape.cav_dim).lower.entries();
  const double g_eff = effective_coupling(params.g, params.phi);

  Matrix h = params.Omega * kron(kron(sigma_x, identity(shape.vib_dim)), identity(shape.cav_dim));
  const Matrix absorb = kron(kron(pauli.sigma_plus.entries(), a), b);
  h += g_eff * params.eta_c * (absorb + Matrix(absorb.adjoint()));
  return OperatorMatrix(std::move(h), shape);
}

BlockHamiltonian build_block_hamiltonian(const SystemParams& params, int m, int n, bool ld_limit) {
  if (m < 1 || n < 1) throw InvalidArgument("build_block_hamiltonian: m and n must be >= 1");
  const BlockParams block = make_block_params(params, m, n);

  double carrier_upper = params.Omega;
  double carrier_lower = params.Omega;
  double sideband = block.coupling;
  if (!ld_limit) {
    carrier_upper = params.Omega * matrix_element_F_L(m, params.eta_L);
    carrier_lower = params.Omega * matrix_element_F_L(m - 1, params.eta_L);
    sideband = effective_coupling(params.g, params.phi) * matrix_element_F_c(m, params.eta_c) * std::sqrt(double(n));
  }

  Matrix h = Matrix::Zero(4, 4);
  h(0, 1) = h(1, 0) = carrier_upper;
  h(2, 3) = h(3, 2) = carrier_lower;
  h(0, 3) = h(3, 0) = sideband;
  return {OperatorMatrix(std::move(h)), block};
}

std::array<BasisLabel, 4> block_labels(int m, int n) {
  if (m < 1 || n < 1) throw InvalidArgument("block indices m, n must be >= 1");
  return {BasisLabel{IonLevel::g, m, n}, BasisLabel{IonLevel::e, m, n}, BasisLabel{IonLevel::g, m - 1, n - 1},
          BasisLabel{IonLevel::e, m - 1, n - 1}};
}

}  // namespace ghzsim
