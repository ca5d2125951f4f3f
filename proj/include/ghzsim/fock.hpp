#pragma once

// Truncated Fock-space and qubit algebra for the ion (two levels), one
// vibrational mode and one cavity mode.
//
// Basis ordering is fixed: the ion level is the slowest index, then the
// phonon number m, then the photon number n:
//
//   index(s, m, n) = s * (vib_dim * cav_dim) + m * cav_dim + n,   s in {g=0, e=1}
//
// Operators on the full space are Kronecker products ion (x) vib (x) cav in
// the same order.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ghzsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class IonLevel { g = 0, e = 1 };
enum class Slot { ion = 0, vib = 1, cav = 2 };

char to_char(IonLevel s);
std::string_view to_string(Slot slot);

struct HilbertShape {
  static constexpr int ion_dim = 2;

  int vib_dim = 1;
  int cav_dim = 1;

  HilbertShape() = default;
  // Throws InvalidDimension unless both dimensions are >= 1.
  HilbertShape(int vib, int cav);

  int total() const { return ion_dim * vib_dim * cav_dim; }
  int dim(Slot slot) const;
  bool contains(int m, int n) const { return m >= 0 && n >= 0 && m < vib_dim && n < cav_dim; }
  // Throws IndexError when (m, n) lies outside the truncation.
  Eigen::Index index(IonLevel s, int m, int n) const;

  friend bool operator==(const HilbertShape&, const HilbertShape&) = default;
};

std::string to_string(const HilbertShape& shape);

// Label |s, m, n> of a product basis state.
struct BasisLabel {
  IonLevel s = IonLevel::g;
  int m = 0;
  int n = 0;

  // "g,0,0" style; parse() also accepts "g00" when both numbers are one digit.
  std::string to_string() const;
  static BasisLabel parse(std::string_view text);

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

// All labels of a shape, in basis order.
std::vector<BasisLabel> basis_labels(const HilbertShape& shape);

// Dense square complex matrix. Operators on the full tripartite space carry
// their HilbertShape; single-subsystem operators only carry a dimension.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(Matrix entries);
  OperatorMatrix(Matrix entries, HilbertShape shape);

  const Matrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const std::optional<HilbertShape>& shape() const { return shape_; }

  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  // Largest entry of |H - H^dagger|.
  double hermiticity_error() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }

 private:
  Matrix entries_;
  std::optional<HilbertShape> shape_;
};

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

class QuantumState {
 public:
  QuantumState(HilbertShape shape, Vector amplitudes);

  const HilbertShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amplitudes_; }

  Complex amplitude(const BasisLabel& label) const;
  double population(const BasisLabel& label) const;
  double norm() const { return amplitudes_.norm(); }

  // <this|other>; throws ShapeError on mismatched shapes.
  Complex inner(const QuantumState& other) const;

 private:
  HilbertShape shape_;
  Vector amplitudes_;
};

struct LadderOps {
  OperatorMatrix lower;
  OperatorMatrix raise;
};

struct PauliOps {
  OperatorMatrix sigma_z;
  OperatorMatrix sigma_plus;
  OperatorMatrix sigma_minus;
};

// Truncated annihilation/creation pair; the coupling out of level dim-1 is dropped.
LadderOps ladder_ops(int dim);

// Two-level operators in basis order (g, e); sigma_z = diag(-1, +1).
PauliOps pauli_ops();

Matrix kron(const Matrix& a, const Matrix& b);

// identity (x) ... (x) op (x) ... (x) identity with op in the given slot.
OperatorMatrix embed(const OperatorMatrix& op, Slot slot, const HilbertShape& shape);

// Full-space product op_ion (x) op_vib (x) op_cav.
OperatorMatrix tensor(const Matrix& ion, const Matrix& vib, const Matrix& cav, const HilbertShape& shape);

QuantumState basis_state(const HilbertShape& shape, IonLevel s, int m, int n);
QuantumState basis_state(const HilbertShape& shape, const BasisLabel& label);

// Reduced density matrix over the kept slots, ordered ion, vib, cav.
struct ReducedState {
  std::vector<Slot> slots;
  std::vector<int> dims;
  Matrix rho;
};

ReducedState partial_trace(const QuantumState& state, std::vector<Slot> keep);

// Total population in states whose phonon or photon number sits at the top of
// its truncation. Modes of dimension 1 do not contribute.
double top_level_population(const QuantumState& state);

}  // namespace ghzsim
