#include "ghzsim/fock.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "ghzsim/errors.hpp"

namespace ghzsim {

char to_char(IonLevel s) { return s == IonLevel::g ? 'g' : 'e'; }

std::string_view to_string(Slot slot) {
  switch (slot) {
    case Slot::ion:
      return "ion";
    case Slot::vib:
      return "vib";
    case Slot::cav:
      return "cav";
  }
  return "?";
}

HilbertShape::HilbertShape(int vib, int cav) : vib_dim(vib), cav_dim(cav) {
  if (vib < 1 || cav < 1) {
    throw InvalidDimension("HilbertShape: vib_dim and cav_dim must be >= 1, got " + std::to_string(vib) +
                           "x" + std::to_string(cav));
  }
}

int HilbertShape::dim(Slot slot) const {
  switch (slot) {
    case Slot::ion:
      return ion_dim;
    case Slot::vib:
      return vib_dim;
    case Slot::cav:
      return cav_dim;
  }
  return 0;
}

Eigen::Index HilbertShape::index(IonLevel s, int m, int n) const {
  if (!contains(m, n)) {
    throw IndexError("basis label (" + std::string(1, to_char(s)) + "," + std::to_string(m) + "," +
                     std::to_string(n) + ") outside truncation " + ghzsim::to_string(*this));
  }
  return static_cast<Eigen::Index>(static_cast<int>(s) * vib_dim * cav_dim + m * cav_dim + n);
}

std::string to_string(const HilbertShape& shape) {
  return std::to_string(shape.vib_dim) + "x" + std::to_string(shape.cav_dim);
}

std::string BasisLabel::to_string() const {
  return std::string(1, to_char(s)) + "," + std::to_string(m) + "," + std::to_string(n);
}

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw InvalidArgument("cannot parse basis label '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

BasisLabel BasisLabel::parse(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '|' && c != '>' && c != '<') cleaned.push_back(c);
  }
  if (cleaned.size() < 3) throw InvalidArgument("cannot parse basis label '" + std::string(text) + "'");

  BasisLabel label;
  char level = static_cast<char>(std::tolower(static_cast<unsigned char>(cleaned[0])));
  if (level == 'g') {
    label.s = IonLevel::g;
  } else if (level == 'e') {
    label.s = IonLevel::e;
  } else {
    throw InvalidArgument("basis label must start with g or e: '" + std::string(text) + "'");
  }

  std::string_view rest(cleaned);
  rest.remove_prefix(1);
  if (rest.front() == ',') {
    rest.remove_prefix(1);
    auto comma = rest.find(',');
    if (comma == std::string_view::npos) throw InvalidArgument("cannot parse basis label '" + std::string(text) + "'");
    label.m = parse_int(rest.substr(0, comma), text);
    label.n = parse_int(rest.substr(comma + 1), text);
  } else if (rest.size() == 2) {
    label.m = parse_int(rest.substr(0, 1), text);
    label.n = parse_int(rest.substr(1, 1), text);
  } else {
    throw InvalidArgument("cannot parse basis label '" + std::string(text) + "'");
  }
  return label;
}

std::vector<BasisLabel> basis_labels(const HilbertShape& shape) {
  std::vector<BasisLabel> labels;
  labels.reserve(static_cast<std::size_t>(shape.total()));
  for (IonLevel s : {IonLevel::g, IonLevel::e}) {
    for (int m = 0; m < shape.vib_dim; ++m) {
      for (int n = 0; n < shape.cav_dim; ++n) labels.push_back({s, m, n});
    }
  }
  return labels;
}

OperatorMatrix::OperatorMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ShapeError("OperatorMatrix must be square");
}

OperatorMatrix::OperatorMatrix(Matrix entries, HilbertShape shape) : entries_(std::move(entries)), shape_(shape) {
  if (entries_.rows() != entries_.cols()) throw ShapeError("OperatorMatrix must be square");
  if (entries_.rows() != shape.total()) {
    throw ShapeError("OperatorMatrix dimension " + std::to_string(entries_.rows()) + " does not match shape " +
                     to_string(shape));
  }
}

double OperatorMatrix::hermiticity_error() const {
  if (entries_.size() == 0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

std::optional<HilbertShape> merged_shape(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) throw ShapeError("operator dimensions differ");
  if (lhs.shape() && rhs.shape() && !(*lhs.shape() == *rhs.shape())) throw ShapeError("operator shapes differ");
  return lhs.shape() ? lhs.shape() : rhs.shape();
}

OperatorMatrix make_operator(Matrix entries, const std::optional<HilbertShape>& shape) {
  return shape ? OperatorMatrix(std::move(entries), *shape) : OperatorMatrix(std::move(entries));
}

}  // namespace

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  auto shape = merged_shape(lhs, rhs);
  return make_operator(lhs.entries() * rhs.entries(), shape);
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  auto shape = merged_shape(lhs, rhs);
  return make_operator(lhs.entries() + rhs.entries(), shape);
}

QuantumState::QuantumState(HilbertShape shape, Vector amplitudes) : shape_(shape), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != shape_.total()) {
    throw ShapeError("state length " + std::to_string(amplitudes_.size()) + " does not match shape " +
                     to_string(shape_));
  }
}

Complex QuantumState::amplitude(const BasisLabel& label) const {
  return amplitudes_(shape_.index(label.s, label.m, label.n));
}

double QuantumState::population(const BasisLabel& label) const { return std::norm(amplitude(label)); }

Complex QuantumState::inner(const QuantumState& other) const {
  if (!(shape_ == other.shape_)) throw ShapeError("inner product of states with different shapes");
  return amplitudes_.dot(other.amplitudes_);
}

LadderOps ladder_ops(int dim) {
  if (dim < 1) throw InvalidDimension("ladder_ops: dim must be >= 1");
  Matrix lower = Matrix::Zero(dim, dim);
  for (int m = 1; m < dim; ++m) lower(m - 1, m) = std::sqrt(static_cast<double>(m));
  Matrix raise = lower.adjoint();
  return {OperatorMatrix(std::move(lower)), OperatorMatrix(std::move(raise))};
}

PauliOps pauli_ops() {
  Matrix z(2, 2);
  z << -1.0, 0.0, 0.0, 1.0;
  Matrix plus = Matrix::Zero(2, 2);
  plus(1, 0) = 1.0;  // sigma_+ |g> = |e>
  Matrix minus = plus.adjoint();
  return {OperatorMatrix(std::move(z)), OperatorMatrix(std::move(plus)), OperatorMatrix(std::move(minus))};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

OperatorMatrix tensor(const Matrix& ion, const Matrix& vib, const Matrix& cav, const HilbertShape& shape) {
  if (ion.rows() != HilbertShape::ion_dim || vib.rows() != shape.vib_dim || cav.rows() != shape.cav_dim) {
    throw ShapeError("tensor: factor dimensions do not match shape " + to_string(shape));
  }
  return OperatorMatrix(kron(kron(ion, vib), cav), shape);
}

OperatorMatrix embed(const OperatorMatrix& op, Slot slot, const HilbertShape& shape) {
  const int expected = shape.dim(slot);
  if (op.dim() != expected) {
    throw ShapeError("embed: operator of dimension " + std::to_string(op.dim()) + " cannot act on slot " +
                     std::string(to_string(slot)) + " of dimension " + std::to_string(expected));
  }
  const Matrix id_ion = Matrix::Identity(HilbertShape::ion_dim, HilbertShape::ion_dim);
  const Matrix id_vib = Matrix::Identity(shape.vib_dim, shape.vib_dim);
  const Matrix id_cav = Matrix::Identity(shape.cav_dim, shape.cav_dim);
  switch (slot) {
    case Slot::ion:
      return tensor(op.entries(), id_vib, id_cav, shape);
    case Slot::vib:
      return tensor(id_ion, op.entries(), id_cav, shape);
    case Slot::cav:
      return tensor(id_ion, id_vib, op.entries(), shape);
  }
  throw ShapeError("embed: unknown slot");
}

QuantumState basis_state(const HilbertShape& shape, IonLevel s, int m, int n) {
  Vector amplitudes = Vector::Zero(shape.total());
  amplitudes(shape.index(s, m, n)) = 1.0;
  return QuantumState(shape, std::move(amplitudes));
}

QuantumState basis_state(const HilbertShape& shape, const BasisLabel& label) {
  return basis_state(shape, label.s, label.m, label.n);
}

ReducedState partial_trace(const QuantumState& state, std::vector<Slot> keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  const HilbertShape& shape = state.shape();
  const std::array<int, 3> dims = {HilbertShape::ion_dim, shape.vib_dim, shape.cav_dim};
  std::array<bool, 3> kept = {false, false, false};
  for (Slot slot : keep) kept[static_cast<int>(slot)] = true;

  ReducedState out;
  out.slots = keep;
  int kept_dim = 1;
  int traced_dim = 1;
  for (int k = 0; k < 3; ++k) {
    if (kept[k]) {
      out.dims.push_back(dims[k]);
      kept_dim *= dims[k];
    } else {
      traced_dim *= dims[k];
    }
  }

  // Reshape amplitudes into psi(kept, traced); rho = psi psi^dagger.
  Matrix psi = Matrix::Zero(kept_dim, traced_dim);
  const Vector& amps = state.amplitudes();
  for (int s = 0; s < dims[0]; ++s) {
    for (int m = 0; m < dims[1]; ++m) {
      for (int n = 0; n < dims[2]; ++n) {
        const std::array<int, 3> idx = {s, m, n};
        int row = 0;
        int col = 0;
        for (int k = 0; k < 3; ++k) {
          if (kept[k]) {
            row = row * dims[k] + idx[k];
          } else {
            col = col * dims[k] + idx[k];
          }
        }
        psi(row, col) = amps((s * dims[1] + m) * dims[2] + n);
      }
    }
  }
  out.rho = psi * psi.adjoint();
  return out;
}

double top_level_population(const QuantumState& state) {
  const HilbertShape& shape = state.shape();
  const bool vib_top = shape.vib_dim > 1;
  const bool cav_top = shape.cav_dim > 1;
  if (!vib_top && !cav_top) return 0.0;
  double total = 0.0;
  for (const BasisLabel& label : basis_labels(shape)) {
    if ((vib_top && label.m == shape.vib_dim - 1) || (cav_top && label.n == shape.cav_dim - 1)) {
      total += state.population(label);
    }
  }
  return total;
}

}  // namespace ghzsim
