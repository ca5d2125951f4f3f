#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ghzsim/errors.hpp"
#include "ghzsim/evolution.hpp"
#include "ghzsim/fock.hpp"
#include "ghzsim/hamiltonian.hpp"
#include "ghzsim/protocol.hpp"
#include "ghzsim/validation.hpp"

namespace py = pybind11;
using namespace ghzsim;

namespace {

BasisLabel to_label(const py::object& obj) {
  if (py::isinstance<BasisLabel>(obj)) return obj.cast<BasisLabel>();
  return BasisLabel::parse(obj.cast<std::string>());
}

QuantumState to_state(const Vector& amps, const HilbertShape& shape) {
  if (amps.size() != shape.total()) throw ShapeError("state length does not match the shape");
  return QuantumState(shape, amps);
}

Slot to_slot(const std::string& name) {
  if (name == "ion") return Slot::ion;
  if (name == "vib") return Slot::vib;
  if (name == "cav") return Slot::cav;
  throw InvalidArgument("slot must be 'ion', 'vib' or 'cav', got '" + name + "'");
}

py::dict block_dict(const BlockParams& b) {
  py::dict d;
  d["m"] = b.m;
  d["n"] = b.n;
  d["omega"] = b.omega;
  d["coupling"] = b.coupling;
  d["a"] = b.a;
  d["mu"] = b.mu;
  return d;
}

py::dict schedule_dict(const ProtocolSchedule& s) {
  py::dict d;
  d["p"] = s.p;
  d["t_p"] = s.t_p;
  d["a_t_product"] = s.a_t_product;
  d["tuned_g"] = s.tuned_g;
  d["params"] = s.params;
  d["block"] = block_dict(s.block);
  d["target"] = s.target.amplitudes();
  return d;
}

py::dict report_dict(const FidelityReport& r) {
  py::dict d;
  d["fidelity"] = r.fidelity;
  d["block_leakage"] = r.block_leakage;
  d["norm"] = r.norm;
  d["max_truncation_leak"] = r.max_truncation_leak;
  d["time"] = r.time;
  d["model"] = r.model_tag;
  py::dict pops;
  for (const auto& [label, pop] : r.populations) pops[py::str(label.to_string())] = pop;
  d["populations"] = pops;
  return d;
}

Tuning parse_tuning(const std::string& text) {
  if (text == "require") return Tuning::require;
  if (text == "retune") return Tuning::retune;
  if (text == "unchecked") return Tuning::unchecked;
  throw InvalidArgument("tuning must be 'require', 'retune' or 'unchecked'");
}

}  // namespace

PYBIND11_MODULE(_ghzsim, m) {
  m.doc() = "Trapped ion + cavity GHZ state simulator";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<InvalidDimension>(m, "InvalidDimension", invalid.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
  py::register_exception<IndexError>(m, "IndexError", error.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", error.ptr());
  py::register_exception<ModelError>(m, "ModelError", error.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", error.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", error.ptr());

  py::class_<HilbertShape>(m, "HilbertShape")
      .def(py::init<int, int>(), py::arg("vib_dim"), py::arg("cav_dim"))
      .def_readonly("vib_dim", &HilbertShape::vib_dim)
      .def_readonly("cav_dim", &HilbertShape::cav_dim)
      .def_property_readonly("total", &HilbertShape::total)
      .def(
          "index", [](const HilbertShape& s, const py::object& label) {
            const BasisLabel l = to_label(label);
            return s.index(l.s, l.m, l.n);
          },
          py::arg("label"))
      .def("__eq__", [](const HilbertShape& a, const HilbertShape& b) { return a == b; })
      .def("__repr__", [](const HilbertShape& s) { return "HilbertShape(" + to_string(s) + ")"; });

  py::class_<BasisLabel>(m, "BasisLabel")
      .def_static("parse", &BasisLabel::parse)
      .def_property_readonly("s", [](const BasisLabel& l) { return std::string(1, to_char(l.s)); })
      .def_readonly("m", &BasisLabel::m)
      .def_readonly("n", &BasisLabel::n)
      .def("__str__", &BasisLabel::to_string)
      .def("__eq__", [](const BasisLabel& a, const BasisLabel& b) { return a == b; });

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_static("resonant", &SystemParams::resonant, py::arg("Omega"), py::arg("g"), py::arg("eta_L"),
                  py::arg("eta_c"), py::arg("nu"), py::arg("omega_0"), py::arg("phi") = 0.0)
      .def_readwrite("Omega", &SystemParams::Omega)
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("eta_L", &SystemParams::eta_L)
      .def_readwrite("eta_c", &SystemParams::eta_c)
      .def_readwrite("nu", &SystemParams::nu)
      .def_readwrite("omega_0", &SystemParams::omega_0)
      .def_readwrite("omega_c", &SystemParams::omega_c)
      .def_readwrite("omega_L", &SystemParams::omega_L)
      .def_readwrite("phi", &SystemParams::phi)
      .def("validate", &SystemParams::validate)
      .def("max_frequency", &SystemParams::max_frequency);

  m.def("basis_labels", [](const HilbertShape& shape) {
    std::vector<std::string> out;
    for (const BasisLabel& l : basis_labels(shape)) out.push_back(l.to_string());
    return out;
  });
  m.def("basis_state", [](const HilbertShape& shape, const py::object& label) {
    return basis_state(shape, to_label(label)).amplitudes();
  });
  m.def("ladder_ops", [](int dim) {
    const LadderOps ops = ladder_ops(dim);
    return py::make_tuple(ops.lower.entries(), ops.raise.entries());
  });
  m.def("pauli_ops", [] {
    const PauliOps ops = pauli_ops();
    return py::make_tuple(ops.sigma_z.entries(), ops.sigma_plus.entries(), ops.sigma_minus.entries());
  });
  m.def(
      "partial_trace",
      [](const Vector& psi, const HilbertShape& shape, const std::vector<std::string>& keep) {
        std::vector<Slot> slots;
        for (const std::string& k : keep) slots.push_back(to_slot(k));
        return partial_trace(to_state(psi, shape), slots).rho;
      },
      py::arg("psi"), py::arg("shape"), py::arg("keep"));

  m.def("ok_diagonal_element", &ok_diagonal_element, py::arg("k"), py::arg("eta"), py::arg("m"));
  m.def("matrix_element_F_L", &matrix_element_F_L, py::arg("m"), py::arg("eta_L"));
  m.def("matrix_element_F_c", &matrix_element_F_c, py::arg("m"), py::arg("eta_c"));
  m.def("effective_coupling", &effective_coupling, py::arg("g"), py::arg("phi"));
  m.def(
      "build_lab_hamiltonian",
      [](const SystemParams& p, const HilbertShape& s, double t) { return build_lab_hamiltonian(p, s, t).entries(); },
      py::arg("params"), py::arg("shape"), py::arg("t"));
  m.def(
      "build_rwa_hamiltonian",
      [](const SystemParams& p, const HilbertShape& s) { return build_rwa_hamiltonian(p, s).entries(); },
      py::arg("params"), py::arg("shape"));
  m.def(
      "build_ld_hamiltonian",
      [](const SystemParams& p, const HilbertShape& s) { return build_ld_hamiltonian(p, s).entries(); },
      py::arg("params"), py::arg("shape"));
  m.def(
      "build_block_hamiltonian",
      [](const SystemParams& p, int bm, int bn, bool ld_limit) {
        const BlockHamiltonian b = build_block_hamiltonian(p, bm, bn, ld_limit);
        return py::make_tuple(Matrix(b.matrix.entries()), block_dict(b.block));
      },
      py::arg("params"), py::arg("m") = 1, py::arg("n") = 1, py::arg("ld_limit") = true);

  m.def(
      "block_propagator",
      [](double omega, double coupling, double t) {
        return Matrix(block_propagator(make_block_params(omega, coupling, 1, 1), t));
      },
      py::arg("Omega"), py::arg("coupling"), py::arg("t"));
  m.def(
      "block_propagate",
      [](const SystemParams& p, int index, double t, int bm, int bn) {
        const BlockState out = block_propagate(BlockState::basis(make_block_params(p, bm, bn), index), t);
        Vector v(4);
        for (int i = 0; i < 4; ++i) v(i) = out.amplitudes[static_cast<std::size_t>(i)];
        return v;
      },
      py::arg("params"), py::arg("index"), py::arg("t"), py::arg("m") = 1, py::arg("n") = 1);

  m.def(
      "evolve_static",
      [](const Matrix& h, const Vector& psi, const HilbertShape& shape, const std::vector<double>& times) {
        const EvolutionResult r = evolve_static(OperatorMatrix(h), to_state(psi, shape), times);
        Matrix out(static_cast<Eigen::Index>(r.states.size()), psi.size());
        for (std::size_t k = 0; k < r.states.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = r.states[k].amplitudes().transpose();
        return out;
      },
      py::arg("hamiltonian"), py::arg("psi"), py::arg("shape"), py::arg("times"));
  m.def(
      "evolve_lab_frame",
      [](const SystemParams& p, const Vector& psi, const HilbertShape& shape, double t_end, double dt) {
        py::gil_scoped_release release;
        const EvolutionResult r = evolve_timedep(lab_frame_source(p, shape), to_state(psi, shape), t_end, dt);
        return Vector(r.states.back().amplitudes());
      },
      py::arg("params"), py::arg("psi"), py::arg("shape"), py::arg("t_end"), py::arg("dt"));
  m.def(
      "to_interaction_picture",
      [](const Vector& psi, const HilbertShape& shape, const SystemParams& p, double t) {
        return to_interaction_picture(to_state(psi, shape), p, t).amplitudes();
      },
      py::arg("psi"), py::arg("shape"), py::arg("params"), py::arg("t"));

  m.def("tune_coupling", &tune_coupling, py::arg("Omega"), py::arg("eta_c"), py::arg("p") = 1);
  m.def(
      "ghz_schedule",
      [](const SystemParams& p, const HilbertShape& shape, int bm, int bn, int pulse, const std::string& tuning) {
        return schedule_dict(ghz_schedule(p, shape, bm, bn, pulse, parse_tuning(tuning)));
      },
      py::arg("params"), py::arg("shape"), py::arg("m") = 1, py::arg("n") = 1, py::arg("p") = 1,
      py::arg("tuning") = "require");
  m.def(
      "target_state",
      [](const py::object& initial, const HilbertShape& shape, int bm, int bn, int p) {
        return target_state(to_label(initial), shape, bm, bn, p).amplitudes();
      },
      py::arg("initial"), py::arg("shape"), py::arg("m") = 1, py::arg("n") = 1, py::arg("p") = 1);
  m.def(
      "fidelity", [](const Vector& psi, const Vector& target) { return std::norm(target.dot(psi)); }, py::arg("psi"),
      py::arg("target"));
  m.def(
      "run_protocol",
      [](const SystemParams& p, const py::object& initial, const std::string& model, const HilbertShape& shape,
         int pulse, std::optional<double> time, const std::string& tuning) {
        ProtocolOptions options;
        options.shape = shape;
        options.time = time;
        const ProtocolSchedule s = ghz_schedule(p, shape, 1, 1, pulse, parse_tuning(tuning));
        const BasisLabel label = to_label(initial);
        const Model kind = parse_model(model);
        FidelityReport r;
        {
          py::gil_scoped_release release;
          r = run_protocol(s.params, label, kind, s, options);
        }
        return report_dict(r);
      },
      py::arg("params"), py::arg("initial") = "g,0,0", py::arg("model") = "block",
      py::arg("shape") = HilbertShape(4, 4), py::arg("p") = 1, py::arg("time") = py::none(),
      py::arg("tuning") = "require");
  m.def(
      "sweep",
      [](const SystemParams& p, const std::string& axis, const std::vector<double>& values, const std::string& model,
         const HilbertShape& shape, int pulse, unsigned threads) {
        SweepSpec spec;
        spec.params = p;
        spec.model = parse_model(model);
        spec.options.shape = shape;
        spec.p = pulse;
        spec.threads = threads;
        const SweepAxis parsed = parse_axis(axis);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep(spec, parsed, values);
        }
        py::list out;
        for (const SweepRow& row : rows) {
          py::dict d = report_dict(row.report);
          d["value"] = row.value;
          d["t_p"] = row.schedule.t_p;
          d["tuned_g"] = row.schedule.tuned_g;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("axis"), py::arg("values"), py::arg("model") = "block",
      py::arg("shape") = HilbertShape(4, 4), py::arg("p") = 1, py::arg("threads") = 0u);

  m.def("run_validation", [] {
    py::list out;
    for (const CheckResult& r : run_validation()) {
      py::dict d;
      d["name"] = r.name;
      d["measured"] = r.measured;
      d["threshold"] = r.threshold;
      d["passed"] = r.passed;
      out.append(d);
    }
    return out;
  });
}
