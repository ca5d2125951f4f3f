#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ghzsim/errors.hpp"
#include "ghzsim/protocol.hpp"
#include "test_support.hpp"

namespace ghzsim {
namespace {

using testing::max_abs;
constexpr double kPi = std::numbers::pi;

SystemParams default_params(double phi = 0.0) {
  const double omega = 8.95e6;
  return SystemParams::resonant(omega, tune_coupling(omega, 0.05, 1), 0.05, 0.05, 200e6, 4000e6, phi);
}

TEST(Model, ParseAndPrint) {
  for (Model m : {Model::block_analytic, Model::ld_full, Model::rwa_full, Model::lab_frame}) {
    EXPECT_EQ(parse_model(to_string(m)), m);
  }
  EXPECT_EQ(parse_model("ld"), Model::ld_full);
  EXPECT_THROW(parse_model("exact"), InvalidArgument);
}

TEST(Schedule, DefaultParameters) {
  const ProtocolSchedule s = ghz_schedule(default_params(), HilbertShape(4, 4));
  EXPECT_NEAR(s.t_p * 1e6, 0.33987, 1e-5);
  EXPECT_NEAR(s.a_t_product, kPi / 4.0, 1e-12);
  EXPECT_NEAR(s.block.mu, 4.0 * 8.95e6 / std::sqrt(15.0), 1e-6);
  EXPECT_EQ(s.target.shape(), HilbertShape(4, 4));
}

TEST(Schedule, RequireRejectsUntunedParameters) {
  SystemParams p = default_params();
  p.g *= 1.01;
  EXPECT_THROW(ghz_schedule(p, HilbertShape(4, 4)), ConfigurationError);
  EXPECT_NO_THROW(ghz_schedule(p, HilbertShape(4, 4), 1, 1, 1, Tuning::unchecked));
  const ProtocolSchedule s = ghz_schedule(p, HilbertShape(4, 4), 1, 1, 1, Tuning::retune);
  EXPECT_NEAR(s.tuned_g, default_params().g, 1e-6);
}

TEST(Schedule, RetuneCompensatesNodeOffset) {
  for (double phi : {0.1, 0.5, 1.0, -0.7}) {
    const ProtocolSchedule s = ghz_schedule(default_params(phi), HilbertShape(4, 4), 1, 1, 1, Tuning::retune);
    EXPECT_NEAR(s.block.mu / s.block.a, 4.0, 1e-9);
    EXPECT_NEAR(s.tuned_g * std::cos(phi), default_params().g, 1e-6 * default_params().g);
  }
  EXPECT_THROW(ghz_schedule(default_params(kPi / 2), HilbertShape(4, 4), 1, 1, 1, Tuning::retune), InvalidArgument);
}

TEST(Schedule, UncompensatedOffsetDegradesFidelity) {
  const SystemParams p = default_params(0.3);
  const ProtocolSchedule s = ghz_schedule(p, HilbertShape(4, 4), 1, 1, 1, Tuning::unchecked);
  const FidelityReport r = run_protocol(p, {IonLevel::g, 0, 0}, Model::block_analytic, s);
  EXPECT_LT(r.fidelity, 0.999);
  EXPECT_GT(r.fidelity, 0.5);
}

TEST(Schedule, HigherBlocksAndSolutions) {
  for (int p = 1; p <= 3; ++p) {
    const ProtocolSchedule s = ghz_schedule(default_params(), HilbertShape(5, 5), 2, 3, p, Tuning::retune);
    EXPECT_NEAR(s.block.mu / s.block.a, 4.0 * p, 1e-9 * p);
    EXPECT_NEAR(s.t_p * s.block.mu, p * kPi, 1e-12 * p);
    const FidelityReport r = run_protocol(s.params, {IonLevel::g, 1, 2}, Model::block_analytic, s,
                                          ProtocolOptions{HilbertShape(5, 5)});
    EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
  }
  EXPECT_THROW(ghz_schedule(default_params(), HilbertShape(4, 4), 1, 1, 0), InvalidArgument);
}

TEST(TargetState, FirstSolutionFromGround) {
  const HilbertShape shape(3, 3);
  const QuantumState t = target_state({IonLevel::g, 0, 0}, shape);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(t.amplitude({IonLevel::g, 0, 0}) + r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitude({IonLevel::e, 1, 1}) - Complex(0.0, r)), 0.0, 1e-15);
  EXPECT_NEAR(t.norm(), 1.0, 1e-15);
}

TEST(TargetState, RejectsStatesOutsideTheBlock) {
  EXPECT_THROW(target_state({IonLevel::g, 2, 0}, HilbertShape(3, 3)), InvalidArgument);
  EXPECT_THROW(target_state({IonLevel::g, 0, 0}, HilbertShape(1, 1)), IndexError);
}

TEST(TargetState, AllMarginalsMaximallyMixed) {
  const HilbertShape shape(4, 4);
  for (const BasisLabel& label : block_labels(2, 3)) {
    const QuantumState t = target_state(label, shape, 2, 3, 2);
    for (Slot slot : {Slot::ion, Slot::vib, Slot::cav}) {
      const Matrix rho = partial_trace(t, {slot}).rho;
      Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
      const Eigen::VectorXd ev = solver.eigenvalues();
      EXPECT_NEAR(ev(ev.size() - 1), 0.5, 1e-12);
      EXPECT_NEAR(ev(ev.size() - 2), 0.5, 1e-12);
    }
  }
}

TEST(RunProtocol, BlockModelFromEveryBlockState) {
  const SystemParams p = default_params();
  const ProtocolSchedule s = ghz_schedule(p, HilbertShape(4, 4));
  for (const BasisLabel& label : block_labels(1, 1)) {
    const FidelityReport r = run_protocol(p, label, Model::block_analytic, s);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-10) << label.to_string();
    EXPECT_NEAR(r.norm, 1.0, 1e-12);
    EXPECT_LT(r.block_leakage, 1e-20);
    EXPECT_EQ(r.populations.size(), 2u);
  }
}

TEST(RunProtocol, ZeroTimeReturnsTheInitialState) {
  const SystemParams p = default_params();
  const ProtocolSchedule s = ghz_schedule(p, HilbertShape(4, 4));
  ProtocolOptions options;
  options.time = 0.0;
  for (Model model : {Model::block_analytic, Model::ld_full, Model::rwa_full, Model::lab_frame}) {
    const FidelityReport r = run_protocol(p, {IonLevel::g, 0, 0}, model, s, options);
    EXPECT_NEAR(r.fidelity, 0.5, 1e-14);
    ASSERT_EQ(r.populations.size(), 1u);
    EXPECT_EQ(r.populations[0].first, (BasisLabel{IonLevel::g, 0, 0}));
  }
}

TEST(RunProtocol, FullLdModelShowsBlockLeakage) {
  // |g,0,0> also drives |e,0,0> -> |g,1,1> -> |e,1,1> ... beyond the (1,1) block
  // through the carrier of the higher blocks.
  const SystemParams p = default_params();
  ProtocolOptions options;
  options.shape = HilbertShape(8, 8);
  const ProtocolSchedule s = ghz_schedule(p, options.shape);
  const FidelityReport r = run_protocol(p, {IonLevel::g, 0, 0}, Model::ld_full, s, options);
  EXPECT_NEAR(r.fidelity, 0.5507622747, 1e-8);
  EXPECT_NEAR(r.norm, 1.0, 1e-12);
  EXPECT_GT(r.block_leakage, 0.0);
}

TEST(RunProtocol, SmallTruncationIsReported) {
  const SystemParams p = default_params();
  ProtocolOptions options;
  options.shape = HilbertShape(6, 6);
  const ProtocolSchedule s = ghz_schedule(p, options.shape);
  try {
    run_protocol(p, {IonLevel::g, 0, 0}, Model::ld_full, s, options);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.top_population(), 1e-4);
    EXPECT_NE(std::string(e.what()).find("8x8"), std::string::npos);
  }
  // The trace itself is still available and agrees with 8x8 closely.
  const ProtocolTrace trace = trace_protocol(p, {IonLevel::g, 0, 0}, Model::ld_full, s, options);
  EXPECT_NEAR(trace.points.back().fidelity, 0.5507622747, 1e-6);
}

TEST(RunProtocol, ClosedFormMatchesBuiltBlockHamiltonian) {
  const SystemParams p = default_params();
  const ProtocolSchedule s = ghz_schedule(p, HilbertShape(1 + 1, 1 + 1));
  const BlockHamiltonian b = build_block_hamiltonian(p, 1, 1, true);
  const Eigen::Matrix4cd u = block_propagator(s.block, s.t_p);
  EXPECT_LT(max_abs(u - testing::propagator(b.matrix.entries(), s.t_p)), 1e-10);
}

TEST(Sweep, RowsFollowValuesAndAreThreadIndependent) {
  SweepSpec spec;
  spec.params = default_params();
  spec.model = Model::ld_full;
  spec.options.shape = HilbertShape(4, 4);
  spec.options.truncation_threshold = 1.0;
  const std::vector<double> values = {0.02, 0.05, 0.08, 0.11};
  spec.threads = 1;
  const auto serial = sweep(spec, SweepAxis::eta_c, values);
  spec.threads = 3;
  const auto parallel = sweep(spec, SweepAxis::eta_c, values);
  ASSERT_EQ(serial.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(serial[i].value, values[i]);
    EXPECT_EQ(parallel[i].value, values[i]);
    EXPECT_EQ(serial[i].report.fidelity, parallel[i].report.fidelity);
    EXPECT_NEAR(serial[i].schedule.block.mu / serial[i].schedule.block.a, 4.0, 1e-9);
  }
}

TEST(Sweep, PhiAxisWithCompensationKeepsBlockFidelity) {
  SweepSpec spec;
  spec.params = default_params();
  const auto rows = sweep(spec, SweepAxis::phi, {0.0, 0.4, 0.8, 1.2});
  for (const SweepRow& row : rows) EXPECT_NEAR(row.report.fidelity, 1.0, 1e-6);
}

TEST(Sweep, ErrorsPropagate) {
  SweepSpec spec;
  spec.params = default_params();
  EXPECT_THROW(sweep(spec, SweepAxis::p, {1.0, 2.5}), InvalidArgument);
  EXPECT_THROW(sweep(spec, SweepAxis::eta_c, {}), InvalidArgument);
  EXPECT_THROW(parse_axis("eta"), InvalidArgument);
  try {
    parse_axis("omega");
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("eta_c"), std::string::npos);
  }
  EXPECT_EQ(sweep_axis_names().size(), 7u);
}

TEST(Sweep, ThreadCountFromEnvironment) {
  setenv("GHZ_SIM_THREADS", "3", 1);
  EXPECT_EQ(sweep_thread_count(), 3u);
  setenv("GHZ_SIM_THREADS", "zero", 1);
  EXPECT_GE(sweep_thread_count(), 1u);
  unsetenv("GHZ_SIM_THREADS");
}

}  // namespace
}  // namespace ghzsim
