// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pfem/analysis.hpp"
#include "pfem/error.hpp"
#include "pfem/simulation.hpp"
#include "pfem/timestepper.hpp"

using namespace pfem;

namespace
{

Discretization disc(const std::string &q, const std::string &p, const std::string &b)
{
  Discretization d;
  d.q = ElementFamily::parse(q, ValueShape::Vector2);
  d.p = ElementFamily::parse(p);
  const ElementFamily bf = ElementFamily::parse(b);
  d.boundary_kind = bf.kind;
  d.boundary_order = bf.order;
  return d;
}

InputSampler zero_input(const PHSystem &sys)
{
  const int n = sys.n_b();
  return [n](double) { return Eigen::VectorXd(Eigen::VectorXd::Zero(n)); };
}

}  // namespace

TEST(TimeStepper, RejectsNonPositiveStep)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG0"), Causality::Neumann, 2);
  EXPECT_THROW(TimeStepper(*L.system, 0.0), Error);
  EXPECT_THROW(TimeStepper(*L.system, -1e-3), Error);
  TimeStepper ts(*L.system, 1e-3);
  EXPECT_THROW(ts.set_dt(std::nan("")), Error);
}

TEST(TimeStepper, ParsesOptions)
{
  EXPECT_EQ(parse_input_rule("midpoint"), InputRule::Midpoint);
  EXPECT_EQ(parse_input_rule("cn"), InputRule::Trapezoidal);
  EXPECT_EQ(parse_input_rule("trapezoidal"), InputRule::Trapezoidal);
  EXPECT_EQ(parse_solver_backend("dense"), SolverBackend::DenseLU);
  EXPECT_EQ(parse_solver_backend("sparse-lu"), SolverBackend::SparseLU);
  EXPECT_THROW(parse_input_rule("euler"), Error);
  EXPECT_THROW(parse_solver_backend("cg"), Error);
  EXPECT_EQ(parse_input_rule(to_string(InputRule::Trapezoidal)), InputRule::Trapezoidal);
}

TEST(TimeStepper, ClosedSystemConservesEnergy)
{
  const Scenario sc = scenario_square();
  for (const auto &[d, c] : {std::pair{disc("CG1", "CG1", "DG0"), Causality::Neumann},
                             std::pair{disc("RT1", "CG2", "DG1"), Causality::Neumann},
                             std::pair{disc("RT1", "DG0", "DG0"), Causality::Dirichlet}})
  {
    Level L = build_level(sc, d, c, 4);
    State s = interpolate_state(*L.system, sc, 0.0);
    const double H0 = discrete_hamiltonian(*L.system, s);
    TimeStepper ts(*L.system, 1e-2);
    double drift = 0.0;
    for (int n = 0; n < 200; ++n)
    {
      s = ts.step(s, zero_input(*L.system));
      drift = std::max(drift, std::abs(discrete_hamiltonian(*L.system, s) - H0) / H0);
    }
    EXPECT_LT(drift, 1e-12) << d.label();
  }
}

TEST(TimeStepper, DrivenPowerBalancePerStep)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG1"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  State s = interpolate_state(sys, sc, 0.0);
  TimeStepper ts(sys, 1e-2);
  const InputSampler u = make_input(sc, sys);
  for (int n = 0; n < 50; ++n)
  {
    const double H0 = discrete_hamiltonian(sys, s);
    s = ts.step(s, u);
    const double H1 = discrete_hamiltonian(sys, s);
    EXPECT_NEAR(H1 - H0, ts.last().dt * ts.last().supplied, 1e-12 * std::max(1.0, H0));
  }
}

TEST(TimeStepper, TimeReversible)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG2", "CG2", "DG1"), Causality::Neumann, 3);
  const PHSystem &sys = *L.system;
  const State s0 = interpolate_state(sys, sc, 0.0);
  TimeStepper ts(sys, 5e-3);
  State s = s0;
  for (int n = 0; n < 40; ++n)
  {
    s = ts.step(s, zero_input(sys));
  }
  // Flipping the sign of e_p reverses time for a closed system.
  s.e_p = -s.e_p;
  for (int n = 0; n < 40; ++n)
  {
    s = ts.step(s, zero_input(sys));
  }
  s.e_p = -s.e_p;
  EXPECT_LT((s.stacked() - s0.stacked()).norm(), 1e-11 * s0.stacked().norm());
}

TEST(TimeStepper, ZeroAdmittanceIsBitIdentical)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG0"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  const InputSampler u = make_input(sc, sys);
  TimeStepper plain(sys, 1e-2);
  TimeStepper zero(sys, 1e-2, {}, [](double, const Point2 &) { return 0.0; });
  State a = interpolate_state(sys, sc, 0.0), b = a;
  for (int n = 0; n < 20; ++n)
  {
    a = plain.step(a, u);
    b = zero.step(b, u);
    EXPECT_FALSE(zero.last().refactorized);
    EXPECT_EQ(zero.last().damped, 0.0);
  }
  EXPECT_TRUE(a.e_q == b.e_q);
  EXPECT_TRUE(a.e_p == b.e_p);
}

TEST(TimeStepper, ConstantAdmittanceDissipates)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG0"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  TimeStepper ts(sys, 1e-2, {}, [](double, const Point2 &) { return 0.7; });
  State s = interpolate_state(sys, sc, 0.0);
  double H = discrete_hamiltonian(sys, s);
  const double H0 = H;
  for (int n = 0; n < 100; ++n)
  {
    s = ts.step(s, zero_input(sys));
    const double H1 = discrete_hamiltonian(sys, s);
    EXPECT_LE(H1, H + 1e-14);
    EXPECT_GE(ts.last().damped, 0.0);
    EXPECT_NEAR(H1 - H, -ts.last().dt * ts.last().damped, 1e-12 * H0);
    H = H1;
  }
  EXPECT_LT(H, 0.9 * H0);
}

TEST(TimeStepper, AdmittanceFeedbackIsSymmetricPositive)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG1"), Causality::Neumann, 3);
  TimeStepper ts(*L.system, 1e-2, {}, [](double, const Point2 &x) { return 1.0 + x.x(); });
  const Eigen::MatrixXd R(ts.feedback(0.3));
  EXPECT_LT((R - R.transpose()).norm(), 1e-13 * R.norm());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12 * R.norm());
  EXPECT_GT(R.norm(), 0.0);
}

TEST(TimeStepper, OutputIsBoundaryProjectionOfTrace)
{
  // y = M_b^{-1} B^T e_p is the L2 projection of the p-trace on the boundary space.
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG1"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  State s = zero_state(sys);
  s.e_p = L.p->interpolate([](const Point2 &x) { return x.x() + 2 * x.y(); });
  TimeStepper ts(sys, 1e-2);
  const Eigen::VectorXd y = ts.output(s);
  const Eigen::VectorXd ref = L.boundary->interpolate([](const Point2 &x, const Point2 &) { return x.x() + 2 * x.y(); });
  EXPECT_LT((y - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TimeStepper, DirichletOutputIsNormalStress)
{
  // Dirichlet causality: the output is the normal trace of e_q.
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("RT1", "DG0", "DG0"), Causality::Dirichlet, 4);
  const PHSystem &sys = *L.system;
  State s = zero_state(sys);
  s.e_q = L.q->interpolate([](const Point2 &) { return Eigen::Vector2d(1.0, 2.0); });
  TimeStepper ts(sys, 1e-2);
  const Eigen::VectorXd y = ts.output(s);
  const Eigen::VectorXd ref = L.boundary->interpolate([](const Point2 &, const Point2 &n) { return n.x() + 2 * n.y(); });
  EXPECT_LT((y - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TimeStepper, DenseAndSparseBackendsAgree)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("RT1", "CG1", "DG0"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  const InputSampler u = make_input(sc, sys);
  StepperOptions dense;
  dense.backend = SolverBackend::DenseLU;
  TimeStepper a(sys, 1e-2), b(sys, 1e-2, dense);
  State sa = interpolate_state(sys, sc, 0.0), sb = sa;
  for (int n = 0; n < 20; ++n)
  {
    sa = a.step(sa, u);
    sb = b.step(sb, u);
  }
  EXPECT_LT((sa.stacked() - sb.stacked()).norm(), 1e-11 * sa.stacked().norm());
}

TEST(TimeStepper, InputRulesAgreeForConstantInput)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG0"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(sys.n_b(), 0.3);
  const InputSampler u = [c](double) { return c; };
  StepperOptions cn;
  cn.input_rule = InputRule::Trapezoidal;
  TimeStepper a(sys, 1e-2), b(sys, 1e-2, cn);
  State sa = interpolate_state(sys, sc, 0.0), sb = sa;
  for (int n = 0; n < 10; ++n)
  {
    sa = a.step(sa, u);
    sb = b.step(sb, u);
  }
  EXPECT_LT((sa.stacked() - sb.stacked()).norm(), 1e-13 * sa.stacked().norm());
}

TEST(TimeStepper, SetDtChangesTheStep)
{
  const Scenario sc = scenario_square();
  Level L = build_level(sc, disc("CG1", "CG1", "DG0"), Causality::Neumann, 4);
  const PHSystem &sys = *L.system;
  TimeStepper a(sys, 1e-2), b(sys, 2e-2);
  a.set_dt(2e-2);
  EXPECT_DOUBLE_EQ(a.dt(), 2e-2);
  const State s0 = interpolate_state(sys, sc, 0.0);
  const InputSampler u = make_input(sc, sys);
  const State sa = a.step(s0, u), sb = b.step(s0, u);
  EXPECT_LT((sa.stacked() - sb.stacked()).norm(), 1e-14 * s0.stacked().norm());
  EXPECT_DOUBLE_EQ(sa.t, 2e-2);
}
