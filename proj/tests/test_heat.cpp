#include <switchocp/heat.hpp>
#include <switchocp/instancegen.hpp>
#include <switchocp_oracles/quadrature.hpp>
#include <switchocp_oracles/validation.hpp>

#include <gtest/gtest.h>

#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace switchocp;

namespace {

const double pi = std::numbers::pi;

double sine_mode(double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }

std::shared_ptr<const HeatOperators> bump_ops(int nx, TimePartition grid) {
    SpatialMesh mesh(nx);
    auto forms = FormFunctions::from_fields(mesh, {quadratic_bump});
    return std::make_shared<const HeatOperators>(std::move(mesh), std::move(grid), std::move(forms));
}

StateTrajectory random_trajectory(int dofs, int levels, std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    StateTrajectory w{Eigen::MatrixXd(dofs, levels)};
    for (int j = 0; j < levels; ++j)
        for (int i = 0; i < dofs; ++i) w.values(i, j) = N(rng);
    return w;
}

}  // namespace

TEST(SolveForward, ZeroDataZeroTrajectory) {
    auto ops = bump_ops(6, TimePartition::uniform(1.0, 5));
    const auto y = ops->solve_forward(Control(ops->grid(), 1, 0.0), Eigen::VectorXd::Zero(ops->dofs()));
    EXPECT_EQ(y.levels(), 6);
    EXPECT_TRUE(y.values.isZero());
}

TEST(SolveForward, InitialConditionExact) {
    auto ops = bump_ops(6, TimePartition({0.0, 0.1, 0.5, 0.6}));
    const Eigen::VectorXd y0 = Eigen::VectorXd::LinSpaced(ops->dofs(), -1.0, 2.0);
    EXPECT_EQ(ops->solve_forward(Control(ops->grid(), 1, 0.3), y0).values.col(0), y0);
}

TEST(SolveForward, DecaySecondOrder) {
    const double e0 = oracle::decay_error(9, 16);
    const double e1 = oracle::decay_error(17, 32);
    const double e2 = oracle::decay_error(33, 64);
    EXPECT_GE(e0 / e1, 3.5);
    EXPECT_GE(e1 / e2, 3.5);
}

TEST(SolveForward, SteadyLimit) {
    auto ops = bump_ops(17, TimePartition::uniform(2.0, 200));
    const auto y = ops->solve_forward(Control(ops->grid(), 1, 1.0));
    Eigen::SimplicialLDLT<SparseOperator> K(ops->stiffness());
    const Eigen::VectorXd steady = K.solve(ops->forms().loads[0]);
    EXPECT_LT((y.values.col(y.levels() - 1) - steady).norm() / steady.norm(), 0.01);
}

TEST(SolveAdjoint, ZeroRhsAndTerminalCondition) {
    auto ops = bump_ops(6, TimePartition::uniform(1.0, 4));
    EXPECT_TRUE(ops->solve_adjoint(StateTrajectory::zero(ops->dofs(), 5)).values.isZero());
    std::mt19937_64 rng(3);
    const auto p = ops->solve_adjoint(random_trajectory(ops->dofs(), 5, rng));
    EXPECT_TRUE(p.values.col(4).isZero());
}

TEST(SolveAdjoint, DiscreteTranspose) {
    auto ops = bump_ops(9, TimePartition({0.0, 0.05, 0.3, 0.4, 0.9, 1.0}));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N;
    for (int trial = 0; trial < 10; ++trial) {
        SourceTrajectory f{Eigen::MatrixXd(ops->dofs(), 5)};
        for (auto& x : f.values.reshaped()) x = N(rng);
        const auto g = random_trajectory(ops->dofs(), 6, rng);
        const double lhs = ops->state_inner(ops->solve_forward(f, Eigen::VectorXd::Zero(ops->dofs())), g);
        const double rhs = ops->pairing(f, ops->solve_adjoint(g));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
    }
}

TEST(SolveAdjoint, TimeReversalOfConstantRhs) {
    auto ops = bump_ops(9, TimePartition::uniform(1.0, 64));
    const Eigen::VectorXd g = interpolate(ops->mesh(), sine_mode);
    StateTrajectory rhs{g.replicate(1, 65)};
    const auto p = ops->solve_adjoint(rhs);
    SourceTrajectory f{(ops->mass() * g).replicate(1, 64)};
    const auto y = ops->solve_forward(f, Eigen::VectorXd::Zero(ops->dofs()));
    double worst = 0.0;
    for (int l = 0; l <= 64; ++l) worst = std::max(worst, (p.values.col(l) - y.values.col(64 - l)).norm());
    // Agreement up to the time discretization of the adjoint representation.
    EXPECT_LT(worst / y.values.col(64).norm(), 2e-2);
}

TEST(ApplyPsiStar, ZeroAndDuality) {
    auto ops = bump_ops(9, TimePartition::uniform(2.0, 8));
    EXPECT_TRUE(ops->apply_psi_star(StateTrajectory::zero(ops->dofs(), 9)).values().isZero());
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N;
    for (int trial = 0; trial < 10; ++trial) {
        Control u(ops->grid(), 1, 0.0);
        for (auto& x : u.values()) x = N(rng);
        const auto w = random_trajectory(ops->dofs(), 9, rng);
        const double lhs = ops->pairing(ops->apply_psi(u), w);
        const double rhs = inner(u, ops->apply_psi_star(w));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
    }
}

TEST(ApplyPsiStar, SineModeGivesInverseC) {
    auto ops = bump_ops(30, TimePartition::uniform(2.0, 4));
    const Eigen::VectorXd s = interpolate(ops->mesh(), sine_mode);
    const Control v = ops->apply_psi_star(StateTrajectory{s.replicate(1, 5)});
    const double ref = oracle::integrate_degree5(
        ops->mesh(), [](double x, double y) { return quadratic_bump(x, y) * sine_mode(x, y); });
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(v(0, i), ops->forms().loads[0].dot(s), 1e-13);
        EXPECT_LT(std::abs(v(0, i) / ref - 1.0), 5e-3);
    }
}

TEST(Objective, ZeroAtReachableTarget) {
    auto ops = bump_ops(7, TimePartition::uniform(1.0, 6));
    Control u(ops->grid(), 1, Eigen::VectorXd::LinSpaced(6, 0.0, 1.0));
    auto problem = make_tracking_problem(ops, ops->solve_forward(u), Eigen::VectorXd::Zero(ops->dofs()), 0.0);
    const auto eval = objective_and_gradient(problem, u);
    EXPECT_NEAR(eval.value, 0.0, 1e-28);
    EXPECT_LT(eval.gradient.values().cwiseAbs().maxCoeff(), 1e-14);

    const Control half(ops->grid(), 1, 0.5);
    for (double alpha : {0.0, 1e-3, 10.0}) {
        auto p = make_tracking_problem(ops, ops->solve_forward(half), Eigen::VectorXd::Zero(ops->dofs()), alpha);
        EXPECT_NEAR(objective(p, half), 0.0, 1e-28);
    }
}

TEST(Objective, GradientMatchesFiniteDifferences) {
    const auto r = oracle::check_gradient(9, 16, 20, 1);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Objective, RejectsMismatchedTarget) {
    auto ops = bump_ops(5, TimePartition::uniform(1.0, 3));
    EXPECT_THROW(make_tracking_problem(ops, StateTrajectory::zero(ops->dofs(), 3), Eigen::VectorXd::Zero(ops->dofs()), 1.0),
                 std::invalid_argument);
}
