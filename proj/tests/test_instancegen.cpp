#include <switchocp/instancegen.hpp>
#include <switchocp_oracles/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

using namespace switchocp;

namespace {

InstanceSpec small_spec(std::uint64_t seed = 1) {
    InstanceSpec spec;
    spec.seed = seed;
    spec.nx = 9;
    spec.nt_fine = 96;
    return spec;
}

double gradient_norm_at_desired(int nx, int nt) {
    InstanceSpec spec;
    spec.seed = 1;
    spec.jumps = 3;
    spec.nx = nx;
    spec.nt_fine = 400;
    const Instance inst = build_instance(spec);
    EXPECT_FALSE(inst.desired_control.clipped);
    const auto eval = objective_and_gradient(coarse_problem(inst, nt, spec.alpha), restrict_control(inst, nt));
    return std::sqrt(inner(eval.gradient, eval.gradient));
}

}  // namespace

TEST(InstanceSpec, TextRoundTrip) {
    InstanceSpec spec = small_spec(17);
    spec.alpha = 3e-3;
    spec.horizon = 1.25;
    EXPECT_EQ(parse_spec(format_spec(spec)), spec);
    const auto path = std::filesystem::temp_directory_path() / "switchocp_spec_roundtrip.txt";
    write_spec(spec, path.string());
    EXPECT_EQ(read_spec(path.string()), spec);
    std::filesystem::remove(path);
}

TEST(InstanceSpec, ParseErrors) {
    EXPECT_THROW(parse_spec("seed = 1\nbogus = 2\n"), std::invalid_argument);
    EXPECT_THROW(parse_spec("nx = nine\n"), std::invalid_argument);
    EXPECT_THROW(parse_spec("T 2\n"), std::invalid_argument);
    EXPECT_THROW(parse_spec("T = -1\n"), std::invalid_argument);
    EXPECT_THROW(parse_spec("form = gaussian\n"), std::invalid_argument);
    EXPECT_THROW(parse_spec("sigma = 400\nnt_fine = 400\n"), std::invalid_argument);
    EXPECT_EQ(parse_spec("# comment\n\nseed = 5  # trailing\n").seed, 5u);
    EXPECT_THROW(read_spec("/nonexistent/spec.txt"), std::runtime_error);
}

TEST(SplineControl, EndpointsKnotsAndRange) {
    const InstanceSpec spec = small_spec(3);
    const SplineControl ud = spline_control(spec);
    const auto& knots = ud.spline->knots();
    ASSERT_EQ(static_cast<int>(knots.size()), spec.jumps + 2);
    EXPECT_EQ(ud.spline->values().front(), 0.0);
    EXPECT_EQ(ud.spline->values().back(), 0.5);
    EXPECT_EQ(ud.value(0.0), 0.0);
    EXPECT_EQ(ud.value(spec.horizon), 0.5);
    const double dt = spec.horizon / spec.nt_fine;
    for (std::size_t k = 1; k + 1 < knots.size(); ++k) {
        EXPECT_GT(knots[k], knots[k - 1]);
        const double steps = knots[k] / dt;
        EXPECT_NEAR(steps, std::round(steps), 1e-9);
        EXPECT_GT(knots[k], 0.0);
        EXPECT_LT(knots[k], spec.horizon);
    }
    EXPECT_GE(ud.samples.values().minCoeff(), 0.0);
    EXPECT_LE(ud.samples.values().maxCoeff(), 1.0);
}

TEST(SplineControl, NoJumpsIsSingleCurve) {
    InstanceSpec spec = small_spec();
    spec.jumps = 0;
    const SplineControl ud = spline_control(spec);
    const int n = spec.nt_fine;
    const double dt = spec.horizon / n;
    EXPECT_NEAR(ud.samples(0, 0), 0.0, 0.5 * dt);
    EXPECT_NEAR(ud.samples(0, n - 1), 0.5, 0.5 * dt);
    EXPECT_FALSE(ud.clipped);
}

TEST(SplineControl, SameSeedSameSamples) {
    const auto a = spline_control(small_spec(9));
    const auto b = spline_control(small_spec(9));
    EXPECT_EQ(a.samples.values(), b.samples.values());
    EXPECT_EQ(a.spline->knots(), b.spline->knots());
    EXPECT_NE(a.samples.values(), spline_control(small_spec(10)).samples.values());
}

TEST(BuildInstance, ConstantAgainstQuadrature) {
    InstanceSpec spec = small_spec();
    spec.nx = 30;
    spec.nt_fine = 8;
    spec.jumps = 2;
    const Instance inst = build_instance(spec);
    const double pi = std::numbers::pi;
    const double ref = oracle::integrate_degree5(inst.fine_ops->mesh(), [pi](double x, double y) {
        return quadratic_bump(x, y) * std::sin(pi * x) * std::sin(pi * y);
    });
    EXPECT_LT(std::abs(inst.c * ref - 1.0), 1e-6);
    EXPECT_TRUE(inst.initial_state.isZero());
    EXPECT_EQ(inst.desired_state.levels(), 9);
}

TEST(BuildInstance, GradientAtDesiredControlDecays) {
    const double g0 = gradient_norm_at_desired(9, 50);
    const double g1 = gradient_norm_at_desired(17, 100);
    const double g2 = gradient_norm_at_desired(33, 200);
    EXPECT_GE(g0 / g1, 3.5);
    EXPECT_GE(g1 / g2, 3.5);
}

TEST(BuildInstance, RejectsMismatchedOperators) {
    const InstanceSpec spec = small_spec();
    InstanceSpec other = spec;
    other.nx = 7;
    EXPECT_THROW(build_instance(spec, make_operators(other, spec.nt_fine)), std::invalid_argument);
    EXPECT_THROW(build_instance(spec, make_operators(spec, 48)), std::invalid_argument);
}

TEST(Restriction, SubsamplesAndAverages) {
    const Instance inst = build_instance(small_spec(2));
    const StateTrajectory yd = restrict_desired(inst, 24);
    ASSERT_EQ(yd.levels(), 25);
    for (int l = 0; l <= 24; ++l) EXPECT_EQ(yd.values.col(l), inst.desired_state.values.col(4 * l));
    const Control ud = restrict_control(inst, 24);
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) sum += inst.desired_control.samples(0, 8 + k);
    EXPECT_NEAR(ud(0, 2), sum / 4.0, 1e-15);
    EXPECT_THROW(restrict_desired(inst, 25), std::invalid_argument);
    EXPECT_THROW(coarse_problem(inst, 0, 1e-2), std::invalid_argument);

    const TrackingProblem same = coarse_problem(inst, 96, 1e-2);
    EXPECT_EQ(same.ops, inst.fine_ops);
    EXPECT_EQ(coarse_problem(inst, 32, 2e-3).alpha, 2e-3);
}
