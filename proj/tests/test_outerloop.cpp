#include <switchocp/instancegen.hpp>
#include <switchocp/io.hpp>
#include <switchocp/outerloop.hpp>

#include <gtest/gtest.h>

#include <memory>
#include <sstream>

using namespace switchocp;

namespace {

TrackingProblem desk_problem(std::uint64_t seed) {
    InstanceSpec spec;
    spec.seed = seed;
    spec.nx = 9;
    spec.nt_fine = 384;
    return coarse_problem(build_instance(spec), 32, spec.alpha);
}

TrackingProblem flat_problem() {
    SpatialMesh mesh(6);
    auto forms = FormFunctions::from_fields(mesh, {quadratic_bump});
    auto ops = std::make_shared<const HeatOperators>(std::move(mesh), TimePartition::uniform(1.0, 8), std::move(forms));
    return make_tracking_problem(ops, ops->solve_forward(Control(ops->grid(), 1, 0.5)),
                                 Eigen::VectorXd::Zero(ops->dofs()), 1e-2);
}

}  // namespace

TEST(OuterConfig, Validation) {
    const auto problem = flat_problem();
    OuterConfig bad;
    bad.max_cuts = 0;
    EXPECT_THROW(run(problem, bad), std::invalid_argument);
    bad = OuterConfig{};
    bad.tolerance_relative = 0.0;
    EXPECT_THROW(run(problem, bad), std::invalid_argument);
    bad = OuterConfig{};
    bad.alpha = -1.0;
    EXPECT_THROW(run(problem, bad), std::invalid_argument);
    EXPECT_DOUBLE_EQ(violation_threshold(OuterConfig{}), 0.01);
}

TEST(ChooseProjection, GridIsFixed) {
    const auto grid = TimePartition::uniform(2.0, 12);
    OuterConfig config;
    for (int k : {0, 1, 7, 50}) EXPECT_EQ(choose_projection(k, config, grid, 1).partition(), grid);
}

TEST(ChooseProjection, DyadicLevels) {
    const auto grid = TimePartition::uniform(2.0, 32);
    EXPECT_EQ(max_dyadic_level(grid), 5);
    EXPECT_EQ(max_dyadic_level(TimePartition::uniform(2.0, 12)), 2);
    OuterConfig config;
    config.projection = ProjectionStrategy::dyadic;
    const auto pi = choose_projection(2, config, grid, 1);
    EXPECT_EQ(pi.partition().size(), 8);
    EXPECT_EQ(pi.partition().level(), 3);
    EXPECT_TRUE(grid.refines(pi.partition()));
    for (int k = 0; k < 8; ++k) {
        EXPECT_DOUBLE_EQ(choose_projection(k, config, grid, 1).partition().quasi_uniformity(), 1.0);
    }
    EXPECT_EQ(choose_projection(40, config, grid, 1).partition().size(), 32);
    const auto p3 = dyadic_partition(2.0, 3);
    EXPECT_EQ(p3.size(), 8);
    EXPECT_DOUBLE_EQ(p3.length(5), 0.25);
}

TEST(Run, FeasibleFromStart) {
    std::vector<BoundLogRecord> seen;
    const auto result = run(flat_problem(), OuterConfig{}, [&](const BoundLogRecord& r) { seen.push_back(r); });
    EXPECT_EQ(result.status, RunStatus::feasible);
    ASSERT_EQ(result.log.size(), 1u);
    EXPECT_EQ(seen.size(), 1u);
    EXPECT_EQ(result.log[0].num_cuts, 0);
    EXPECT_EQ(result.pool.size(), 0);
    EXPECT_EQ(result.log[0].max_violation, 0.0);
}

TEST(Run, DeskInstanceMonotoneAndSound) {
    OuterConfig config;
    const auto result = run(desk_problem(1), config);
    ASSERT_EQ(result.status, RunStatus::feasible) << result.final.message;
    const auto& log = result.log;
    ASSERT_GT(log.size(), 1u);
    EXPECT_GT(log[0].bv_seminorm[0], 2.0);
    EXPECT_GT(log[0].max_violation, 0.0);
    for (std::size_t k = 1; k < log.size(); ++k) {
        EXPECT_GE(log[k].lower_bound, log[k - 1].lower_bound - 1e-9);
        EXPECT_GT(log[k].cpu_seconds, log[k - 1].cpu_seconds);
        EXPECT_EQ(log[k].num_cuts, static_cast<int>(k));
        EXPECT_EQ(log[k].iteration, static_cast<int>(k));
    }
    const Projection pi(result.pool.grid(), 1);
    const Eigen::VectorXd w = pi.project(result.final.u).cwiseMax(0.0).cwiseMin(1.0);
    EXPECT_LE(max_violation(w, 1, config.budget), violation_threshold(config));
}

TEST(Run, CutCapStops) {
    OuterConfig config;
    config.max_cuts = 3;
    const auto result = run(desk_problem(2), config);
    EXPECT_EQ(result.status, RunStatus::cut_cap);
    EXPECT_EQ(result.pool.size(), 3);
    EXPECT_EQ(result.log.size(), 4u);
}

TEST(Run, BatchAndDyadicVariantsStayMonotone) {
    for (auto projection : {ProjectionStrategy::grid, ProjectionStrategy::dyadic}) {
        OuterConfig config;
        config.projection = projection;
        config.batch_cuts = true;
        config.max_cuts = 15;
        const auto result = run(desk_problem(3), config);
        EXPECT_NE(result.status, RunStatus::newton_failure) << result.final.message;
        for (std::size_t k = 1; k < result.log.size(); ++k) {
            EXPECT_GE(result.log[k].lower_bound, result.log[k - 1].lower_bound - 1e-9);
        }
    }
}

TEST(Io, CsvAndSummary) {
    OuterConfig config;
    config.max_cuts = 2;
    const auto result = run(desk_problem(1), config);
    std::ostringstream out;
    write_bound_log(out, result.log);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "iteration,cpu_seconds,lower_bound,max_violation,num_cuts,bv_seminorm");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
    const std::string summary = summary_line(result);
    EXPECT_NE(summary.find("status=cut_cap"), std::string::npos);
    EXPECT_NE(summary.find("cuts=2"), std::string::npos);
    EXPECT_THROW(write_bound_log("/nonexistent/dir/log.csv", result.log), std::runtime_error);
}
