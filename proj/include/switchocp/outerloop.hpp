#pragma once

#include "switchocp/heat.hpp"
#include "switchocp/ssnewton.hpp"
#include "switchocp/switchpoly.hpp"
#include "switchocp/timegrid.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace switchocp {

enum class ProjectionStrategy {
    grid,    // the control discretization itself, for every iteration
    dyadic,  // nested bisections of (0,T), refined with the iteration count
};

struct OuterConfig {
    double alpha = 1e-2;
    double rho = 1e-5;
    /// Stop once the most violated cut falls below
    /// max(tolerance_relative * b, tolerance_absolute).
    double tolerance_relative = 0.01;
    double tolerance_absolute = 1e-6;
    int max_cuts = 200;
    NewtonCaps newton;
    ProjectionStrategy projection = ProjectionStrategy::grid;
    SwitchingBudget budget{2};
    bool warm_start = true;
    /// Add the most violated cut of every violated switch instead of the
    /// single most violated one.
    bool batch_cuts = false;
};

struct BoundLogRecord {
    int iteration = 0;
    double cpu_seconds = 0.0;
    double lower_bound = 0.0;
    double max_violation = 0.0;
    int num_cuts = 0;
    std::vector<double> bv_seminorm;
    int newton_iterations = 0;
};

enum class RunStatus {
    feasible,        // no cut violated beyond the threshold
    cut_cap,         // max_cuts reached
    newton_failure,  // a relaxation did not converge
};

std::string_view to_string(RunStatus status);

struct OuterResult {
    NewtonState final;
    CutPool pool;
    std::vector<BoundLogRecord> log;
    RunStatus status = RunStatus::feasible;
};

double violation_threshold(const OuterConfig& config);

/// Largest L such that 2^L divides the number of intervals of a uniform grid.
int max_dyadic_level(const TimePartition& grid);

/// Dyadic partition of (0,T) into 2^level intervals.
TimePartition dyadic_partition(double horizon, int level);

/// Projection used to separate the k-th relaxed solution.
Projection choose_projection(int k, const OuterConfig& config, const TimePartition& grid, int switches);

/// Outer approximation: solve the relaxation, separate, add the most violated
/// cut, re-solve warm-started, until no cut is violated beyond the threshold.
/// `problem.alpha` is replaced by `config.alpha`.
OuterResult run(const TrackingProblem& problem, const OuterConfig& config,
                const std::function<void(const BoundLogRecord&)>& observer = {});

}  // namespace switchocp
