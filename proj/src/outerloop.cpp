#include "switchocp/outerloop.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <limits>
#include <optional>
#include <string>
#include <stdexcept>

namespace switchocp {

namespace {

double process_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void check_config(const OuterConfig& config) {
    if (!(config.alpha > 0.0) || !(config.rho > 0.0)) throw std::invalid_argument("alpha and rho must be positive");
    if (!(config.tolerance_relative > 0.0) || !(config.tolerance_absolute > 0.0)) {
        throw std::invalid_argument("violation tolerances must be positive");
    }
    if (config.max_cuts < 1) throw std::invalid_argument("max_cuts must be at least 1");
    if (config.budget.max_shifts < 1) throw std::invalid_argument("sigma_max must be positive");
}

// Newton iterates satisfy the box up to the solver tolerance.
Control box_clipped(const Control& u) {
    const double excursion =
        std::max((-u.values().array()).maxCoeff(), (u.values().array() - 1.0).maxCoeff());
    if (excursion > 1e-6) {
        throw std::runtime_error("relaxed control leaves [0,1] by " + std::to_string(excursion));
    }
    Control c = u;
    c.values() = c.values().cwiseMax(0.0).cwiseMin(1.0);
    return c;
}

}  // namespace

std::string_view to_string(RunStatus status) {
    switch (status) {
        case RunStatus::feasible: return "feasible";
        case RunStatus::cut_cap: return "cut_cap";
        case RunStatus::newton_failure: return "newton_failure";
    }
    return "unknown";
}

double violation_threshold(const OuterConfig& config) {
    return std::max(config.tolerance_relative * config.budget.alternating_rhs(), config.tolerance_absolute);
}

int max_dyadic_level(const TimePartition& grid) {
    int level = 0;
    while (true) {
        const int next = 1 << (level + 1);
        if (next > grid.size() || grid.size() % next != 0) break;
        if (!grid.refines(dyadic_partition(grid.horizon(), level + 1))) break;
        ++level;
    }
    return level;
}

TimePartition dyadic_partition(double horizon, int level) {
    TimePartition p({0.0, horizon}, 0);
    for (int l = 0; l < level; ++l) p = refine_dyadic(p);
    return p;
}

Projection choose_projection(int k, const OuterConfig& config, const TimePartition& grid, int switches) {
    if (config.projection == ProjectionStrategy::grid) return Projection(grid, switches);
    const int level = std::min(k + 1, max_dyadic_level(grid));
    return Projection(dyadic_partition(grid.horizon(), level), switches);
}

OuterResult run(const TrackingProblem& problem_in, const OuterConfig& config,
                const std::function<void(const BoundLogRecord&)>& observer) {
    check_config(config);
    TrackingProblem problem = problem_in;
    problem.alpha = config.alpha;
    const TimePartition& grid = problem.ops->grid();
    const int switches = problem.ops->switches();
    const double threshold = violation_threshold(config);
    const int finest_level = max_dyadic_level(grid);

    OuterResult result{NewtonState{Control(grid, switches, 0.5), Eigen::VectorXd(0),
                                   StateTrajectory{}, ActiveSets::empty(switches * grid.size(), 0)},
                       CutPool(grid, switches), {}, RunStatus::feasible};
    CutPool& pool = result.pool;

    Control start(grid, switches, 0.5);
    Eigen::VectorXd start_lambda(0);
    int dyadic_level = 0;
    double last_cpu = -1.0;
    const double cpu0 = process_cpu_seconds();

    for (int k = 0;; ++k) {
        NewtonState state = solve(start, start_lambda, problem, pool, config.rho, config.newton);

        BoundLogRecord record;
        record.iteration = k;
        record.lower_bound = objective(problem, state.u);
        record.num_cuts = pool.size();
        record.newton_iterations = state.iterations;
        for (int j = 0; j < switches; ++j) record.bv_seminorm.push_back(state.u.bv_seminorm(j));

        std::vector<SwitchSeparation> found;
        std::optional<Projection> projection;
        if (state.converged) {
            const Control u = box_clipped(state.u);
            projection = choose_projection(k, config, grid, switches);
            if (config.projection == ProjectionStrategy::dyadic) {
                dyadic_level = std::max(dyadic_level, projection->partition().level());
                projection = Projection(dyadic_partition(grid.horizon(), dyadic_level), switches);
            }
            while (true) {
                const Eigen::VectorXd w = projection->project(u);
                found.clear();
                const int length = projection->partition().size();
                for (int j = 0; j < switches; ++j) {
                    auto sep = separate(Eigen::VectorXd(w.segment(j * length, length)), config.budget);
                    if (!sep) continue;
                    Eigen::VectorXd full = Eigen::VectorXd::Zero(w.size());
                    full.segment(j * length, length) = sep->cut.coefficients;
                    for (int& i : sep->cut.support) i += j * length;
                    sep->cut.coefficients = std::move(full);
                    found.push_back(SwitchSeparation{std::move(*sep), j});
                }
                const bool violated = std::any_of(found.begin(), found.end(), [&](const SwitchSeparation& s) {
                    return s.separation.violation > threshold;
                });
                if (violated || config.projection != ProjectionStrategy::dyadic || dyadic_level >= finest_level) {
                    break;
                }
                // Refine until the relaxed solution is cut off on the finer projection.
                ++dyadic_level;
                projection = Projection(dyadic_partition(grid.horizon(), dyadic_level), switches);
            }
            std::sort(found.begin(), found.end(), [](const SwitchSeparation& a, const SwitchSeparation& b) {
                return a.separation.violation > b.separation.violation;
            });
            record.max_violation = found.empty() ? 0.0 : found.front().separation.violation;
        }

        double cpu = process_cpu_seconds() - cpu0;
        if (cpu <= last_cpu) cpu = std::nextafter(last_cpu, std::numeric_limits<double>::infinity());
        last_cpu = cpu;
        record.cpu_seconds = cpu;
        result.log.push_back(record);
        if (observer) observer(record);

        result.final = std::move(state);
        if (!result.final.converged) {
            result.status = RunStatus::newton_failure;
            return result;
        }
        if (record.max_violation <= threshold) {
            result.status = RunStatus::feasible;
            return result;
        }
        if (pool.size() >= config.max_cuts) {
            result.status = RunStatus::cut_cap;
            return result;
        }

        for (const auto& s : found) {
            if (s.separation.violation <= threshold) break;
            pool.add(*projection, s.separation.cut);
            if (!config.batch_cuts || pool.size() >= config.max_cuts) break;
        }

        if (config.warm_start) {
            start = result.final.u;
            start_lambda = Eigen::VectorXd::Zero(pool.size());
            start_lambda.head(result.final.lambda.size()) = result.final.lambda;
        } else {
            start = Control(grid, switches, 0.5);
            start_lambda = Eigen::VectorXd::Zero(pool.size());
        }
    }
}

}  // namespace switchocp
