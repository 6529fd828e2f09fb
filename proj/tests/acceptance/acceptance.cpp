// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <switchocp/instancegen.hpp>
#include <switchocp/outerloop.hpp>
#include <switchocp_oracles/validation.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace switchocp;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

Outcome from_check(const oracle::CheckResult& r) { return {r.passed, r.detail}; }

Outcome both(const oracle::CheckResult& a, const oracle::CheckResult& b) {
    return {a.passed && b.passed, a.detail + "; " + b.detail};
}

const std::shared_ptr<const HeatOperators>& desk_fine_ops() {
    static const auto ops = [] {
        InstanceSpec spec;
        spec.nx = 9;
        spec.nt_fine = 384;
        return make_operators(spec, spec.nt_fine);
    }();
    return ops;
}

TrackingProblem desk_problem(std::uint64_t seed) {
    InstanceSpec spec;
    spec.seed = seed;
    spec.nx = 9;
    spec.nt_fine = 384;
    return coarse_problem(build_instance(spec, desk_fine_ops()), 32, spec.alpha);
}

OuterResult desk_run(std::uint64_t seed, double alpha, bool warm = true) {
    OuterConfig config;
    config.alpha = alpha;
    config.warm_start = warm;
    return run(desk_problem(seed), config);
}

double median(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome pde_convergence() {
    const double e0 = oracle::decay_error(9, 16), e1 = oracle::decay_error(17, 32), e2 = oracle::decay_error(33, 64);
    return {e0 / e1 >= 3.5 && e1 / e2 >= 3.5,
            "errors " + sci(e0) + " " + sci(e1) + " " + sci(e2) + ", ratios " + std::to_string(e0 / e1) + " " +
                std::to_string(e1 / e2)};
}

Outcome monotone_and_sound() {
    std::ostringstream d;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        OuterConfig config;
        const OuterResult r = run(desk_problem(seed), config);
        double worst_drop = 0.0;
        for (std::size_t k = 1; k < r.log.size(); ++k) {
            worst_drop = std::max(worst_drop, r.log[k - 1].lower_bound - r.log[k].lower_bound);
        }
        const Eigen::VectorXd w =
            Projection(r.pool.grid(), 1).project(r.final.u).cwiseMax(0.0).cwiseMin(1.0);
        const double final_violation = max_violation(w, 1, config.budget);
        const double bv0 = r.log.front().bv_seminorm.front();
        const bool seed_ok = r.status == RunStatus::feasible && worst_drop <= 1e-9 &&
                             bv0 > config.budget.max_shifts && final_violation <= violation_threshold(config);
        ok = ok && seed_ok;
        d << (seed > 1 ? "; " : "") << "seed " << seed << ' ' << to_string(r.status) << " cuts " << r.pool.size()
          << " bv0 " << bv0 << " drop " << sci(std::max(worst_drop, 0.0)) << " viol " << sci(final_violation);
    }
    return {ok, d.str()};
}

Outcome trace_shape() {
    const OuterResult r = desk_run(1, 1e-2);
    const auto& log = r.log;
    if (r.status != RunStatus::feasible || log.size() < 11) {
        return {false, std::string(to_string(r.status)) + " after " + std::to_string(r.pool.size()) + " cuts"};
    }
    const std::size_t K = log.size() - 1;
    const double first = log[5].lower_bound - log[0].lower_bound;
    const double last = log[K].lower_bound - log[K - 5].lower_bound;
    return {first > 0.0 && last < 0.1 * first,
            "first-5 gain " + sci(first) + ", last-5 gain " + sci(last) + ", " + std::to_string(K) + " cuts"};
}

Outcome warm_start_benefit() {
    const OuterResult warm = desk_run(1, 1e-2, true);
    const OuterResult cold = desk_run(1, 1e-2, false);
    if (warm.status != RunStatus::feasible || cold.status != RunStatus::feasible) {
        return {false, "warm " + std::string(to_string(warm.status)) + ", cold " + std::string(to_string(cold.status))};
    }
    std::vector<int> w, c;
    for (std::size_t k = 1; k < warm.log.size(); ++k) w.push_back(warm.log[k].newton_iterations);
    for (std::size_t k = 1; k < cold.log.size(); ++k) c.push_back(cold.log[k].newton_iterations);
    const double mw = median(w), mc = median(c);
    return {mw <= mc, "median Newton iterations warm " + std::to_string(mw) + ", cold " + std::to_string(mc)};
}

// Bounds of the alpha-regularized relaxation shifted by alpha * n * T / 8,
// the value of the regularization term on binary controls.
Outcome alpha_ordering() {
    const double small = 2e-3, large = 1e-2;
    const OuterResult rs = desk_run(1, small);
    const OuterResult rl = desk_run(1, large);
    if (rs.status != RunStatus::feasible || rl.status != RunStatus::feasible) {
        return {false, "alpha=2e-3 " + std::string(to_string(rs.status)) + " (" + rs.final.message + "), alpha=1e-2 " +
                           std::string(to_string(rl.status))};
    }
    const double T = rs.pool.grid().horizon();
    const std::size_t K = std::min(rs.log.size(), rl.log.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double bs = rs.log[k].lower_bound - small * T / 8.0;
        const double bl = rl.log[k].lower_bound - large * T / 8.0;
        worst = std::max(worst, bl - bs);
    }
    const bool ordered = worst <= 1e-9;
    const bool fewer_cuts = rl.pool.size() <= rs.pool.size();
    return {ordered && fewer_cuts,
            std::string("bounds ") + (ordered ? "ordered" : "not ordered") + " at " + std::to_string(K) +
                " matched cuts (max excess " + sci(std::max(worst, 0.0)) + "); cuts to stop alpha=1e-2: " +
                std::to_string(rl.pool.size()) + ", alpha=2e-3: " + std::to_string(rs.pool.size())};
}

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Outcome()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"separation oracle equivalence", 60,
         [] { return both(oracle::check_separation_binary(12, 3), oracle::check_separation_fractional(1000, 12, 3, 1)); }},
        {"discrete adjointness", 30, [] { return from_check(oracle::check_adjointness(17, 32, 50, 1)); }},
        {"gradient check", 60, [] { return from_check(oracle::check_gradient(9, 16, 20, 1)); }},
        {"PDE convergence", 60, pde_convergence},
        {"tiny-instance KKT oracle", 120, [] { return from_check(oracle::check_tiny_kkt(10, 1)); }},
        {"outer-loop monotonicity and soundness", 600, monotone_and_sound},
        {"bound trace shape", 300, trace_shape},
        {"warm-start benefit", 600, warm_start_benefit},
        {"alpha-ordering at matched iterations", 600, alpha_ordering},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (seconds > c.budget_seconds) {
            o.passed = false;
            o.detail += "; over the time budget";
        }
        failures += !o.passed;
        std::printf("%s %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
