#include "switchocp_oracles/validation.hpp"

#include "switchocp_oracles/dense_kkt.hpp"
#include "switchocp_oracles/tiny.hpp"

#include <switchocp/instancegen.hpp>
#include <switchocp/ssnewton.hpp>
#include <switchocp/switchpoly.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

namespace switchocp::oracle {

namespace {

std::string format(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << v;
    return out.str();
}

bool same_separation(const std::optional<Separation>& a, const std::optional<Separation>& b, double tol) {
    const double va = a ? a->violation : 0.0;
    const double vb = b ? b->violation : 0.0;
    return std::abs(va - vb) <= tol;
}

bool valid_on(const Separation& sep, const std::vector<Eigen::VectorXd>& vertices) {
    return std::all_of(vertices.begin(), vertices.end(), [&](const Eigen::VectorXd& v) {
        return sep.cut.coefficients.dot(v) <= sep.cut.rhs + 1e-12;
    });
}

}  // namespace

CheckResult check_separation_binary(int max_length, int max_sigma) {
    CheckResult r{"separation vs brute force (binary, exhaustive)"};
    long cases = 0;
    for (int sigma = 1; sigma <= max_sigma; ++sigma) {
        for (int m = 1; m <= max_length; ++m) {
            const auto vertices = enumerate_vertices(m, SwitchingBudget{sigma});
            std::vector<double> w(m);
            for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
                for (int i = 0; i < m; ++i) w[i] = (mask >> i) & 1u;
                const auto fast = separate(w, SwitchingBudget{sigma});
                const auto slow = separate_bruteforce(w, SwitchingBudget{sigma});
                ++cases;
                if (!same_separation(fast, slow, 0.0)) {
                    r.detail = "mismatch at M=" + std::to_string(m) + " sigma=" + std::to_string(sigma);
                    return r;
                }
                if (fast && !valid_on(*fast, vertices)) {
                    r.detail = "invalid cut at M=" + std::to_string(m) + " sigma=" + std::to_string(sigma);
                    return r;
                }
            }
        }
    }
    r.passed = true;
    r.detail = std::to_string(cases) + " patterns";
    return r;
}

CheckResult check_separation_fractional(int count, int max_length, int max_sigma, std::uint64_t seed) {
    CheckResult r{"separation vs brute force (fractional)"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> length(1, max_length), sigma(1, max_sigma);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const int m = length(rng);
        const SwitchingBudget budget{sigma(rng)};
        std::vector<double> w(m);
        for (double& x : w) x = value(rng);
        const auto fast = separate(w, budget);
        const auto slow = separate_bruteforce(w, budget);
        worst = std::max(worst, std::abs((fast ? fast->violation : 0.0) - (slow ? slow->violation : 0.0)));
        if (fast && !valid_on(*fast, enumerate_vertices(m, budget))) {
            r.detail = "invalid cut on a vertex";
            return r;
        }
    }
    r.passed = worst <= 1e-12;
    r.detail = "max difference " + format(worst);
    return r;
}

CheckResult check_adjointness(int nx, int nt, int pairs, std::uint64_t seed) {
    CheckResult r{"discrete adjointness"};
    const TrackingProblem problem = random_problem(seed, nx, nt, 2, 1e-2);
    const HeatOperators& ops = *problem.ops;
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    auto random_matrix = [&](int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int j = 0; j < cols; ++j) {
            for (int i = 0; i < rows; ++i) m(i, j) = value(rng);
        }
        return m;
    };
    double worst_sigma = 0.0, worst_psi = 0.0;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(ops.dofs());
    for (int k = 0; k < pairs; ++k) {
        const SourceTrajectory f{random_matrix(ops.dofs(), nt)};
        const StateTrajectory g{random_matrix(ops.dofs(), nt + 1)};
        const double lhs = ops.state_inner(ops.solve_forward(f, zero), g);
        const double rhs = ops.pairing(f, ops.solve_adjoint(g));
        worst_sigma = std::max(worst_sigma, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));

        Control u(ops.grid(), ops.switches(), 0.0);
        for (int i = 0; i < u.dimension(); ++i) u.values()[i] = value(rng);
        const StateTrajectory w{random_matrix(ops.dofs(), nt + 1)};
        const double a = ops.pairing(ops.apply_psi(u), w);
        const double b = inner(u, ops.apply_psi_star(w));
        worst_psi = std::max(worst_psi, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    }
    r.passed = worst_sigma < 1e-12 && worst_psi < 1e-12;
    r.detail = "Sigma " + format(worst_sigma) + ", Psi " + format(worst_psi);
    return r;
}

CheckResult check_gradient(int nx, int nt, int directions, std::uint64_t seed) {
    CheckResult r{"gradient vs central differences"};
    InstanceSpec spec;
    spec.seed = seed;
    spec.nx = nx;
    spec.nt_fine = nt * std::max(1, 400 / nt);
    const Instance instance = build_instance(spec);
    const TrackingProblem problem = coarse_problem(instance, nt, spec.alpha);

    std::mt19937_64 rng(seed + 7);
    std::uniform_real_distribution<double> value(0.0, 1.0), dir(-1.0, 1.0);
    Control u(problem.ops->grid(), 1, 0.0);
    for (int i = 0; i < u.dimension(); ++i) u.values()[i] = value(rng);
    const ObjectiveEvaluation eval = objective_and_gradient(problem, u);

    constexpr double step = 1e-4;
    double worst = 0.0;
    for (int k = 0; k < directions; ++k) {
        Control d(u.partition(), 1, 0.0);
        for (int i = 0; i < d.dimension(); ++i) d.values()[i] = dir(rng);
        Control plus = u, minus = u;
        plus.values() += step * d.values();
        minus.values() -= step * d.values();
        const double fd = (objective(problem, plus) - objective(problem, minus)) / (2.0 * step);
        const double exact = inner(eval.gradient, d);
        worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-300));
    }
    r.passed = worst < 1e-6;
    r.detail = "max relative error " + format(worst);
    return r;
}

CheckResult check_tiny_kkt(int count, std::uint64_t seed) {
    CheckResult r{"semi-smooth Newton vs enumeration oracle"};
    double worst_objective = 0.0, worst_kkt = 0.0;
    for (int k = 0; k < count; ++k) {
        const int nt = 2 + k % 2;
        const int cuts = (k / 2) % 2;
        const TinyCase tc = make_tiny_case(seed + k, nt, cuts);
        const OracleSolution ref = solve_by_enumeration(dense_qp(tc.problem, tc.pool));
        if (!ref.found) {
            r.detail = "oracle found no KKT point for case " + std::to_string(k);
            return r;
        }
        const NewtonState state =
            solve(Control(tc.problem.ops->grid(), 1, 0.5), Eigen::VectorXd::Zero(tc.pool.size()), tc.problem,
                  tc.pool, 1e-5);
        if (!state.converged) {
            r.detail = "Newton failed on case " + std::to_string(k) + ": " + state.message;
            return r;
        }
        const double value = objective(tc.problem, state.u);
        worst_objective = std::max(worst_objective, std::abs(value - ref.objective) / std::abs(ref.objective));
        worst_kkt = std::max(worst_kkt, kkt_report(tc.problem, tc.pool, state.u, state.lambda).worst());
    }
    r.passed = worst_objective <= 1e-9 && worst_kkt <= 1e-8;
    r.detail = "objective " + format(worst_objective) + ", optimality system " + format(worst_kkt);
    return r;
}

CheckResult check_complementarity(const ComplementarityFn& f2, std::uint64_t seed) {
    CheckResult r{"cut complementarity residual"};
    for (std::uint64_t s = seed; s < seed + 50; ++s) {
        const TinyCase tc = make_tiny_case(s, 3, 1);
        const OracleSolution ref = solve_by_enumeration(dense_qp(tc.problem, tc.pool));
        if (!ref.found || tc.pool.size() == 0 || !(ref.lambda[0] > 1e-8)) continue;
        const double rho = 1e-5;
        const Eigen::VectorXd gu = tc.pool.rows() * ref.u;
        const Eigen::VectorXd& b = tc.pool.rhs();
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
        const double scale = rho * ref.lambda[0];
        const double at_solution = f2(gu, ref.lambda, b, rho).cwiseAbs().maxCoeff();
        const double infeasible = f2(gu + one * 0.1, zero, b, rho).cwiseAbs().maxCoeff();
        const double slack = f2(gu - one * 0.1, ref.lambda, b, rho).cwiseAbs().maxCoeff();
        r.passed = at_solution <= 1e-6 * scale && infeasible > 1e-3 && slack > 0.5 * scale;
        r.detail = "at solution " + format(at_solution) + ", infeasible " + format(infeasible) + ", slack " +
                   format(slack);
        return r;
    }
    r.detail = "no tiny case with a strictly active cut";
    return r;
}

double decay_error(int nx, int nt, double horizon) {
    const double pi = std::numbers::pi;
    SpatialMesh mesh(nx);
    auto ops = std::make_shared<const HeatOperators>(mesh, TimePartition::uniform(horizon, nt),
                                                     FormFunctions::from_fields(mesh, {quadratic_bump}));
    const Eigen::VectorXd s =
        interpolate(mesh, [pi](double x1, double x2) { return std::sin(pi * x1) * std::sin(pi * x2); });
    const StateTrajectory y = ops->solve_forward(Control(ops->grid(), 1, 0.0), s);
    StateTrajectory diff = y;
    const auto& t = ops->grid().breakpoints();
    for (int l = 0; l < diff.levels(); ++l) diff.values.col(l) -= std::exp(-2.0 * pi * pi * t[l]) * s;
    return std::sqrt(ops->state_inner(diff, diff));
}

std::vector<CheckResult> run_validation(std::uint64_t seed) {
    return {
        check_separation_binary(12, 3),
        check_separation_fractional(1000, 12, 3, seed),
        check_adjointness(17, 32, 50, seed),
        check_gradient(9, 16, 20, seed),
        check_tiny_kkt(10, seed),
        check_complementarity(complementarity_residual, seed),
    };
}

}  // namespace switchocp::oracle
