#include "switchocp/ssnewton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace switchocp {

CutPool::CutPool(TimePartition grid, int switches)
    : grid_(std::move(grid)), switches_(switches), rows_(0, switches * grid_.size()), rhs_(0) {
    if (switches_ < 1) throw std::invalid_argument("cut pool needs at least one switch");
}

void CutPool::add(Projection projection, CuttingPlane plane) {
    if (projection.switches() != switches_) {
        throw std::invalid_argument("cut projection disagrees on the number of switches");
    }
    if (plane.coefficients.size() != projection.dimension()) {
        throw std::invalid_argument("cut coefficients do not match the projection dimension");
    }
    if (plane.coefficients.cwiseAbs().maxCoeff() > 1.0) {
        throw std::invalid_argument("cut coefficients must lie in [-1, 1]");
    }
    const Eigen::VectorXd row = projection.functional_row(plane.coefficients, grid_);
    const int k = size();
    rows_.conservativeResize(k + 1, Eigen::NoChange);
    rows_.row(k) = row.transpose();
    rhs_.conservativeResize(k + 1);
    rhs_[k] = plane.rhs;
    entries_.push_back(Entry{std::move(projection), std::move(plane)});
}

Eigen::VectorXd CutPool::apply(const Control& u) const {
    if (!(u.partition() == grid_) || u.switches() != switches_) {
        throw std::invalid_argument("control does not match the cut pool grid");
    }
    return rows_ * u.values();
}

Control CutPool::adjoint(const Eigen::VectorXd& lambda) const {
    if (lambda.size() != size()) throw std::invalid_argument("multiplier count does not match the cut pool");
    Control g(grid_, switches_, 0.0);
    if (size() > 0) g.values() = (rows_.transpose() * lambda).cwiseQuotient(g.weights());
    return g;
}

ActiveSets ActiveSets::empty(int controls, int cuts) {
    return ActiveSets{std::vector<std::uint8_t>(controls, 0), std::vector<std::uint8_t>(controls, 0),
                      std::vector<std::uint8_t>(cuts, 0)};
}

int ActiveSets::upper_count() const { return static_cast<int>(std::count(upper.begin(), upper.end(), 1)); }
int ActiveSets::lower_count() const { return static_cast<int>(std::count(lower.begin(), lower.end(), 1)); }
int ActiveSets::cut_count() const { return static_cast<int>(std::count(cuts.begin(), cuts.end(), 1)); }

Eigen::VectorXd complementarity_residual(const Eigen::VectorXd& cut_values, const Eigen::VectorXd& lambda,
                                         const Eigen::VectorXd& rhs, double rho) {
    return -rho * lambda + (cut_values + rho * lambda - rhs).cwiseMax(0.0);
}

StateTrajectory tracking_adjoint(const TrackingProblem& problem, const Control& u) {
    StateTrajectory e = problem.state(u);
    e.values -= problem.desired.values;
    return problem.ops->solve_adjoint(e);
}

namespace {

void check_inputs(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                  const Eigen::VectorXd& lambda) {
    if (!(problem.alpha > 0.0)) throw std::invalid_argument("semi-smooth Newton needs alpha > 0");
    if (!(u.partition() == problem.ops->grid()) || !(pool.grid() == problem.ops->grid()) ||
        u.switches() != problem.ops->switches() || pool.switches() != u.switches()) {
        throw std::invalid_argument("control, cut pool and heat operators live on different grids");
    }
    if (lambda.size() != pool.size()) throw std::invalid_argument("multiplier count does not match the cut pool");
}

// -Psi* p - G* lambda.
Eigen::VectorXd switching_function(const TrackingProblem& problem, const CutPool& pool,
                                   const Eigen::VectorXd& lambda, const StateTrajectory& adjoint) {
    Eigen::VectorXd v = -problem.ops->apply_psi_star(adjoint).values();
    v -= pool.adjoint(lambda).values();
    return v;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Reduced Hessian Psi* Sigma* Sigma Psi applied to a control.
Eigen::VectorXd reduced_hessian(const HeatOperators& ops, const Control& v) {
    return ops.apply_psi_star(ops.solve_adjoint(ops.solve_forward(v))).values();
}

}  // namespace

Residual residual(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                  const Eigen::VectorXd& lambda, const StateTrajectory& adjoint, double rho) {
    check_inputs(problem, pool, u, lambda);
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    const double alpha = problem.alpha;
    const Eigen::VectorXd v = switching_function(problem, pool, lambda, adjoint);
    Control f1 = u;
    f1.values() = -v + alpha * (u.values().array() - 0.5).matrix() + (v.array() + 0.5 * alpha).min(0.0).matrix() +
                  (v.array() - 0.5 * alpha).max(0.0).matrix();
    Eigen::VectorXd f2 = complementarity_residual(pool.apply(u), lambda, pool.rhs(), rho);
    const double n1 = max_abs(f1.values());
    // F2 only bounds a wrong-signed multiplier up to |F2| / rho; the natural
    // residual min(lambda, b - G u) does not depend on rho.
    const Eigen::VectorXd natural = lambda.cwiseMin(pool.rhs() - pool.apply(u));
    const double n2 = std::max(max_abs(f2), max_abs(natural));
    return Residual{std::move(f1), std::move(f2), n1, n2};
}

ActiveSets update_active_sets(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                              const Eigen::VectorXd& lambda, const StateTrajectory& adjoint, double rho,
                              double slack_tolerance) {
    check_inputs(problem, pool, u, lambda);
    const double alpha = problem.alpha;
    const Eigen::VectorXd v = switching_function(problem, pool, lambda, adjoint);
    ActiveSets sets = ActiveSets::empty(u.dimension(), pool.size());
    for (int i = 0; i < u.dimension(); ++i) {
        sets.upper[i] = v[i] - 0.5 * alpha > 0.0;
        sets.lower[i] = v[i] + 0.5 * alpha < 0.0;
    }
    // Cuts held as equalities are only met up to the Krylov error, which can
    // exceed rho * lambda; such slacks count as exact zeros.
    Eigen::VectorXd g = pool.apply(u) - pool.rhs();
    for (int l = 0; l < pool.size(); ++l) {
        if (std::abs(g[l]) <= slack_tolerance) g[l] = 0.0;
        sets.cuts[l] = g[l] + rho * lambda[l] > 0.0;
    }
    return sets;
}

NewtonState newton_step(const NewtonState& state, const ActiveSets& sets, const TrackingProblem& problem,
                        const CutPool& pool, double rho, const NewtonCaps& caps) {
    check_inputs(problem, pool, state.u, state.lambda);
    const HeatOperators& ops = *problem.ops;
    const double alpha = problem.alpha;
    const int dim = state.u.dimension();
    const Eigen::VectorXd weights = state.u.weights();

    // An active cut whose support lies entirely in A+ or A- cannot be
    // enforced by the step; its support is released into I for this step.
    std::vector<std::uint8_t> is_free(dim);
    for (int i = 0; i < dim; ++i) is_free[i] = sets.inactive(i);
    for (int l = 0; l < pool.size(); ++l) {
        if (!sets.cuts[l]) continue;
        bool reachable = false;
        for (int i = 0; i < dim && !reachable; ++i) reachable = is_free[i] && pool.rows()(l, i) != 0.0;
        if (reachable) continue;
        for (int i = 0; i < dim; ++i) {
            if (pool.rows()(l, i) != 0.0) is_free[i] = 1;
        }
    }
    std::vector<int> free;
    for (int i = 0; i < dim; ++i) {
        if (is_free[i]) free.push_back(i);
    }
    const int n_free = static_cast<int>(free.size());

    // Active cuts, newest first; a cut whose restricted row is (numerically) in
    // the span of newer active rows is dropped for this step.
    std::vector<int> active_cuts;
    std::vector<Eigen::VectorXd> basis;  // orthonormal in the weights^{-1} metric
    int dropped = 0;
    for (int l = pool.size() - 1; l >= 0; --l) {
        if (!sets.cuts[l]) continue;
        Eigen::VectorXd r(n_free);
        for (int k = 0; k < n_free; ++k) r[k] = pool.rows()(l, free[k]);
        auto metric = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            double s = 0.0;
            for (int k = 0; k < n_free; ++k) s += a[k] * b[k] / weights[free[k]];
            return s;
        };
        const double norm0 = metric(r, r);
        for (const auto& q : basis) r -= metric(q, r) * q;
        const double norm = metric(r, r);
        if (n_free == 0 || !(norm > 1e-10 * norm0) || norm0 <= 0.0) {
            ++dropped;
            continue;
        }
        basis.push_back(r / std::sqrt(norm));
        active_cuts.push_back(l);
    }
    std::reverse(active_cuts.begin(), active_cuts.end());
    const int n_cuts = static_cast<int>(active_cuts.size());

    Control u_fixed(state.u.partition(), state.u.switches(), 0.0);
    for (int i = 0; i < dim; ++i) {
        if (sets.upper[i] && !is_free[i]) u_fixed.values()[i] = 1.0;
    }

    NewtonState next = state;
    next.active = sets;
    next.dropped_cuts = dropped;
    next.lambda.setZero();

    if (n_free > 0) {
        Eigen::MatrixXd restricted(n_cuts, n_free);
        for (int a = 0; a < n_cuts; ++a) {
            for (int k = 0; k < n_free; ++k) restricted(a, k) = pool.rows()(active_cuts[a], free[k]);
        }
        Eigen::VectorXd d_free(n_free);
        for (int k = 0; k < n_free; ++k) d_free[k] = weights[free[k]];

        // c = Psi* Sigma* (y_d - zeta - Sigma Psi u_fixed).
        StateTrajectory target{problem.desired.values - problem.free_response.values -
                               ops.solve_forward(u_fixed).values};
        const Eigen::VectorXd c = ops.apply_psi_star(ops.solve_adjoint(target)).values();

        Eigen::VectorXd b(n_free + n_cuts);
        for (int k = 0; k < n_free; ++k) b[k] = d_free[k] * (c[free[k]] + 0.5 * alpha);
        for (int a = 0; a < n_cuts; ++a) {
            b[n_free + a] = pool.rhs()[active_cuts[a]] - pool.rows().row(active_cuts[a]).dot(u_fixed.values());
        }

        Control scratch(state.u.partition(), state.u.switches(), 0.0);
        auto apply = [&](const Eigen::VectorXd& z) {
            scratch.values().setZero();
            for (int k = 0; k < n_free; ++k) scratch.values()[free[k]] = z[k];
            const Eigen::VectorXd hz = reduced_hessian(ops, scratch);
            Eigen::VectorXd out(n_free + n_cuts);
            const Eigen::VectorXd mu = z.tail(n_cuts);
            const Eigen::VectorXd x = z.head(n_free);
            Eigen::VectorXd top(n_free);
            for (int k = 0; k < n_free; ++k) top[k] = d_free[k] * (alpha * x[k] + hz[free[k]]);
            if (n_cuts > 0) top += restricted.transpose() * mu;
            out.head(n_free) = top;
            if (n_cuts > 0) out.tail(n_cuts) = restricted * x;
            return out;
        };

        Eigen::LLT<Eigen::MatrixXd> gram;
        if (n_cuts > 0) {
            gram.compute(restricted * d_free.cwiseInverse().asDiagonal() * restricted.transpose());
        }
        auto precondition = [&](const Eigen::VectorXd& r) {
            Eigen::VectorXd out(n_free + n_cuts);
            out.head(n_free) = r.head(n_free).cwiseQuotient(alpha * d_free);
            if (n_cuts > 0) out.tail(n_cuts) = alpha * gram.solve(r.tail(n_cuts));
            return out;
        };

        Eigen::VectorXd z(n_free + n_cuts);
        for (int k = 0; k < n_free; ++k) z[k] = state.u.values()[free[k]];
        for (int a = 0; a < n_cuts; ++a) z[n_free + a] = state.lambda[active_cuts[a]];

        const KrylovResult kr = minres(apply, precondition, b, z, caps.krylov_tolerance, caps.krylov_max_iterations);
        next.krylov_iterations += kr.iterations;
        if (!kr.converged) {
            next.message = "MINRES did not reach tolerance (relative residual " +
                           std::to_string(kr.relative_residual) + ")";
        }
        next.u = u_fixed;
        for (int k = 0; k < n_free; ++k) next.u.values()[free[k]] = z[k];
        for (int a = 0; a < n_cuts; ++a) next.lambda[active_cuts[a]] = z[n_free + a];
    } else {
        next.u = u_fixed;
    }

    next.iterations = state.iterations + 1;
    next.adjoint = tracking_adjoint(problem, next.u);
    const Residual res = residual(problem, pool, next.u, next.lambda, next.adjoint, rho);
    next.f1_norm = res.f1_norm;
    next.f2_norm = res.f2_norm;
    next.converged = next.residual_norm() <= caps.tolerance;
    return next;
}

NewtonState solve(const Control& u0, const Eigen::VectorXd& lambda0, const TrackingProblem& problem,
                  const CutPool& pool, double rho, const NewtonCaps& caps) {
    check_inputs(problem, pool, u0, lambda0);
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");

    NewtonState state{u0, lambda0, tracking_adjoint(problem, u0), ActiveSets::empty(u0.dimension(), pool.size())};
    ActiveSets previous = state.active;
    int repeats = 0;
    for (int m = 0;; ++m) {
        const Residual res = residual(problem, pool, state.u, state.lambda, state.adjoint, rho);
        state.f1_norm = res.f1_norm;
        state.f2_norm = res.f2_norm;
        const ActiveSets sets =
            update_active_sets(problem, pool, state.u, state.lambda, state.adjoint, rho, caps.slack_tolerance);
        state.active = sets;
        if (state.residual_norm() <= caps.tolerance) {
            state.converged = true;
            state.message.clear();
            return state;
        }
        if (state.iterations >= caps.max_iterations) {
            state.converged = false;
            state.message = "Newton iteration cap reached (residual " + std::to_string(state.residual_norm()) + ")";
            return state;
        }
        if (m > 0 && sets == previous) {
            // Same sets again: only the inner Krylov error is left. Re-solving
            // from the current iterate refines it; give up if that stalls.
            if (++repeats > 3) {
                state.converged = false;
                state.message = "active sets repeat but residual stays at " + std::to_string(state.residual_norm());
                return state;
            }
        } else {
            repeats = 0;
        }
        state = newton_step(state, sets, problem, pool, rho, caps);
        previous = sets;
    }
}

double KktReport::worst() const {
    return std::max({box, box_complementarity, multiplier_sign, cut_feasibility, cut_complementarity});
}

KktReport kkt_report(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                     const Eigen::VectorXd& lambda) {
    check_inputs(problem, pool, u, lambda);
    const StateTrajectory p = tracking_adjoint(problem, u);
    Eigen::VectorXd g = problem.ops->apply_psi_star(p).values();
    g.array() += problem.alpha * (u.values().array() - 0.5);
    g += pool.adjoint(lambda).values();
    const Eigen::ArrayXd mu_a = g.array().max(0.0);
    const Eigen::ArrayXd mu_b = (-g.array()).max(0.0);
    const Eigen::ArrayXd x = u.values().array();

    KktReport report;
    report.box = std::max((-x).max(0.0).maxCoeff(), (x - 1.0).max(0.0).maxCoeff());
    report.box_complementarity = std::max((mu_a * x).abs().maxCoeff(), (mu_b * (x - 1.0)).abs().maxCoeff());
    if (pool.size() > 0) {
        const Eigen::VectorXd slack = pool.apply(u) - pool.rhs();
        report.multiplier_sign = std::max(0.0, (-lambda).maxCoeff());
        report.cut_feasibility = std::max(0.0, slack.maxCoeff());
        report.cut_complementarity = (lambda.array() * slack.array()).abs().maxCoeff();
    }
    return report;
}

}  // namespace switchocp
