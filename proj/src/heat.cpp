#include "switchocp/heat.hpp"

#include <cmath>
#include <stdexcept>

namespace switchocp {

FormFunctions FormFunctions::from_fields(const SpatialMesh& mesh, const std::vector<ScalarField>& fields) {
    if (fields.empty()) throw std::invalid_argument("at least one form function is required");
    FormFunctions forms;
    for (const auto& f : fields) {
        forms.loads.push_back(load_vector(mesh, f));
        if (!forms.loads.back().allFinite()) throw std::invalid_argument("form function load is not finite");
    }
    return forms;
}

HeatOperators::HeatOperators(SpatialMesh mesh, TimePartition grid, FormFunctions forms)
    : mesh_(std::move(mesh)), grid_(std::move(grid)), forms_(std::move(forms)), fem_(assemble(mesh_)) {
    if (forms_.count() < 1) throw std::invalid_argument("at least one form function is required");
    for (const auto& load : forms_.loads) {
        if (load.size() != dofs()) throw std::invalid_argument("form function load has wrong size");
    }
    steps_.reserve(grid_.size());
    for (int i = 0; i < grid_.size(); ++i) {
        const double dt = grid_.length(i);
        if (!steps_.empty() && std::abs(steps_.back()->dt - dt) <= 1e-14 * dt) {
            steps_.push_back(steps_.back());
            continue;
        }
        auto step = std::make_shared<Step>();
        step->dt = dt;
        step->explicit_part = fem_.mass - 0.5 * dt * fem_.stiffness;
        SparseOperator lhs = fem_.mass + 0.5 * dt * fem_.stiffness;
        step->implicit_part.compute(lhs);
        if (step->implicit_part.info() != Eigen::Success) {
            throw std::runtime_error("time-step matrix factorization failed");
        }
        steps_.push_back(std::move(step));
    }
}

void HeatOperators::check_trajectory(const StateTrajectory& w) const {
    if (w.values.rows() != dofs() || w.levels() != grid_.size() + 1) {
        throw std::invalid_argument("trajectory does not match the space-time grid");
    }
}

SourceTrajectory HeatOperators::apply_psi(const Control& u) const {
    if (u.switches() != switches() || !(u.partition() == grid_)) {
        throw std::invalid_argument("control does not match the heat operator grid");
    }
    SourceTrajectory f{Eigen::MatrixXd::Zero(dofs(), grid_.size())};
    for (int i = 0; i < grid_.size(); ++i) {
        for (int j = 0; j < switches(); ++j) f.values.col(i) += u(j, i) * forms_.loads[j];
    }
    return f;
}

StateTrajectory HeatOperators::solve_forward(const SourceTrajectory& source, const Eigen::VectorXd& y0) const {
    if (source.values.rows() != dofs() || source.values.cols() != grid_.size() || y0.size() != dofs()) {
        throw std::invalid_argument("forward solve inputs do not match the space-time grid");
    }
    StateTrajectory y{Eigen::MatrixXd(dofs(), grid_.size() + 1)};
    y.values.col(0) = y0;
    Eigen::VectorXd rhs(dofs());
    for (int i = 0; i < grid_.size(); ++i) {
        const Step& step = *steps_[i];
        rhs.noalias() = step.explicit_part * y.values.col(i);
        rhs += step.dt * source.values.col(i);
        y.values.col(i + 1) = step.implicit_part.solve(rhs);
    }
    return y;
}

StateTrajectory HeatOperators::solve_forward(const Control& u, const Eigen::VectorXd& y0) const {
    return solve_forward(apply_psi(u), y0);
}

StateTrajectory HeatOperators::solve_forward(const Control& u) const {
    return solve_forward(apply_psi(u), Eigen::VectorXd::Zero(dofs()));
}

StateTrajectory HeatOperators::solve_adjoint(const StateTrajectory& rhs) const {
    check_trajectory(rhs);
    const int n = grid_.size();
    const Eigen::VectorXd w = level_weights();
    // q_i is the multiplier of step i; it equals the interval average of p.
    Eigen::MatrixXd q(dofs(), n);
    Eigen::VectorXd r(dofs());
    for (int i = n - 1; i >= 0; --i) {
        r.noalias() = w[i + 1] * (fem_.mass * rhs.values.col(i + 1));
        if (i + 1 < n) r.noalias() += steps_[i + 1]->explicit_part * q.col(i + 1);
        q.col(i) = steps_[i]->implicit_part.solve(r);
    }
    StateTrajectory p{Eigen::MatrixXd(dofs(), n + 1)};
    p.values.col(n).setZero();
    for (int i = n - 1; i >= 0; --i) p.values.col(i) = 2.0 * q.col(i) - p.values.col(i + 1);
    return p;
}

Control HeatOperators::apply_psi_star(const StateTrajectory& w) const {
    check_trajectory(w);
    Control g(grid_, switches(), 0.0);
    for (int i = 0; i < grid_.size(); ++i) {
        const Eigen::VectorXd mid = 0.5 * (w.values.col(i) + w.values.col(i + 1));
        for (int j = 0; j < switches(); ++j) g(j, i) = forms_.loads[j].dot(mid);
    }
    return g;
}

Eigen::VectorXd HeatOperators::level_weights() const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(grid_.size() + 1);
    for (int i = 0; i < grid_.size(); ++i) {
        w[i] += 0.5 * grid_.length(i);
        w[i + 1] += 0.5 * grid_.length(i);
    }
    return w;
}

double HeatOperators::state_inner(const StateTrajectory& a, const StateTrajectory& b) const {
    check_trajectory(a);
    check_trajectory(b);
    const Eigen::VectorXd w = level_weights();
    double s = 0.0;
    for (int l = 0; l < a.levels(); ++l) s += w[l] * a.values.col(l).dot(fem_.mass * b.values.col(l));
    return s;
}

double HeatOperators::pairing(const SourceTrajectory& f, const StateTrajectory& w) const {
    check_trajectory(w);
    double s = 0.0;
    for (int i = 0; i < grid_.size(); ++i) {
        s += grid_.length(i) * f.values.col(i).dot(0.5 * (w.values.col(i) + w.values.col(i + 1)));
    }
    return s;
}

StateTrajectory TrackingProblem::state(const Control& u) const {
    StateTrajectory y = ops->solve_forward(u);
    y.values += free_response.values;
    return y;
}

TrackingProblem make_tracking_problem(std::shared_ptr<const HeatOperators> ops, StateTrajectory desired,
                                      const Eigen::VectorXd& initial_state, double alpha) {
    if (!ops) throw std::invalid_argument("tracking problem needs heat operators");
    if (desired.values.rows() != ops->dofs() || desired.levels() != ops->grid().size() + 1) {
        throw std::invalid_argument("desired state does not match the space-time grid");
    }
    if (!(alpha >= 0.0)) throw std::invalid_argument("Tikhonov parameter must be nonnegative");
    SourceTrajectory none{Eigen::MatrixXd::Zero(ops->dofs(), ops->grid().size())};
    StateTrajectory zeta = ops->solve_forward(none, initial_state);
    return TrackingProblem{std::move(ops), std::move(desired), std::move(zeta), alpha};
}

namespace {

double tikhonov(const Control& u, double alpha) {
    return 0.5 * alpha * (u.weights().array() * (u.values().array() - 0.5).square()).sum();
}

}  // namespace

double objective(const TrackingProblem& problem, const Control& u) {
    StateTrajectory e = problem.state(u);
    e.values -= problem.desired.values;
    return 0.5 * problem.ops->state_inner(e, e) + tikhonov(u, problem.alpha);
}

ObjectiveEvaluation objective_and_gradient(const TrackingProblem& problem, const Control& u) {
    StateTrajectory y = problem.state(u);
    StateTrajectory e{y.values - problem.desired.values};
    const double value = 0.5 * problem.ops->state_inner(e, e) + tikhonov(u, problem.alpha);
    StateTrajectory p = problem.ops->solve_adjoint(e);
    Control g = problem.ops->apply_psi_star(p);
    g.values().array() += problem.alpha * (u.values().array() - 0.5);
    return ObjectiveEvaluation{value, std::move(g), std::move(y), std::move(p)};
}

}  // namespace switchocp
