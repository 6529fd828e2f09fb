#pragma once

#include "switchocp/mesh_fem.hpp"
#include "switchocp/timegrid.hpp"

#include <Eigen/SparseCholesky>

#include <memory>
#include <vector>

namespace switchocp {

/// Form functions psi_j, stored as their assembled load vectors on the
/// interior unknowns.
struct FormFunctions {
    std::vector<Eigen::VectorXd> loads;

    int count() const { return static_cast<int>(loads.size()); }
    static FormFunctions from_fields(const SpatialMesh& mesh, const std::vector<ScalarField>& fields);
};

/// Nodal values at every time boundary t_0..t_N (piecewise linear in time).
/// Column l holds time level l.
struct StateTrajectory {
    Eigen::MatrixXd values;

    int levels() const { return static_cast<int>(values.cols()); }
    static StateTrajectory zero(int dofs, int levels) { return {Eigen::MatrixXd::Zero(dofs, levels)}; }
};

/// Spatial dual vectors, constant on every time interval. Column i holds
/// interval i.
struct SourceTrajectory {
    Eigen::MatrixXd values;
};

/// Crank-Nicolson realization of the heat-equation solution operators on a
/// fixed mesh and time partition. Immutable after construction.
class HeatOperators {
public:
    HeatOperators(SpatialMesh mesh, TimePartition grid, FormFunctions forms);

    const SpatialMesh& mesh() const { return mesh_; }
    const TimePartition& grid() const { return grid_; }
    const FormFunctions& forms() const { return forms_; }
    const SparseOperator& mass() const { return fem_.mass; }
    const SparseOperator& stiffness() const { return fem_.stiffness; }
    int dofs() const { return static_cast<int>(fem_.mass.rows()); }
    int switches() const { return forms_.count(); }

    /// (Psi u) on each interval: sum_j u_j,i * load_j.
    SourceTrajectory apply_psi(const Control& u) const;

    /// (M + dt/2 K) y^{l+1} = (M - dt/2 K) y^l + dt f_l, y^0 = y0.
    StateTrajectory solve_forward(const SourceTrajectory& source, const Eigen::VectorXd& y0) const;
    StateTrajectory solve_forward(const Control& u, const Eigen::VectorXd& y0) const;
    StateTrajectory solve_forward(const Control& u) const;

    /// Exact discrete transpose of source -> state (zero initial value) with
    /// respect to state_inner and pairing. Satisfies p(T) = 0.
    StateTrajectory solve_adjoint(const StateTrajectory& rhs) const;

    /// (Psi* w)_{j,i}: time average over interval i of <psi_j, w(t)>.
    Control apply_psi_star(const StateTrajectory& w) const;

    /// Trapezoidal-in-time, mass-matrix-in-space L2(Q) inner product.
    double state_inner(const StateTrajectory& a, const StateTrajectory& b) const;
    /// int_0^T <f(t), w(t)> dt for piecewise-constant f and piecewise-linear w.
    double pairing(const SourceTrajectory& f, const StateTrajectory& w) const;

    /// Trapezoidal weights of the time levels.
    Eigen::VectorXd level_weights() const;

private:
    struct Step {
        double dt;
        SparseOperator explicit_part;  // M - dt/2 K
        Eigen::SimplicialLDLT<SparseOperator> implicit_part;  // M + dt/2 K
    };

    void check_trajectory(const StateTrajectory& w) const;

    SpatialMesh mesh_;
    TimePartition grid_;
    FormFunctions forms_;
    FemOperators fem_;
    std::vector<std::shared_ptr<const Step>> steps_;  // one per interval, shared by equal dt
};

/// The reduced tracking problem f(u) = 1/2 |S u - y_d|^2 + alpha/2 |u - 1/2|^2
/// with S u = Sigma Psi u + zeta.
struct TrackingProblem {
    std::shared_ptr<const HeatOperators> ops;
    StateTrajectory desired;
    StateTrajectory free_response;
    double alpha = 1e-2;

    /// S u.
    StateTrajectory state(const Control& u) const;
};

TrackingProblem make_tracking_problem(std::shared_ptr<const HeatOperators> ops, StateTrajectory desired,
                                      const Eigen::VectorXd& initial_state, double alpha);

struct ObjectiveEvaluation {
    double value = 0.0;
    Control gradient;
    StateTrajectory state;
    StateTrajectory adjoint;
};

double objective(const TrackingProblem& problem, const Control& u);

/// Value and L2 gradient Psi* Sigma* (S u - y_d) + alpha (u - 1/2).
ObjectiveEvaluation objective_and_gradient(const TrackingProblem& problem, const Control& u);

}  // namespace switchocp
