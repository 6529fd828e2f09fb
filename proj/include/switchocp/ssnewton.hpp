#pragma once

#include "switchocp/heat.hpp"
#include "switchocp/minres.hpp"
#include "switchocp/switchpoly.hpp"
#include "switchocp/timegrid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace switchocp {

/// Cutting planes a^T Pi(u) <= b of a relaxation, assembled as G u <= b on a
/// fixed control grid.
class CutPool {
public:
    CutPool(TimePartition grid, int switches);

    struct Entry {
        Projection projection;
        CuttingPlane plane;
    };

    const TimePartition& grid() const { return grid_; }
    int switches() const { return switches_; }
    int size() const { return static_cast<int>(entries_.size()); }
    const std::vector<Entry>& entries() const { return entries_; }

    void add(Projection projection, CuttingPlane plane);

    /// Row l holds r_l with (G u)_l = r_l . u.values().
    const Eigen::MatrixXd& rows() const { return rows_; }
    const Eigen::VectorXd& rhs() const { return rhs_; }

    /// G u.
    Eigen::VectorXd apply(const Control& u) const;
    /// G* lambda with respect to the L2(0,T; R^n) inner product.
    Control adjoint(const Eigen::VectorXd& lambda) const;

private:
    TimePartition grid_;
    int switches_;
    std::vector<Entry> entries_;
    Eigen::MatrixXd rows_;
    Eigen::VectorXd rhs_;
};

/// Active and inactive sets of one Newton iterate. Flags are indexed like
/// Control::values() (box) and like the cut pool (cuts).
struct ActiveSets {
    std::vector<std::uint8_t> upper;  // A+: u = 1
    std::vector<std::uint8_t> lower;  // A-: u = 0
    std::vector<std::uint8_t> cuts;   // B: cut treated as equality

    static ActiveSets empty(int controls, int cuts);
    bool inactive(int i) const { return !upper[i] && !lower[i]; }
    int upper_count() const;
    int lower_count() const;
    int cut_count() const;
    bool operator==(const ActiveSets& other) const = default;
};

struct NewtonCaps {
    int max_iterations = 50;
    /// Max-norm tolerance on (F1, F2).
    double tolerance = 1e-10;
    double krylov_tolerance = 1e-12;
    int krylov_max_iterations = 2000;
    /// Cut slacks below this are taken as exact zeros in the set update.
    double slack_tolerance = 1e-11;
};

struct NewtonState {
    Control u;
    Eigen::VectorXd lambda;
    StateTrajectory adjoint;
    ActiveSets active;
    double f1_norm = 0.0;
    double f2_norm = 0.0;
    int iterations = 0;
    int krylov_iterations = 0;
    int dropped_cuts = 0;
    bool converged = false;
    std::string message;

    double residual_norm() const { return std::max(f1_norm, f2_norm); }
};

struct Residual {
    Control f1;
    Eigen::VectorXd f2;
    double f1_norm = 0.0;
    double f2_norm = 0.0;
};

/// -rho lambda + max(0, G u + rho lambda - b).
Eigen::VectorXd complementarity_residual(const Eigen::VectorXd& cut_values, const Eigen::VectorXd& lambda,
                                         const Eigen::VectorXd& rhs, double rho);

/// p = Sigma* (S u - y_d).
StateTrajectory tracking_adjoint(const TrackingProblem& problem, const Control& u);

/// F1 and F2 at (u, lambda) with adjoint p. f1_norm is the max-norm of F1,
/// f2_norm the larger of the max-norms of F2 and of min(lambda, b - G u).
Residual residual(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                  const Eigen::VectorXd& lambda, const StateTrajectory& adjoint, double rho);

/// Strict-inequality active-set prediction at (u, lambda, p); ties are inactive.
/// Cut slacks with |G u - b| <= slack_tolerance are treated as zero.
ActiveSets update_active_sets(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                              const Eigen::VectorXd& lambda, const StateTrajectory& adjoint, double rho,
                              double slack_tolerance = 1e-11);

/// One semi-smooth Newton step for fixed active sets: u = 1 on A+, 0 on A-,
/// lambda = 0 off B, and (u|I, lambda|B) from the reduced saddle-point system
/// solved by preconditioned MINRES, warm-started at the current iterate.
NewtonState newton_step(const NewtonState& state, const ActiveSets& sets, const TrackingProblem& problem,
                        const CutPool& pool, double rho, const NewtonCaps& caps);

/// Semi-smooth Newton method for min f(u) s.t. 0 <= u <= 1, G u <= b.
NewtonState solve(const Control& u0, const Eigen::VectorXd& lambda0, const TrackingProblem& problem,
                  const CutPool& pool, double rho, const NewtonCaps& caps = {});

/// Largest violations of the optimality system with the box multipliers
/// recovered from the gradient equation as mu_a = max(g, 0), mu_b = max(-g, 0),
/// g = Psi* p + alpha (u - 1/2) + G* lambda.
struct KktReport {
    double box = 0.0;            // distance of u to [0,1]
    double box_complementarity = 0.0;  // |mu_a u|, |mu_b (u - 1)|
    double multiplier_sign = 0.0;      // max(-lambda)
    double cut_feasibility = 0.0;      // max(G u - b)
    double cut_complementarity = 0.0;  // |lambda_l (G u - b)_l|

    double worst() const;
};

KktReport kkt_report(const TrackingProblem& problem, const CutPool& pool, const Control& u,
                     const Eigen::VectorXd& lambda);

}  // namespace switchocp
