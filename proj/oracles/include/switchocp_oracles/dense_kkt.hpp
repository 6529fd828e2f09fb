#pragma once

#include <switchocp/heat.hpp>
#include <switchocp/ssnewton.hpp>

#include <Eigen/Dense>

namespace switchocp::oracle {

/// min 1/2 u'Q u + c'u + constant  s.t.  0 <= u <= 1, G u <= b, in the
/// Euclidean coordinates of Control::values().
struct DenseQp {
    Eigen::MatrixXd Q;
    Eigen::VectorXd c;
    double constant = 0.0;
    Eigen::MatrixXd G;
    Eigen::VectorXd b;

    double value(const Eigen::VectorXd& u) const { return 0.5 * u.dot(Q * u) + c.dot(u) + constant; }
};

/// Hessian assembled column by column from forward solves of unit controls.
DenseQp dense_qp(const TrackingProblem& problem, const CutPool& pool);

struct OracleSolution {
    Eigen::VectorXd u;
    Eigen::VectorXd lambda;
    double objective = 0.0;
    bool found = false;
    long patterns = 0;
};

/// Enumerates every box pattern (0, 1 or free per coefficient) and every
/// subset of active cuts, solves the equality-constrained KKT system of each
/// and keeps the feasible one with the smallest objective. Exponential; meant
/// for a handful of unknowns.
OracleSolution solve_by_enumeration(const DenseQp& qp, double tolerance = 1e-10);

}  // namespace switchocp::oracle
