#include "switchocp_oracles/dense_kkt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace switchocp::oracle {

namespace {

Eigen::VectorXd flatten(const StateTrajectory& y) {
    return Eigen::Map<const Eigen::VectorXd>(y.values.data(), y.values.size());
}

}  // namespace

DenseQp dense_qp(const TrackingProblem& problem, const CutPool& pool) {
    const HeatOperators& ops = *problem.ops;
    const int n = ops.switches() * ops.grid().size();
    const int dofs = ops.dofs();
    const Eigen::VectorXd lw = ops.level_weights();
    const Eigen::MatrixXd mass = Eigen::MatrixXd(ops.mass());

    auto weighted = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd out(v.size());
        for (int l = 0; l < lw.size(); ++l) out.segment(l * dofs, dofs) = lw[l] * (mass * v.segment(l * dofs, dofs));
        return out;
    };

    Eigen::MatrixXd Y(dofs * lw.size(), n);
    Control unit(ops.grid(), ops.switches(), 0.0);
    for (int i = 0; i < n; ++i) {
        unit.values().setZero();
        unit.values()[i] = 1.0;
        Y.col(i) = flatten(ops.solve_forward(unit));
    }
    Eigen::MatrixXd WY(Y.rows(), n);
    for (int i = 0; i < n; ++i) WY.col(i) = weighted(Y.col(i));
    const Eigen::VectorXd d = unit.weights();
    const Eigen::VectorXd r = flatten(problem.free_response) - flatten(problem.desired);

    DenseQp qp;
    qp.Q = Y.transpose() * WY;
    qp.Q = 0.5 * (qp.Q + qp.Q.transpose()).eval();
    qp.Q.diagonal() += problem.alpha * d;
    qp.c = WY.transpose() * r - 0.5 * problem.alpha * d;
    qp.constant = 0.5 * r.dot(weighted(r)) + 0.125 * problem.alpha * d.sum();
    qp.G = pool.rows();
    qp.b = pool.rhs();
    return qp;
}

OracleSolution solve_by_enumeration(const DenseQp& qp, double tolerance) {
    const int n = static_cast<int>(qp.c.size());
    const int m = static_cast<int>(qp.b.size());
    if (n > 12 || m > 8) throw std::invalid_argument("enumeration oracle is limited to tiny problems");

    long box_patterns = 1;
    for (int i = 0; i < n; ++i) box_patterns *= 3;

    OracleSolution best;
    best.objective = std::numeric_limits<double>::infinity();
    const double scale = 1.0 + qp.Q.cwiseAbs().maxCoeff() + qp.c.cwiseAbs().maxCoeff();

    std::vector<int> state(n);
    for (long p = 0; p < box_patterns; ++p) {
        long code = p;
        for (int i = 0; i < n; ++i) {
            state[i] = static_cast<int>(code % 3);  // 0: at 0, 1: at 1, 2: free
            code /= 3;
        }
        for (long mask = 0; mask < (1L << m); ++mask) {
            ++best.patterns;
            std::vector<int> free, cuts;
            Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i) {
                if (state[i] == 2) free.push_back(i);
                else u[i] = state[i];
            }
            for (int l = 0; l < m; ++l) {
                if (mask & (1L << l)) cuts.push_back(l);
            }
            const int nf = static_cast<int>(free.size()), nc = static_cast<int>(cuts.size());
            Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
            if (nf + nc > 0) {
                Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + nc, nf + nc);
                Eigen::VectorXd rhs(nf + nc);
                const Eigen::VectorXd fixed_grad = qp.Q * u + qp.c;
                for (int a = 0; a < nf; ++a) {
                    for (int b2 = 0; b2 < nf; ++b2) K(a, b2) = qp.Q(free[a], free[b2]);
                    rhs[a] = -fixed_grad[free[a]];
                }
                for (int a = 0; a < nc; ++a) {
                    for (int k = 0; k < nf; ++k) {
                        K(nf + a, k) = qp.G(cuts[a], free[k]);
                        K(k, nf + a) = qp.G(cuts[a], free[k]);
                    }
                    rhs[nf + a] = qp.b[cuts[a]] - qp.G.row(cuts[a]).dot(u);
                }
                const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
                if (!lu.isInvertible()) continue;  // degenerate patterns are covered by smaller ones
                const Eigen::VectorXd z = lu.solve(rhs);
                for (int k = 0; k < nf; ++k) u[free[k]] = z[k];
                for (int a = 0; a < nc; ++a) lambda[cuts[a]] = z[nf + a];
            } else if (nc > 0) {
                continue;
            }

            bool ok = true;
            for (int k = 0; k < nf && ok; ++k) ok = u[free[k]] >= -tolerance && u[free[k]] <= 1.0 + tolerance;
            if (m > 0) {
                const Eigen::VectorXd slack = qp.G * u - qp.b;
                for (int l = 0; l < m && ok; ++l) ok = slack[l] <= tolerance * scale;
                for (int a = 0; a < nc && ok; ++a) ok = lambda[cuts[a]] >= -tolerance * scale;
            }
            if (!ok) continue;
            Eigen::VectorXd g = qp.Q * u + qp.c;
            if (m > 0) g += qp.G.transpose() * lambda;
            for (int i = 0; i < n && ok; ++i) {
                if (state[i] == 0) ok = g[i] >= -tolerance * scale;
                if (state[i] == 1) ok = g[i] <= tolerance * scale;
            }
            if (!ok) continue;
            const double value = qp.value(u);
            if (value < best.objective) {
                best.u = u;
                best.lambda = lambda;
                best.objective = value;
                best.found = true;
            }
        }
    }
    return best;
}

}  // namespace switchocp::oracle
