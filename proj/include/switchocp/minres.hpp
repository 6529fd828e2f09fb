#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace switchocp {

struct KrylovResult {
    int iterations = 0;
    /// Preconditioned residual norm estimate relative to the preconditioned
    /// right-hand side norm.
    double relative_residual = 0.0;
    bool converged = false;
};

/// Preconditioned minimum-residual method for a symmetric (possibly
/// indefinite) operator and a symmetric positive definite preconditioner.
/// `apply(v)` returns A v, `precondition(r)` returns P^{-1} r. `x` holds the
/// initial guess on entry and the iterate on exit.
template <class Apply, class Precondition>
KrylovResult minres(const Apply& apply, const Precondition& precondition, const Eigen::VectorXd& b,
                    Eigen::VectorXd& x, double tolerance, int max_iterations) {
    using Eigen::VectorXd;
    KrylovResult result;
    const int n = static_cast<int>(b.size());
    if (x.size() != n) x = VectorXd::Zero(n);
    if (n == 0) {
        result.converged = true;
        return result;
    }

    const double b_norm = std::sqrt(std::max(0.0, b.dot(precondition(b))));
    if (b_norm == 0.0) {
        x.setZero();
        result.converged = true;
        return result;
    }

    VectorXd r1 = b - apply(x);
    VectorXd y = precondition(r1);
    double beta1 = r1.dot(y);
    if (beta1 < 0.0) beta1 = 0.0;  // indefinite preconditioner guard; treated as converged below
    beta1 = std::sqrt(beta1);
    result.relative_residual = beta1 / b_norm;
    if (result.relative_residual <= tolerance) {
        result.converged = true;
        return result;
    }

    VectorXd r2 = r1;
    VectorXd v(n), w = VectorXd::Zero(n), w1(n), w2 = VectorXd::Zero(n);
    double old_beta = 0.0, beta = beta1, dbar = 0.0, epsilon = 0.0;
    double phibar = beta1, cs = -1.0, sn = 0.0;
    constexpr double tiny = std::numeric_limits<double>::epsilon();

    for (int it = 1; it <= max_iterations; ++it) {
        v = y / beta;
        y = apply(v);
        if (it >= 2) y -= (beta / old_beta) * r1;
        const double alpha = v.dot(y);
        y -= (alpha / beta) * r2;
        r1 = r2;
        r2 = y;
        y = precondition(r2);
        old_beta = beta;
        beta = std::sqrt(std::max(0.0, r2.dot(y)));

        const double old_epsilon = epsilon;
        const double delta = cs * dbar + sn * alpha;
        const double gbar = sn * dbar - cs * alpha;
        epsilon = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), tiny);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        w1 = w2;
        w2 = w;
        w = (v - old_epsilon * w1 - delta * w2) / gamma;
        x += phi * w;

        result.iterations = it;
        result.relative_residual = phibar / b_norm;
        if (result.relative_residual <= tolerance) {
            result.converged = true;
            return result;
        }
        if (beta <= tiny * beta1) {
            // Krylov space exhausted: the iterate is exact up to rounding.
            result.converged = true;
            return result;
        }
    }
    return result;
}

}  // namespace switchocp
