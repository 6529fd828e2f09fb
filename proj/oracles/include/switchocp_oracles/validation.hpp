#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace switchocp::oracle {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

using ComplementarityFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& cut_values,
                                                        const Eigen::VectorXd& lambda,
                                                        const Eigen::VectorXd& rhs, double rho)>;

/// separate vs separate_bruteforce on every binary w with M <= max_length and
/// 1 <= sigma_max <= max_sigma; returned cuts checked on all vertices.
CheckResult check_separation_binary(int max_length, int max_sigma);

/// Same on random fractional w, agreement within 1e-12.
CheckResult check_separation_fractional(int count, int max_length, int max_sigma, std::uint64_t seed);

/// <Sigma f, g> = <f, Sigma* g> and <Psi u, w> = <u, Psi* w> on random pairs.
CheckResult check_adjointness(int nx, int nt, int pairs, std::uint64_t seed);

/// Directional derivatives of the objective vs central differences with
/// step 1e-4 on a generated instance restricted to nt intervals.
CheckResult check_gradient(int nx, int nt, int directions, std::uint64_t seed);

/// Semi-smooth Newton vs the enumeration oracle on tiny instances
/// (N_t in {2,3}, k in {0,1}): objective within 1e-9 relative and the
/// optimality system within 1e-8.
CheckResult check_tiny_kkt(int count, std::uint64_t seed);

/// F2 vanishes at an oracle solution with an active cut and does not vanish
/// at nearby non-complementary points.
CheckResult check_complementarity(const ComplementarityFn& f2, std::uint64_t seed);

/// L2(Q) distance between the discrete solution with u = 0,
/// y0 = sin(pi x1) sin(pi x2) and the nodal interpolant of
/// exp(-2 pi^2 t) sin(pi x1) sin(pi x2), on (0, horizon).
double decay_error(int nx, int nt, double horizon = 1.0);

/// The full suite with the default sizes.
std::vector<CheckResult> run_validation(std::uint64_t seed = 1);

}  // namespace switchocp::oracle
