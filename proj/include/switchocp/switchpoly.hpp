#pragma once

#include "switchocp/timegrid.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace switchocp {

/// Upper bound on the number of shifts of a single switch. The switch is
/// held at 0 before the horizon, so starting at 1 counts as a shift.
struct SwitchingBudget {
    int max_shifts = 2;

    /// Right-hand side floor(sigma_max / 2) of the alternating inequalities.
    int alternating_rhs() const { return max_shifts / 2; }
};

/// Valid inequality a . w <= b with a in [-1, 1]^M.
struct CuttingPlane {
    Eigen::VectorXd coefficients;
    double rhs = 0.0;
    /// 0-based support indices i_1 < ... < i_m with signs +1, -1, +1, ...
    std::vector<int> support;
};

struct Separation {
    CuttingPlane cut;
    double violation = 0.0;
};

/// Number of value changes in (0, w_1, ..., w_M). Throws on non-binary input.
int shift_count(std::span<const double> w);

/// All binary patterns of length M with at most sigma_max shifts. M <= 20;
/// sigma_max = 0 is allowed here (only the zero pattern).
std::vector<Eigen::VectorXd> enumerate_vertices(int length, SwitchingBudget budget);

/// Most violated alternating inequality
///   sum_j (-1)^(j+1) w_{i_j} <= floor(sigma_max / 2),
/// over increasing indices i_1 < ... < i_m drawn from positions 2..M
/// (1-based) with m > sigma_max and m - sigma_max odd. Returns nothing when
/// no inequality of the family is violated. O(M sigma_max).
///
/// Entries are clipped to [0, 1] within 1e-9; larger excursions throw
/// std::domain_error.
std::optional<Separation> separate(std::span<const double> w, SwitchingBudget budget);
std::optional<Separation> separate(const Eigen::VectorXd& w, SwitchingBudget budget);

/// Exhaustive enumeration over the same family, for M <= 18.
std::optional<Separation> separate_bruteforce(std::span<const double> w, SwitchingBudget budget);

/// The most violated cut across switches of a projected control; the
/// coefficient vector spans all n * N projection entries.
struct SwitchSeparation {
    Separation separation;
    int switch_index = 0;
};
std::optional<SwitchSeparation> separate_switches(const Eigen::VectorXd& projected, int switches,
                                                  SwitchingBudget budget);

/// Largest family violation over switches, or 0 when none is violated.
double max_violation(const Eigen::VectorXd& projected, int switches, SwitchingBudget budget);

}  // namespace switchocp
