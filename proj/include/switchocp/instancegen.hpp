#pragma once

#include "switchocp/heat.hpp"
#include "switchocp/timegrid.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace switchocp {

struct InstanceSpec {
    std::uint64_t seed = 1;
    double horizon = 2.0;
    int jumps = 11;  // sigma: interior spline knots
    int nt_fine = 400;
    int nx = 30;
    double alpha = 1e-2;
    std::string form = "quadratic-bump";

    bool operator==(const InstanceSpec&) const = default;
};

/// Throws std::invalid_argument for nonpositive sizes, jumps >= nt_fine or an
/// unknown form function.
void validate(const InstanceSpec& spec);

/// Flat key-value text, one `key = value` per line; '#' starts a comment.
std::string format_spec(const InstanceSpec& spec);
InstanceSpec parse_spec(const std::string& text);
InstanceSpec read_spec(const std::string& path);
void write_spec(const InstanceSpec& spec, const std::string& path);

/// psi(x) = 1.5 - 2 (x1 - 1/2)^2 - 2 (x2 - 1/2)^2.
double quadratic_bump(double x1, double x2);

/// Natural cubic spline through (t_k, v_k).
class NaturalSpline {
public:
    NaturalSpline(std::vector<double> knots, std::vector<double> values);
    ~NaturalSpline();
    NaturalSpline(const NaturalSpline&) = delete;
    NaturalSpline& operator=(const NaturalSpline&) = delete;

    double value(double t) const;
    double derivative(double t) const;
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

private:
    struct Impl;
    std::vector<double> knots_;
    std::vector<double> values_;
    std::unique_ptr<Impl> impl_;
};

/// Desired control drawn from the spec's seed: knots t_0 = 0 < t_1 < ... <
/// t_sigma < t_{sigma+1} = T, interior knots on fine-grid boundaries.
struct SplineControl {
    std::shared_ptr<const NaturalSpline> spline;
    Control samples;  // midpoint samples on the fine grid, clipped to [0,1]
    bool clipped = false;

    /// Clipped spline value and its derivative (0 where clipped).
    double value(double t) const;
    double derivative(double t) const;
};

SplineControl spline_control(const InstanceSpec& spec);

struct Instance {
    InstanceSpec spec;
    SplineControl desired_control;
    double c = 0.0;  // 1 / int psi sin(pi x1) sin(pi x2)
    std::shared_ptr<const HeatOperators> fine_ops;
    StateTrajectory desired_state;  // y_d at the fine time boundaries
    Eigen::VectorXd initial_state;  // y_0 = 0
};

/// Heat operators for the spec's mesh and form function on a uniform grid.
std::shared_ptr<const HeatOperators> make_operators(const InstanceSpec& spec, int nt);

/// y_d = S(u_d) + d/dt p* + Laplace p* with p* = -alpha c (u_d - 1/2) sin sin.
Instance build_instance(const InstanceSpec& spec);
Instance build_instance(const InstanceSpec& spec, std::shared_ptr<const HeatOperators> fine_ops);

/// y_d sampled at the boundaries of a uniform grid with nt intervals;
/// nt must divide nt_fine.
StateTrajectory restrict_desired(const Instance& instance, int nt);

/// u_d averaged over the intervals of a uniform coarse grid.
Control restrict_control(const Instance& instance, int nt);

/// Tracking problem on a uniform grid with nt intervals. Reuses the fine
/// operators when nt == nt_fine.
TrackingProblem coarse_problem(const Instance& instance, int nt, double alpha);

}  // namespace switchocp
