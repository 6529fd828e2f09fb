#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace switchocp {

/// Partition of (0,T) into consecutive open intervals, stored by breakpoints
/// 0 = t_0 < t_1 < ... < t_N = T.
class TimePartition {
public:
    TimePartition(std::vector<double> breakpoints, int level = 0);

    static TimePartition uniform(double horizon, int intervals);

    double horizon() const { return breakpoints_.back(); }
    int size() const { return static_cast<int>(breakpoints_.size()) - 1; }
    int level() const { return level_; }
    std::span<const double> breakpoints() const { return breakpoints_; }

    double start(int i) const { return breakpoints_[i]; }
    double end(int i) const { return breakpoints_[i + 1]; }
    double length(int i) const { return breakpoints_[i + 1] - breakpoints_[i]; }

    /// tau: shortest interval length.
    double min_length() const;
    /// h: longest interval length.
    double max_length() const;
    /// h / tau, the quasi-uniformity ratio of the partition.
    double quasi_uniformity() const { return max_length() / min_length(); }

    /// True if every breakpoint of `coarse` is a breakpoint of this partition
    /// and both cover the same horizon.
    bool refines(const TimePartition& coarse) const;

    /// For every interval of this partition, the index of the interval of
    /// `coarse` containing it. Throws std::invalid_argument if not nested.
    std::vector<int> parent_map(const TimePartition& coarse) const;

    bool operator==(const TimePartition& other) const = default;

private:
    std::vector<double> breakpoints_;
    int level_ = 0;
};

/// Bisects every interval. The result is nested in `p` and has level + 1.
TimePartition refine_dyadic(const TimePartition& p);

/// Piecewise-constant control: n switches on the intervals of a partition.
/// Coefficients are stored switch-major, entry (j, i) at j * N + i.
class Control {
public:
    Control(TimePartition partition, int switches, double value = 0.0);
    Control(TimePartition partition, int switches, Eigen::VectorXd values);

    const TimePartition& partition() const { return partition_; }
    int switches() const { return switches_; }
    int intervals() const { return partition_.size(); }
    int dimension() const { return static_cast<int>(values_.size()); }

    double& operator()(int j, int i) { return values_[j * intervals() + i]; }
    double operator()(int j, int i) const { return values_[j * intervals() + i]; }

    Eigen::VectorXd& values() { return values_; }
    const Eigen::VectorXd& values() const { return values_; }

    /// Interval lengths repeated per switch; the diagonal of the temporal
    /// mass matrix of the control space.
    Eigen::VectorXd weights() const;

    /// Coefficients of switch j, one per interval.
    Eigen::VectorXd switch_values(int j) const { return values_.segment(j * intervals(), intervals()); }

    /// Total variation of switch j, counting the jump from the value 0 held
    /// before the horizon.
    double bv_seminorm(int j) const;

private:
    TimePartition partition_;
    int switches_;
    Eigen::VectorXd values_;
};

/// L2(0,T; R^n) inner product of two controls on the same partition.
double inner(const Control& a, const Control& b);

/// Local-averaging projection onto the intervals of a partition.
class Projection {
public:
    Projection(TimePartition partition, int switches);

    const TimePartition& partition() const { return partition_; }
    int switches() const { return switches_; }
    int dimension() const { return switches_ * partition_.size(); }

    /// Averages of each switch over each interval; entry j * N + i.
    /// `u` must live on a refinement of (or the same) partition.
    Eigen::VectorXd project(const Control& u) const;

    /// The L2 Riesz representative of a -> a . project(.), as a control on
    /// `grid` (which must refine this projection's partition).
    Control adjoint_embed(const Eigen::VectorXd& a, const TimePartition& grid) const;
    Control adjoint_embed(const Eigen::VectorXd& a) const { return adjoint_embed(a, partition_); }

    /// Euclidean row r with a . project(u) == r . u.values() for controls on
    /// `grid`.
    Eigen::VectorXd functional_row(const Eigen::VectorXd& a, const TimePartition& grid) const;

private:
    TimePartition partition_;
    int switches_;
};

}  // namespace switchocp
