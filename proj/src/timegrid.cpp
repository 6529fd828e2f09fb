#include "switchocp/timegrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace switchocp {

namespace {

bool same_time(double a, double b, double horizon) { return std::abs(a - b) <= 1e-12 * horizon; }

}  // namespace

TimePartition::TimePartition(std::vector<double> breakpoints, int level)
    : breakpoints_(std::move(breakpoints)), level_(level) {
    if (breakpoints_.size() < 2) {
        throw std::invalid_argument("time partition needs at least one interval");
    }
    if (breakpoints_.front() != 0.0) {
        throw std::invalid_argument("time partition must start at 0");
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1])) {
            throw std::invalid_argument("time partition breakpoints must be strictly increasing");
        }
    }
    if (level_ < 0) {
        throw std::invalid_argument("time partition level must be nonnegative");
    }
}

TimePartition TimePartition::uniform(double horizon, int intervals) {
    if (!(horizon > 0.0) || intervals < 1) {
        throw std::invalid_argument("uniform partition needs T > 0 and N >= 1");
    }
    std::vector<double> t(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        t[i] = horizon * i / intervals;
    }
    t.back() = horizon;
    return TimePartition(std::move(t));
}

double TimePartition::min_length() const {
    double tau = length(0);
    for (int i = 1; i < size(); ++i) tau = std::min(tau, length(i));
    return tau;
}

double TimePartition::max_length() const {
    double h = length(0);
    for (int i = 1; i < size(); ++i) h = std::max(h, length(i));
    return h;
}

bool TimePartition::refines(const TimePartition& coarse) const {
    if (!same_time(horizon(), coarse.horizon(), horizon())) return false;
    std::size_t f = 0;
    for (double t : coarse.breakpoints_) {
        while (f < breakpoints_.size() && breakpoints_[f] < t && !same_time(breakpoints_[f], t, horizon())) ++f;
        if (f == breakpoints_.size() || !same_time(breakpoints_[f], t, horizon())) return false;
    }
    return true;
}

std::vector<int> TimePartition::parent_map(const TimePartition& coarse) const {
    if (!refines(coarse)) {
        throw std::invalid_argument("partition is not a refinement of the projection partition");
    }
    std::vector<int> parent(size());
    int c = 0;
    for (int i = 0; i < size(); ++i) {
        const double mid = 0.5 * (start(i) + end(i));
        while (mid > coarse.end(c)) ++c;
        parent[i] = c;
    }
    return parent;
}

TimePartition refine_dyadic(const TimePartition& p) {
    std::vector<double> t;
    t.reserve(2 * p.size() + 1);
    for (int i = 0; i < p.size(); ++i) {
        t.push_back(p.start(i));
        t.push_back(0.5 * (p.start(i) + p.end(i)));
    }
    t.push_back(p.horizon());
    return TimePartition(std::move(t), p.level() + 1);
}

Control::Control(TimePartition partition, int switches, double value)
    : partition_(std::move(partition)), switches_(switches) {
    if (switches_ < 1) throw std::invalid_argument("control needs at least one switch");
    values_ = Eigen::VectorXd::Constant(switches_ * partition_.size(), value);
}

Control::Control(TimePartition partition, int switches, Eigen::VectorXd values)
    : partition_(std::move(partition)), switches_(switches), values_(std::move(values)) {
    if (switches_ < 1) throw std::invalid_argument("control needs at least one switch");
    if (values_.size() != switches_ * partition_.size()) {
        throw std::invalid_argument("control coefficient count " + std::to_string(values_.size()) +
                                    " does not match " + std::to_string(switches_) + " x " +
                                    std::to_string(partition_.size()));
    }
}

Eigen::VectorXd Control::weights() const {
    const int n = intervals();
    Eigen::VectorXd w(dimension());
    for (int j = 0; j < switches_; ++j) {
        for (int i = 0; i < n; ++i) w[j * n + i] = partition_.length(i);
    }
    return w;
}

double Control::bv_seminorm(int j) const {
    double total = 0.0;
    double previous = 0.0;
    for (int i = 0; i < intervals(); ++i) {
        total += std::abs((*this)(j, i) - previous);
        previous = (*this)(j, i);
    }
    return total;
}

double inner(const Control& a, const Control& b) {
    if (!(a.partition() == b.partition()) || a.switches() != b.switches()) {
        throw std::invalid_argument("inner product of controls on different grids");
    }
    return (a.weights().array() * a.values().array() * b.values().array()).sum();
}

Projection::Projection(TimePartition partition, int switches)
    : partition_(std::move(partition)), switches_(switches) {
    if (switches_ < 1) throw std::invalid_argument("projection needs at least one switch");
}

Eigen::VectorXd Projection::project(const Control& u) const {
    if (u.switches() != switches_) {
        throw std::invalid_argument("projection and control disagree on the number of switches");
    }
    const std::vector<int> parent = u.partition().parent_map(partition_);
    const int n_fine = u.intervals();
    const int n_coarse = partition_.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dimension());
    for (int j = 0; j < switches_; ++j) {
        for (int r = 0; r < n_fine; ++r) {
            const int i = parent[r];
            w[j * n_coarse + i] += u(j, r) * u.partition().length(r) / partition_.length(i);
        }
    }
    return w;
}

Control Projection::adjoint_embed(const Eigen::VectorXd& a, const TimePartition& grid) const {
    if (a.size() != dimension()) {
        throw std::invalid_argument("cut coefficient vector has the wrong dimension");
    }
    const std::vector<int> parent = grid.parent_map(partition_);
    const int n_coarse = partition_.size();
    Control g(grid, switches_, 0.0);
    for (int j = 0; j < switches_; ++j) {
        for (int r = 0; r < grid.size(); ++r) {
            const int i = parent[r];
            g(j, r) = a[j * n_coarse + i] / partition_.length(i);
        }
    }
    return g;
}

Eigen::VectorXd Projection::functional_row(const Eigen::VectorXd& a, const TimePartition& grid) const {
    Control g = adjoint_embed(a, grid);
    return (g.values().array() * g.weights().array()).matrix();
}

}  // namespace switchocp
