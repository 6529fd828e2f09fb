#include "switchocp/instancegen.hpp"

#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace switchocp {

void validate(const InstanceSpec& spec) {
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("T must be positive");
    if (spec.jumps < 0) throw std::invalid_argument("sigma must be nonnegative");
    if (spec.nt_fine < 1) throw std::invalid_argument("nt_fine must be positive");
    if (spec.jumps > spec.nt_fine - 1) throw std::invalid_argument("sigma exceeds the interior fine-grid boundaries");
    if (spec.nx < 3) throw std::invalid_argument("nx must be at least 3");
    if (!(spec.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (spec.form != "quadratic-bump") throw std::invalid_argument("unknown form function '" + spec.form + "'");
}

std::string format_spec(const InstanceSpec& spec) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "seed = " << spec.seed << '\n'
        << "T = " << spec.horizon << '\n'
        << "sigma = " << spec.jumps << '\n'
        << "nt_fine = " << spec.nt_fine << '\n'
        << "nx = " << spec.nx << '\n'
        << "alpha = " << spec.alpha << '\n'
        << "form = " << spec.form << '\n';
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof()) {
        throw std::invalid_argument("bad value for '" + key + "': " + value);
    }
    return out;
}

}  // namespace

InstanceSpec parse_spec(const std::string& text) {
    InstanceSpec spec;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "T") spec.horizon = parse_number<double>(key, value);
        else if (key == "sigma") spec.jumps = parse_number<int>(key, value);
        else if (key == "nt_fine") spec.nt_fine = parse_number<int>(key, value);
        else if (key == "nx") spec.nx = parse_number<int>(key, value);
        else if (key == "alpha") spec.alpha = parse_number<double>(key, value);
        else if (key == "form") spec.form = value;
        else throw std::invalid_argument("unknown key '" + key + "'");
    }
    validate(spec);
    return spec;
}

InstanceSpec read_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_spec(buffer.str());
}

void write_spec(const InstanceSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << format_spec(spec);
    if (!out) throw std::runtime_error("cannot write " + path);
}

double quadratic_bump(double x1, double x2) {
    return 1.5 - 2.0 * (x1 - 0.5) * (x1 - 0.5) - 2.0 * (x2 - 0.5) * (x2 - 0.5);
}

struct NaturalSpline::Impl {
    gsl_spline* spline = nullptr;
    ~Impl() { gsl_spline_free(spline); }
};

NaturalSpline::NaturalSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)), impl_(std::make_unique<Impl>()) {
    if (knots_.size() != values_.size() || knots_.size() < 2) {
        throw std::invalid_argument("spline needs at least two knots with one value each");
    }
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        if (!(knots_[k] > knots_[k - 1])) throw std::invalid_argument("spline knots must increase");
    }
    // Two knots: the natural cubic is the straight line.
    const gsl_interp_type* type = knots_.size() == 2 ? gsl_interp_linear : gsl_interp_cspline;
    impl_->spline = gsl_spline_alloc(type, knots_.size());
    if (!impl_->spline) throw std::bad_alloc();
    gsl_spline_init(impl_->spline, knots_.data(), values_.data(), knots_.size());
}

NaturalSpline::~NaturalSpline() = default;

double NaturalSpline::value(double t) const {
    t = std::clamp(t, knots_.front(), knots_.back());
    return gsl_spline_eval(impl_->spline, t, nullptr);
}

double NaturalSpline::derivative(double t) const {
    t = std::clamp(t, knots_.front(), knots_.back());
    return gsl_spline_eval_deriv(impl_->spline, t, nullptr);
}

double SplineControl::value(double t) const { return std::clamp(spline->value(t), 0.0, 1.0); }

double SplineControl::derivative(double t) const {
    const double v = spline->value(t);
    return (v < 0.0 || v > 1.0) ? 0.0 : spline->derivative(t);
}

SplineControl spline_control(const InstanceSpec& spec) {
    validate(spec);
    const TimePartition fine = TimePartition::uniform(spec.horizon, spec.nt_fine);
    std::mt19937_64 rng(spec.seed);

    std::vector<int> boundaries(spec.nt_fine - 1);
    std::iota(boundaries.begin(), boundaries.end(), 1);
    std::vector<int> chosen;
    chosen.reserve(spec.jumps);
    std::sample(boundaries.begin(), boundaries.end(), std::back_inserter(chosen), spec.jumps, rng);

    std::vector<double> knots{0.0};
    std::vector<double> values{0.0};
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int b : chosen) {
        knots.push_back(fine.breakpoints()[b]);
        values.push_back(uniform(rng));
    }
    knots.push_back(spec.horizon);
    values.push_back(0.5);

    SplineControl out{std::make_shared<const NaturalSpline>(std::move(knots), std::move(values)),
                      Control(fine, 1, 0.0)};
    for (int i = 0; i < fine.size(); ++i) {
        const double raw = out.spline->value(0.5 * (fine.start(i) + fine.end(i)));
        if (raw < 0.0 || raw > 1.0) out.clipped = true;
        out.samples(0, i) = std::clamp(raw, 0.0, 1.0);
    }
    return out;
}

std::shared_ptr<const HeatOperators> make_operators(const InstanceSpec& spec, int nt) {
    validate(spec);
    if (nt < 1) throw std::invalid_argument("nt must be positive");
    SpatialMesh mesh(spec.nx);
    FormFunctions forms = FormFunctions::from_fields(mesh, {quadratic_bump});
    return std::make_shared<const HeatOperators>(std::move(mesh), TimePartition::uniform(spec.horizon, nt),
                                                 std::move(forms));
}

Instance build_instance(const InstanceSpec& spec) { return build_instance(spec, make_operators(spec, spec.nt_fine)); }

Instance build_instance(const InstanceSpec& spec, std::shared_ptr<const HeatOperators> fine_ops) {
    validate(spec);
    if (!fine_ops || fine_ops->mesh().nodes_per_side() != spec.nx ||
        !(fine_ops->grid() == TimePartition::uniform(spec.horizon, spec.nt_fine)) || fine_ops->switches() != 1) {
        throw std::invalid_argument("operators do not match the instance spec");
    }
    const SpatialMesh& mesh = fine_ops->mesh();
    const double pi = std::numbers::pi;
    auto sine_mode = [pi](double x1, double x2) { return std::sin(pi * x1) * std::sin(pi * x2); };

    Instance inst{spec, spline_control(spec)};
    inst.c = 1.0 / integrate(mesh, [&](double x1, double x2) { return quadratic_bump(x1, x2) * sine_mode(x1, x2); });
    inst.fine_ops = fine_ops;
    inst.initial_state = Eigen::VectorXd::Zero(fine_ops->dofs());

    const Eigen::VectorXd s = interpolate(mesh, sine_mode);
    StateTrajectory y = fine_ops->solve_forward(inst.desired_control.samples, inst.initial_state);
    const auto& t = fine_ops->grid().breakpoints();
    for (int l = 0; l < y.levels(); ++l) {
        const double u = inst.desired_control.value(t[l]);
        const double du = inst.desired_control.derivative(t[l]);
        y.values.col(l) += spec.alpha * inst.c * (-du + 2.0 * pi * pi * (u - 0.5)) * s;
    }
    inst.desired_state = std::move(y);
    return inst;
}

namespace {

int coarsening_factor(const Instance& instance, int nt) {
    if (nt < 1 || instance.spec.nt_fine % nt != 0) {
        throw std::invalid_argument("nt = " + std::to_string(nt) + " does not divide nt_fine = " +
                                    std::to_string(instance.spec.nt_fine));
    }
    return instance.spec.nt_fine / nt;
}

}  // namespace

StateTrajectory restrict_desired(const Instance& instance, int nt) {
    const int factor = coarsening_factor(instance, nt);
    StateTrajectory out{Eigen::MatrixXd(instance.desired_state.values.rows(), nt + 1)};
    for (int l = 0; l <= nt; ++l) out.values.col(l) = instance.desired_state.values.col(l * factor);
    return out;
}

Control restrict_control(const Instance& instance, int nt) {
    const int factor = coarsening_factor(instance, nt);
    Control out(TimePartition::uniform(instance.spec.horizon, nt), 1, 0.0);
    const Control& fine = instance.desired_control.samples;
    for (int i = 0; i < nt; ++i) {
        double sum = 0.0;
        for (int k = 0; k < factor; ++k) sum += fine(0, i * factor + k);
        out(0, i) = sum / factor;
    }
    return out;
}

TrackingProblem coarse_problem(const Instance& instance, int nt, double alpha) {
    coarsening_factor(instance, nt);
    auto ops = nt == instance.spec.nt_fine ? instance.fine_ops : make_operators(instance.spec, nt);
    return make_tracking_problem(ops, restrict_desired(instance, nt), instance.initial_state, alpha);
}

}  // namespace switchocp
