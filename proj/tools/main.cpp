// Command-line front end: run the outer approximation on generated
// instances, sweep alpha or N_t, write instance specs, run the validation
// suite.
//
// Exit codes: 0 clean, 1 I/O error, 2 Newton failure, 3 cut cap reached,
// 4 invalid configuration, 5 validation failure.

#include <switchocp/instancegen.hpp>
#include <switchocp/io.hpp>
#include <switchocp/outerloop.hpp>
#include <switchocp_oracles/validation.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace switchocp;

namespace {

enum Exit { ok = 0, io_error = 1, newton_failure = 2, cut_cap = 3, config_error = 4, validation_failure = 5 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string instance_path;
    InstanceSpec spec;
    int nt = 100;
    int sigma_max = 2;
    double alpha = 1e-2;
    double rho = 1e-5;
    double cut_tol_rel = 0.01;
    double cut_tol_abs = 1e-6;
    int max_cuts = 200;
    int newton_max_iter = 50;
    double newton_tol = 1e-10;
    double krylov_tol = 1e-12;
    std::string projection = "grid";
    bool batch_cuts = false;
    bool cold_start = false;
    std::string out;
    std::string dense_out;
    std::vector<double> alphas{2e-3, 3e-3, 5e-3, 1e-2};
    std::vector<int> nts{25, 50, 100, 200};
};

void add_instance_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--instance", o.instance_path, "instance spec file (overrides the generator flags)");
    cmd->add_option("--seed", o.spec.seed, "generator seed");
    cmd->add_option("--nx", o.spec.nx, "mesh nodes per side");
    cmd->add_option("--nt-fine", o.spec.nt_fine, "time intervals of the generation grid");
    cmd->add_option("--jumps", o.spec.jumps, "spline knots of the desired control");
    cmd->add_option("--horizon", o.spec.horizon, "time horizon T");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--nt", o.nt, "time intervals of the control grid");
    cmd->add_option("--sigma-max", o.sigma_max, "maximum number of shifts per switch");
    cmd->add_option("--alpha", o.alpha, "Tikhonov parameter");
    cmd->add_option("--rho", o.rho, "complementarity parameter of the Newton method");
    cmd->add_option("--cut-tol-rel", o.cut_tol_rel, "stop below this fraction of the cut right-hand side");
    cmd->add_option("--cut-tol-abs", o.cut_tol_abs, "absolute violation floor");
    cmd->add_option("--max-cuts", o.max_cuts, "cut cap");
    cmd->add_option("--newton-max-iter", o.newton_max_iter, "Newton iteration cap per relaxation");
    cmd->add_option("--newton-tol", o.newton_tol, "Newton residual tolerance");
    cmd->add_option("--krylov-tol", o.krylov_tol, "MINRES relative tolerance");
    cmd->add_option("--projection", o.projection, "projection strategy")->check(CLI::IsMember({"grid", "dyadic"}));
    cmd->add_flag("--batch-cuts", o.batch_cuts, "add one cut per violated switch");
    cmd->add_flag("--cold-start", o.cold_start, "restart every relaxation from u = 1/2");
}

InstanceSpec resolve_spec(const Options& o) {
    InstanceSpec spec = o.spec;
    if (!o.instance_path.empty()) {
        try {
            spec = read_spec(o.instance_path);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(o.instance_path + ": " + e.what());
        }
    }
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

OuterConfig resolve_config(const Options& o, double alpha, int nt, const InstanceSpec& spec) {
    if (nt < 1 || spec.nt_fine % nt != 0) {
        throw ConfigError("--nt " + std::to_string(nt) + " must divide nt_fine " + std::to_string(spec.nt_fine));
    }
    if (o.sigma_max < 1 || o.max_cuts < 1 || o.newton_max_iter < 1 || !(alpha > 0.0) || !(o.rho > 0.0) ||
        !(o.cut_tol_rel > 0.0) || !(o.cut_tol_abs > 0.0) || !(o.newton_tol > 0.0) || !(o.krylov_tol > 0.0)) {
        throw ConfigError("numeric parameters must be positive");
    }
    OuterConfig c;
    c.alpha = alpha;
    c.rho = o.rho;
    c.tolerance_relative = o.cut_tol_rel;
    c.tolerance_absolute = o.cut_tol_abs;
    c.max_cuts = o.max_cuts;
    c.newton.max_iterations = o.newton_max_iter;
    c.newton.tolerance = o.newton_tol;
    c.newton.krylov_tolerance = o.krylov_tol;
    c.projection = o.projection == "dyadic" ? ProjectionStrategy::dyadic : ProjectionStrategy::grid;
    c.budget = SwitchingBudget{o.sigma_max};
    c.warm_start = !o.cold_start;
    c.batch_cuts = o.batch_cuts;
    return c;
}

int exit_code(RunStatus status) {
    switch (status) {
        case RunStatus::feasible: return ok;
        case RunStatus::newton_failure: return newton_failure;
        case RunStatus::cut_cap: return cut_cap;
    }
    return newton_failure;
}

int worst_exit(int a, int b) {
    // Newton failure outranks the cut cap.
    auto rank = [](int c) { return c == newton_failure ? 2 : c == cut_cap ? 1 : 0; };
    return rank(a) >= rank(b) ? a : b;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    return out;
}

// Streams the trace row by row so a failing run still leaves its partial log.
OuterResult run_to_csv(const TrackingProblem& problem, const OuterConfig& config, const std::string& path) {
    std::ofstream file;
    if (!path.empty()) {
        file = open_output(path);
        write_csv_header(file);
    }
    auto result = run(problem, config, [&](const BoundLogRecord& r) {
        if (file.is_open()) {
            write_csv_row(file, r);
            file.flush();
            if (!file) throw std::ios_base::failure("cannot write " + path);
        }
    });
    if (!file.is_open()) write_bound_log(std::cout, result.log);
    return result;
}

int thread_cap() {
    int cap = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SWITCH_OCP_THREADS")) {
        try {
            cap = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError("SWITCH_OCP_THREADS must be a positive integer");
        }
        if (cap < 1) throw ConfigError("SWITCH_OCP_THREADS must be a positive integer");
    }
    return cap;
}

// Runs jobs with at most thread_cap() in flight; returns the exit codes in order.
std::vector<int> fan_out(const std::vector<std::function<int()>>& jobs) {
    const int cap = thread_cap();
    std::vector<int> codes(jobs.size(), ok);
    std::vector<std::future<void>> running;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (static_cast<int>(running.size()) >= cap) {
            running.front().get();
            running.erase(running.begin());
        }
        running.push_back(std::async(std::launch::async, [&, k] { codes[k] = jobs[k](); }));
    }
    for (auto& f : running) f.get();
    return codes;
}

std::string output_dir(const Options& o) {
    const std::string dir = o.out.empty() ? "." : o.out;
    std::filesystem::create_directories(dir);
    return dir;
}

std::string tag(double value) {
    std::ostringstream s;
    s << value;
    return s.str();
}

int cmd_run(const Options& o) {
    const InstanceSpec spec = resolve_spec(o);
    const OuterConfig config = resolve_config(o, o.alpha, o.nt, spec);
    const Instance instance = build_instance(spec);
    const OuterResult result = run_to_csv(coarse_problem(instance, o.nt, config.alpha), config, o.out);
    std::cerr << summary_line(result) << '\n';
    if (!result.final.converged) std::cerr << "newton: " << result.final.message << '\n';
    return exit_code(result.status);
}

int cmd_sweep_alpha(const Options& o) {
    const InstanceSpec spec = resolve_spec(o);
    for (double a : o.alphas) resolve_config(o, a, o.nt, spec);
    const Instance instance = build_instance(spec);
    const std::string dir = output_dir(o);
    std::mutex log_mutex;
    std::vector<std::function<int()>> jobs;
    for (double a : o.alphas) {
        jobs.push_back([&, a] {
            const OuterConfig config = resolve_config(o, a, o.nt, spec);
            const std::string path = dir + "/alpha_" + tag(a) + ".csv";
            const OuterResult result = run_to_csv(coarse_problem(instance, o.nt, a), config, path);
            std::lock_guard lock(log_mutex);
            std::cerr << "alpha=" << a << ' ' << summary_line(result) << " file=" << path << '\n';
            return exit_code(result.status);
        });
    }
    int code = ok;
    for (int c : fan_out(jobs)) code = worst_exit(code, c);
    return code;
}

int cmd_sweep_nt(const Options& o) {
    const InstanceSpec spec = resolve_spec(o);
    for (int nt : o.nts) resolve_config(o, o.alpha, nt, spec);
    const Instance instance = build_instance(spec);
    const std::string dir = output_dir(o);
    std::mutex log_mutex;
    std::vector<std::function<int()>> jobs;
    for (int nt : o.nts) {
        jobs.push_back([&, nt] {
            const OuterConfig config = resolve_config(o, o.alpha, nt, spec);
            const std::string path = dir + "/nt_" + std::to_string(nt) + ".csv";
            const OuterResult result = run_to_csv(coarse_problem(instance, nt, o.alpha), config, path);
            std::lock_guard lock(log_mutex);
            std::cerr << "nt=" << nt << ' ' << summary_line(result) << " file=" << path << '\n';
            return exit_code(result.status);
        });
    }
    int code = ok;
    for (int c : fan_out(jobs)) code = worst_exit(code, c);
    return code;
}

int cmd_gen_instance(const Options& o) {
    const InstanceSpec spec = resolve_spec(o);
    if (o.out.empty()) std::cout << format_spec(spec);
    else write_spec(spec, o.out);

    if (!o.dense_out.empty()) {
        const Instance instance = build_instance(spec);
        std::ofstream out = open_output(o.dense_out);
        out.precision(17);
        const auto& grid = instance.fine_ops->grid();
        out << "# c = " << instance.c << (instance.desired_control.clipped ? ", u_d clipped" : "") << '\n';
        out << "kind,index,t,values...\n";
        for (int i = 0; i < grid.size(); ++i) {
            out << "u_d," << i << ',' << 0.5 * (grid.start(i) + grid.end(i)) << ','
                << instance.desired_control.samples(0, i) << '\n';
        }
        for (int l = 0; l < instance.desired_state.levels(); ++l) {
            out << "y_d," << l << ',' << grid.breakpoints()[l];
            for (int d = 0; d < instance.desired_state.values.rows(); ++d) {
                out << ',' << instance.desired_state.values(d, l);
            }
            out << '\n';
        }
        if (!out) throw std::ios_base::failure("cannot write " + o.dense_out);
    }
    return ok;
}

int cmd_validate(const Options& o) {
    bool all = true;
    for (const auto& check : oracle::run_validation(o.spec.seed)) {
        std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
        all = all && check.passed;
    }
    return all ? ok : validation_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outer approximation for parabolic optimal control with switching constraints"};
    app.require_subcommand(1);
    Options o;

    auto* run_cmd = app.add_subcommand("run", "solve one instance and write its bound trace");
    add_instance_flags(run_cmd, o);
    add_solver_flags(run_cmd, o);
    run_cmd->add_option("--out", o.out, "bound-trace CSV (stdout if omitted)");

    auto* alpha_cmd = app.add_subcommand("sweep-alpha", "one run per alpha on a shared instance");
    add_instance_flags(alpha_cmd, o);
    add_solver_flags(alpha_cmd, o);
    alpha_cmd->add_option("--alphas", o.alphas, "Tikhonov parameters")->delimiter(',');
    alpha_cmd->add_option("--out", o.out, "output directory");

    auto* nt_cmd = app.add_subcommand("sweep-nt", "one run per control grid on a shared instance");
    add_instance_flags(nt_cmd, o);
    add_solver_flags(nt_cmd, o);
    nt_cmd->add_option("--nts", o.nts, "numbers of time intervals")->delimiter(',');
    nt_cmd->add_option("--out", o.out, "output directory");

    auto* gen_cmd = app.add_subcommand("gen-instance", "write an instance spec file");
    add_instance_flags(gen_cmd, o);
    gen_cmd->add_option("--alpha", o.spec.alpha, "Tikhonov parameter used to build y_d");
    gen_cmd->add_option("--out", o.out, "spec file (stdout if omitted)");
    gen_cmd->add_option("--dense-out", o.dense_out, "debug export of u_d and y_d");

    auto* validate_cmd = app.add_subcommand("validate", "run the oracle and invariant checks");
    validate_cmd->add_option("--seed", o.spec.seed, "seed of the random checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        // Solver runs build y_d with the run's alpha unless a spec file says otherwise.
        if (o.instance_path.empty() && !gen_cmd->parsed()) o.spec.alpha = o.alpha;
        if (run_cmd->parsed()) return cmd_run(o);
        if (alpha_cmd->parsed()) return cmd_sweep_alpha(o);
        if (nt_cmd->parsed()) return cmd_sweep_nt(o);
        if (gen_cmd->parsed()) return cmd_gen_instance(o);
        if (validate_cmd->parsed()) return cmd_validate(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_error;
    }
    return config_error;
}
