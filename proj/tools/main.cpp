// Command-line front end over the rdinv C interface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "rdinv/rdinv.h"

namespace fs = std::filesystem;
using rdinv_cli::Config;
using rdinv_cli::ConfigError;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

/// A failed library call, carrying the status for the exit-code mapping.
struct CallError {
    rdinv_status status;
    std::string message;
};

void check(rdinv_status s) {
    if (s != RDINV_OK) throw CallError{s, rdinv_last_error()};
}

int exit_code(rdinv_status s) {
    switch (s) {
        case RDINV_BLOWUP_DETECTED:
        case RDINV_NEWTON_DIVERGENCE:
        case RDINV_INTERNAL_ERROR:
            return kNumerical;
        case RDINV_IO_ERROR:
        case RDINV_MALFORMED_TRACE_FILE:
        case RDINV_MALFORMED_COEFFICIENT_FILE:
            return kIo;
        default:
            return kConfig;
    }
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using Problem = std::unique_ptr<rdinv_problem, Deleter<rdinv_problem, rdinv_problem_destroy>>;
using Traj = std::unique_ptr<rdinv_trajectory, Deleter<rdinv_trajectory, rdinv_trajectory_destroy>>;
using Meas = std::unique_ptr<rdinv_measurements, Deleter<rdinv_measurements, rdinv_measurements_destroy>>;
using Result = std::unique_ptr<rdinv_result, Deleter<rdinv_result, rdinv_result_destroy>>;
using Report = std::unique_ptr<rdinv_report, Deleter<rdinv_report, rdinv_report_destroy>>;

struct Run {
    Config cfg;
    fs::path out;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Amplitudes {
    int N = 0;
    int n = 0;
    std::vector<double> h;
};

Amplitudes read_amplitudes(const fs::path& path) {
    if (!fs::exists(path)) throw CallError{RDINV_IO_ERROR, "no such file: " + path.string()};
    Amplitudes a;
    check(rdinv_coefficients_read(path.c_str(), &a.N, &a.n, nullptr, 0));
    a.h.resize(static_cast<std::size_t>(a.N) * (a.n + 1));
    check(rdinv_coefficients_read(path.c_str(), &a.N, &a.n, a.h.data(), a.h.size()));
    return a;
}

/// Random amplitudes, one independent stream per coefficient.
Amplitudes random_amplitudes(const Run& run, int N) {
    Amplitudes a;
    a.N = N;
    a.n = run.cfg.integer("n");
    a.h.resize(static_cast<std::size_t>(N) * (a.n + 1));
    for (int k = 0; k < N; ++k) {
        check(rdinv_basis_sample(a.n, run.cfg.number("h_lo"), run.cfg.number("h_hi"), run.seed * 1000 + k,
                                 a.h.data() + static_cast<std::size_t>(k) * (a.n + 1)));
    }
    return a;
}

rdinv_solver_options solver_options(const Config& cfg) {
    rdinv_solver_options o;
    rdinv_solver_options_default(&o);
    o.theta = cfg.number("theta");
    o.dt = cfg.number("dt");
    o.newton_tol = cfg.number("newton_tol");
    o.newton_max_iter = cfg.integer("newton_max_iter");
    o.blowup_cap = cfg.number("blowup_cap");
    return o;
}

double horizon(const Config& cfg) { return cfg.has("T") ? cfg.number("T") : cfg.number("eps"); }

struct Tilted {
    double value;
    double tilt;
    double a;
};

double tilted_initial(double x, void* user) {
    const auto* t = static_cast<const Tilted*>(user);
    return t->value + t->tilt * (x - t->a);
}

/// Owns the callback payloads referenced by a problem handle.
struct ProblemBundle {
    Problem problem;
    std::vector<std::unique_ptr<Tilted>> initial;
};

/// Domain, diffusion, boundary weights and the initial conditions; no
/// coefficients yet. `experiments` overrides the count implied by u0 or N.
ProblemBundle make_problem(const Config& cfg, std::optional<int> experiments = std::nullopt) {
    ProblemBundle b;
    rdinv_problem* p = nullptr;
    check(rdinv_problem_create(cfg.number("a"), cfg.number("b"), cfg.number("D"), horizon(cfg), &p));
    b.problem.reset(p);
    check(rdinv_problem_set_robin(p, cfg.number("alpha1"), cfg.number("beta1"), cfg.number("alpha2"),
                                  cfg.number("beta2")));
    std::vector<double> u0;
    if (cfg.has("u0")) {
        u0 = cfg.list("u0");
        if (experiments && static_cast<int>(u0.size()) != *experiments) {
            throw ConfigError("u0 lists " + std::to_string(u0.size()) + " initial values but " +
                              std::to_string(*experiments) + " experiments are required");
        }
    } else {
        const int count = experiments ? *experiments : cfg.integer("N");
        for (int i = 1; i <= count; ++i) u0.push_back(0.1 * i);
    }
    const double tilt = cfg.number("u0_tilt");
    for (double v : u0) {
        if (tilt == 0.0) {
            check(rdinv_problem_add_initial_constant(p, v));
        } else {
            b.initial.push_back(std::make_unique<Tilted>(Tilted{v, tilt, cfg.number("a")}));
            check(rdinv_problem_add_initial_fn(p, tilted_initial, b.initial.back().get()));
        }
    }
    return b;
}

/// Coefficients from mu_const, the truth file, or a seeded random draw (in
/// that order). Basis amplitudes are returned so callers can record them.
std::optional<Amplitudes> set_coefficients(const Run& run, rdinv_problem* p) {
    const auto& cfg = run.cfg;
    if (cfg.has("mu_const")) {
        const auto mu = cfg.list("mu_const");
        check(rdinv_problem_set_constant_coefficients(p, static_cast<int>(mu.size()), mu.data()));
        return std::nullopt;
    }
    const auto a = cfg.has("truth") ? read_amplitudes(*cfg.path("truth")) : random_amplitudes(run, cfg.integer("N"));
    check(rdinv_problem_set_basis_coefficients(p, a.n, a.N, a.h.data()));
    return a;
}

void validate(const Config& cfg, const rdinv_problem* p) {
    std::size_t violations = 0;
    char detail[512];
    check(rdinv_problem_validate(p, 1e-8, cfg.integer("M"), &violations, detail, sizeof detail));
    if (violations > 0) {
        throw ConfigError("problem is not admissible (" + std::to_string(violations) + " violation(s)); first: " +
                          detail);
    }
}

std::string path_in(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

int cmd_forward(const Run& run) {
    const auto& cfg = run.cfg;
    if (cfg.integer("M") < 16) throw ConfigError("M must be >= 16");
    auto b = make_problem(cfg);
    const auto amps = set_coefficients(run, b.problem.get());
    if (amps) check(rdinv_coefficients_write(path_in(run.out, "mu.csv").c_str(), amps->N, amps->n, amps->h.data()));
    validate(cfg, b.problem.get());

    const int frames = cfg.integer("frames");
    if (frames < 2) throw ConfigError("frames must be >= 2");
    const double T = horizon(cfg);
    std::vector<double> times(static_cast<std::size_t>(frames));
    for (int i = 0; i < frames; ++i) times[i] = (i == frames - 1) ? T : T * i / (frames - 1);
    const auto opt = solver_options(cfg);

    std::size_t count = 0;
    check(rdinv_problem_initial_count(b.problem.get(), &count));
    for (std::size_t i = 0; i < count; ++i) {
        rdinv_trajectory* t = nullptr;
        check(rdinv_solve(b.problem.get(), i, cfg.integer("M"), times.data(), times.size(), &opt, &t));
        Traj traj(t);
        const auto tag = std::to_string(i + 1);
        check(rdinv_trajectory_write_csv(t, path_in(run.out, "trajectory_" + tag + ".csv").c_str()));
        check(rdinv_trajectory_write_final_csv(t, path_in(run.out, "final_" + tag + ".csv").c_str()));
        std::cout << "experiment " << tag << ": trajectory_" << tag << ".csv, final_" << tag << ".csv\n";
    }
    return kOk;
}

int cmd_synthesize(const Run& run) {
    const auto& cfg = run.cfg;
    auto b = make_problem(cfg);
    const auto amps = set_coefficients(run, b.problem.get());
    if (amps) check(rdinv_coefficients_write(path_in(run.out, "truth.csv").c_str(), amps->N, amps->n, amps->h.data()));
    validate(cfg, b.problem.get());

    const auto opt = solver_options(cfg);
    rdinv_measurements* m = nullptr;
    check(rdinv_synthesize(b.problem.get(), cfg.number("x0"), cfg.number("eps"), cfg.integer("K"), cfg.integer("M"),
                           &opt, run.threads, &m));
    Meas meas(m);
    if (cfg.number("noise_sigma") > 0.0) check(rdinv_measurements_add_noise(m, cfg.number("noise_sigma"), run.seed));
    check(rdinv_measurements_write(m, path_in(run.out, "traces.csv").c_str()));
    std::cout << "wrote " << path_in(run.out, "traces.csv") << '\n';
    return kOk;
}

rdinv_invert_options invert_options(const Run& run) {
    const auto& cfg = run.cfg;
    rdinv_invert_options o;
    rdinv_invert_options_default(&o);
    o.n = cfg.integer("n");
    o.M = cfg.integer("M");
    o.budget = cfg.integer("budget");
    o.include_derivative = cfg.flag("include_derivative") ? 1 : 0;
    o.derivative_weight = cfg.number("derivative_weight");
    o.fd_step = cfg.number("fd_step");
    o.grad_tol = cfg.number("grad_tol");
    o.step_tol = cfg.number("step_tol");
    o.restarts = cfg.integer("restarts");
    o.seed = run.seed;
    o.threads = run.threads;
    o.solver = solver_options(cfg);
    return o;
}

Meas load_traces(const Config& cfg, std::size_t* count) {
    const auto path = cfg.path("traces");
    if (!path) throw ConfigError("`traces` must name a trace file");
    if (!fs::exists(*path)) throw CallError{RDINV_IO_ERROR, "no such file: " + path->string()};
    rdinv_measurements* m = nullptr;
    check(rdinv_measurements_read(path->c_str(), &m));
    Meas meas(m);
    double eps = 0.0;
    check(rdinv_measurements_info(m, nullptr, &eps, count, nullptr));
    return meas;
}

std::optional<std::vector<double>> optional_amplitudes(const Config& cfg, const char* key, int N, int n) {
    if (!cfg.has(key)) return std::nullopt;
    const auto a = read_amplitudes(*cfg.path(key));
    if (a.N != N || a.n != n) {
        throw ConfigError(std::string(key) + " holds " + std::to_string(a.N) + " x " + std::to_string(a.n + 1) +
                          " amplitudes, expected " + std::to_string(N) + " x " + std::to_string(n + 1));
    }
    return a.h;
}

int cmd_invert(const Run& run) {
    const auto& cfg = run.cfg;
    std::size_t count = 0;
    auto meas = load_traces(cfg, &count);
    const int N = static_cast<int>(count);
    auto b = make_problem(cfg, N);
    const auto opt = invert_options(run);
    const auto truth = optional_amplitudes(cfg, "truth", N, opt.n);
    const auto init = optional_amplitudes(cfg, "init", N, opt.n);

    rdinv_result* r = nullptr;
    check(rdinv_invert(b.problem.get(), meas.get(), &opt, init ? init->data() : nullptr,
                       truth ? truth->data() : nullptr, &r));
    Result result(r);
    check(rdinv_result_write(r, run.out.c_str()));

    double G = 0.0, err = 0.0;
    int evals = 0, total = 0, iters = 0, has_truth = 0;
    check(rdinv_result_info(r, &G, &evals, &total, &iters, &has_truth, &err));
    std::printf("objective_value=%.6e evaluations=%d total_evaluations=%d iterations=%d stop_reason=%s\n", G, evals,
                total, iters, rdinv_result_stop_reason(r));
    if (has_truth) std::printf("truth_error=%.6e\n", err);
    return kOk;
}

double identity_field(double x, void*) { return x; }

int cmd_counterexample(const Run& run) {
    const auto& cfg = run.cfg;
    const auto& id = cfg.raw("case");
    const int M = cfg.integer("M");
    const int K = cfg.integer("K");
    rdinv_report* rep = nullptr;
    if (id == "scaled_roots") {
        const auto roots = cfg.list("roots");
        check(rdinv_counterexample_scaled_roots(static_cast<int>(roots.size()) + 1, roots.data(), roots.size(),
                                                cfg.number("tau"), cfg.number("a"), cfg.number("b"),
                                                cfg.number("D"), horizon(cfg), M, K, &rep));
    } else if (id == "symmetry") {
        auto b = make_problem(cfg, cfg.has("u0") ? std::nullopt : std::optional<int>(1));
        if (cfg.has("mu_const") || cfg.has("truth")) {
            set_coefficients(run, b.problem.get());
        } else {
            check(rdinv_problem_set_coefficient_fn(b.problem.get(), 1, identity_field, nullptr));
        }
        check(rdinv_counterexample_symmetry(b.problem.get(), M, K, &rep));
    } else if (id == "time_dependent") {
        check(rdinv_counterexample_time_dependent(cfg.number("D"), horizon(cfg), K, &rep));
    } else if (id == "unknown_initial") {
        check(rdinv_counterexample_unknown_initial(cfg.number("D"), cfg.number("rho"), horizon(cfg), M, K, &rep));
    } else {
        throw ConfigError("unknown counter-example case '" + id + "'");
    }
    Report report(rep);
    const std::string text = rdinv_report_text(rep);
    std::cout << text;
    {
        std::ofstream out(run.out / "report.txt");
        out << text;
        if (!out) throw CallError{RDINV_IO_ERROR, "cannot write " + path_in(run.out, "report.txt")};
    }
    check(rdinv_report_write_csv(rep, path_in(run.out, "report.csv").c_str()));
    int passed = 0;
    check(rdinv_report_passed(rep, &passed));
    return passed ? kOk : kNumerical;
}

int cmd_report(const Run& run) {
    const auto& cfg = run.cfg;
    const auto rec_path = cfg.path("recovered").value_or(run.out / "recovered.csv");
    const auto rec = read_amplitudes(rec_path);
    const auto truth = optional_amplitudes(cfg, "truth", rec.N, rec.n);
    const double a = cfg.number("a");
    const double b = cfg.number("b");
    check(rdinv_write_plot_data(rec.n, rec.N, truth ? truth->data() : nullptr, rec.h.data(), a, b,
                                run.out.c_str()));

    std::ostringstream text;
    text << "recovered: " << rec_path.string() << " (N=" << rec.N << ", n=" << rec.n << ")\n";
    if (truth) {
        double err = 0.0;
        check(rdinv_recovery_error(rec.n, rec.N, truth->data(), rec.h.data(), a, b, &err));
        text << "truth_error=" << err << '\n';
    }
    if (cfg.has("traces")) {
        std::size_t count = 0;
        auto meas = load_traces(cfg, &count);
        if (static_cast<int>(count) != rec.N) throw ConfigError("trace count does not match the recovered N");
        auto prob = make_problem(cfg, rec.N);
        auto opt = invert_options(run);
        opt.n = rec.n;
        double G = 0.0;
        check(rdinv_objective(prob.problem.get(), meas.get(), &opt, rec.h.data(), &G));
        text << "objective_value=" << G << '\n';
    }
    for (int k = 1; k <= rec.N; ++k) text << "plot data: plot_mu" << k << ".csv\n";
    std::cout << text.str();
    std::ofstream out(run.out / "report.txt");
    out << text.str();
    if (!out) throw CallError{RDINV_IO_ERROR, "cannot write " + path_in(run.out, "report.txt")};
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forward solves, synthetic traces and coefficient reconstruction for 1D reaction-diffusion"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string out_dir = "out";
    app.add_option("--config", config_path, "key = value settings file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Run&);
    };
    const Sub subs[] = {
        {"forward", "solve every experiment and write trajectories", cmd_forward},
        {"synthesize", "write probe traces for true coefficients", cmd_synthesize},
        {"invert", "reconstruct coefficients from a trace file", cmd_invert},
        {"counterexample", "verify a non-uniqueness construction", cmd_counterexample},
        {"report", "score recovered coefficients and emit plot data", cmd_report},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    Run run;
    try {
        if (!config_path.empty()) run.cfg.load(config_path);
        if (seed) run.cfg.set("seed", std::to_string(*seed));
        if (threads) run.cfg.set("threads", std::to_string(*threads));
        try {
            std::size_t used = 0;
            run.seed = std::stoull(run.cfg.raw("seed"), &used);
            if (used != run.cfg.raw("seed").size()) throw std::invalid_argument("trailing text");
        } catch (const std::logic_error&) {
            throw ConfigError("seed: not a nonnegative integer: '" + run.cfg.raw("seed") + "'");
        }
        run.threads = run.cfg.integer("threads");
        if (run.threads < 1) throw ConfigError("threads must be >= 1");
        run.cfg.absolutize_paths();
        run.out = out_dir;
        fs::create_directories(run.out);
        run.cfg.write(run.out / "config.txt");

        for (const auto& s : subs) {
            if (app.got_subcommand(s.name)) return s.fn(run);
        }
        return kConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const CallError& e) {
        std::cerr << "error: " << e.message << '\n';
        return exit_code(e.status);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    }
}
