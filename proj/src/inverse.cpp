#include "rdinv/inverse.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "parallel.hpp"
#include "rdinv/errors.hpp"
#include "text_util.hpp"

namespace rdinv {

ProblemSpec ProblemTemplate::instantiate(std::vector<CoefficientField> mu, InitialCondition init) const {
    ProblemSpec p;
    p.domain = domain;
    p.D = D;
    p.bc = bc;
    p.reaction.mu = std::move(mu);
    p.reaction.g = g;
    p.reaction.dg_du = dg_du;
    p.init = std::move(init);
    p.T = eps;
    return p;
}

void ObjectiveSpec::check() const {
    problem.domain.check();
    if (N < 1) throw InvalidArgument("objective: N must be at least 1");
    if (measurements.traces.empty()) throw InvalidArgument("objective: no measurements");
    if (measurements.initial_conditions.size() != measurements.traces.size()) {
        throw InvalidArgument("objective: one initial condition per trace is required");
    }
    if (!problem.domain.contains(measurements.x0)) throw ProbeOutsideDomain("objective: x0 outside the domain");
    for (const auto& tr : measurements.traces) {
        if (tr.size() < 2) throw InvalidArgument("objective: traces need at least 2 samples");
        if (tr.times.back() > problem.eps * (1.0 + 1e-12)) {
            throw InvalidArgument("objective: trace extends beyond eps");
        }
    }
    if (!(derivative_weight >= 0.0)) throw InvalidArgument("objective: derivative weight must be nonnegative");
}

std::vector<CoefficientField> ObjectiveSpec::fields(const CoefficientSet& h) const {
    if (static_cast<int>(h.size()) != N) throw InvalidArgument("candidate must hold N coefficient vectors");
    std::vector<CoefficientField> out;
    out.reserve(h.size());
    for (const auto& hk : h) out.push_back(basis_field(basis, hk, problem.domain));
    return out;
}

double l2_time_norm(std::span<const double> times, std::span<const double> f) {
    if (times.size() != f.size()) throw InvalidArgument("l2_time_norm: length mismatch");
    if (times.size() < 2) throw InvalidArgument("l2_time_norm: at least 2 samples required");
    double sum = 0.5 * times[0] * f[0] * f[0];
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        if (!(dt > 0.0)) throw InvalidArgument("l2_time_norm: times must increase");
        sum += 0.5 * dt * (f[k - 1] * f[k - 1] + f[k] * f[k]);
    }
    return std::sqrt(sum);
}

MeasurementSet synthesize_measurements(const ProblemTemplate& problem, const std::vector<CoefficientField>& truth,
                                       const std::vector<InitialCondition>& ics, double x0,
                                       std::span<const double> times, int M, const SolverOptions& solver,
                                       int threads) {
    if (ics.empty()) throw InvalidArgument("synthesize_measurements: no initial conditions");
    const SpatialGrid grid(problem.domain, M);
    MeasurementSet ms;
    ms.x0 = x0;
    ms.eps = problem.eps;
    ms.initial_conditions = ics;
    ms.traces.resize(ics.size());
    detail::parallel_for(ics.size(), threads, [&](std::size_t i) {
        const auto traj = solve(problem.instantiate(truth, ics[i]), grid, times, solver);
        ms.traces[i] = probe(traj, x0, times);
    });
    return ms;
}

namespace {

double trace_misfit(const ObjectiveSpec& spec, const SpatialGrid& grid, const std::vector<CoefficientField>& cand,
                    std::size_t i) {
    const auto& meas = spec.measurements.traces[i];
    try {
        const auto traj = solve(spec.problem.instantiate(cand, spec.measurements.initial_conditions[i]), grid,
                                meas.times, spec.solver);
        const auto tr = probe(traj, spec.measurements.x0, meas.times);
        std::vector<double> diff(meas.size());
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = meas.u[k] - tr.u[k];
        double value = l2_time_norm(meas.times, diff);
        if (spec.include_derivative) {
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = meas.dudx[k] - tr.dudx[k];
            value += spec.derivative_weight * l2_time_norm(meas.times, diff);
        }
        return value;
    } catch (const BlowUpDetected& e) {
        return spec.penalty * (1.0 + std::max(0.0, spec.problem.eps - e.time()) / spec.problem.eps);
    } catch (const NewtonDivergence& e) {
        return spec.penalty * (1.0 + std::max(0.0, spec.problem.eps - e.time()) / spec.problem.eps);
    }
}

}  // namespace

double objective_for_fields(const ObjectiveSpec& spec, const std::vector<CoefficientField>& candidate) {
    spec.check();
    if (static_cast<int>(candidate.size()) != spec.N) throw InvalidArgument("candidate must hold N fields");
    const SpatialGrid grid(spec.problem.domain, spec.M);
    std::vector<double> parts(spec.measurements.traces.size());
    detail::parallel_for(parts.size(), spec.threads,
                         [&](std::size_t i) { parts[i] = trace_misfit(spec, grid, candidate, i); });
    double sum = 0.0;
    for (double p : parts) sum += p;
    return sum;
}

double objective(const ObjectiveSpec& spec, const CoefficientSet& candidate) {
    return objective_for_fields(spec, spec.fields(candidate));
}

CoefficientSet zero_coefficients(const BumpBasis& basis, int N) {
    return CoefficientSet(static_cast<std::size_t>(N), BasisCoefficients(basis.size(), 0.0));
}

namespace {

std::vector<double> stack(const CoefficientSet& h) {
    std::vector<double> x;
    for (const auto& hk : h) x.insert(x.end(), hk.begin(), hk.end());
    return x;
}

CoefficientSet unstack(std::span<const double> x, std::size_t N, std::size_t width) {
    CoefficientSet h(N);
    for (std::size_t k = 0; k < N; ++k) h[k].assign(x.begin() + k * width, x.begin() + (k + 1) * width);
    return h;
}

}  // namespace

InverseResult minimize(const ObjectiveSpec& spec, const CoefficientSet& init, const MinimizeOptions& options) {
    spec.check();
    const auto N = static_cast<std::size_t>(spec.N);
    const std::size_t width = spec.basis.size();
    if (init.size() != N) throw InvalidArgument("minimize: init must hold N coefficient vectors");
    for (const auto& hk : init) {
        if (hk.size() != width) throw InvalidArgument("minimize: init vectors must have n+1 entries");
    }
    if (options.budget < static_cast<int>(N * width) + 1) {
        throw BudgetTooSmall("budget " + std::to_string(options.budget) + " < (n+1)N + 1 = " +
                             std::to_string(N * width + 1));
    }
    if (options.restarts < 0) throw InvalidArgument("minimize: restarts must be nonnegative");

    // The objective runs its N solves sequentially here; concurrency is spent
    // on the finite-difference batch instead.
    ObjectiveSpec inner = spec;
    inner.threads = 1;
    BatchFunction f;
    auto G = [&](std::span<const double> x) { return objective(inner, unstack(x, N, width)); };
    f.value = G;
    f.batch = [&](const std::vector<std::vector<double>>& pts, std::span<double> out) {
        detail::parallel_for(pts.size(), spec.threads, [&](std::size_t i) { out[i] = G(pts[i]); });
    };

    QuasiNewtonOptions qn;
    qn.budget = options.budget;
    qn.fd_step = options.fd_step;
    qn.grad_tol = options.grad_tol;
    qn.step_tol = options.step_tol;
    qn.lower_bound = 0.0;

    InverseResult best;
    bool have_best = false;
    int total = 0;
    std::mt19937_64 rng(options.seed);
    for (int run = 0; run <= options.restarts; ++run) {
        std::vector<double> x0 = stack(init);
        if (run > 0) {
            std::uniform_real_distribution<double> dist(options.restart_lo, options.restart_hi);
            for (auto& v : x0) v = dist(rng);
        }
        auto r = quasi_newton_minimize(f, std::move(x0), qn);
        total += r.evaluations;
        if (!have_best || r.value < best.objective_value) {
            best.recovered = unstack(r.x, N, width);
            best.objective_value = r.value;
            best.evaluations = r.evaluations;
            best.iterations = r.iterations;
            best.history = r.history;
            best.stop_reason = r.stop_reason;
            have_best = true;
        }
    }
    best.total_evaluations = total;
    return best;
}

double recovery_error(const std::vector<CoefficientField>& truth, const std::vector<CoefficientField>& recovered,
                      const SpatialDomain& domain, int M) {
    if (truth.size() != recovered.size()) throw InvalidArgument("recovery_error: N mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) sum += l2_distance(truth[k], recovered[k], domain, M);
    return sum;
}

void write_inverse_result(const InverseResult& result, const ObjectiveSpec& spec,
                          const std::optional<CoefficientSet>& truth, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    write_coefficients_csv(dir / "recovered.csv", result.recovered);

    {
        std::ofstream out(dir / "summary.txt");
        if (!out) throw IoError("cannot write summary in " + dir.string());
        out << "objective_value=" << detail::format_double(result.objective_value) << '\n';
        out << "evaluations=" << result.evaluations << '\n';
        out << "total_evaluations=" << result.total_evaluations << '\n';
        out << "iterations=" << result.iterations << '\n';
        out << "stop_reason=" << result.stop_reason << '\n';
        if (result.truth_error) out << "truth_error=" << detail::format_double(*result.truth_error) << '\n';
    }
    {
        std::ofstream out(dir / "history.csv");
        if (!out) throw IoError("cannot write history in " + dir.string());
        out << "eval,best_value\n";
        for (const auto& [e, v] : result.history) out << e << ',' << detail::format_double(v) << '\n';
    }

    write_plot_data(spec.basis, spec.problem.domain, truth, result.recovered, dir);
}

void write_plot_data(const BumpBasis& basis, const SpatialDomain& dom, const std::optional<CoefficientSet>& truth,
                     const CoefficientSet& recovered, const std::filesystem::path& dir) {
    if (truth && truth->size() != recovered.size()) throw InvalidArgument("plot data: truth/recovered count mismatch");
    for (std::size_t k = 0; k < recovered.size(); ++k) {
        const auto rec = basis_field(basis, recovered[k], dom);
        std::optional<CoefficientField> tru;
        if (truth) tru = basis_field(basis, (*truth)[k], dom);
        std::ofstream out(dir / ("plot_mu" + std::to_string(k + 1) + ".csv"));
        if (!out) throw IoError("cannot write plot data in " + dir.string());
        out << "x,truth,recovered\n";
        for (int i = 0; i <= 200; ++i) {
            const double x = (i == 200) ? dom.b : dom.a + dom.length() * i / 200.0;
            out << detail::format_double(x) << ',';
            if (tru) out << detail::format_double((*tru)(x));
            out << ',' << detail::format_double(rec(x)) << '\n';
        }
    }
}

}  // namespace rdinv
