#include "rdinv/rdinv.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "rdinv/counterexample.hpp"
#include "rdinv/errors.hpp"
#include "rdinv/inverse.hpp"

struct rdinv_problem {
    rdinv::SpatialDomain domain;
    double D = 0.1;
    double T = 0.3;
    rdinv::RobinBC bc;
    std::vector<rdinv::CoefficientField> mu;
    rdinv::ReactionTerm::Nonlinearity g;
    rdinv::ReactionTerm::Nonlinearity dg_du;
    std::vector<rdinv::InitialCondition> ics;

    rdinv::ProblemTemplate templ(double horizon) const {
        rdinv::ProblemTemplate t;
        t.domain = domain;
        t.D = D;
        t.bc = bc;
        t.eps = horizon;
        t.g = g;
        t.dg_du = dg_du;
        return t;
    }
};

struct rdinv_trajectory {
    rdinv::Trajectory traj;
};

struct rdinv_measurements {
    rdinv::MeasurementSet set;
};

struct rdinv_result {
    rdinv::InverseResult result;
    rdinv::ObjectiveSpec spec;
    std::optional<rdinv::CoefficientSet> truth;
};

struct rdinv_report {
    rdinv::VerificationReport report;
    std::string text;
};

namespace {

thread_local std::string last_error;

rdinv_status from_code(rdinv::ErrorCode c) {
    using rdinv::ErrorCode;
    switch (c) {
        case ErrorCode::InvalidArgument: return RDINV_INVALID_ARGUMENT;
        case ErrorCode::BlowUpDetected: return RDINV_BLOWUP_DETECTED;
        case ErrorCode::NewtonDivergence: return RDINV_NEWTON_DIVERGENCE;
        case ErrorCode::ProbeOutsideDomain: return RDINV_PROBE_OUTSIDE_DOMAIN;
        case ErrorCode::MalformedTraceFile: return RDINV_MALFORMED_TRACE_FILE;
        case ErrorCode::MalformedCoefficientFile: return RDINV_MALFORMED_COEFFICIENT_FILE;
        case ErrorCode::BudgetTooSmall: return RDINV_BUDGET_TOO_SMALL;
        case ErrorCode::InvalidRoots: return RDINV_INVALID_ROOTS;
        case ErrorCode::AsymmetricData: return RDINV_ASYMMETRIC_DATA;
        case ErrorCode::Io: return RDINV_IO_ERROR;
    }
    return RDINV_INTERNAL_ERROR;
}

template <class F>
rdinv_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return RDINV_OK;
    } catch (const rdinv::Error& e) {
        last_error = std::string(rdinv::to_string(e.code())) + ": " + e.what();
        return from_code(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return RDINV_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return RDINV_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown error";
        return RDINV_INTERNAL_ERROR;
    }
}

template <class T>
void require(const T* p, const char* what) {
    if (!p) throw rdinv::InvalidArgument(std::string(what) + " is null");
}

rdinv::SolverOptions solver_from(const rdinv_solver_options* o) {
    rdinv::SolverOptions s;
    if (!o) return s;
    s.theta = o->theta;
    s.dt = o->dt;
    s.newton_tol = o->newton_tol;
    s.newton_max_iter = o->newton_max_iter;
    s.blowup_cap = o->blowup_cap;
    s.max_step_halvings = o->max_step_halvings;
    return s;
}

rdinv::CoefficientSet unpack(int n, int N, const double* h) {
    if (n < 3) throw rdinv::InvalidArgument("basis size n must be >= 3");
    if (N < 1) throw rdinv::InvalidArgument("N must be >= 1");
    require(h, "coefficient array");
    const auto width = static_cast<std::size_t>(n) + 1;
    rdinv::CoefficientSet out(static_cast<std::size_t>(N));
    for (std::size_t k = 0; k < out.size(); ++k) out[k].assign(h + k * width, h + (k + 1) * width);
    return out;
}

void pack(const rdinv::CoefficientSet& set, double* h) {
    for (const auto& row : set) h = std::copy(row.begin(), row.end(), h);
}

rdinv::ObjectiveSpec objective_spec(const rdinv_problem& p, const rdinv_measurements& m,
                                    const rdinv_invert_options& o) {
    rdinv::ObjectiveSpec spec;
    spec.problem = p.templ(m.set.eps);
    spec.measurements = m.set;
    if (p.ics.size() != m.set.count()) {
        throw rdinv::InvalidArgument("problem has " + std::to_string(p.ics.size()) +
                                     " initial conditions but the measurements hold " +
                                     std::to_string(m.set.count()) + " traces");
    }
    spec.measurements.initial_conditions = p.ics;
    spec.basis = rdinv::BumpBasis(o.n);
    spec.N = static_cast<int>(m.set.count());
    spec.include_derivative = o.include_derivative != 0;
    spec.derivative_weight = o.derivative_weight;
    spec.M = o.M;
    spec.solver = solver_from(&o.solver);
    spec.threads = o.threads;
    spec.penalty = o.penalty;
    spec.check();
    return spec;
}

rdinv_status emit_report(rdinv::VerificationReport rep, rdinv_report** out) {
    auto* r = new rdinv_report{std::move(rep), {}};
    r->text = r->report.to_text();
    *out = r;
    return RDINV_OK;
}

}  // namespace

extern "C" {

const char* rdinv_last_error(void) { return last_error.c_str(); }

const char* rdinv_status_name(rdinv_status s) {
    switch (s) {
        case RDINV_OK: return "Ok";
        case RDINV_INVALID_ARGUMENT: return "InvalidArgument";
        case RDINV_BLOWUP_DETECTED: return "BlowUpDetected";
        case RDINV_NEWTON_DIVERGENCE: return "NewtonDivergence";
        case RDINV_PROBE_OUTSIDE_DOMAIN: return "ProbeOutsideDomain";
        case RDINV_MALFORMED_TRACE_FILE: return "MalformedTraceFile";
        case RDINV_MALFORMED_COEFFICIENT_FILE: return "MalformedCoefficientFile";
        case RDINV_BUDGET_TOO_SMALL: return "BudgetTooSmall";
        case RDINV_INVALID_ROOTS: return "InvalidRoots";
        case RDINV_ASYMMETRIC_DATA: return "AsymmetricData";
        case RDINV_IO_ERROR: return "IoError";
        case RDINV_INTERNAL_ERROR: return "InternalError";
    }
    return "Unknown";
}

rdinv_status rdinv_problem_create(double a, double b, double D, double T, rdinv_problem** out) {
    return guarded([&] {
        require(out, "out");
        rdinv::SpatialDomain dom{a, b};
        dom.check();
        if (!(D > 0.0)) throw rdinv::InvalidArgument("D must be positive");
        if (!(T > 0.0)) throw rdinv::InvalidArgument("T must be positive");
        auto* p = new rdinv_problem;
        p->domain = dom;
        p->D = D;
        p->T = T;
        *out = p;
    });
}

void rdinv_problem_destroy(rdinv_problem* p) { delete p; }

rdinv_status rdinv_problem_set_robin(rdinv_problem* p, double alpha1, double beta1, double alpha2, double beta2) {
    return guarded([&] {
        require(p, "problem");
        p->bc = {alpha1, beta1, alpha2, beta2};
    });
}

rdinv_status rdinv_problem_set_horizon(rdinv_problem* p, double T) {
    return guarded([&] {
        require(p, "problem");
        if (!(T > 0.0)) throw rdinv::InvalidArgument("T must be positive");
        p->T = T;
    });
}

rdinv_status rdinv_problem_set_basis_coefficients(rdinv_problem* p, int n, int N, const double* h) {
    return guarded([&] {
        require(p, "problem");
        const auto set = unpack(n, N, h);
        const rdinv::BumpBasis basis(n);
        p->mu.clear();
        for (const auto& row : set) p->mu.push_back(rdinv::basis_field(basis, row, p->domain));
    });
}

rdinv_status rdinv_problem_set_constant_coefficients(rdinv_problem* p, int N, const double* mu) {
    return guarded([&] {
        require(p, "problem");
        if (N < 1) throw rdinv::InvalidArgument("N must be >= 1");
        require(mu, "coefficient array");
        p->mu.clear();
        for (int k = 0; k < N; ++k) p->mu.push_back(rdinv::CoefficientField::constant(mu[k]));
    });
}

rdinv_status rdinv_problem_set_coefficient_fn(rdinv_problem* p, int k, rdinv_field_fn fn, void* user) {
    return guarded([&] {
        require(p, "problem");
        if (!fn) throw rdinv::InvalidArgument("coefficient function is null");
        if (k < 1 || k > static_cast<int>(p->mu.size()) + 1) throw rdinv::InvalidArgument("coefficient index out of range");
        auto field = rdinv::CoefficientField::from_function([fn, user](double x) { return fn(x, user); });
        if (k == static_cast<int>(p->mu.size()) + 1) {
            p->mu.push_back(std::move(field));
        } else {
            p->mu[static_cast<std::size_t>(k - 1)] = std::move(field);
        }
    });
}

rdinv_status rdinv_problem_set_nonlinearity(rdinv_problem* p, rdinv_nonlinearity_fn g, rdinv_nonlinearity_fn dg_du,
                                            void* user) {
    return guarded([&] {
        require(p, "problem");
        p->g = nullptr;
        p->dg_du = nullptr;
        if (g) p->g = [g, user](double x, double u) { return g(x, u, user); };
        if (g && dg_du) p->dg_du = [dg_du, user](double x, double u) { return dg_du(x, u, user); };
    });
}

rdinv_status rdinv_problem_add_initial_constant(rdinv_problem* p, double value) {
    return guarded([&] {
        require(p, "problem");
        p->ics.push_back(rdinv::InitialCondition::constant(value));
    });
}

rdinv_status rdinv_problem_add_initial_fn(rdinv_problem* p, rdinv_field_fn fn, void* user) {
    return guarded([&] {
        require(p, "problem");
        if (!fn) throw rdinv::InvalidArgument("initial condition function is null");
        p->ics.push_back({[fn, user](double x) { return fn(x, user); }});
    });
}

rdinv_status rdinv_problem_clear_initial(rdinv_problem* p) {
    return guarded([&] {
        require(p, "problem");
        p->ics.clear();
    });
}

rdinv_status rdinv_problem_initial_count(const rdinv_problem* p, size_t* count) {
    return guarded([&] {
        require(p, "problem");
        require(count, "count");
        *count = p->ics.size();
    });
}

rdinv_status rdinv_problem_validate(const rdinv_problem* p, double tol, int M, size_t* violations, char* detail,
                                    size_t detail_len) {
    return guarded([&] {
        require(p, "problem");
        require(violations, "violations");
        if (p->ics.empty()) throw rdinv::InvalidArgument("problem has no initial conditions");
        std::vector<rdinv::Violation> all;
        for (const auto& ic : p->ics) {
            auto v = rdinv::validate_problem(p->templ(p->T).instantiate(p->mu, ic), tol, M);
            all.insert(all.end(), v.begin(), v.end());
        }
        *violations = all.size();
        if (detail && detail_len > 0) {
            const std::string msg = all.empty() ? std::string() : all.front().kind + ": " + all.front().detail;
            const std::size_t n = std::min(msg.size(), detail_len - 1);
            std::memcpy(detail, msg.data(), n);
            detail[n] = '\0';
        }
    });
}

void rdinv_solver_options_default(rdinv_solver_options* opt) {
    if (!opt) return;
    const rdinv::SolverOptions s;
    *opt = {s.theta, s.dt, s.newton_tol, s.newton_max_iter, s.blowup_cap, s.max_step_halvings};
}

rdinv_status rdinv_solve(const rdinv_problem* p, size_t experiment, int M, const double* times, size_t ntimes,
                         const rdinv_solver_options* opt, rdinv_trajectory** out) {
    return guarded([&] {
        require(p, "problem");
        require(out, "out");
        require(times, "times");
        if (experiment >= p->ics.size()) throw rdinv::InvalidArgument("experiment index out of range");
        const rdinv::SpatialGrid grid(p->domain, M);
        auto spec = p->templ(p->T).instantiate(p->mu, p->ics[experiment]);
        auto traj = rdinv::solve(spec, grid, std::span<const double>(times, ntimes), solver_from(opt));
        *out = new rdinv_trajectory{std::move(traj)};
    });
}

void rdinv_trajectory_destroy(rdinv_trajectory* t) { delete t; }

rdinv_status rdinv_trajectory_shape(const rdinv_trajectory* t, size_t* ntimes, size_t* nnodes) {
    return guarded([&] {
        require(t, "trajectory");
        if (ntimes) *ntimes = t->traj.times().size();
        if (nnodes) *nnodes = t->traj.grid().size();
    });
}

rdinv_status rdinv_trajectory_copy(const rdinv_trajectory* t, double* times, double* nodes, double* values) {
    return guarded([&] {
        require(t, "trajectory");
        if (times) std::copy(t->traj.times().begin(), t->traj.times().end(), times);
        if (nodes) std::copy(t->traj.grid().nodes().begin(), t->traj.grid().nodes().end(), nodes);
        if (values) std::copy(t->traj.values().begin(), t->traj.values().end(), values);
    });
}

rdinv_status rdinv_trajectory_probe(const rdinv_trajectory* t, double x0, double* u, double* dudx) {
    return guarded([&] {
        require(t, "trajectory");
        const auto tr = rdinv::probe(t->traj, x0);
        if (u) std::copy(tr.u.begin(), tr.u.end(), u);
        if (dudx) std::copy(tr.dudx.begin(), tr.dudx.end(), dudx);
    });
}

rdinv_status rdinv_trajectory_write_csv(const rdinv_trajectory* t, const char* path) {
    return guarded([&] {
        require(t, "trajectory");
        require(path, "path");
        rdinv::write_trajectory_csv(t->traj, path);
    });
}

rdinv_status rdinv_trajectory_write_final_csv(const rdinv_trajectory* t, const char* path) {
    return guarded([&] {
        require(t, "trajectory");
        require(path, "path");
        rdinv::write_final_profile_csv(t->traj, path);
    });
}

rdinv_status rdinv_synthesize(const rdinv_problem* p, double x0, double eps, int K, int M,
                              const rdinv_solver_options* opt, int threads, rdinv_measurements** out) {
    return guarded([&] {
        require(p, "problem");
        require(out, "out");
        if (p->ics.empty()) throw rdinv::InvalidArgument("problem has no initial conditions");
        if (!(eps > 0.0)) throw rdinv::InvalidArgument("eps must be positive");
        if (K < 2) throw rdinv::InvalidArgument("K must be >= 2");
        const auto times = rdinv::uniform_probe_times(eps, K);
        auto set = rdinv::synthesize_measurements(p->templ(eps), p->mu, p->ics, x0, times, M, solver_from(opt),
                                                  threads);
        *out = new rdinv_measurements{std::move(set)};
    });
}

void rdinv_measurements_destroy(rdinv_measurements* m) { delete m; }

rdinv_status rdinv_measurements_read(const char* path, rdinv_measurements** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new rdinv_measurements{rdinv::read_traces(path)};
    });
}

rdinv_status rdinv_measurements_write(const rdinv_measurements* m, const char* path) {
    return guarded([&] {
        require(m, "measurements");
        require(path, "path");
        rdinv::write_traces(m->set, path);
    });
}

rdinv_status rdinv_measurements_add_noise(rdinv_measurements* m, double sigma, uint64_t seed) {
    return guarded([&] {
        require(m, "measurements");
        rdinv::add_measurement_noise(m->set, sigma, seed);
    });
}

rdinv_status rdinv_measurements_info(const rdinv_measurements* m, double* x0, double* eps, size_t* count,
                                     size_t* samples) {
    return guarded([&] {
        require(m, "measurements");
        if (x0) *x0 = m->set.x0;
        if (eps) *eps = m->set.eps;
        if (count) *count = m->set.count();
        if (samples) *samples = m->set.traces.empty() ? 0 : m->set.traces.front().size();
    });
}

rdinv_status rdinv_measurements_trace(const rdinv_measurements* m, size_t i, double* times, double* u,
                                      double* dudx) {
    return guarded([&] {
        require(m, "measurements");
        if (i >= m->set.count()) throw rdinv::InvalidArgument("trace index out of range");
        const auto& tr = m->set.traces[i];
        if (times) std::copy(tr.times.begin(), tr.times.end(), times);
        if (u) std::copy(tr.u.begin(), tr.u.end(), u);
        if (dudx) std::copy(tr.dudx.begin(), tr.dudx.end(), dudx);
    });
}

void rdinv_invert_options_default(rdinv_invert_options* opt) {
    if (!opt) return;
    const rdinv::ObjectiveSpec spec;
    const rdinv::MinimizeOptions mo;
    opt->n = spec.basis.n();
    opt->M = spec.M;
    opt->budget = mo.budget;
    opt->include_derivative = spec.include_derivative ? 1 : 0;
    opt->derivative_weight = spec.derivative_weight;
    opt->fd_step = mo.fd_step;
    opt->grad_tol = mo.grad_tol;
    opt->step_tol = mo.step_tol;
    opt->restarts = mo.restarts;
    opt->seed = mo.seed;
    opt->threads = spec.threads;
    opt->penalty = spec.penalty;
    rdinv_solver_options_default(&opt->solver);
}

rdinv_status rdinv_objective(const rdinv_problem* p, const rdinv_measurements* m, const rdinv_invert_options* opt,
                             const double* h, double* value) {
    return guarded([&] {
        require(p, "problem");
        require(m, "measurements");
        require(opt, "options");
        require(value, "value");
        const auto spec = objective_spec(*p, *m, *opt);
        *value = rdinv::objective(spec, unpack(opt->n, spec.N, h));
    });
}

rdinv_status rdinv_invert(const rdinv_problem* p, const rdinv_measurements* m, const rdinv_invert_options* opt,
                          const double* init, const double* truth, rdinv_result** out) {
    return guarded([&] {
        require(p, "problem");
        require(m, "measurements");
        require(opt, "options");
        require(out, "out");
        auto spec = objective_spec(*p, *m, *opt);
        const auto start = init ? unpack(opt->n, spec.N, init) : rdinv::zero_coefficients(spec.basis, spec.N);
        rdinv::MinimizeOptions mo;
        mo.budget = opt->budget;
        mo.fd_step = opt->fd_step;
        mo.grad_tol = opt->grad_tol;
        mo.step_tol = opt->step_tol;
        mo.restarts = opt->restarts;
        mo.seed = opt->seed;
        auto res = rdinv::minimize(spec, start, mo);
        std::optional<rdinv::CoefficientSet> tru;
        if (truth) {
            tru = unpack(opt->n, spec.N, truth);
            res.truth_error = rdinv::recovery_error(spec.fields(*tru), spec.fields(res.recovered), spec.problem.domain);
        }
        *out = new rdinv_result{std::move(res), std::move(spec), std::move(tru)};
    });
}

void rdinv_result_destroy(rdinv_result* r) { delete r; }

rdinv_status rdinv_result_info(const rdinv_result* r, double* objective, int* evaluations, int* total_evaluations,
                               int* iterations, int* has_truth, double* truth_error) {
    return guarded([&] {
        require(r, "result");
        const auto& res = r->result;
        if (objective) *objective = res.objective_value;
        if (evaluations) *evaluations = res.evaluations;
        if (total_evaluations) *total_evaluations = res.total_evaluations;
        if (iterations) *iterations = res.iterations;
        if (has_truth) *has_truth = res.truth_error ? 1 : 0;
        if (truth_error && res.truth_error) *truth_error = *res.truth_error;
    });
}

rdinv_status rdinv_result_shape(const rdinv_result* r, int* N, int* n) {
    return guarded([&] {
        require(r, "result");
        if (N) *N = static_cast<int>(r->result.recovered.size());
        if (n) *n = r->spec.basis.n();
    });
}

rdinv_status rdinv_result_coefficients(const rdinv_result* r, double* h) {
    return guarded([&] {
        require(r, "result");
        require(h, "output array");
        pack(r->result.recovered, h);
    });
}

const char* rdinv_result_stop_reason(const rdinv_result* r) { return r ? r->result.stop_reason.c_str() : ""; }

rdinv_status rdinv_result_history(const rdinv_result* r, size_t* count, int* evals, double* best) {
    return guarded([&] {
        require(r, "result");
        const auto& h = r->result.history;
        if (count) *count = h.size();
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (evals) evals[i] = h[i].first;
            if (best) best[i] = h[i].second;
        }
    });
}

rdinv_status rdinv_result_write(const rdinv_result* r, const char* dir) {
    return guarded([&] {
        require(r, "result");
        require(dir, "dir");
        rdinv::write_inverse_result(r->result, r->spec, r->truth, dir);
    });
}

rdinv_status rdinv_basis_sample(int n, double lo, double hi, uint64_t seed, double* h) {
    return guarded([&] {
        require(h, "output array");
        if (n < 3) throw rdinv::InvalidArgument("basis size n must be >= 3");
        const auto v = rdinv::sample_random(rdinv::BumpBasis(n), lo, hi, seed);
        std::copy(v.begin(), v.end(), h);
    });
}

rdinv_status rdinv_basis_eval(int n, const double* h, double a, double b, double x, double* value) {
    return guarded([&] {
        require(value, "value");
        const rdinv::BumpBasis basis(n);
        const auto row = unpack(n, 1, h).front();
        *value = rdinv::basis_field(basis, row, {a, b})(x);
    });
}

rdinv_status rdinv_recovery_error(int n, int N, const double* truth, const double* recovered, double a, double b,
                                  double* out) {
    return guarded([&] {
        require(out, "out");
        const rdinv::BumpBasis basis(n);
        const rdinv::SpatialDomain dom{a, b};
        dom.check();
        std::vector<rdinv::CoefficientField> t, r;
        for (const auto& row : unpack(n, N, truth)) t.push_back(rdinv::basis_field(basis, row, dom));
        for (const auto& row : unpack(n, N, recovered)) r.push_back(rdinv::basis_field(basis, row, dom));
        *out = rdinv::recovery_error(t, r, dom);
    });
}

rdinv_status rdinv_coefficients_write(const char* path, int N, int n, const double* h) {
    return guarded([&] {
        require(path, "path");
        rdinv::write_coefficients_csv(path, unpack(n, N, h));
    });
}

rdinv_status rdinv_coefficients_read(const char* path, int* N, int* n, double* h, size_t capacity) {
    return guarded([&] {
        require(path, "path");
        const auto set = rdinv::read_coefficients_csv(path);
        const auto width = set.front().size();
        if (width < 4) throw rdinv::MalformedCoefficientFile(std::string(path) + ": fewer than 4 amplitudes per row");
        if (N) *N = static_cast<int>(set.size());
        if (n) *n = static_cast<int>(width) - 1;
        if (h) {
            if (capacity < set.size() * width) throw rdinv::InvalidArgument("coefficient buffer too small");
            pack(set, h);
        }
    });
}

rdinv_status rdinv_write_plot_data(int n, int N, const double* truth, const double* recovered, double a, double b,
                                   const char* dir) {
    return guarded([&] {
        require(dir, "dir");
        const rdinv::SpatialDomain dom{a, b};
        dom.check();
        std::optional<rdinv::CoefficientSet> tru;
        if (truth) tru = unpack(n, N, truth);
        rdinv::write_plot_data(rdinv::BumpBasis(n), dom, tru, unpack(n, N, recovered), dir);
    });
}

rdinv_status rdinv_counterexample_scaled_roots(int N, const double* roots, size_t nroots, double tau, double a,
                                               double b, double D, double T, int M, int K, rdinv_report** out) {
    return guarded([&] {
        require(out, "out");
        if (nroots > 0) require(roots, "roots");
        rdinv::ProblemTemplate base;
        base.domain = {a, b};
        base.domain.check();
        base.D = D;
        base.eps = T;
        auto c = rdinv::build_scaled_roots(N, std::vector<double>(roots, roots + nroots), tau, base);
        emit_report(rdinv::verify(c, {M, K, {}}), out);
    });
}

rdinv_status rdinv_counterexample_symmetry(const rdinv_problem* p, int M, int K, rdinv_report** out) {
    return guarded([&] {
        require(p, "problem");
        require(out, "out");
        auto c = rdinv::build_symmetry(p->mu, p->ics, p->templ(p->T));
        emit_report(rdinv::verify(c, {M, K, {}}), out);
    });
}

rdinv_status rdinv_counterexample_time_dependent(double D, double T, int K, rdinv_report** out) {
    return guarded([&] {
        require(out, "out");
        emit_report(rdinv::verify(rdinv::build_time_dependent(D, T), {240, K, {}}), out);
    });
}

rdinv_status rdinv_counterexample_unknown_initial(double D, double rho, double T, int M, int K,
                                                  rdinv_report** out) {
    return guarded([&] {
        require(out, "out");
        emit_report(rdinv::verify(rdinv::build_unknown_initial(D, rho, T), {M, K, {}}), out);
    });
}

void rdinv_report_destroy(rdinv_report* r) { delete r; }

rdinv_status rdinv_report_passed(const rdinv_report* r, int* passed) {
    return guarded([&] {
        require(r, "report");
        require(passed, "passed");
        *passed = r->report.all_passed() ? 1 : 0;
    });
}

const char* rdinv_report_text(const rdinv_report* r) { return r ? r->text.c_str() : ""; }

rdinv_status rdinv_report_claim_count(const rdinv_report* r, size_t* count) {
    return guarded([&] {
        require(r, "report");
        require(count, "count");
        *count = r->report.claims.size();
    });
}

rdinv_status rdinv_report_claim(const rdinv_report* r, size_t i, const char** name, double* measured,
                                double* threshold, int* lower_bound, int* passed) {
    return guarded([&] {
        require(r, "report");
        if (i >= r->report.claims.size()) throw rdinv::InvalidArgument("claim index out of range");
        const auto& c = r->report.claims[i];
        if (name) *name = c.name.c_str();
        if (measured) *measured = c.measured;
        if (threshold) *threshold = c.threshold;
        if (lower_bound) *lower_bound = c.lower_bound ? 1 : 0;
        if (passed) *passed = c.passed() ? 1 : 0;
    });
}

rdinv_status rdinv_report_write_csv(const rdinv_report* r, const char* path) {
    return guarded([&] {
        require(r, "report");
        require(path, "path");
        r->report.write_csv(path);
    });
}

}  // extern "C"
