#include "rdinv/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rdinv/errors.hpp"
#include "text_util.hpp"

namespace rdinv {

const char* to_string(CaseId id) noexcept {
    switch (id) {
        case CaseId::scaled_roots: return "scaled_roots";
        case CaseId::symmetry: return "symmetry";
        case CaseId::time_dependent: return "time_dependent";
        case CaseId::unknown_initial: return "unknown_initial";
    }
    return "unknown";
}

std::optional<CaseId> parse_case_id(const std::string& name) {
    for (auto id : {CaseId::scaled_roots, CaseId::symmetry, CaseId::time_dependent, CaseId::unknown_initial}) {
        if (name == to_string(id)) return id;
    }
    return std::nullopt;
}

std::vector<double> polynomial_from_roots(const std::vector<double>& roots) {
    // c[k] is the coefficient of u^k in prod (u - z_i), built incrementally.
    std::vector<double> c{1.0};
    for (double z : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= z * c[k];
        }
        c = std::move(next);
    }
    // f(u) = -u * prod(u - z_i): coefficient of u^(k+1) is -c[k].
    std::vector<double> mu(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) mu[k] = -c[k];
    return mu;
}

CounterExampleCase build_scaled_roots(int N, const std::vector<double>& roots, double tau,
                                      const ProblemTemplate& base) {
    if (N < 2) throw InvalidArgument("scaled_roots requires N >= 2");
    if (static_cast<int>(roots.size()) != N - 1) throw InvalidArgument("scaled_roots requires N-1 roots");
    if (!std::isfinite(tau) || tau == 1.0) throw InvalidArgument("scaled_roots requires tau != 1");
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (!(roots[i] > 0.0) || !std::isfinite(roots[i])) throw InvalidRoots("roots must be positive");
        for (std::size_t j = 0; j < i; ++j) {
            if (roots[i] == roots[j]) throw InvalidRoots("roots must be distinct");
        }
    }
    CounterExampleCase c;
    c.id = CaseId::scaled_roots;
    c.parameters = {{"N", N}, {"tau", tau}};
    for (std::size_t i = 0; i < roots.size(); ++i) c.parameters["z" + std::to_string(i + 1)] = roots[i];
    c.base = base;
    c.base.bc = RobinBC::neumann();
    c.base.g = nullptr;
    c.base.dg_du = nullptr;
    for (double m : polynomial_from_roots(roots)) {
        c.mu.push_back(CoefficientField::constant(m));
        c.mu_twin.push_back(CoefficientField::constant(tau * m));
    }
    for (double z : roots) c.ics.push_back(InitialCondition::constant(z));
    c.ics_twin = c.ics;
    c.x0 = c.base.domain.midpoint();
    c.claim = "u0 = z_i stays stationary under mu and tau*mu: traces coincide at any x0";
    return c;
}

CounterExampleCase build_symmetry(std::vector<CoefficientField> mu, std::vector<InitialCondition> ics,
                                  const ProblemTemplate& base) {
    if (mu.empty() || ics.empty()) throw InvalidArgument("symmetry requires coefficients and initial data");
    if (!base.bc.is_neumann()) throw InvalidArgument("symmetry requires Neumann boundaries");
    const auto& dom = base.domain;
    dom.check();
    const SpatialGrid grid(dom, 960);
    for (std::size_t i = 0; i < ics.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid[j];
            const double v = ics[i](x);
            const double w = ics[i](dom.reflect(x));
            if (std::abs(v - w) > 1e-12 * std::max(1.0, std::abs(v))) {
                throw AsymmetricData("initial condition " + std::to_string(i + 1) + " is not symmetric at x = " +
                                     detail::format_double(x));
            }
        }
    }
    if (base.g) {
        for (double u : {0.1, 0.5, 1.0}) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double x = grid[j];
                if (std::abs(base.g(x, u) - base.g(dom.reflect(x), u)) > 1e-12) {
                    throw AsymmetricData("g is not symmetric at x = " + detail::format_double(x));
                }
            }
        }
    }
    CounterExampleCase c;
    c.id = CaseId::symmetry;
    c.base = base;
    for (const auto& m : mu) c.mu_twin.push_back(m.reflected(dom));
    c.mu = std::move(mu);
    c.ics = std::move(ics);
    c.ics_twin = c.ics;
    c.x0 = dom.midpoint();
    c.claim = "reflected coefficients give identical value traces at the midpoint";
    return c;
}

namespace {

ProblemTemplate unit_pi_template(double D, double T) {
    if (!(D > 0.0)) throw InvalidArgument("D must be positive");
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    ProblemTemplate p;
    p.domain = {0.0, std::numbers::pi};
    p.D = D;
    p.bc = RobinBC::neumann();
    p.eps = T;
    return p;
}

}  // namespace

CounterExampleCase build_time_dependent(double D, double T) {
    CounterExampleCase c;
    c.id = CaseId::time_dependent;
    c.parameters = {{"D", D}, {"T", T}};
    c.base = unit_pi_template(D, T);

    c.mu.push_back(CoefficientField::time_dependent([D](double t, double x) {
        const double c2 = std::cos(x) * std::cos(x);
        return ((4.0 * D * t + 1.0) * c2 - 2.0 * D * t) / (1.0 + t * c2);
    }));
    c.mu_twin.push_back(CoefficientField::time_dependent([D](double t, double x) {
        const double s = std::sin(2.0 * x);
        const double s2 = s * s;
        return ((16.0 * D * t + 1.0) * s2 - 8.0 * D * t) / (1.0 + t * s2);
    }));
    c.ics.push_back(InitialCondition::constant(1.0));
    c.ics_twin.push_back(InitialCondition::constant(1.0));

    ClosedForm u;
    u.u = [](double t, double x) { return 1.0 + t * std::cos(x) * std::cos(x); };
    u.u_t = [](double, double x) { return std::cos(x) * std::cos(x); };
    u.u_x = [](double t, double x) { return -t * std::sin(2.0 * x); };
    u.u_xx = [](double t, double x) { return -2.0 * t * std::cos(2.0 * x); };
    ClosedForm v;
    v.u = [](double t, double x) { return 1.0 + t * std::sin(2.0 * x) * std::sin(2.0 * x); };
    v.u_t = [](double, double x) { return std::sin(2.0 * x) * std::sin(2.0 * x); };
    v.u_x = [](double t, double x) { return 2.0 * t * std::sin(4.0 * x); };
    v.u_xx = [](double t, double x) { return 8.0 * t * std::cos(4.0 * x); };
    c.exact = std::move(u);
    c.exact_twin = std::move(v);
    c.x0 = std::numbers::pi / 2.0;
    c.claim = "u = 1 + t cos^2 x and u~ = 1 + t sin^2 2x share value and slope at pi/2";
    return c;
}

CounterExampleCase build_unknown_initial(double D, double rho, double T) {
    if (!(rho > 0.0)) throw InvalidArgument("unknown_initial requires rho > 0");
    CounterExampleCase c;
    c.id = CaseId::unknown_initial;
    c.parameters = {{"D", D}, {"rho", rho}, {"T", T}};
    c.base = unit_pi_template(D, T);

    c.mu.push_back(CoefficientField::from_function([D, rho](double x) {
        const double c2 = std::cos(x) * std::cos(x);
        return ((4.0 * D + rho) * c2 + rho - 2.0 * D) / (1.0 + c2);
    }));
    c.mu_twin.push_back(CoefficientField::from_function([D, rho](double x) {
        const double s = std::sin(2.0 * x);
        const double s2 = s * s;
        return ((16.0 * D + rho) * s2 + rho - 8.0 * D) / (1.0 + s2);
    }));
    c.ics.push_back({[](double x) { return 1.0 + std::cos(x) * std::cos(x); }});
    c.ics_twin.push_back({[](double x) { return 1.0 + std::sin(2.0 * x) * std::sin(2.0 * x); }});

    ClosedForm u;
    u.u = [rho](double t, double x) { return (1.0 + std::cos(x) * std::cos(x)) * std::exp(rho * t); };
    u.u_t = [rho](double t, double x) { return rho * (1.0 + std::cos(x) * std::cos(x)) * std::exp(rho * t); };
    u.u_x = [rho](double t, double x) { return -std::sin(2.0 * x) * std::exp(rho * t); };
    u.u_xx = [rho](double t, double x) { return -2.0 * std::cos(2.0 * x) * std::exp(rho * t); };
    ClosedForm v;
    v.u = [rho](double t, double x) {
        const double s = std::sin(2.0 * x);
        return (1.0 + s * s) * std::exp(rho * t);
    };
    v.u_t = [rho](double t, double x) {
        const double s = std::sin(2.0 * x);
        return rho * (1.0 + s * s) * std::exp(rho * t);
    };
    v.u_x = [rho](double t, double x) { return 2.0 * std::sin(4.0 * x) * std::exp(rho * t); };
    v.u_xx = [rho](double t, double x) { return 8.0 * std::cos(4.0 * x) * std::exp(rho * t); };
    c.exact = std::move(u);
    c.exact_twin = std::move(v);
    c.x0 = std::numbers::pi / 2.0;
    c.claim = "(1 + cos^2 x) e^{rho t} and (1 + sin^2 2x) e^{rho t} share value and slope at pi/2";
    return c;
}

bool VerificationReport::all_passed() const noexcept {
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.passed(); });
}

std::string VerificationReport::to_text() const {
    std::ostringstream out;
    out << "case: " << to_string(id) << '\n';
    out << "claim: " << claim << '\n';
    for (const auto& c : claims) {
        out << "  [" << (c.passed() ? "PASS" : "FAIL") << "] " << c.name << ": measured "
            << detail::format_double(c.measured) << (c.lower_bound ? " > " : " <= ")
            << detail::format_double(c.threshold) << '\n';
    }
    out << "result: " << (all_passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

void VerificationReport::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "case,claim,measured,relation,threshold,pass\n";
    for (const auto& c : claims) {
        out << to_string(id) << ',' << c.name << ',' << detail::format_double(c.measured) << ','
            << (c.lower_bound ? "gt" : "le") << ',' << detail::format_double(c.threshold) << ','
            << (c.passed() ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// max |u_t - D u_xx - f(t, x, u)| over an n x n tensor grid of [0, T] x [a, b].
double closed_form_residual(const ClosedForm& cf, const ReactionTerm& reaction, double D, const SpatialDomain& dom,
                            double T, int n) {
    double worst = 0.0;
    for (int it = 0; it < n; ++it) {
        const double t = T * it / (n - 1);
        for (int ix = 0; ix < n; ++ix) {
            const double x = dom.a + dom.length() * ix / (n - 1);
            const double u = cf.u(t, x);
            const double r = cf.u_t(t, x) - D * cf.u_xx(t, x) - evaluate_reaction(reaction, x, u, t);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

/// Same residual with central differences in place of the exact derivatives.
double closed_form_residual_fd(const ClosedForm& cf, const ReactionTerm& reaction, double D,
                               const SpatialDomain& dom, double T, int n) {
    const double e = 1e-4;
    double worst = 0.0;
    for (int it = 0; it < n; ++it) {
        const double t = e + (T - 2 * e) * it / (n - 1);
        for (int ix = 0; ix < n; ++ix) {
            const double x = dom.a + dom.length() * ix / (n - 1);
            const double u = cf.u(t, x);
            const double ut = (cf.u(t + e, x) - cf.u(t - e, x)) / (2 * e);
            const double uxx = (cf.u(t, x + e) - 2 * u + cf.u(t, x - e)) / (e * e);
            worst = std::max(worst, std::abs(ut - D * uxx - evaluate_reaction(reaction, x, u, t)));
        }
    }
    return worst;
}

void verify_solver_pairs(const CounterExampleCase& c, const VerifyOptions& opt, VerificationReport& rep,
                         bool compare_derivatives, double tol) {
    const SpatialGrid grid(c.base.domain, opt.M);
    const auto times = uniform_probe_times(c.base.eps, opt.K);
    for (std::size_t i = 0; i < c.ics.size(); ++i) {
        const auto a = solve(c.problem(i), grid, times, opt.solver);
        const auto b = solve(c.twin_problem(i), grid, times, opt.solver);
        const auto pa = probe(a, c.x0, times);
        const auto pb = probe(b, c.x0, times);
        const std::string tag = "experiment" + std::to_string(i + 1);
        rep.claims.push_back({tag + "_value_trace_gap", max_abs_diff(pa.u, pb.u), tol});
        if (compare_derivatives) {
            rep.claims.push_back({tag + "_slope_trace_gap", max_abs_diff(pa.dudx, pb.dudx), tol});
        } else {
            // The slope data still separates the pair.
            rep.claims.push_back({tag + "_slope_trace_gap", max_abs_diff(pa.dudx, pb.dudx), 1e-8, true});
        }
        if (c.id == CaseId::symmetry) {
            double worst = 0.0;
            const std::size_t n = grid.size();
            for (std::size_t k = 0; k < times.size(); ++k) {
                for (std::size_t j = 0; j < n; ++j) {
                    worst = std::max(worst, std::abs(a.value(k, j) - b.value(k, n - 1 - j)));
                }
            }
            rep.claims.push_back({tag + "_mirrored_trajectory_gap", worst, 1e-12});
        }
    }
}

}  // namespace

VerificationReport verify(const CounterExampleCase& c, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.id = c.id;
    rep.claim = c.claim;
    const auto& dom = c.base.domain;

    switch (c.id) {
        case CaseId::scaled_roots: {
            std::size_t violations = 0;
            for (std::size_t i = 0; i < c.ics.size(); ++i) {
                violations += validate_problem(c.problem(i), 1e-8).size();
                violations += validate_problem(c.twin_problem(i), 1e-8).size();
            }
            rep.claims.push_back({"admissibility_violations", static_cast<double>(violations), 0.0});
            verify_solver_pairs(c, opt, rep, true, 1e-10);
            break;
        }
        case CaseId::symmetry:
            verify_solver_pairs(c, opt, rep, false, 1e-9);
            break;
        case CaseId::time_dependent:
        case CaseId::unknown_initial: {
            ReactionTerm r1{c.mu, nullptr, nullptr};
            ReactionTerm r2{c.mu_twin, nullptr, nullptr};
            const double T = c.base.eps;
            const double D = c.base.D;
            rep.claims.push_back({"residual_exact_derivatives", closed_form_residual(*c.exact, r1, D, dom, T, 20), 1e-10});
            rep.claims.push_back(
                {"twin_residual_exact_derivatives", closed_form_residual(*c.exact_twin, r2, D, dom, T, 20), 1e-10});
            rep.claims.push_back({"residual_finite_differences", closed_form_residual_fd(*c.exact, r1, D, dom, T, 20), 1e-5});
            rep.claims.push_back(
                {"twin_residual_finite_differences", closed_form_residual_fd(*c.exact_twin, r2, D, dom, T, 20), 1e-5});

            double value_gap = 0.0;
            double slope_gap = 0.0;
            for (double t : uniform_probe_times(T, opt.K)) {
                value_gap = std::max(value_gap, std::abs(c.exact->u(t, c.x0) - c.exact_twin->u(t, c.x0)));
                slope_gap = std::max(slope_gap, std::abs(c.exact->u_x(t, c.x0) - c.exact_twin->u_x(t, c.x0)));
            }
            rep.claims.push_back({"closed_form_value_trace_gap", value_gap, 1e-12});
            rep.claims.push_back({"closed_form_slope_trace_gap", slope_gap, 1e-12});

            double neumann = 0.0;
            for (double t : {0.0, T}) {
                for (double x : {dom.a, dom.b}) {
                    neumann = std::max({neumann, std::abs(c.exact->u_x(t, x)), std::abs(c.exact_twin->u_x(t, x))});
                }
            }
            rep.claims.push_back({"neumann_compatibility", neumann, 1e-12});

            if (c.id == CaseId::unknown_initial) {
                // Both static problems through the time stepper, against the closed forms.
                const SpatialGrid grid(dom, opt.M);
                const auto times = uniform_probe_times(T, opt.K);
                const double h = grid.spacing();
                const double tol = 20.0 * h * h * std::exp(c.parameters.at("rho") * T);
                const auto a = solve(c.problem(0), grid, times, opt.solver);
                const auto b = solve(c.twin_problem(0), grid, times, opt.solver);
                double err = 0.0;
                for (std::size_t k = 0; k < times.size(); ++k) {
                    for (std::size_t j = 0; j < grid.size(); ++j) {
                        err = std::max({err, std::abs(a.value(k, j) - c.exact->u(times[k], grid[j])),
                                        std::abs(b.value(k, j) - c.exact_twin->u(times[k], grid[j]))});
                    }
                }
                rep.claims.push_back({"solver_vs_closed_form", err, tol});
                const auto pa = probe(a, c.x0, times);
                const auto pb = probe(b, c.x0, times);
                rep.claims.push_back({"solver_value_trace_gap", max_abs_diff(pa.u, pb.u), tol});
                rep.claims.push_back({"solver_slope_trace_gap", max_abs_diff(pa.dudx, pb.dudx), tol});
            }
            break;
        }
    }

    // Non-vacuity: the two coefficient families genuinely differ.
    double coef_gap = 0.0;
    for (std::size_t k = 0; k < c.mu.size(); ++k) coef_gap += l2_distance(c.mu[k], c.mu_twin[k], dom);
    rep.claims.push_back({"coefficient_l2_gap", coef_gap, 0.1, true});
    return rep;
}

}  // namespace rdinv
