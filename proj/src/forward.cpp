#include "rdinv/forward.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rdinv/errors.hpp"
#include "text_util.hpp"

namespace rdinv {

SpatialGrid::SpatialGrid(const SpatialDomain& domain, int M) : domain_(domain), M_(M) {
    domain.check();
    if (M < 2) throw InvalidArgument("grid requires at least 2 intervals");
    h_ = domain.length() / M;
    nodes_.resize(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) {
        nodes_[static_cast<std::size_t>(i)] = (2 * i <= M) ? domain.a + i * h_ : domain.b - (M - i) * h_;
    }
}

Trajectory::Trajectory(SpatialGrid grid, std::vector<double> times, std::vector<double> values)
    : grid_(std::move(grid)), times_(std::move(times)), values_(std::move(values)) {
    if (values_.size() != times_.size() * grid_.size()) {
        throw InvalidArgument("trajectory: values do not match times x nodes");
    }
}

std::span<const double> Trajectory::profile(std::size_t time_index) const {
    return std::span<const double>(values_).subspan(time_index * grid_.size(), grid_.size());
}

double evaluate_reaction(const ReactionTerm& reaction, double x, double u, std::optional<double> t) {
    double poly = 0.0;
    for (int k = reaction.degree(); k >= 1; --k) {
        const auto& mu = reaction.mu[static_cast<std::size_t>(k - 1)];
        poly = poly * u + (t ? mu.at(*t, x) : mu(x));
    }
    poly *= u;
    if (reaction.g) poly += reaction.g(x, u);
    return poly;
}

namespace {

/// Tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// Solved in place into rhs; false on a zero pivot.
bool thomas_solve(std::vector<double>& lower, std::vector<double>& diag, std::vector<double>& upper,
                  std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) return false;
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) return false;
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    return true;
}

/// Method-of-lines right-hand side F(u) with Robin rows scaled by beta, and
/// its tridiagonal Jacobian. Zero-mass rows (beta = 0) are algebraic.
class SemiDiscreteOperator {
public:
    SemiDiscreteOperator(const ProblemSpec& problem, const SpatialGrid& grid)
        : n_(grid.size()), h_(grid.spacing()), D_(problem.D), bc_(problem.bc), reaction_(problem.reaction),
          nodes_(grid.nodes().begin(), grid.nodes().end()) {
        const int N = reaction_.degree();
        mu_.assign(static_cast<std::size_t>(N) * n_, 0.0);
        for (int k = 0; k < N; ++k) {
            for (std::size_t i = 0; i < n_; ++i) {
                mu_[static_cast<std::size_t>(k) * n_ + i] = reaction_.mu[static_cast<std::size_t>(k)](nodes_[i]);
            }
        }
        mass_.assign(n_, 1.0);
        mass_.front() = bc_.beta1;
        mass_.back() = bc_.beta2;
    }

    std::size_t size() const noexcept { return n_; }
    double mass(std::size_t i) const noexcept { return mass_[i]; }

    /// f(x_i, u) and df/du at node i.
    void reaction(std::size_t i, double u, double& f, double& df) const {
        const int N = reaction_.degree();
        double p = 0.0;
        double dp = 0.0;
        for (int k = N; k >= 1; --k) {
            dp = dp * u + p;
            p = p * u + mu_[static_cast<std::size_t>(k - 1) * n_ + i];
        }
        // p(u) = sum mu_k u^(k-1); f = u p, f' = p + u p'
        f = u * p;
        df = p + u * dp;
        if (reaction_.g) {
            const double x = nodes_[i];
            f += reaction_.g(x, u);
            if (reaction_.dg_du) {
                df += reaction_.dg_du(x, u);
            } else {
                const double e = 1e-7 * std::max(1.0, std::abs(u));
                df += (reaction_.g(x, u + e) - reaction_.g(x, u - e)) / (2.0 * e);
            }
        }
    }

    void apply(std::span<const double> u, std::span<double> F) const {
        const double c = D_ / (h_ * h_);
        double f = 0.0;
        double df = 0.0;
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            reaction(i, u[i], f, df);
            F[i] = c * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + f;
        }
        reaction(0, u[0], f, df);
        F[0] = bc_.beta1 * (2.0 * c * (u[1] - u[0]) + f) - 2.0 * D_ * bc_.alpha1 / h_ * u[0];
        const std::size_t m = n_ - 1;
        reaction(m, u[m], f, df);
        F[m] = bc_.beta2 * (2.0 * c * (u[m - 1] - u[m]) + f) - 2.0 * D_ * bc_.alpha2 / h_ * u[m];
    }

    /// dF/du as (lower, diag, upper), together with F(u).
    void jacobian(std::span<const double> u, std::span<double> F, std::vector<double>& lower,
                  std::vector<double>& diag, std::vector<double>& upper) const {
        const double c = D_ / (h_ * h_);
        double f = 0.0;
        double df = 0.0;
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            reaction(i, u[i], f, df);
            F[i] = c * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + f;
            lower[i] = c;
            diag[i] = -2.0 * c + df;
            upper[i] = c;
        }
        reaction(0, u[0], f, df);
        F[0] = bc_.beta1 * (2.0 * c * (u[1] - u[0]) + f) - 2.0 * D_ * bc_.alpha1 / h_ * u[0];
        lower[0] = 0.0;
        diag[0] = bc_.beta1 * (-2.0 * c + df) - 2.0 * D_ * bc_.alpha1 / h_;
        upper[0] = bc_.beta1 * 2.0 * c;
        const std::size_t m = n_ - 1;
        reaction(m, u[m], f, df);
        F[m] = bc_.beta2 * (2.0 * c * (u[m - 1] - u[m]) + f) - 2.0 * D_ * bc_.alpha2 / h_ * u[m];
        lower[m] = bc_.beta2 * 2.0 * c;
        diag[m] = bc_.beta2 * (-2.0 * c + df) - 2.0 * D_ * bc_.alpha2 / h_;
        upper[m] = 0.0;
    }

private:
    std::size_t n_;
    double h_;
    double D_;
    RobinBC bc_;
    const ReactionTerm& reaction_;
    std::vector<double> nodes_;
    std::vector<double> mu_;  // mu_k at node i: mu_[(k-1) * n + i]
    std::vector<double> mass_;
};

class ThetaStepper {
public:
    ThetaStepper(const SemiDiscreteOperator& op, const SolverOptions& options)
        : op_(op), opt_(options), n_(op.size()), F_old_(n_), F_new_(n_), v_(n_), lower_(n_), diag_(n_),
          upper_(n_), rhs_(n_) {}

    /// One theta step of size dt from u (in place). False if Newton fails;
    /// u is untouched in that case.
    bool step(std::vector<double>& u, double dt) {
        op_.apply(u, F_old_);
        v_ = u;
        for (int iter = 0; iter < opt_.newton_max_iter; ++iter) {
            op_.jacobian(v_, F_new_, lower_, diag_, upper_);
            double vmax = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double m = op_.mass(i);
                const double th = (m == 0.0) ? 1.0 : opt_.theta;
                rhs_[i] = -(m * (v_[i] - u[i]) / dt - th * F_new_[i] - (1.0 - th) * F_old_[i]);
                lower_[i] *= -th;
                upper_[i] *= -th;
                diag_[i] = m / dt - th * diag_[i];
                vmax = std::max(vmax, std::abs(v_[i]));
            }
            if (!thomas_solve(lower_, diag_, upper_, rhs_)) return false;
            double dmax = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                v_[i] += rhs_[i];
                dmax = std::max(dmax, std::abs(rhs_[i]));
            }
            if (!std::isfinite(dmax)) return false;
            if (dmax <= opt_.newton_tol * std::max(1.0, vmax)) {
                u = v_;
                return true;
            }
        }
        return false;
    }

private:
    const SemiDiscreteOperator& op_;
    const SolverOptions& opt_;
    std::size_t n_;
    std::vector<double> F_old_, F_new_, v_, lower_, diag_, upper_, rhs_;
};

double max_abs(std::span<const double> u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Trajectory solve(const ProblemSpec& problem, const SpatialGrid& grid, std::span<const double> output_times,
                 const SolverOptions& options) {
    problem.domain.check();
    if (grid.domain().a != problem.domain.a || grid.domain().b != problem.domain.b) {
        throw InvalidArgument("solve: grid does not cover the problem domain");
    }
    if (grid.intervals() < 16) throw InvalidArgument("solve: grid must have M >= 16 intervals");
    if (!(problem.D > 0.0)) throw InvalidArgument("solve: D must be positive");
    if (!(problem.T > 0.0)) throw InvalidArgument("solve: T must be positive");
    const auto& bc = problem.bc;
    if (bc.alpha1 < 0 || bc.beta1 < 0 || bc.alpha2 < 0 || bc.beta2 < 0 || !(bc.alpha1 + bc.beta1 > 0) ||
        !(bc.alpha2 + bc.beta2 > 0)) {
        throw InvalidArgument("solve: invalid Robin weights");
    }
    if (!problem.init.values) throw InvalidArgument("solve: missing initial condition");
    for (const auto& mu : problem.reaction.mu) {
        if (mu.is_time_dependent()) throw InvalidArgument("solve: time-dependent coefficients are not supported");
    }
    if (output_times.empty()) throw InvalidArgument("solve: no output times");
    const double t_end_tol = problem.T * (1.0 + 1e-12);
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        const double t = output_times[i];
        if (!(t >= 0.0) || t > t_end_tol || (i > 0 && !(t > output_times[i - 1]))) {
            throw InvalidArgument("solve: output times must be strictly increasing within [0, T]");
        }
    }
    const double dt_nominal = options.dt > 0.0 ? options.dt : problem.T / 600.0;

    const std::size_t n = grid.size();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = problem.init(grid[i]);
    if (!std::isfinite(max_abs(u))) throw InvalidArgument("solve: initial condition is not finite");

    const SemiDiscreteOperator op(problem, grid);
    ThetaStepper stepper(op, options);

    std::vector<double> values;
    values.reserve(output_times.size() * n);
    double t = 0.0;

    // Advance by dt, bisecting on Newton failure.
    auto advance = [&](auto&& self, double dt, int depth) -> void {
        std::vector<double> trial = u;
        if (stepper.step(trial, dt)) {
            u.swap(trial);
            t += dt;
            const double m = max_abs(u);
            if (m > options.blowup_cap) throw BlowUpDetected(t, m);
            return;
        }
        if (depth >= options.max_step_halvings) throw NewtonDivergence(t, "step size reduction exhausted");
        self(self, 0.5 * dt, depth + 1);
        self(self, 0.5 * dt, depth + 1);
    };

    for (const double target : output_times) {
        const double span = target - t;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::max(1.0, std::ceil(span / dt_nominal - 1e-9)));
            const double dt = span / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s) advance(advance, dt, 0);
            t = target;
        }
        values.insert(values.end(), u.begin(), u.end());
    }
    return Trajectory(grid, std::vector<double>(output_times.begin(), output_times.end()), std::move(values));
}

std::vector<Violation> validate_problem(const ProblemSpec& problem, double tol, int M) {
    std::vector<Violation> out;
    auto report = [&](std::string kind, std::string detail) { out.push_back({std::move(kind), std::move(detail)}); };

    const auto& dom = problem.domain;
    if (!std::isfinite(dom.a) || !std::isfinite(dom.b) || !(dom.a < dom.b)) {
        report("domain", "requires finite a < b");
        return out;
    }
    if (!(problem.D > 0.0)) report("diffusion", "D must be positive");
    if (!(problem.T > 0.0)) report("horizon", "T must be positive");

    const auto& bc = problem.bc;
    if (bc.alpha1 < 0 || bc.beta1 < 0 || bc.alpha2 < 0 || bc.beta2 < 0) {
        report("boundary_weights", "alpha and beta must be nonnegative");
    }
    if (!(bc.alpha1 + bc.beta1 > 0)) report("boundary_weights", "alpha1 + beta1 must be positive");
    if (!(bc.alpha2 + bc.beta2 > 0)) report("boundary_weights", "alpha2 + beta2 must be positive");

    if (problem.reaction.mu.empty()) report("reaction", "polynomial degree N must be at least 1");
    for (std::size_t k = 0; k < problem.reaction.mu.size(); ++k) {
        if (problem.reaction.mu[k].is_time_dependent()) {
            report("reaction", "mu_" + std::to_string(k + 1) + " depends on time");
        }
    }

    const SpatialGrid grid(dom, std::max(M, 2));
    auto g0 = [&](double x) { return problem.reaction.g ? problem.reaction.g(x, 0.0) : 0.0; };
    if (problem.reaction.g) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = g0(grid[i]);
            if (!(std::abs(v) <= tol)) {
                report("nonlinearity", "g(x, 0) = " + detail::format_double(v) + " at x = " + detail::format_double(grid[i]));
                break;
            }
        }
    }

    if (!problem.init.values) {
        report("initial_condition", "missing");
        return out;
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double v = problem.init(grid[i]);
        if (!(v > 0.0)) {
            report("positivity", "u0(" + detail::format_double(grid[i]) + ") = " + detail::format_double(v));
        }
    }

    // One-sided second-order stencils for u0' and u0'' at the endpoints.
    const double step = 1e-3 * dom.length();
    auto endpoint_check = [&](double x, double sign, double alpha, double beta, const char* side) {
        if (beta != 0.0) return;
        const double u0 = problem.init(x);
        const double u1 = problem.init(x + sign * step);
        const double u2 = problem.init(x + 2 * sign * step);
        const double u3 = problem.init(x + 3 * sign * step);
        const double second = (2.0 * u0 - 5.0 * u1 + 4.0 * u2 - u3) / (step * step);
        const double bc_res = alpha * u0;
        if (!(std::abs(bc_res) <= tol)) {
            report(std::string("compatibility_") + side,
                   "alpha u0 = " + detail::format_double(bc_res) + " with beta = 0");
        }
        const double pde_res = -problem.D * second - g0(x);
        if (!(std::abs(pde_res) <= tol)) {
            report(std::string("compatibility_") + side,
                   "-D u0'' - g(., 0) = " + detail::format_double(pde_res) + " with beta = 0");
        }
    };
    endpoint_check(dom.a, 1.0, bc.alpha1, bc.beta1, "left");
    endpoint_check(dom.b, -1.0, bc.alpha2, bc.beta2, "right");
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "t,x,u\n";
    const auto& grid = traj.grid();
    for (std::size_t k = 0; k < traj.times().size(); ++k) {
        const std::string t = detail::format_double(traj.times()[k]);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out << t << ',' << detail::format_double(grid[i]) << ',' << detail::format_double(traj.value(k, i))
                << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_final_profile_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "x,u\n";
    const std::size_t last = traj.times().size() - 1;
    for (std::size_t i = 0; i < traj.grid().size(); ++i) {
        out << detail::format_double(traj.grid()[i]) << ',' << detail::format_double(traj.value(last, i)) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rdinv
