#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdinv/field.hpp"

namespace rdinv {

/// Weights of  alpha1 u(a) - beta1 u_x(a) = 0  and  alpha2 u(b) + beta2 u_x(b) = 0.
struct RobinBC {
    double alpha1 = 0.0;
    double beta1 = 1.0;
    double alpha2 = 0.0;
    double beta2 = 1.0;

    static RobinBC neumann() { return {0.0, 1.0, 0.0, 1.0}; }
    static RobinBC dirichlet() { return {1.0, 0.0, 1.0, 0.0}; }
    bool is_neumann() const noexcept { return alpha1 == 0.0 && alpha2 == 0.0; }
};

/// sum_{k=1..N} mu_k(x) u^k + g(x, u)
struct ReactionTerm {
    using Nonlinearity = std::function<double(double x, double u)>;

    std::vector<CoefficientField> mu;  ///< mu[k-1] multiplies u^k
    Nonlinearity g;                    ///< known part; empty means g = 0
    Nonlinearity dg_du;                ///< optional; finite differences otherwise

    int degree() const noexcept { return static_cast<int>(mu.size()); }
};

/// u0(x). Positive on the open interval for an admissible problem.
struct InitialCondition {
    std::function<double(double x)> values;

    static InitialCondition constant(double c) {
        return {[c](double) { return c; }};
    }
    double operator()(double x) const { return values(x); }
};

struct ProblemSpec {
    SpatialDomain domain;
    double D = 0.1;
    RobinBC bc;
    ReactionTerm reaction;
    InitialCondition init;
    double T = 0.3;
};

/// M+1 uniform nodes on [a, b]. The node set is mirror-symmetric: node M-i
/// is computed from b exactly as node i is computed from a.
class SpatialGrid {
public:
    SpatialGrid(const SpatialDomain& domain, int M);

    const SpatialDomain& domain() const noexcept { return domain_; }
    int intervals() const noexcept { return M_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double spacing() const noexcept { return h_; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double operator[](std::size_t i) const noexcept { return nodes_[i]; }

private:
    SpatialDomain domain_;
    int M_;
    double h_;
    std::vector<double> nodes_;
};

/// Dense u(t, x) on the output instants. Row i holds the profile at times[i].
class Trajectory {
public:
    Trajectory(SpatialGrid grid, std::vector<double> times, std::vector<double> values);

    const SpatialGrid& grid() const noexcept { return grid_; }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> profile(std::size_t time_index) const;
    double value(std::size_t time_index, std::size_t node) const {
        return values_[time_index * grid_.size() + node];
    }
    std::span<const double> values() const noexcept { return values_; }

private:
    SpatialGrid grid_;
    std::vector<double> times_;
    std::vector<double> values_;
};

struct SolverOptions {
    double theta = 0.5;                ///< 1/2 is Crank-Nicolson
    double dt = 0.0;                   ///< nominal step; 0 means T / 600
    double newton_tol = 1e-10;         ///< on max|update|, relative when |u| > 1
    int newton_max_iter = 25;
    double blowup_cap = 1e6;
    int max_step_halvings = 40;
};

/// sum_k mu_k(x) u^k + g(x, u). When `t` is given, time-dependent coefficient
/// fields are evaluated at t; static fields ignore it.
double evaluate_reaction(const ReactionTerm& reaction, double x, double u, std::optional<double> t = std::nullopt);

/// Integrate the problem on `grid`, returning the solution at `output_times`
/// (sorted, within [0, T]). Interior: second-order central differences.
/// Boundaries: Robin closure by ghost-node elimination. Time: theta-scheme
/// with Newton inner solves, halving the step on Newton failure.
///
/// Throws BlowUpDetected when max|u| exceeds the cap, NewtonDivergence when
/// the step cannot be reduced further, InvalidArgument on bad input.
Trajectory solve(const ProblemSpec& problem, const SpatialGrid& grid, std::span<const double> output_times,
                 const SolverOptions& options = {});

struct Violation {
    std::string kind;  ///< e.g. "positivity", "boundary_weights", "compatibility_left"
    std::string detail;
};

/// Checks positivity of u0 on interior nodes, the boundary weights, D > 0,
/// g(x, 0) = 0 on the nodes, and, at each endpoint with zero beta, the
/// compatibility conditions alpha u0 = 0 and -D u0'' = g(., 0).
std::vector<Violation> validate_problem(const ProblemSpec& problem, double tol, int M = 960);

/// CSV `t,x,u`, row-major over (time, node), 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
/// CSV `x,u` of the last profile.
void write_final_profile_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace rdinv
