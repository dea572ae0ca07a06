#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdinv/basis.hpp"
#include "rdinv/forward.hpp"
#include "rdinv/probe.hpp"
#include "rdinv/quasi_newton.hpp"

namespace rdinv {

/// Everything of a ProblemSpec except the unknown coefficients and the
/// initial data. The horizon is the observation window eps.
struct ProblemTemplate {
    SpatialDomain domain{0.0, 1.0};
    double D = 0.1;
    RobinBC bc = RobinBC::neumann();
    double eps = 0.3;
    ReactionTerm::Nonlinearity g;
    ReactionTerm::Nonlinearity dg_du;

    ProblemSpec instantiate(std::vector<CoefficientField> mu, InitialCondition init) const;
};

/// N amplitude vectors, one per coefficient mu_k.
using CoefficientSet = std::vector<BasisCoefficients>;

struct ObjectiveSpec {
    ProblemTemplate problem;
    MeasurementSet measurements;  ///< must carry its initial conditions
    BumpBasis basis{10};
    int N = 2;
    bool include_derivative = true;
    double derivative_weight = 1.0;
    int M = 960;
    SolverOptions solver;
    int threads = 1;
    double penalty = 1e9;

    /// Throws InvalidArgument on inconsistent ingredients.
    void check() const;
    std::vector<CoefficientField> fields(const CoefficientSet& h) const;
};

/// sqrt of the composite trapezoid of f^2 over [0, t_K], including the
/// sliver [0, t_1] with f(0) = 0.
double l2_time_norm(std::span<const double> times, std::span<const double> f);

/// Solve the N forward problems for `truth` from the given initial
/// conditions and probe at x0 on `times`.
MeasurementSet synthesize_measurements(const ProblemTemplate& problem, const std::vector<CoefficientField>& truth,
                                       const std::vector<InitialCondition>& ics, double x0,
                                       std::span<const double> times, int M, const SolverOptions& solver = {},
                                       int threads = 1);

/// Misfit sum_i ||u_i - u~_i||_{L2(0,eps)} + w ||d_x u_i - d_x u~_i||_{L2(0,eps)}
/// over the stored traces, for an arbitrary candidate family of fields.
/// A candidate whose solve blows up or diverges yields
/// penalty * (1 + remaining fraction of the window) instead of an error.
double objective_for_fields(const ObjectiveSpec& spec, const std::vector<CoefficientField>& candidate);
double objective(const ObjectiveSpec& spec, const CoefficientSet& candidate);

struct MinimizeOptions {
    int budget = 4000;
    double fd_step = 1e-8;
    double grad_tol = 1e-8;
    double step_tol = 1e-12;
    int restarts = 0;            ///< extra runs from random starts; best kept
    std::uint64_t seed = 0;      ///< seeds the restart starting points
    double restart_lo = -5.0;
    double restart_hi = 5.0;
};

struct InverseResult {
    CoefficientSet recovered;
    double objective_value = 0.0;
    int evaluations = 0;        ///< of the run that produced `recovered`
    int total_evaluations = 0;  ///< over all restarts
    int iterations = 0;
    std::vector<std::pair<int, double>> history;  ///< (eval, best value so far)
    std::optional<double> truth_error;
    std::string stop_reason;
};

/// Quasi-Newton minimization of `objective` over the stacked amplitudes.
/// Throws BudgetTooSmall when the budget cannot pay for one gradient.
InverseResult minimize(const ObjectiveSpec& spec, const CoefficientSet& init, const MinimizeOptions& options = {});

/// sum_k ||mu_k - mu*_k||_{L2(a,b)}
double recovery_error(const std::vector<CoefficientField>& truth, const std::vector<CoefficientField>& recovered,
                      const SpatialDomain& domain, int M = 1000);

CoefficientSet zero_coefficients(const BumpBasis& basis, int N);

/// recovered.csv, summary.txt, history.csv and plot_mu<k>.csv (x, truth,
/// recovered on 201 points; truth column empty when unknown).
void write_inverse_result(const InverseResult& result, const ObjectiveSpec& spec,
                          const std::optional<CoefficientSet>& truth, const std::filesystem::path& dir);

/// plot_mu<k>.csv only, into an existing directory.
void write_plot_data(const BumpBasis& basis, const SpatialDomain& domain, const std::optional<CoefficientSet>& truth,
                     const CoefficientSet& recovered, const std::filesystem::path& dir);

}  // namespace rdinv
