#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdinv/inverse.hpp"

namespace rdinv {

enum class CaseId { scaled_roots, symmetry, time_dependent, unknown_initial };

const char* to_string(CaseId id) noexcept;
std::optional<CaseId> parse_case_id(const std::string& name);

/// Closed-form field with its exact partial derivatives.
struct ClosedForm {
    std::function<double(double t, double x)> u;
    std::function<double(double t, double x)> u_t;
    std::function<double(double t, double x)> u_x;
    std::function<double(double t, double x)> u_xx;
};

/// Two coefficient families (and their experiments) that a weakened
/// observation protocol cannot tell apart.
struct CounterExampleCase {
    CaseId id = CaseId::scaled_roots;
    std::map<std::string, double> parameters;
    ProblemTemplate base;
    std::vector<CoefficientField> mu;
    std::vector<CoefficientField> mu_twin;
    std::vector<InitialCondition> ics;
    std::vector<InitialCondition> ics_twin;
    std::optional<ClosedForm> exact;
    std::optional<ClosedForm> exact_twin;
    double x0 = 0.0;      ///< where the trace equality is claimed
    std::string claim;    ///< human-readable statement of the equality

    ProblemSpec problem(std::size_t i) const { return base.instantiate(mu, ics.at(i)); }
    ProblemSpec twin_problem(std::size_t i) const { return base.instantiate(mu_twin, ics_twin.at(i)); }
};

/// Constant coefficients of f(u) = -u * prod_i (u - z_i), i.e. mu[k-1] is the
/// coefficient of u^k for k = 1..N with N = roots.size() + 1.
std::vector<double> polynomial_from_roots(const std::vector<double>& roots);

/// N-1 stationary experiments u0 = z_i shared by mu and tau * mu (Neumann, g = 0).
/// Throws InvalidRoots on nonpositive or repeated roots, InvalidArgument on
/// tau = 1, N < 2, or roots.size() != N - 1.
CounterExampleCase build_scaled_roots(int N, const std::vector<double>& roots, double tau,
                                      const ProblemTemplate& base = {});

/// Twin with mu reflected about the midpoint. Requires Neumann boundaries
/// and symmetric initial data and g (AsymmetricData otherwise).
CounterExampleCase build_symmetry(std::vector<CoefficientField> mu, std::vector<InitialCondition> ics,
                                  const ProblemTemplate& base = {});

/// u = 1 + t cos^2 x and u~ = 1 + t sin^2(2x) on (0, pi) with time-dependent mu_1.
CounterExampleCase build_time_dependent(double D, double T = 0.3);

/// u = (1 + cos^2 x) e^{rho t} and u~ = (1 + sin^2(2x)) e^{rho t} on (0, pi)
/// with static mu_1. The first problem doubles as a manufactured solution.
CounterExampleCase build_unknown_initial(double D, double rho, double T = 0.3);

struct Claim {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool lower_bound = false;  ///< claim is measured > threshold instead of <=

    bool passed() const noexcept { return lower_bound ? measured > threshold : measured <= threshold; }
};

struct VerificationReport {
    CaseId id = CaseId::scaled_roots;
    std::string claim;
    std::vector<Claim> claims;

    bool all_passed() const noexcept;
    std::string to_text() const;
    void write_csv(const std::filesystem::path& path) const;
};

struct VerifyOptions {
    int M = 240;
    int K = 120;
    SolverOptions solver;
};

/// Solves (or evaluates) both members of the case and measures every
/// claimed equality, plus the non-vacuity of the coefficient difference.
VerificationReport verify(const CounterExampleCase& c, const VerifyOptions& options = {});

}  // namespace rdinv
