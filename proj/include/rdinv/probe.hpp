#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "rdinv/forward.hpp"

namespace rdinv {

/// Time series of u(t, x0) and u_x(t, x0) at one probe location.
struct ProbeTrace {
    double x0 = 0.0;
    std::vector<double> times;
    std::vector<double> u;
    std::vector<double> dudx;

    std::size_t size() const noexcept { return times.size(); }
};

/// One trace per initial condition. Initial conditions are not serialized
/// with the traces; after read_traces() they are empty and must be supplied
/// by the caller.
struct MeasurementSet {
    double x0 = 0.0;
    double eps = 0.0;
    std::vector<ProbeTrace> traces;
    std::vector<InitialCondition> initial_conditions;

    std::size_t count() const noexcept { return traces.size(); }
};

/// K uniform instants eps/K, 2 eps/K, ..., eps.
std::vector<double> uniform_probe_times(double eps, int K = 120);

/// Samples u(t, x0) and u_x(t, x0) at `times`, each of which must be an
/// output instant of `traj`. Values come from the cubic interpolant through
/// the four nearest nodes. When x0 is a node the value is the nodal datum and
/// the derivative averages the two tied four-node stencils, which is the
/// fourth-order central difference away from the boundary.
ProbeTrace probe(const Trajectory& traj, double x0, std::span<const double> times);
ProbeTrace probe(const Trajectory& traj, double x0);  // all output instants

struct FamilyViolation {
    std::size_t first;
    std::size_t second;
    double x;
};

/// Interior nodes where two initial conditions agree within `tol`.
std::vector<FamilyViolation> validate_initial_family(const std::vector<InitialCondition>& ics,
                                                     const SpatialGrid& grid, double tol = 1e-12);

/// Additive N(0, sigma^2) noise on u and u_x, seeded. sigma = 0 is a no-op.
void add_measurement_noise(MeasurementSet& ms, double sigma, std::uint64_t seed);

/// Trace file: `# x0=<v> eps=<v> N=<v>` then header `i,t,u,dudx`, one block
/// per trace with i = 1..N, 17 significant digits.
void write_traces(const MeasurementSet& ms, const std::filesystem::path& path);
MeasurementSet read_traces(const std::filesystem::path& path);

}  // namespace rdinv
