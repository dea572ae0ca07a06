#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace rdinv {

/// Bounded interval [a, b].
struct SpatialDomain {
    double a = 0.0;
    double b = 1.0;

    double length() const noexcept { return b - a; }
    double midpoint() const noexcept { return 0.5 * (a + b); }
    bool contains(double x) const noexcept { return x >= a && x <= b; }
    /// b - (x - a)
    double reflect(double x) const noexcept { return b - (x - a); }
    /// Throws InvalidArgument unless a < b and both are finite.
    void check() const;
};

/// A scalar field mu(x) on the domain, optionally time-dependent.
///
/// Values are produced by a shared immutable evaluator, so copies are cheap
/// and safe to share across threads. Time-dependent fields exist only for
/// closed-form residual checks; the time-stepping solver rejects them.
class CoefficientField {
public:
    using StaticFn = std::function<double(double x)>;
    using TimeFn = std::function<double(double t, double x)>;

    CoefficientField();  // identically zero

    static CoefficientField constant(double value);
    static CoefficientField from_function(StaticFn fn);
    static CoefficientField time_dependent(TimeFn fn);
    /// Piecewise-linear interpolant through (nodes[i], values[i]); constant
    /// extension outside the sampled range. Nodes must be strictly increasing.
    static CoefficientField from_samples(std::vector<double> nodes, std::vector<double> values);

    double operator()(double x) const { return static_fn_(x); }
    double at(double t, double x) const;
    bool is_time_dependent() const noexcept { return static_cast<bool>(time_fn_); }

    /// x -> mu(b - (x - a))
    CoefficientField reflected(const SpatialDomain& domain) const;
    /// x -> s * mu(x)
    CoefficientField scaled(double s) const;

private:
    StaticFn static_fn_;
    TimeFn time_fn_;
};

/// Composite-trapezoid approximation of ||f - g||_{L2(a,b)} on M+1 uniform nodes.
double l2_distance(const CoefficientField& f, const CoefficientField& g, const SpatialDomain& domain,
                   int M = 1000);

}  // namespace rdinv
