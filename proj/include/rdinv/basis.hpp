#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rdinv/field.hpp"

namespace rdinv {

/// Compactly supported bump (x-2)^4 (x+2)^4 / 2^8 on (-2, 2), zero elsewhere.
/// J(0) = 1 and J is C^3 across the support edges.
double bump(double x) noexcept;

/// Shifted/scaled bump basis on [0, 1]: n+1 functions
/// phi_j(x) = J((n-2)(x - c_j)) with centers c_j = (j-1)/(n-2), j = 0..n.
///
/// The outermost centers (-1/(n-2) and (n-1)/(n-2)) lie outside [0, 1]; those
/// bumps overhang the interval and are kept as-is.
class BumpBasis {
public:
    explicit BumpBasis(int n = 10);

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 1; }
    double scale() const noexcept { return static_cast<double>(n_ - 2); }
    double center(int j) const noexcept { return static_cast<double>(j - 1) / scale(); }

    /// phi_j(s) for s in unit coordinates.
    double function(int j, double s) const noexcept { return bump(scale() * (s - center(j))); }

    /// Indices [first, last] of the basis functions whose open support contains s.
    /// Empty when first > last.
    std::pair<int, int> active_range(double s) const noexcept;

private:
    int n_;
};

/// Amplitudes h_0..h_n of one field in a BumpBasis.
using BasisCoefficients = std::vector<double>;

/// sum_j h_j J((n-2)(s - c_j)) at unit coordinate s. Only the (at most four)
/// overlapping bumps are summed.
double synthesize(const BumpBasis& basis, std::span<const double> h, double s);

/// Same sum, over every basis function. Reference path for locality checks.
double synthesize_all_terms(const BumpBasis& basis, std::span<const double> h, double s);

/// Independent uniform draws on (lo, hi); deterministic for a fixed seed.
BasisCoefficients sample_random(const BumpBasis& basis, double lo, double hi, std::uint64_t seed);

/// Field on `domain` obtained by mapping x -> (x - a)/(b - a) before synthesis.
CoefficientField basis_field(const BumpBasis& basis, BasisCoefficients h, const SpatialDomain& domain);

/// Coefficient vectors for N fields, one CSV row each: `k,h_0,...,h_n` with
/// k = 1..N. A header row `k,h_0,...` is written and skipped on read.
void write_coefficients_csv(const std::filesystem::path& path, const std::vector<BasisCoefficients>& fields);
std::vector<BasisCoefficients> read_coefficients_csv(const std::filesystem::path& path);

}  // namespace rdinv
