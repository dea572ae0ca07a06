#include "rdinv/basis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "rdinv/errors.hpp"
#include "text_util.hpp"

namespace rdinv {

double bump(double x) noexcept {
    if (!(x > -2.0 && x < 2.0)) return 0.0;
    const double q = (x - 2.0) * (x + 2.0);
    const double q2 = q * q;
    return q2 * q2 / 256.0;
}

BumpBasis::BumpBasis(int n) : n_(n) {
    if (n < 3) throw InvalidArgument("bump basis requires n >= 3");
}

std::pair<int, int> BumpBasis::active_range(double s) const noexcept {
    // phi_j(s) != 0  <=>  j in (scale*s - 1, scale*s + 3)
    const double p = scale() * s - 1.0;
    const int first = std::max(0, static_cast<int>(std::floor(p)) + 1);
    const int last = std::min(n_, static_cast<int>(std::ceil(p + 4.0)) - 1);
    return {first, last};
}

double synthesize(const BumpBasis& basis, std::span<const double> h, double s) {
    if (h.size() != basis.size()) throw InvalidArgument("synthesize: coefficient length != n+1");
    const auto [first, last] = basis.active_range(s);
    double sum = 0.0;
    for (int j = first; j <= last; ++j) sum += h[static_cast<std::size_t>(j)] * basis.function(j, s);
    return sum;
}

double synthesize_all_terms(const BumpBasis& basis, std::span<const double> h, double s) {
    if (h.size() != basis.size()) throw InvalidArgument("synthesize: coefficient length != n+1");
    double sum = 0.0;
    for (int j = 0; j <= basis.n(); ++j) sum += h[static_cast<std::size_t>(j)] * basis.function(j, s);
    return sum;
}

BasisCoefficients sample_random(const BumpBasis& basis, double lo, double hi, std::uint64_t seed) {
    if (!(lo < hi)) throw InvalidArgument("sample_random requires lo < hi");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    BasisCoefficients h(basis.size());
    for (auto& v : h) {
        do {
            v = dist(rng);
        } while (v <= lo || v >= hi);
    }
    return h;
}

CoefficientField basis_field(const BumpBasis& basis, BasisCoefficients h, const SpatialDomain& domain) {
    domain.check();
    if (h.size() != basis.size()) throw InvalidArgument("basis_field: coefficient length != n+1");
    return CoefficientField::from_function(
        [basis, h = std::move(h), a = domain.a, len = domain.length()](double x) {
            return synthesize(basis, h, (x - a) / len);
        });
}

void write_coefficients_csv(const std::filesystem::path& path, const std::vector<BasisCoefficients>& fields) {
    if (fields.empty()) throw InvalidArgument("write_coefficients_csv: no fields");
    const std::size_t len = fields.front().size();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "k";
    for (std::size_t j = 0; j < len; ++j) out << ",h_" << j;
    out << '\n';
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (fields[k].size() != len) throw InvalidArgument("write_coefficients_csv: ragged fields");
        out << (k + 1);
        for (double v : fields[k]) out << ',' << detail::format_double(v);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<BasisCoefficients> read_coefficients_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<BasisCoefficients> fields;
    std::string line;
    std::size_t width = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cells = detail::split(body, ',');
        if (!header_seen) {
            if (cells.empty() || cells.front() != "k") throw MalformedCoefficientFile("missing `k,h_0,...` header");
            width = cells.size() - 1;
            header_seen = true;
            continue;
        }
        if (cells.size() != width + 1) throw MalformedCoefficientFile("ragged row in " + path.string());
        long long k = 0;
        if (!detail::parse_int(cells[0], k) || k != static_cast<long long>(fields.size()) + 1) {
            throw MalformedCoefficientFile("rows must be numbered k = 1..N in order");
        }
        BasisCoefficients h(width);
        for (std::size_t j = 0; j < width; ++j) {
            if (!detail::parse_double(cells[j + 1], h[j]) || !std::isfinite(h[j])) {
                throw MalformedCoefficientFile("non-numeric amplitude in row " + std::to_string(k));
            }
        }
        fields.push_back(std::move(h));
    }
    if (!header_seen || fields.empty() || width == 0) throw MalformedCoefficientFile("no coefficient rows");
    return fields;
}

}  // namespace rdinv
