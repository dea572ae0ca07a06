#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "rdinv/counterexample.hpp"
#include "rdinv/errors.hpp"
#include "rdinv/inverse.hpp"

using namespace rdinv;

namespace {

constexpr int kGrid = 120;

struct Fixture {
    ObjectiveSpec spec;
    CoefficientSet truth;
};

// Reference configuration at a coarse grid: (0, 1), D = 0.1, Neumann, x0 = 2/3, eps = 0.3.
Fixture reference_fixture(std::vector<double> u0, CoefficientSet truth, double x0 = 2.0 / 3.0) {
    Fixture fx;
    fx.truth = std::move(truth);
    fx.spec.N = static_cast<int>(fx.truth.size());
    fx.spec.M = kGrid;
    std::vector<InitialCondition> ics;
    for (double c : u0) ics.push_back(InitialCondition::constant(c));
    const auto times = uniform_probe_times(fx.spec.problem.eps, 120);
    fx.spec.measurements =
        synthesize_measurements(fx.spec.problem, fx.spec.fields(fx.truth), ics, x0, times, kGrid, fx.spec.solver);
    return fx;
}

CoefficientSet random_truth(int N, std::uint64_t seed) {
    const BumpBasis basis(10);
    CoefficientSet h;
    for (int k = 1; k <= N; ++k) h.push_back(sample_random(basis, -5, 5, seed * 1000 + k));
    return h;
}

std::vector<double> stacked(const CoefficientSet& h) {
    std::vector<double> x;
    for (const auto& hk : h) x.insert(x.end(), hk.begin(), hk.end());
    return x;
}

CoefficientSet unstacked(const std::vector<double>& x, std::size_t N) {
    const std::size_t w = x.size() / N;
    CoefficientSet h(N);
    for (std::size_t k = 0; k < N; ++k) h[k].assign(x.begin() + k * w, x.begin() + (k + 1) * w);
    return h;
}

}  // namespace

TEST_SUITE("inverse") {

TEST_CASE("l2_time_norm examples") {
    const auto t03 = uniform_probe_times(0.3, 120);
    const std::vector<double> zeros(t03.size(), 0.0), ones(t03.size(), 1.0);
    CHECK(l2_time_norm(t03, zeros) == 0.0);
    // The sliver [0, t1] sees f(0) = 0, an O(1/K) trapezoid error.
    CHECK(l2_time_norm(t03, ones) == doctest::Approx(std::sqrt(0.3)).epsilon(0.01));
    const auto t1 = uniform_probe_times(1.0, 1000);
    CHECK(l2_time_norm(t1, t1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
    const std::vector<double> two{0.1, 0.3}, f{1.0, 2.0};
    CHECK(l2_time_norm(two, f) == doctest::Approx(std::sqrt(0.05 + 0.5)));
    CHECK_THROWS_AS(l2_time_norm(std::vector<double>{0.1}, std::vector<double>{1.0}), InvalidArgument);
    CHECK_THROWS_AS(l2_time_norm(std::vector<double>{0.2, 0.1}, std::vector<double>{1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(l2_time_norm(two, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("objective vanishes at the truth") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, seed));
        CHECK(objective(fx.spec, fx.truth) <= 1e-12);
    }
}

TEST_CASE("objective grows with the perturbation size") {
    const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 1));
    double previous = 0.0;
    for (double delta : {1e-3, 1e-2, 1e-1}) {
        auto cand = fx.truth;
        cand[0][5] += delta;
        const double g = objective(fx.spec, cand);
        CHECK(g > previous);
        previous = g;
    }
}

TEST_CASE("reflected truth matches midpoint value traces") {
    auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 2), 0.5);
    fx.spec.include_derivative = false;
    auto reflected = fx.truth;
    for (auto& hk : reflected) std::reverse(hk.begin(), hk.end());
    CHECK(objective(fx.spec, reflected) <= 1e-10);
    fx.spec.include_derivative = true;
    CHECK(objective(fx.spec, reflected) > 1e-4);
}

TEST_CASE("penalty keeps the objective total") {
    const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 1));
    auto wild = fx.truth;
    for (auto& v : wild[1]) v = 1e4;
    const double g = objective(fx.spec, wild);
    CHECK(std::isfinite(g));
    CHECK(g >= fx.spec.penalty);
    CHECK(g <= 2 * fx.spec.penalty * 2);  // per trace
    CHECK_THROWS_AS(objective(fx.spec, CoefficientSet{fx.truth[0]}), InvalidArgument);
}

TEST_CASE("forward and central difference gradients agree") {
    const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 3));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    const double fwd_step = MinimizeOptions{}.fd_step;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x(22);
        for (auto& v : x) v = dist(rng);
        const double g0 = objective(fx.spec, unstacked(x, 2));
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double hf = fwd_step * std::max(1.0, std::abs(x[i]));
            const double hc = 1e-5 * std::max(1.0, std::abs(x[i]));
            auto at = [&](double shift) {
                auto y = x;
                y[i] += shift;
                return objective(fx.spec, unstacked(y, 2));
            };
            const double forward = (at(hf) - g0) / hf;
            const double central = (at(hc) - at(-hc)) / (2 * hc);
            worst = std::max(worst, std::abs(forward - central));
            scale = std::max(scale, std::abs(central));
        }
        CHECK(worst <= 1e-3 * scale);
    }
}

TEST_CASE("minimize from the truth stops immediately") {
    const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 1));
    const auto r = minimize(fx.spec, fx.truth);
    CHECK(r.objective_value == 0.0);
    CHECK(r.evaluations == 1);
    CHECK(r.recovered == fx.truth);
}

TEST_CASE("budget must pay for one gradient") {
    const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 1));
    MinimizeOptions opt;
    opt.budget = 22;
    CHECK_THROWS_AS(minimize(fx.spec, zero_coefficients(fx.spec.basis, 2), opt), BudgetTooSmall);
    opt.budget = 23;
    const auto r = minimize(fx.spec, zero_coefficients(fx.spec.basis, 2), opt);
    CHECK(r.evaluations <= 23);
}

TEST_CASE("single bump is recovered from one experiment") {
    BasisCoefficients h(11, 0.0);
    h[1] = 1.0;
    const auto fx = reference_fixture({0.1}, {h});
    MinimizeOptions opt;
    opt.budget = 2000;
    const auto r = minimize(fx.spec, zero_coefficients(fx.spec.basis, 1), opt);
    CHECK(r.evaluations <= 2000);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].second <= r.history[i - 1].second);
    const double err = recovery_error(fx.spec.fields(fx.truth), fx.spec.fields(r.recovered), fx.spec.problem.domain);
    MESSAGE("single bump: G = " << r.objective_value << ", truth error = " << err);
    CHECK(err <= 0.05);
}

TEST_CASE("recovery_error examples") {
    const BumpBasis basis(10);
    const SpatialDomain dom{0.0, 1.0};
    const auto mu1 = basis_field(basis, sample_random(basis, -5, 5, 11), dom);
    const auto mu2 = basis_field(basis, sample_random(basis, -5, 5, 12), dom);
    const auto shifted = CoefficientField::from_function([mu1](double x) { return mu1(x) + 1.0; });
    CHECK(recovery_error({mu1, mu2}, {mu1, mu2}, dom) == 0.0);
    CHECK(recovery_error({mu1, mu2}, {shifted, mu2}, dom) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(recovery_error({mu1}, {mu1, mu2}, dom), InvalidArgument);
}

TEST_CASE("one trace cannot separate scaled-root coefficients") {
    const auto c = build_scaled_roots(2, {1.0}, 2.0);
    ObjectiveSpec spec;
    spec.problem = c.base;
    spec.N = 2;
    spec.M = kGrid;
    const auto times = uniform_probe_times(c.base.eps, 120);
    spec.measurements = synthesize_measurements(c.base, c.mu, c.ics, c.x0, times, kGrid);
    CHECK(objective_for_fields(spec, c.mu_twin) <= 1e-10);
    CHECK(recovery_error(c.mu, c.mu_twin, c.base.domain) > 0.1);
}

TEST_CASE("inverse result files") {
    const auto fx = reference_fixture({0.1, 0.2}, random_truth(2, 1));
    MinimizeOptions opt;
    opt.budget = 30;
    auto r = minimize(fx.spec, zero_coefficients(fx.spec.basis, 2), opt);
    r.truth_error = 1.5;
    const auto dir = std::filesystem::temp_directory_path() / "rdinv_unit" / "inverse_out";
    std::filesystem::remove_all(dir);
    write_inverse_result(r, fx.spec, fx.truth, dir);
    CHECK(read_coefficients_csv(dir / "recovered.csv") == r.recovered);
    std::ifstream summary(dir / "summary.txt");
    std::string text((std::istreambuf_iterator<char>(summary)), {});
    CHECK(text.find("objective_value=") != std::string::npos);
    CHECK(text.find("truth_error=1.5") != std::string::npos);
    std::ifstream hist(dir / "history.csv");
    std::string line;
    std::getline(hist, line);
    CHECK(line == "eval,best_value");
    for (const char* name : {"plot_mu1.csv", "plot_mu2.csv"}) {
        std::ifstream plot(dir / name);
        std::getline(plot, line);
        CHECK(line == "x,truth,recovered");
        int rows = 0;
        while (std::getline(plot, line)) ++rows;
        CHECK(rows == 201);
    }
}

}
