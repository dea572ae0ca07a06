#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "rdinv/basis.hpp"
#include "rdinv/counterexample.hpp"
#include "rdinv/errors.hpp"
#include "rdinv/forward.hpp"
#include "rdinv/probe.hpp"

using namespace rdinv;

namespace {

ProblemSpec constant_problem(std::vector<double> mu, double u0, double T = 0.3) {
    ProblemSpec p;
    p.domain = {0.0, 1.0};
    p.D = 0.1;
    p.bc = RobinBC::neumann();
    for (double m : mu) p.reaction.mu.push_back(CoefficientField::constant(m));
    p.init = InitialCondition::constant(u0);
    p.T = T;
    return p;
}

std::vector<double> linspace_times(double T, int count) {
    std::vector<double> t(static_cast<std::size_t>(count) + 1);
    for (int i = 0; i <= count; ++i) t[i] = T * i / count;
    t.back() = T;
    return t;
}

double manufactured_error(int M) {
    const auto c = build_unknown_initial(0.1, 1.0);
    const SpatialGrid grid(c.base.domain, M);
    const std::vector<double> times{0.1, 0.2, 0.3};
    const auto traj = solve(c.problem(0), grid, times);
    double err = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(traj.value(k, i) - c.exact->u(times[k], grid[i])));
        }
    }
    return err;
}

}  // namespace

TEST_SUITE("forward") {

TEST_CASE("evaluate_reaction examples") {
    ReactionTerm r;
    r.mu = {CoefficientField::constant(2.0), CoefficientField::constant(-1.0)};
    CHECK(evaluate_reaction(r, 0.3, 1.0) == 1.0);
    CHECK(evaluate_reaction(r, 0.3, 0.0) == 0.0);
    r.mu = {CoefficientField::constant(3.0), CoefficientField::constant(-3.0)};
    CHECK(evaluate_reaction(r, 0.7, 1.0) == 0.0);
    r.g = [](double x, double u) { return x * u * u * u; };
    CHECK(evaluate_reaction(r, 0.5, 2.0) == doctest::Approx(3 * 2 - 3 * 4 + 0.5 * 8));
    ReactionTerm td;
    td.mu = {CoefficientField::time_dependent([](double t, double) { return t; })};
    CHECK(evaluate_reaction(td, 0.0, 2.0, 0.5) == 1.0);
    CHECK(evaluate_reaction(td, 0.0, 2.0) == 0.0);
}

TEST_CASE("grid is uniform and mirror-symmetric") {
    const SpatialGrid g({0.0, 1.0}, 960);
    CHECK(g.size() == 961);
    CHECK(g[0] == 0.0);
    CHECK(g[960] == 1.0);
    CHECK(g.spacing() == doctest::Approx(1.0 / 960));
    for (int i = 0; i <= 480; ++i) {
        CHECK(g[static_cast<std::size_t>(i)] == i * g.spacing());
        CHECK(g[static_cast<std::size_t>(960 - i)] == 1.0 - i * g.spacing());
    }
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(g[640] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("logistic ODE reduction") {
    const auto p = constant_problem({1.0, -1.0}, 0.5);
    const SpatialGrid grid(p.domain, 64);
    const auto times = linspace_times(p.T, 6);
    const auto traj = solve(p, grid, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double exact = 1.0 / (1.0 + std::exp(-times[k]));
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(traj.value(k, i) == doctest::Approx(exact).epsilon(1e-7));
            lo = std::min(lo, traj.value(k, i));
            hi = std::max(hi, traj.value(k, i));
        }
        CHECK(hi - lo < 1e-12);
    }
}

TEST_CASE("zero reaction keeps a constant state") {
    const auto p = constant_problem({0.0}, 0.37);
    const SpatialGrid grid(p.domain, 32);
    const auto traj = solve(p, grid, linspace_times(p.T, 3));
    for (double v : traj.values()) CHECK(v == 0.37);
}

TEST_CASE("blow-up is detected before the exact blow-up time") {
    const auto p = constant_problem({0.0, 5.0}, 1.0);
    const SpatialGrid grid(p.domain, 32);
    try {
        solve(p, grid, linspace_times(p.T, 3));
        FAIL("expected BlowUpDetected");
    } catch (const BlowUpDetected& e) {
        CHECK(e.time() < 0.2);
        CHECK(e.time() > 0.19);
    }
}

TEST_CASE("heat equation with Robin boundaries converges at second order") {
    // u = exp(-D t) cos(x - 0.3) satisfies both Robin conditions for these weights.
    auto run = [](int M) {
        ProblemSpec p;
        p.domain = {0.0, 1.0};
        p.D = 0.1;
        p.bc = {std::tan(0.3), 1.0, std::tan(0.7), 1.0};
        p.reaction.mu = {CoefficientField::constant(0.0)};
        p.init = {[](double x) { return std::cos(x - 0.3); }};
        p.T = 0.3;
        const SpatialGrid grid(p.domain, M);
        const auto traj = solve(p, grid, std::vector<double>{0.3});
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(traj.value(0, i) - std::exp(-0.1 * 0.3) * std::cos(grid[i] - 0.3)));
        }
        return err;
    };
    const double e1 = run(40), e2 = run(80), e3 = run(160);
    CHECK(std::log2(e1 / e2) > 1.8);
    CHECK(std::log2(e2 / e3) > 1.8);
}

TEST_CASE("Dirichlet boundaries hold the boundary value") {
    ProblemSpec p;
    p.domain = {0.0, 1.0};
    p.D = 0.1;
    p.bc = RobinBC::dirichlet();
    p.reaction.mu = {CoefficientField::constant(0.0)};
    p.init = {[](double x) { return std::sin(std::numbers::pi * x); }};
    p.T = 0.3;
    CHECK(validate_problem(p, 1e-6).empty());
    const SpatialGrid grid(p.domain, 64);
    const auto traj = solve(p, grid, std::vector<double>{0.1, 0.3});
    CHECK(traj.value(1, 0) == 0.0);
    CHECK(traj.value(1, 64) == 0.0);
    const double decay = std::exp(-0.1 * std::numbers::pi * std::numbers::pi * 0.3);
    CHECK(traj.value(1, 32) == doctest::Approx(decay).epsilon(1e-3));
}

TEST_CASE("manufactured solution converges at order >= 1.8") {
    const double e1 = manufactured_error(120), e2 = manufactured_error(240), e3 = manufactured_error(480);
    CHECK(std::log2(e1 / e2) >= 1.8);
    CHECK(std::log2(e2 / e3) >= 1.8);
}

TEST_CASE("property: positivity is preserved for random admissible problems") {
    const BumpBasis basis(10);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        ProblemSpec p = constant_problem({}, 0.1);
        p.reaction.mu = {basis_field(basis, sample_random(basis, -5, 5, seed), p.domain),
                         basis_field(basis, sample_random(basis, -5, 5, seed + 100), p.domain)};
        p.init = InitialCondition::constant(0.05 * static_cast<double>(seed));
        REQUIRE(validate_problem(p, 1e-8).empty());
        const SpatialGrid grid(p.domain, 120);
        const auto traj = solve(p, grid, linspace_times(p.T, 10));
        CHECK(*std::min_element(traj.values().begin(), traj.values().end()) > -1e-12);
    }
}

TEST_CASE("property: reflection equivariance on the symmetric grid") {
    const BumpBasis basis(10);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        ProblemSpec p = constant_problem({}, 0.1);
        p.domain = {0.0, 1.0};
        p.reaction.mu = {basis_field(basis, sample_random(basis, -5, 5, seed), p.domain),
                         basis_field(basis, sample_random(basis, -5, 5, seed + 50), p.domain)};
        p.reaction.g = [](double x, double u) { return -x * u * u * u; };
        p.init = {[](double x) { return 0.2 + 0.1 * x; }};
        p.bc = {0.5, 1.0, 2.0, 1.0};
        ProblemSpec q = p;
        for (auto& m : q.reaction.mu) m = m.reflected(p.domain);
        q.reaction.g = [](double x, double u) { return -(1.0 - x) * u * u * u; };
        q.init = {[](double x) { return 0.2 + 0.1 * (1.0 - x); }};
        q.bc = {2.0, 1.0, 0.5, 1.0};
        const SpatialGrid grid(p.domain, 240);
        const auto times = linspace_times(p.T, 6);
        const auto a = solve(p, grid, times);
        const auto b = solve(q, grid, times);
        double worst = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst = std::max(worst, std::abs(a.value(k, i) - b.value(k, grid.size() - 1 - i)));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("output times land exactly and the first row is the initial profile") {
    const auto p = constant_problem({1.0, -1.0}, 0.5);
    const SpatialGrid grid(p.domain, 32);
    const std::vector<double> times{0.0, 0.0123, 0.3};
    const auto traj = solve(p, grid, times);
    CHECK(traj.times()[1] == 0.0123);
    for (double v : traj.profile(0)) CHECK(v == 0.5);
}

TEST_CASE("solve rejects bad input") {
    auto p = constant_problem({1.0}, 0.5);
    CHECK_THROWS_AS(solve(p, SpatialGrid(p.domain, 8), std::vector<double>{0.1}), InvalidArgument);
    const SpatialGrid grid(p.domain, 32);
    CHECK_THROWS_AS(solve(p, grid, std::vector<double>{0.2, 0.1}), InvalidArgument);
    CHECK_THROWS_AS(solve(p, grid, std::vector<double>{0.5}), InvalidArgument);
    CHECK_THROWS_AS(solve(p, grid, std::vector<double>{}), InvalidArgument);
    auto q = p;
    q.reaction.mu = {CoefficientField::time_dependent([](double t, double) { return t; })};
    CHECK_THROWS_AS(solve(q, grid, std::vector<double>{0.1}), InvalidArgument);
    q = p;
    q.bc = {0.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(solve(q, grid, std::vector<double>{0.1}), InvalidArgument);
}

TEST_CASE("validate_problem examples") {
    auto p = constant_problem({1.0, -1.0}, 0.1);
    CHECK(validate_problem(p, 1e-10).empty());

    p.init = {[](double x) { return std::abs(x - 0.5) < 0.1 ? -1.0 : 0.5; }};
    auto v = validate_problem(p, 1e-10);
    REQUIRE_FALSE(v.empty());
    CHECK(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.kind == "positivity"; }));

    p.init = InitialCondition::constant(0.3);
    p.bc = {1.0, 0.0, 0.0, 1.0};
    v = validate_problem(p, 1e-10);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == "compatibility_left");

    p.bc = RobinBC::neumann();
    p.reaction.g = [](double, double u) { return u + 1.0; };
    v = validate_problem(p, 1e-10);
    CHECK(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.kind == "nonlinearity"; }));

    p = constant_problem({1.0}, 0.1);
    p.bc = {-1.0, 1.0, 0.0, 1.0};
    v = validate_problem(p, 1e-10);
    CHECK(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.kind == "boundary_weights"; }));
}

TEST_CASE("trajectory CSV layout") {
    const auto p = constant_problem({0.0}, 0.25);
    const SpatialGrid grid(p.domain, 16);
    const auto traj = solve(p, grid, std::vector<double>{0.0, 0.3});
    const auto dir = std::filesystem::temp_directory_path() / "rdinv_unit";
    std::filesystem::create_directories(dir);
    write_trajectory_csv(traj, dir / "traj.csv");
    write_final_profile_csv(traj, dir / "final.csv");
    std::ifstream in(dir / "traj.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,u");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 * 17);
    std::ifstream fin(dir / "final.csv");
    std::getline(fin, line);
    CHECK(line == "x,u");
    std::getline(fin, line);
    CHECK(line == "0,0.25");
}

}
