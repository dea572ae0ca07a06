#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "rdinv/counterexample.hpp"
#include "rdinv/errors.hpp"

using namespace rdinv;

namespace {

double claim(const VerificationReport& rep, const std::string& name) {
    for (const auto& c : rep.claims) {
        if (c.name == name) return c.measured;
    }
    FAIL("missing claim " << name);
    return 0.0;
}

}  // namespace

TEST_SUITE("counterexample") {

TEST_CASE("case names round-trip") {
    for (auto id : {CaseId::scaled_roots, CaseId::symmetry, CaseId::time_dependent, CaseId::unknown_initial}) {
        CHECK(parse_case_id(to_string(id)) == id);
    }
    CHECK_FALSE(parse_case_id("nope").has_value());
}

TEST_CASE("polynomial from roots") {
    // -u (u - 1) = u - u^2
    auto p = polynomial_from_roots({1.0});
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == -1.0);
    // -u (u - 1)(u - 2) = -2u + 3u^2 - u^3
    p = polynomial_from_roots({1.0, 2.0});
    REQUIRE(p.size() == 3);
    CHECK(p[0] == -2.0);
    CHECK(p[1] == 3.0);
    CHECK(p[2] == -1.0);
}

TEST_CASE("scaled roots: stationary experiments at the roots") {
    const auto c = build_scaled_roots(2, {1.0}, 2.0);
    CHECK(c.mu.size() == 2);
    CHECK(c.mu[0](0.3) == 1.0);
    CHECK(c.mu[1](0.3) == -1.0);
    CHECK(c.mu_twin[0](0.3) == 2.0);
    CHECK(c.mu_twin[1](0.7) == -2.0);
    REQUIRE(c.ics.size() == 1);
    CHECK(c.ics[0](0.4) == 1.0);
    const auto rep = verify(c);
    CHECK(rep.all_passed());
    CHECK(claim(rep, "coefficient_l2_gap") > 0.1);

    const auto c3 = build_scaled_roots(3, {0.5, 1.5}, 3.0);
    CHECK(verify(c3).all_passed());
}

TEST_CASE("scaled roots: invalid inputs") {
    CHECK_THROWS_AS(build_scaled_roots(2, {1.0}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(build_scaled_roots(1, {}, 2.0), InvalidArgument);
    CHECK_THROWS_AS(build_scaled_roots(3, {1.0}, 2.0), InvalidArgument);
    CHECK_THROWS_AS(build_scaled_roots(2, {-1.0}, 2.0), InvalidRoots);
    CHECK_THROWS_AS(build_scaled_roots(3, {1.0, 1.0}, 2.0), InvalidRoots);
    CHECK_THROWS_AS(build_scaled_roots(2, {0.0}, 2.0), InvalidRoots);
}

TEST_CASE("symmetry: mu_1 = x is invisible to midpoint value traces") {
    auto x = CoefficientField::from_function([](double s) { return s; });
    const auto c = build_symmetry({x}, {InitialCondition::constant(0.1)});
    CHECK(c.x0 == 0.5);
    CHECK(c.mu_twin[0](0.25) == 0.75);
    const auto rep = verify(c);
    CHECK(rep.all_passed());
    CHECK(claim(rep, "coefficient_l2_gap") == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));

    // A symmetric coefficient is its own twin.
    auto sym = CoefficientField::from_function([](double s) { return s * (1 - s); });
    const auto self = verify(build_symmetry({sym}, {InitialCondition::constant(0.1)}));
    CHECK(claim(self, "coefficient_l2_gap") <= 1e-15);
    CHECK_FALSE(self.all_passed());
}

TEST_CASE("symmetry: requires Neumann and symmetric data") {
    auto x = CoefficientField::from_function([](double s) { return s; });
    CHECK_THROWS_AS(build_symmetry({x}, {{[](double s) { return 0.1 + s; }}}), AsymmetricData);
    ProblemTemplate robin;
    robin.bc = {1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(build_symmetry({x}, {InitialCondition::constant(0.1)}, robin), InvalidArgument);
    ProblemTemplate skew;
    skew.g = [](double s, double u) { return -s * u * u; };
    CHECK_THROWS_AS(build_symmetry({x}, {InitialCondition::constant(0.1)}, skew), AsymmetricData);
}

TEST_CASE("time-dependent coefficient case") {
    const auto c = build_time_dependent(0.1);
    CHECK(c.mu[0].is_time_dependent());
    CHECK(c.mu[0].at(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(c.x0 == doctest::Approx(std::numbers::pi / 2));
    const auto rep = verify(c);
    CHECK(rep.all_passed());
    CHECK(claim(rep, "residual_exact_derivatives") <= 1e-10);
}

TEST_CASE("unknown initial condition case") {
    const auto c = build_unknown_initial(0.1, 1.0);
    CHECK(c.mu[0](std::numbers::pi / 2) == doctest::Approx(0.8));
    CHECK(c.exact->u(0.0, 0.0) == 2.0);
    CHECK(c.exact_twin->u(0.0, std::numbers::pi / 2) == doctest::Approx(1.0));
    const auto rep = verify(c);
    CHECK(rep.all_passed());
}

TEST_CASE("report text and csv") {
    const auto rep = verify(build_scaled_roots(2, {1.0}, 2.0));
    const auto text = rep.to_text();
    CHECK(text.find("[PASS]") != std::string::npos);
    CHECK(text.find("[FAIL]") == std::string::npos);
    const auto path = std::filesystem::temp_directory_path() / "rdinv_unit" / "report.csv";
    std::filesystem::create_directories(path.parent_path());
    rep.write_csv(path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "case,claim,measured,relation,threshold,pass");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(rep.claims.size()));
}

}
