#include <cmath>

#include "doctest.h"
#include "rdinv/errors.hpp"
#include "rdinv/field.hpp"

using namespace rdinv;

TEST_SUITE("field") {

TEST_CASE("domain basics") {
    const SpatialDomain d{0.0, 2.0};
    CHECK(d.length() == 2.0);
    CHECK(d.midpoint() == 1.0);
    CHECK(d.reflect(0.5) == 1.5);
    CHECK(d.contains(0.0));
    CHECK_FALSE(d.contains(2.1));
    CHECK_THROWS_AS((SpatialDomain{1.0, 1.0}.check()), InvalidArgument);
    CHECK_THROWS_AS((SpatialDomain{0.0, INFINITY}.check()), InvalidArgument);
}

TEST_CASE("piecewise-linear samples interpolate and clamp") {
    const auto f = CoefficientField::from_samples({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(f(0.5) == doctest::Approx(1.0));
    CHECK(f(1.5) == doctest::Approx(1.0));
    CHECK(f(-1.0) == 0.0);
    CHECK(f(3.0) == 0.0);
    CHECK_THROWS_AS(CoefficientField::from_samples({0.0, 0.0}, {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(CoefficientField::from_samples({0.0}, {1.0, 2.0}), InvalidArgument);
}

TEST_CASE("time-dependent fields expose their t = 0 slice statically") {
    const auto f = CoefficientField::time_dependent([](double t, double x) { return t + x; });
    CHECK(f.is_time_dependent());
    CHECK(f(0.25) == 0.25);
    CHECK(f.at(1.0, 0.25) == 1.25);
    const auto r = f.reflected({0.0, 1.0});
    CHECK(r.at(1.0, 0.25) == 1.75);
    CHECK(f.scaled(2.0).at(1.0, 0.5) == 3.0);
}

TEST_CASE("reflection and scaling") {
    const auto f = CoefficientField::from_function([](double x) { return x * x; });
    const SpatialDomain d{1.0, 3.0};
    CHECK(f.reflected(d)(1.0) == 9.0);
    CHECK(f.reflected(d)(2.0) == 4.0);
    CHECK(f.scaled(-1.0)(2.0) == -4.0);
    CHECK_FALSE(f.is_time_dependent());
}

TEST_CASE("l2_distance examples") {
    const SpatialDomain unit{0.0, 1.0};
    const auto one = CoefficientField::constant(1.0);
    const auto zero = CoefficientField::constant(0.0);
    const auto lin = CoefficientField::from_function([](double x) { return x; });
    CHECK(l2_distance(lin, lin, unit) == 0.0);
    CHECK(l2_distance(one, zero, unit) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l2_distance(lin, zero, unit) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
    CHECK_THROWS_AS(l2_distance(one, zero, unit, 8), InvalidArgument);
}

}
