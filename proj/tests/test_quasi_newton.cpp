#include <atomic>
#include <cmath>

#include "doctest.h"
#include "rdinv/errors.hpp"
#include "rdinv/quasi_newton.hpp"

using namespace rdinv;

namespace {

BatchFunction counted(std::function<double(std::span<const double>)> fn, std::atomic<int>& calls) {
    BatchFunction f;
    f.value = [fn, &calls](std::span<const double> x) {
        ++calls;
        return fn(x);
    };
    return f;
}

double quadratic(std::span<const double> x) {
    // Minimum 0 at (1, -2, 3) with condition number 100.
    const double a = x[0] - 1, b = x[1] + 2, c = x[2] - 3;
    return a * a + 10 * b * b + 100 * c * c + a * b;
}

double rosenbrock(std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

}  // namespace

TEST_SUITE("quasi_newton") {

TEST_CASE("minimizes a convex quadratic") {
    std::atomic<int> calls{0};
    QuasiNewtonOptions opt;
    opt.budget = 2000;
    opt.lower_bound = -1.0;
    const auto r = quasi_newton_minimize(counted(quadratic, calls), {0.0, 0.0, 0.0}, opt);
    CHECK(r.value < 1e-10);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
    CHECK(r.x[2] == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(r.evaluations == calls.load());
}

TEST_CASE("minimizes Rosenbrock") {
    std::atomic<int> calls{0};
    QuasiNewtonOptions opt;
    opt.budget = 5000;
    opt.lower_bound = -1.0;
    const auto r = quasi_newton_minimize(counted(rosenbrock, calls), {-1.2, 1.0}, opt);
    CHECK(r.value < 1e-6);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("budget is never exceeded and the history is monotone") {
    for (int budget : {3, 4, 7, 25, 101}) {
        std::atomic<int> calls{0};
        QuasiNewtonOptions opt;
        opt.budget = budget;
        opt.lower_bound = -1.0;
        const auto r = quasi_newton_minimize(counted(rosenbrock, calls), {-1.2, 1.0}, opt);
        CHECK(calls.load() <= budget);
        CHECK(r.evaluations == calls.load());
        REQUIRE(r.history.size() == static_cast<std::size_t>(r.evaluations));
        for (std::size_t i = 1; i < r.history.size(); ++i) {
            CHECK(r.history[i].first == r.history[i - 1].first + 1);
            CHECK(r.history[i].second <= r.history[i - 1].second);
        }
        CHECK(r.history.back().second == r.value);
        CHECK(rosenbrock(r.x) == r.value);
    }
}

TEST_CASE("budget too small for one gradient") {
    std::atomic<int> calls{0};
    QuasiNewtonOptions opt;
    opt.budget = 2;
    CHECK_THROWS_AS(quasi_newton_minimize(counted(rosenbrock, calls), {0.0, 0.0}, opt), BudgetTooSmall);
    CHECK(calls.load() == 0);
    CHECK_THROWS_AS(quasi_newton_minimize(counted(rosenbrock, calls), {}, opt), InvalidArgument);
}

TEST_CASE("stops at the known lower bound") {
    std::atomic<int> calls{0};
    QuasiNewtonOptions opt;
    const auto r = quasi_newton_minimize(counted(quadratic, calls), {1.0, -2.0, 3.0}, opt);
    CHECK(r.value == 0.0);
    CHECK(r.evaluations == 1);
    CHECK(r.stop_reason == "lower bound reached");
}

TEST_CASE("non-finite values are treated as very large") {
    std::atomic<int> calls{0};
    QuasiNewtonOptions opt;
    opt.budget = 500;
    opt.lower_bound = -1.0;
    auto fn = [](std::span<const double> x) {
        return x[0] > 2.0 ? std::nan("") : (x[0] - 1.5) * (x[0] - 1.5);
    };
    const auto r = quasi_newton_minimize(counted(fn, calls), {0.0}, opt);
    CHECK(std::isfinite(r.value));
    CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("batch callback receives every gradient point") {
    std::atomic<int> calls{0};
    int batched = 0;
    BatchFunction f = counted(quadratic, calls);
    f.batch = [&](const std::vector<std::vector<double>>& pts, std::span<double> out) {
        batched += static_cast<int>(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) out[i] = quadratic(pts[i]);
    };
    QuasiNewtonOptions opt;
    opt.budget = 40;
    opt.lower_bound = -1.0;
    const auto r = quasi_newton_minimize(f, {0.0, 0.0, 0.0}, opt);
    CHECK(batched > 0);
    CHECK(batched % 3 == 0);
    CHECK(r.evaluations == calls.load() + batched);
}

}
