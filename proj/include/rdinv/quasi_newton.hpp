#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rdinv {

/// Objective seen by the optimizer. `batch` evaluates several points at once
/// (in any order, possibly concurrently) and must write results in input
/// order; the default runs `value` sequentially.
struct BatchFunction {
    std::function<double(std::span<const double>)> value;
    std::function<void(const std::vector<std::vector<double>>&, std::span<double>)> batch;
};

struct QuasiNewtonOptions {
    int budget = 4000;            ///< total function evaluations, gradients included
    double fd_step = 1e-6;        ///< forward-difference step, relative to max(1, |x_i|)
    double grad_tol = 1e-8;       ///< stop when max|g| falls below
    double step_tol = 1e-12;      ///< stop when max|step| falls below
    double lower_bound = 0.0;     ///< stop once f <= lower_bound (known infimum)
    double armijo = 1e-4;
    int max_line_search = 30;
};

struct QuasiNewtonResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    int iterations = 0;
    std::vector<std::pair<int, double>> history;  ///< (evaluation count, best value so far)
    std::string stop_reason;
};

/// BFGS on the inverse Hessian with forward-difference gradients and a
/// backtracking line search that interpolates quadratically on the first
/// reduction and cubically afterwards. Never exceeds the evaluation budget.
QuasiNewtonResult quasi_newton_minimize(const BatchFunction& f, std::vector<double> x0,
                                        const QuasiNewtonOptions& options);

}  // namespace rdinv
