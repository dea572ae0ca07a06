#include "rdinv/quasi_newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rdinv/errors.hpp"

namespace rdinv {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

class Tracker {
public:
    Tracker(const BatchFunction& f, int budget) : f_(f), budget_(budget) {}

    int used() const noexcept { return used_; }
    int remaining() const noexcept { return budget_ - used_; }
    double best_value() const noexcept { return best_value_; }
    const std::vector<double>& best_x() const noexcept { return best_x_; }
    std::vector<std::pair<int, double>>& history() noexcept { return history_; }

    double value(const std::vector<double>& x) {
        const double v = sanitize(f_.value(x));
        record(x, v);
        return v;
    }

    std::vector<double> batch(const std::vector<std::vector<double>>& points) {
        std::vector<double> out(points.size());
        if (f_.batch) {
            f_.batch(points, out);
        } else {
            for (std::size_t i = 0; i < points.size(); ++i) out[i] = f_.value(points[i]);
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            out[i] = sanitize(out[i]);
            record(points[i], out[i]);
        }
        return out;
    }

private:
    static double sanitize(double v) {
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    }

    void record(const std::vector<double>& x, double v) {
        ++used_;
        if (v < best_value_) {
            best_value_ = v;
            best_x_ = x;
        }
        history_.emplace_back(used_, best_value_);
    }

    const BatchFunction& f_;
    int budget_;
    int used_ = 0;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<double> best_x_;
    std::vector<std::pair<int, double>> history_;
};

}  // namespace

QuasiNewtonResult quasi_newton_minimize(const BatchFunction& f, std::vector<double> x,
                                        const QuasiNewtonOptions& opt) {
    const std::size_t P = x.size();
    if (P == 0) throw InvalidArgument("quasi_newton_minimize: empty parameter vector");
    if (!f.value) throw InvalidArgument("quasi_newton_minimize: missing objective");
    if (opt.budget < static_cast<int>(P) + 1) {
        throw BudgetTooSmall("budget " + std::to_string(opt.budget) + " below one gradient (" +
                             std::to_string(P + 1) + " evaluations)");
    }

    Tracker tr(f, opt.budget);
    QuasiNewtonResult res;

    auto gradient = [&](const std::vector<double>& at, double f_at) {
        std::vector<std::vector<double>> pts(P, at);
        std::vector<double> steps(P);
        for (std::size_t i = 0; i < P; ++i) {
            steps[i] = opt.fd_step * std::max(1.0, std::abs(at[i]));
            pts[i][i] += steps[i];
            steps[i] = pts[i][i] - at[i];  // the step actually taken
        }
        const auto vals = tr.batch(pts);
        std::vector<double> g(P);
        for (std::size_t i = 0; i < P; ++i) g[i] = (vals[i] - f_at) / steps[i];
        return g;
    };

    auto finish = [&](std::string reason) {
        res.x = tr.best_x();
        res.value = tr.best_value();
        res.evaluations = tr.used();
        res.history = std::move(tr.history());
        res.stop_reason = std::move(reason);
        return res;
    };

    double fx = tr.value(x);
    if (fx <= opt.lower_bound) return finish("lower bound reached");
    if (tr.remaining() < static_cast<int>(P)) return finish("budget");
    std::vector<double> g = gradient(x, fx);

    // Inverse Hessian approximation, row-major P x P.
    std::vector<double> H(P * P, 0.0);
    auto reset_H = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < P; ++i) H[i * P + i] = 1.0;
    };
    reset_H();
    bool H_is_identity = true;

    std::vector<double> d(P), xn(P), s(P), y(P), Hy(P);
    while (true) {
        if (max_abs(g) < opt.grad_tol) return finish("gradient tolerance");

        for (std::size_t i = 0; i < P; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < P; ++j) acc -= H[i * P + j] * g[j];
            d[i] = acc;
        }
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            reset_H();
            H_is_identity = true;
            for (std::size_t i = 0; i < P; ++i) d[i] = -g[i];
            slope = dot(g, d);
        }
        // Unscaled identity steps are normalized to unit max-norm.
        double alpha = H_is_identity ? 1.0 / std::max(max_abs(d), 1e-300) : 1.0;

        // Backtracking: quadratic fit first, cubic afterwards.
        bool accepted = false;
        double fn = 0.0;
        double alpha_prev = 0.0;
        double f_prev = 0.0;
        for (int ls = 0; ls < opt.max_line_search; ++ls) {
            if (tr.remaining() <= 0) return finish("budget");
            for (std::size_t i = 0; i < P; ++i) xn[i] = x[i] + alpha * d[i];
            fn = tr.value(xn);
            if (fn <= fx + opt.armijo * alpha * slope) {
                accepted = true;
                break;
            }
            double next;
            if (ls == 0) {
                next = -slope * alpha * alpha / (2.0 * (fn - fx - slope * alpha));
            } else {
                const double d1 = fn - fx - slope * alpha;
                const double d0 = f_prev - fx - slope * alpha_prev;
                const double denom = alpha_prev * alpha_prev * alpha * alpha * (alpha - alpha_prev);
                const double a = (alpha_prev * alpha_prev * d1 - alpha * alpha * d0) / denom;
                const double b = (-alpha_prev * alpha_prev * alpha_prev * d1 + alpha * alpha * alpha * d0) / denom;
                if (std::abs(a) < 1e-300) {
                    next = -slope / (2.0 * b);
                } else {
                    const double disc = b * b - 3.0 * a * slope;
                    next = disc >= 0.0 ? (-b + std::sqrt(disc)) / (3.0 * a) : 0.5 * alpha;
                }
            }
            if (!std::isfinite(next)) next = 0.5 * alpha;
            alpha_prev = alpha;
            f_prev = fn;
            alpha = std::clamp(next, 0.1 * alpha, 0.5 * alpha);
        }
        if (!accepted) {
            if (!H_is_identity) {
                reset_H();
                H_is_identity = true;
                continue;
            }
            return finish("line search failed");
        }

        ++res.iterations;
        for (std::size_t i = 0; i < P; ++i) s[i] = xn[i] - x[i];
        x = xn;
        fx = fn;
        if (fx <= opt.lower_bound) return finish("lower bound reached");
        if (max_abs(s) < opt.step_tol) {
            if (H_is_identity) return finish("step tolerance");
            reset_H();
            H_is_identity = true;
        }
        if (tr.remaining() < static_cast<int>(P)) return finish("budget");

        const std::vector<double> gn = gradient(x, fx);
        for (std::size_t i = 0; i < P; ++i) y[i] = gn[i] - g[i];
        g = gn;

        const double sy = dot(s, y);
        const double yy = dot(y, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * yy)) {
            if (H_is_identity) {
                const double scale = sy / yy;
                for (auto& v : H) v *= scale;
                H_is_identity = false;
            }
            // H+ = (I - r s y^T) H (I - r y s^T) + r s s^T, r = 1 / s^T y
            const double r = 1.0 / sy;
            for (std::size_t i = 0; i < P; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < P; ++j) acc += H[i * P + j] * y[j];
                Hy[i] = acc;
            }
            const double yHy = dot(y, Hy);
            for (std::size_t i = 0; i < P; ++i) {
                for (std::size_t j = 0; j < P; ++j) {
                    H[i * P + j] += -r * (Hy[i] * s[j] + s[i] * Hy[j]) + (r * r * yHy + r) * s[i] * s[j];
                }
            }
        }
    }
}

}  // namespace rdinv
