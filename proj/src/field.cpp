#include "rdinv/field.hpp"

#include <algorithm>
#include <cmath>

#include "rdinv/errors.hpp"

namespace rdinv {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::BlowUpDetected: return "BlowUpDetected";
        case ErrorCode::NewtonDivergence: return "NewtonDivergence";
        case ErrorCode::ProbeOutsideDomain: return "ProbeOutsideDomain";
        case ErrorCode::MalformedTraceFile: return "MalformedTraceFile";
        case ErrorCode::MalformedCoefficientFile: return "MalformedCoefficientFile";
        case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
        case ErrorCode::InvalidRoots: return "InvalidRoots";
        case ErrorCode::AsymmetricData: return "AsymmetricData";
        case ErrorCode::Io: return "IoError";
    }
    return "Unknown";
}

void SpatialDomain::check() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw InvalidArgument("domain requires finite a < b");
    }
}

CoefficientField::CoefficientField() : static_fn_([](double) { return 0.0; }) {}

CoefficientField CoefficientField::constant(double value) {
    return from_function([value](double) { return value; });
}

CoefficientField CoefficientField::from_function(StaticFn fn) {
    if (!fn) throw InvalidArgument("coefficient field: empty function");
    CoefficientField f;
    f.static_fn_ = std::move(fn);
    return f;
}

CoefficientField CoefficientField::time_dependent(TimeFn fn) {
    if (!fn) throw InvalidArgument("coefficient field: empty function");
    CoefficientField f;
    f.static_fn_ = [fn](double x) { return fn(0.0, x); };
    f.time_fn_ = std::move(fn);
    return f;
}

CoefficientField CoefficientField::from_samples(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() != values.size() || nodes.empty()) {
        throw InvalidArgument("coefficient samples: node/value length mismatch");
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) throw InvalidArgument("coefficient samples: nodes not increasing");
    }
    auto data = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(std::move(nodes),
                                                                                               std::move(values));
    return from_function([data](double x) {
        const auto& [xs, vs] = *data;
        if (x <= xs.front()) return vs.front();
        if (x >= xs.back()) return vs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const auto i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return (1.0 - w) * vs[i - 1] + w * vs[i];
    });
}

double CoefficientField::at(double t, double x) const {
    return time_fn_ ? time_fn_(t, x) : static_fn_(x);
}

CoefficientField CoefficientField::reflected(const SpatialDomain& domain) const {
    CoefficientField f;
    f.static_fn_ = [fn = static_fn_, domain](double x) { return fn(domain.reflect(x)); };
    if (time_fn_) {
        f.time_fn_ = [fn = time_fn_, domain](double t, double x) { return fn(t, domain.reflect(x)); };
    }
    return f;
}

CoefficientField CoefficientField::scaled(double s) const {
    CoefficientField f;
    f.static_fn_ = [fn = static_fn_, s](double x) { return s * fn(x); };
    if (time_fn_) {
        f.time_fn_ = [fn = time_fn_, s](double t, double x) { return s * fn(t, x); };
    }
    return f;
}

double l2_distance(const CoefficientField& f, const CoefficientField& g, const SpatialDomain& domain, int M) {
    domain.check();
    if (M < 16) throw InvalidArgument("l2_distance requires M >= 16");
    const double h = domain.length() / M;
    double sum = 0.0;
    for (int i = 0; i <= M; ++i) {
        const double x = (i == M) ? domain.b : domain.a + i * h;
        const double d = f(x) - g(x);
        sum += (i == 0 || i == M) ? 0.5 * d * d : d * d;
    }
    return std::sqrt(sum * h);
}

}  // namespace rdinv
