#include "rdinv/probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "rdinv/errors.hpp"
#include "text_util.hpp"

namespace rdinv {

std::vector<double> uniform_probe_times(double eps, int K) {
    if (!(eps > 0.0) || K < 1) throw InvalidArgument("probe times require eps > 0 and K >= 1");
    std::vector<double> t(static_cast<std::size_t>(K));
    for (int j = 1; j <= K; ++j) t[static_cast<std::size_t>(j - 1)] = (j == K) ? eps : eps * j / K;
    return t;
}

namespace {

/// Value and d/dxi weights of the cubic Lagrange interpolant through nodes
/// 0, 1, 2, 3 (local coordinates), evaluated at xi.
struct CubicWeights {
    std::array<double, 4> value{};
    std::array<double, 4> slope{};
};

CubicWeights cubic_weights(double xi) {
    CubicWeights w;
    for (int m = 0; m < 4; ++m) {
        double l = 1.0;
        double dl = 0.0;
        for (int q = 0; q < 4; ++q) {
            if (q == m) continue;
            l *= (xi - q) / (m - q);
            double term = 1.0 / (m - q);
            for (int r = 0; r < 4; ++r) {
                if (r != m && r != q) term *= (xi - r) / (m - r);
            }
            dl += term;
        }
        w.value[static_cast<std::size_t>(m)] = l;
        w.slope[static_cast<std::size_t>(m)] = dl;
    }
    return w;
}

struct ProbeStencil {
    // Either one four-node stencil, or the average of two tied ones.
    int first_a = 0;
    CubicWeights weights_a;
    int first_b = -1;
    CubicWeights weights_b;
    bool at_node = false;
    int node = 0;
};

ProbeStencil make_stencil(const SpatialGrid& grid, double x0) {
    const int M = grid.intervals();
    const double s = (x0 - grid.domain().a) / grid.spacing();
    const double nearest = std::round(s);
    ProbeStencil st;
    if (std::abs(s - nearest) < 1e-9) {
        const int i = static_cast<int>(nearest);
        st.at_node = true;
        st.node = i;
        if (i >= 2 && i <= M - 2) {
            st.first_a = i - 1;
            st.weights_a = cubic_weights(1.0);
            st.first_b = i - 2;
            st.weights_b = cubic_weights(2.0);
        } else {
            st.first_a = std::clamp(i - 1, 0, M - 3);
            st.weights_a = cubic_weights(static_cast<double>(i - st.first_a));
        }
        return st;
    }
    const int j = static_cast<int>(std::floor(s));
    st.first_a = std::clamp(j - 1, 0, M - 3);
    st.weights_a = cubic_weights(s - st.first_a);
    return st;
}

}  // namespace

ProbeTrace probe(const Trajectory& traj, double x0, std::span<const double> times) {
    const auto& grid = traj.grid();
    const auto& dom = grid.domain();
    const double slack = 1e-12 * dom.length();
    if (!(x0 >= dom.a - slack && x0 <= dom.b + slack)) {
        throw ProbeOutsideDomain("probe point " + detail::format_double(x0) + " outside [" +
                                 detail::format_double(dom.a) + ", " + detail::format_double(dom.b) + "]");
    }
    if (grid.intervals() < 3) throw InvalidArgument("probe: grid too coarse");
    x0 = std::clamp(x0, dom.a, dom.b);
    const ProbeStencil st = make_stencil(grid, x0);
    const double h = grid.spacing();

    ProbeTrace tr;
    tr.x0 = x0;
    tr.times.reserve(times.size());
    tr.u.reserve(times.size());
    tr.dudx.reserve(times.size());

    const auto traj_times = traj.times();
    std::size_t cursor = 0;
    for (const double t : times) {
        while (cursor < traj_times.size() && traj_times[cursor] < t - 1e-12 * std::max(1.0, std::abs(t))) ++cursor;
        if (cursor == traj_times.size() || std::abs(traj_times[cursor] - t) > 1e-12 * std::max(1.0, std::abs(t))) {
            throw InvalidArgument("probe: time " + detail::format_double(t) + " is not a trajectory output instant");
        }
        const auto row = traj.profile(cursor);
        auto eval = [&](int first, const CubicWeights& w, double& v, double& dv) {
            v = 0.0;
            dv = 0.0;
            for (std::size_t m = 0; m < 4; ++m) {
                const double um = row[static_cast<std::size_t>(first) + m];
                v += w.value[m] * um;
                dv += w.slope[m] * um;
            }
        };
        double v = 0.0;
        double dv = 0.0;
        eval(st.first_a, st.weights_a, v, dv);
        if (st.first_b >= 0) {
            double v2 = 0.0;
            double dv2 = 0.0;
            eval(st.first_b, st.weights_b, v2, dv2);
            dv = 0.5 * (dv + dv2);
        }
        if (st.at_node) v = row[static_cast<std::size_t>(st.node)];
        tr.times.push_back(traj_times[cursor]);
        tr.u.push_back(v);
        tr.dudx.push_back(dv / h);
    }
    return tr;
}

ProbeTrace probe(const Trajectory& traj, double x0) { return probe(traj, x0, traj.times()); }

std::vector<FamilyViolation> validate_initial_family(const std::vector<InitialCondition>& ics,
                                                     const SpatialGrid& grid, double tol) {
    if (ics.empty()) throw InvalidArgument("validate_initial_family: no initial conditions");
    std::vector<std::vector<double>> sampled;
    sampled.reserve(ics.size());
    for (const auto& ic : ics) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = ic(grid[i]);
        sampled.push_back(std::move(v));
    }
    std::vector<FamilyViolation> out;
    for (std::size_t p = 0; p < ics.size(); ++p) {
        for (std::size_t q = p + 1; q < ics.size(); ++q) {
            for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
                if (std::abs(sampled[p][i] - sampled[q][i]) <= tol) out.push_back({p, q, grid[i]});
            }
        }
    }
    return out;
}

void add_measurement_noise(MeasurementSet& ms, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw InvalidArgument("noise level must be nonnegative");
    if (sigma == 0.0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& tr : ms.traces) {
        for (auto& v : tr.u) v += noise(rng);
        for (auto& v : tr.dudx) v += noise(rng);
    }
}

void write_traces(const MeasurementSet& ms, const std::filesystem::path& path) {
    if (ms.traces.empty()) throw InvalidArgument("write_traces: empty measurement set");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# x0=" << detail::format_double(ms.x0) << " eps=" << detail::format_double(ms.eps)
        << " N=" << ms.traces.size() << '\n';
    out << "i,t,u,dudx\n";
    for (std::size_t i = 0; i < ms.traces.size(); ++i) {
        const auto& tr = ms.traces[i];
        if (tr.u.size() != tr.size() || tr.dudx.size() != tr.size()) {
            throw InvalidArgument("write_traces: trace arrays differ in length");
        }
        for (std::size_t k = 0; k < tr.size(); ++k) {
            out << (i + 1) << ',' << detail::format_double(tr.times[k]) << ',' << detail::format_double(tr.u[k])
                << ',' << detail::format_double(tr.dudx[k]) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

MeasurementSet read_traces(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    MeasurementSet ms;
    long long declared_n = -1;
    bool have_meta = false;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw MalformedTraceFile(path.string() + ":" + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            if (have_meta) continue;
            std::istringstream meta{std::string(body.substr(1))};
            std::string item;
            bool got_x0 = false, got_eps = false, got_n = false;
            while (meta >> item) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = item.substr(0, eq);
                const std::string val = item.substr(eq + 1);
                if (key == "x0") got_x0 = detail::parse_double(val, ms.x0);
                else if (key == "eps") got_eps = detail::parse_double(val, ms.eps);
                else if (key == "N") got_n = detail::parse_int(val, declared_n);
            }
            if (!(got_x0 && got_eps && got_n)) fail("metadata line must carry x0=, eps=, N=");
            have_meta = true;
            continue;
        }
        if (!have_header) {
            if (!have_meta) fail("missing `# x0=... eps=... N=...` line");
            if (body != "i,t,u,dudx") fail("expected header `i,t,u,dudx`");
            have_header = true;
            continue;
        }
        const auto cells = detail::split(body, ',');
        if (cells.size() != 4) fail("expected 4 columns");
        long long idx = 0;
        double t = 0, u = 0, du = 0;
        if (!detail::parse_int(cells[0], idx) || !detail::parse_double(cells[1], t) ||
            !detail::parse_double(cells[2], u) || !detail::parse_double(cells[3], du)) {
            fail("non-numeric field");
        }
        if (!std::isfinite(t) || !std::isfinite(u) || !std::isfinite(du)) fail("non-finite value");
        const auto current = static_cast<long long>(ms.traces.size());
        if (idx == current + 1) {
            ms.traces.push_back(ProbeTrace{ms.x0, {}, {}, {}});
        } else if (idx != current) {
            fail("trace blocks must be numbered 1..N contiguously");
        }
        auto& tr = ms.traces.back();
        if (!tr.times.empty() && !(t > tr.times.back())) fail("times must be strictly increasing");
        if (!(t > 0.0)) fail("trace times must be positive");
        tr.times.push_back(t);
        tr.u.push_back(u);
        tr.dudx.push_back(du);
    }
    if (!have_header) {
        lineno = 0;
        fail("missing header");
    }
    if (ms.traces.empty()) fail("no traces (N >= 1 required)");
    if (declared_n != static_cast<long long>(ms.traces.size())) fail("N in metadata does not match block count");
    for (const auto& tr : ms.traces) {
        if (tr.times.back() > ms.eps * (1.0 + 1e-12)) fail("trace time exceeds eps");
    }
    return ms;
}

}  // namespace rdinv
