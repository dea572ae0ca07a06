#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

namespace rdinv_cli {
namespace {

struct Key {
    const char* name;
    const char* fallback;
    const char* doc;
};

// The schema. Defaults follow the N=2 reconstruction setup on (0, 1).
const Key kSchema[] = {
    {"a", "0", "left end of the domain"},
    {"b", "1", "right end of the domain"},
    {"D", "0.1", "diffusion coefficient"},
    {"alpha1", "0", "Robin weight on u at a"},
    {"beta1", "1", "Robin weight on -u_x at a"},
    {"alpha2", "0", "Robin weight on u at b"},
    {"beta2", "1", "Robin weight on u_x at b"},
    {"T", "", "forward horizon; defaults to eps"},
    {"M", "960", "grid intervals"},
    {"x0", "0.66666666666666663", "probe location"},
    {"eps", "0.3", "observation window (0, eps]"},
    {"K", "120", "probe instants per trace"},
    {"frames", "61", "output instants of a forward solve, t = 0 included"},
    {"n", "10", "bump basis size (n+1 amplitudes per coefficient)"},
    {"N", "2", "number of unknown coefficients"},
    {"u0", "", "constant initial values, comma separated; default 0.1, 0.2, ..."},
    {"u0_tilt", "0", "slope added to every initial condition: u0 + tilt (x - a)"},
    {"mu_const", "", "constant coefficients mu_1..mu_N instead of a basis expansion"},
    {"truth", "", "coefficient CSV of the true amplitudes"},
    {"h_lo", "-5", "lower bound of random amplitudes"},
    {"h_hi", "5", "upper bound of random amplitudes"},
    {"traces", "", "trace file to invert or score"},
    {"init", "", "coefficient CSV of the starting amplitudes; zero otherwise"},
    {"recovered", "", "coefficient CSV scored by `report`"},
    {"noise_sigma", "0", "additive Gaussian noise on synthesized traces"},
    {"budget", "4000", "objective evaluations per optimizer run"},
    {"restarts", "0", "extra runs from random starting points"},
    {"fd_step", "1e-8", "relative forward-difference step"},
    {"grad_tol", "1e-8", "stop when the gradient max-norm falls below"},
    {"step_tol", "1e-12", "stop when the step max-norm falls below"},
    {"include_derivative", "true", "use the u_x traces"},
    {"derivative_weight", "1", "weight of the u_x misfit"},
    {"theta", "0.5", "time-stepping theta"},
    {"dt", "0", "nominal time step; 0 means T / 600"},
    {"newton_tol", "1e-10", "Newton update tolerance"},
    {"newton_max_iter", "25", "Newton iterations per step"},
    {"blowup_cap", "1e6", "max |u| before a solve is declared blown up"},
    {"case", "time_dependent", "counter-example: scaled_roots, symmetry, time_dependent, unknown_initial"},
    {"roots", "1", "positive distinct roots for scaled_roots"},
    {"tau", "2", "scale factor for scaled_roots"},
    {"rho", "1", "growth rate for unknown_initial"},
    {"seed", "1", "random seed"},
    {"threads", "1", "worker threads"},
};

const std::set<std::string> kPathKeys{"truth", "traces", "init", "recovered"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(key + ": not a number: '" + text + "'");
    }
    return v;
}

}  // namespace

Config::Config() {
    for (const auto& k : kSchema) values_[k.name] = k.fallback;
}

void Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::filesystem::filesystem_error("cannot open config", path, std::make_error_code(std::errc::no_such_file_or_directory));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void Config::set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second = value;
}

const std::string& Config::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key) const { return parse_number(key, raw(key)); }

int Config::integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(key + ": not an integer: '" + raw(key) + "'");
    return static_cast<int>(v);
}

bool Config::flag(const std::string& key) const {
    const auto& v = raw(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::list(const std::string& key) const {
    std::vector<double> out;
    const auto& text = raw(key);
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        out.push_back(parse_number(key, item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<std::filesystem::path> Config::path(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return std::filesystem::path(raw(key));
}

void Config::absolutize_paths() {
    for (const auto& key : kPathKeys) {
        auto& v = values_[key];
        if (!v.empty()) v = std::filesystem::absolute(v).lexically_normal().string();
    }
}

void Config::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::filesystem::filesystem_error("cannot write config", path, std::make_error_code(std::errc::io_error));
    for (const auto& k : kSchema) {
        out << "# " << k.doc << '\n' << k.name << " = " << values_.at(k.name) << '\n';
    }
    if (!out) throw std::filesystem::filesystem_error("cannot write config", path, std::make_error_code(std::errc::io_error));
}

}  // namespace rdinv_cli
