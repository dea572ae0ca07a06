#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

namespace rdinv::detail {

/// Shortest-safe round-trip encoding (17 significant digits).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

/// Parses the whole token as a double; false on any trailing garbage.
inline bool parse_double(std::string_view token, double& out) {
    if (token.empty()) return false;
    std::string tmp(token);
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size();
}

inline bool parse_int(std::string_view token, long long& out) {
    if (token.empty()) return false;
    std::string tmp(token);
    char* end = nullptr;
    out = std::strtoll(tmp.c_str(), &end, 10);
    return end == tmp.c_str() + tmp.size();
}

}  // namespace rdinv::detail
