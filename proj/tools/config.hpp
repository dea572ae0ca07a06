#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdinv_cli {

/// Raised for unreadable values, unknown keys and failed validation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` settings. Every key has a documented default; unknown
/// keys are rejected. An empty value means "unset" for optional keys.
class Config {
public:
    Config();

    /// Overlays a file on the defaults. `#` starts a comment.
    void load(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);

    const std::string& raw(const std::string& key) const;
    bool has(const std::string& key) const { return !raw(key).empty(); }
    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> list(const std::string& key) const;
    std::optional<std::filesystem::path> path(const std::string& key) const;

    /// Rewrites relative path values as absolute ones, so the echoed file
    /// runs from anywhere.
    void absolutize_paths();
    void write(const std::filesystem::path& path) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace rdinv_cli
