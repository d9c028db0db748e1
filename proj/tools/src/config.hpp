#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "esboot/experiments.hpp"
#include "esboot/qmle.hpp"
#include "errors.hpp"

namespace esboot::cli {

using json = nlohmann::ordered_json;

/// Typed, key-checked view of one JSON object. Every key must be listed in
/// `allowed`; reads enforce the JSON type and report the full key path.
class ConfigObject {
public:
    ConfigObject(const json& j, std::string path, std::initializer_list<std::string_view> allowed);

    bool has(std::string_view key) const;
    double number(std::string_view key, double fallback) const;
    double positive(std::string_view key, double fallback) const;
    std::size_t count(std::string_view key, std::size_t fallback) const;
    std::uint64_t u64(std::string_view key, std::uint64_t fallback) const;
    bool boolean(std::string_view key, bool fallback) const;
    std::string string(std::string_view key, const std::string& fallback) const;
    ConfigObject object(std::string_view key, std::initializer_list<std::string_view> allowed) const;
    std::vector<json> array(std::string_view key) const;

    const std::string& path() const noexcept { return path_; }

private:
    const json* find(std::string_view key) const;
    [[noreturn]] void fail(std::string_view key, const std::string& msg) const;

    const json& j_;
    std::string path_;
};

/// Settings shared by every subcommand, after command-line overrides.
struct RunSettings {
    std::uint64_t seed = 20190101;
    std::size_t workers = 0;
    std::filesystem::path out_dir = ".";
    bool full_scale = false;
};

/// Parses a JSON document; an absent path yields an empty object.
json load_config(const std::optional<std::filesystem::path>& path);

InnovationDist parse_dist(const ConfigObject& c);
GarchParams parse_theta(const ConfigObject& c, const std::string& key, const GarchParams& fallback);
QmleOptions parse_qmle(const ConfigObject& c);

/// A scenario block: "persistence" ("high"/"low") or explicit "theta0", plus
/// dist, nu, alpha, n, gamma, B, S, burn_in and an optional id.
Scenario parse_scenario(const json& j, const std::string& path, const RunSettings& run,
                        const Scenario& defaults);

}  // namespace esboot::cli
