#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace esboot::cli {

const char* error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Internal: return "internal";
    }
    return "internal";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Usage: return 2;
        case ErrorKind::Config: return 3;
        case ErrorKind::Io: return 4;
        case ErrorKind::Validation: return 5;
        case ErrorKind::Convergence: return 6;
        case ErrorKind::Internal: return 1;
    }
    return 1;
}

ConfigObject::ConfigObject(const json& j, std::string path, std::initializer_list<std::string_view> allowed)
    : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw CliError(ErrorKind::Config, path_ + ": expected a JSON object");
    for (const auto& [key, value] : j_.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            std::string list;
            for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
            throw CliError(ErrorKind::Config, path_ + "." + key + ": unknown key (allowed: " + list + ")");
        }
    }
}

const json* ConfigObject::find(std::string_view key) const {
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
}

void ConfigObject::fail(std::string_view key, const std::string& msg) const {
    throw CliError(ErrorKind::Config, path_ + "." + std::string(key) + ": " + msg);
}

bool ConfigObject::has(std::string_view key) const { return find(key) != nullptr; }

double ConfigObject::number(std::string_view key, double fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) fail(key, "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(key, "expected a finite number");
    return x;
}

double ConfigObject::positive(std::string_view key, double fallback) const {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(key, "must be positive");
    return x;
}

std::size_t ConfigObject::count(std::string_view key, std::size_t fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0) fail(key, "expected a nonnegative integer");
    return v->get<std::size_t>();
}

std::uint64_t ConfigObject::u64(std::string_view key, std::uint64_t fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<long long>() >= 0) return v->get<std::uint64_t>();
    fail(key, "expected an unsigned 64-bit integer");
}

bool ConfigObject::boolean(std::string_view key, bool fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
}

std::string ConfigObject::string(std::string_view key, const std::string& fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
}

ConfigObject ConfigObject::object(std::string_view key, std::initializer_list<std::string_view> allowed) const {
    const json* v = find(key);
    if (v == nullptr) fail(key, "missing");
    return ConfigObject(*v, path_ + "." + std::string(key), allowed);
}

std::vector<json> ConfigObject::array(std::string_view key) const {
    const json* v = find(key);
    if (v == nullptr) return {};
    if (!v->is_array()) fail(key, "expected an array");
    return v->get<std::vector<json>>();
}

json load_config(const std::optional<std::filesystem::path>& path) {
    if (!path) return json::object();
    std::ifstream in(*path);
    if (!in) throw CliError(ErrorKind::Io, "cannot open config file " + path->string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw CliError(ErrorKind::Config, path->string() + ": " + e.what());
    }
}

InnovationDist parse_dist(const ConfigObject& c) {
    const std::string d = c.string("dist", "t");
    if (d == "normal") {
        if (c.has("nu")) throw CliError(ErrorKind::Config, c.path() + ".nu: only valid with dist \"t\"");
        return InnovationDist::normal();
    }
    if (d == "t") {
        try {
            return InnovationDist::student_t(c.number("nu", 6.0));
        } catch (const std::invalid_argument& e) {
            throw CliError(ErrorKind::Validation, c.path() + ".nu: " + e.what());
        }
    }
    throw CliError(ErrorKind::Config, c.path() + ".dist: expected \"normal\" or \"t\"");
}

GarchParams parse_theta(const ConfigObject& c, const std::string& key, const GarchParams& fallback) {
    if (!c.has(key)) return fallback;
    const ConfigObject t = c.object(key, {"omega", "alpha", "beta"});
    return {t.number("omega", fallback.omega), t.number("alpha", fallback.alpha), t.number("beta", fallback.beta)};
}

QmleOptions parse_qmle(const ConfigObject& c) {
    QmleOptions o;
    if (!c.has("qmle")) return o;
    const ConfigObject q = c.object("qmle", {"ftol", "xtol", "max_iter", "initial_step", "init", "init_value"});
    o.ftol = q.positive("ftol", o.ftol);
    o.xtol = q.positive("xtol", o.xtol);
    const std::size_t it = q.count("max_iter", static_cast<std::size_t>(o.max_iter));
    if (it == 0 || it > static_cast<std::size_t>(std::numeric_limits<int>::max()))
        throw CliError(ErrorKind::Config, q.path() + ".max_iter: out of range");
    o.max_iter = static_cast<int>(it);
    o.initial_step = q.positive("initial_step", o.initial_step);
    const std::string init = q.string("init", "presample");
    if (init == "presample") {
        o.init = InitScheme::presample();
    } else if (init == "sample_moment") {
        o.init = InitScheme::sample_moment();
    } else if (init == "fixed") {
        if (!q.has("init_value")) throw CliError(ErrorKind::Config, q.path() + ".init_value: required for init \"fixed\"");
        o.init = InitScheme::fixed(q.positive("init_value", 1.0));
    } else {
        throw CliError(ErrorKind::Config, q.path() + ".init: expected presample, sample_moment or fixed");
    }
    return o;
}

Scenario parse_scenario(const json& j, const std::string& path, const RunSettings& run, const Scenario& defaults) {
    const ConfigObject c(j, path,
                         {"id", "persistence", "theta0", "dist", "nu", "alpha", "n", "gamma", "B", "S", "burn_in"});
    if (c.has("persistence") && c.has("theta0"))
        throw CliError(ErrorKind::Config, path + ": give either persistence or theta0, not both");

    Scenario s = defaults;
    if (c.has("persistence")) {
        const std::string p = c.string("persistence", "high");
        if (p != "high" && p != "low")
            throw CliError(ErrorKind::Config, path + ".persistence: expected \"high\" or \"low\"");
        s.theta0 = study_theta0(p == "high" ? Persistence::High : Persistence::Low);
    } else if (c.has("theta0")) {
        s.theta0 = parse_theta(c, "theta0", s.theta0);
    }
    std::string label = "custom";
    if (s.theta0 == study_theta0(Persistence::High)) label = "high";
    if (s.theta0 == study_theta0(Persistence::Low)) label = "low";
    s.dist = parse_dist(c);
    s.alpha = c.number("alpha", s.alpha);
    s.n = c.count("n", s.n);
    s.gamma = c.number("gamma", s.gamma);
    s.B = c.count("B", s.B);
    s.S = c.count("S", s.S);
    s.burn_in = c.count("burn_in", s.burn_in);
    s.master_seed = run.seed;
    if (run.full_scale) {
        s.B = 2000;
        s.S = 2000;
    }

    std::ostringstream id;
    id << label << '_' << s.dist.name() << "_a" << s.alpha << "_n" << s.n << "_g" << s.gamma;
    s.id = c.string("id", id.str());
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError(ErrorKind::Validation, path + ": " + e.what());
    }
    return s;
}

}  // namespace esboot::cli
