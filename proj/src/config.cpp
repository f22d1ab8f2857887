#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/experiment.hpp"

namespace qwalk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

const std::map<std::string, Preset, std::less<>> kPresetNames = {
    {"fig1", Preset::fig1}, {"fig2", Preset::fig2},   {"fig3", Preset::fig3},
    {"fig4a", Preset::fig4a}, {"fig4b", Preset::fig4b}, {"custom", Preset::custom},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || std::isnan(v)) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
    return v;
}

double parse_real_in(const std::string& key, const std::string& value, double lo, double hi,
                     bool hi_open) {
    const double v = parse_real(key, value);
    const bool ok = v >= lo && (hi_open ? v < hi : v <= hi);
    if (!ok) {
        throw ConfigError("key '" + key + "': value " + value + " outside [" +
                          std::to_string(lo) + (hi_open ? ", " : ", ") + std::to_string(hi) +
                          (hi_open ? ")" : "]"));
    }
    return v;
}

int parse_positive_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || v < 1 || v > 1000000000L) {
        throw ConfigError("key '" + key + "': '" + value + "' is not a positive integer");
    }
    return static_cast<int>(v);
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    if (value.empty() || value[0] == '-') {
        throw ConfigError("key '" + key + "': '" + value + "' is not an unsigned integer");
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("key '" + key + "': '" + value + "' is not an unsigned integer");
    }
    return v;
}

} // namespace

std::string_view preset_name(Preset preset) {
    switch (preset) {
    case Preset::fig1: return "fig1";
    case Preset::fig2: return "fig2";
    case Preset::fig3: return "fig3";
    case Preset::fig4a: return "fig4a";
    case Preset::fig4b: return "fig4b";
    case Preset::custom: return "custom";
    }
    return "custom";
}

Preset preset_from_name(std::string_view name) {
    const auto it = kPresetNames.find(name);
    if (it == kPresetNames.end()) {
        throw ConfigError("unknown preset '" + std::string(name) +
                          "' (expected fig1|fig2|fig3|fig4a|fig4b|custom)");
    }
    return it->second;
}

ExperimentSpec make_preset_spec(Preset preset) {
    ExperimentSpec spec;
    spec.preset = preset;
    SimConfig& base = spec.base;
    switch (preset) {
    case Preset::fig1:
    case Preset::fig2:
        base.theta = kPi / 4.0;
        base.disorder_width = 0.2;
        base.alpha = 0.0;
        base.beta = 0.0;
        base.horizon = 300;
        base.ensemble_size = 5000;
        break;
    case Preset::fig3:
        base.theta = kPi / 9.0;
        base.disorder_width = 0.1;
        base.alpha = 0.0;
        base.beta = 0.0;
        base.horizon = 2000;
        base.ensemble_size = 5000;
        break;
    case Preset::fig4a:
        base.theta = kPi / 4.0;
        base.disorder_width = 0.3;
        base.alpha = 0.0;
        base.beta = 0.0;
        base.horizon = 500;
        base.ensemble_size = 2000;
        break;
    case Preset::fig4b:
        base.theta = kPi / 4.0;
        base.disorder_width = 0.2;
        base.alpha = 0.0;
        base.beta = 0.0;
        base.horizon = 500;
        base.ensemble_size = 2000;
        break;
    case Preset::custom:
        break;
    }
    spec.output_dir = std::string("qwalk_out_") + std::string(preset_name(preset));
    return spec;
}

ExperimentSpec parse_config(std::string_view text) {
    std::map<std::string, std::string> pairs;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key=value, got '" + std::string(line) + "'");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        if (!pairs.emplace(key, value).second) {
            throw ConfigError("duplicate key '" + key + "'");
        }
    }

    static const std::map<std::string, int, std::less<>> known = {
        {"preset", 0},        {"theta", 1},       {"disorder_width", 2},
        {"alpha", 3},         {"beta", 4},        {"horizon", 5},
        {"ensemble_size", 6}, {"master_seed", 7}, {"disorder_mode", 8},
        {"output_dir", 9},    {"format", 10},
    };
    for (const auto& [key, value] : pairs) {
        if (known.find(key) == known.end()) {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    const auto preset_it = pairs.find("preset");
    const Preset preset =
        preset_it == pairs.end() ? Preset::custom : preset_from_name(preset_it->second);
    ExperimentSpec spec = make_preset_spec(preset);

    if (preset == Preset::custom) {
        for (const char* required : {"theta", "disorder_width", "alpha", "beta", "horizon",
                                     "ensemble_size", "master_seed"}) {
            if (pairs.find(required) == pairs.end()) {
                throw ConfigError("missing key '" + std::string(required) +
                                  "' (preset=custom requires a full simulation config)");
            }
        }
    }

    if (const auto it = pairs.find("theta"); it != pairs.end()) {
        spec.base.theta = parse_real_in("theta", it->second, 0.0, kPi / 2.0, false);
    }
    if (const auto it = pairs.find("disorder_width"); it != pairs.end()) {
        const double w = parse_real("disorder_width", it->second);
        if (!(w >= 0.0)) {
            throw ConfigError("key 'disorder_width': must be >= 0, got " + it->second);
        }
        spec.base.disorder_width = w;
    }
    if (const auto it = pairs.find("alpha"); it != pairs.end()) {
        spec.base.alpha = parse_real_in("alpha", it->second, 0.0, kPi, false);
    }
    if (const auto it = pairs.find("beta"); it != pairs.end()) {
        spec.base.beta = parse_real_in("beta", it->second, 0.0, 2.0 * kPi, true);
    }
    if (const auto it = pairs.find("horizon"); it != pairs.end()) {
        spec.base.horizon = parse_positive_int("horizon", it->second);
    }
    if (const auto it = pairs.find("ensemble_size"); it != pairs.end()) {
        spec.base.ensemble_size = parse_positive_int("ensemble_size", it->second);
    }
    if (const auto it = pairs.find("master_seed"); it != pairs.end()) {
        spec.base.master_seed = parse_seed("master_seed", it->second);
    }
    if (const auto it = pairs.find("disorder_mode"); it != pairs.end()) {
        if (it->second == "static") {
            spec.base.disorder_mode = DisorderMode::static_field;
        } else if (it->second == "dynamic") {
            spec.base.disorder_mode = DisorderMode::dynamic_field;
        } else {
            throw ConfigError("key 'disorder_mode': expected static|dynamic, got '" +
                              it->second + "'");
        }
    }
    if (const auto it = pairs.find("output_dir"); it != pairs.end()) {
        if (it->second.empty()) {
            throw ConfigError("key 'output_dir': must not be empty");
        }
        spec.output_dir = it->second;
    }
    if (const auto it = pairs.find("format"); it != pairs.end()) {
        if (it->second == "csv") {
            spec.write_csv = true;
            spec.write_json = false;
        } else if (it->second == "json") {
            spec.write_csv = false;
            spec.write_json = true;
        } else if (it->second == "both") {
            spec.write_csv = true;
            spec.write_json = true;
        } else {
            throw ConfigError("key 'format': expected csv|json|both, got '" + it->second + "'");
        }
    }

    spec.base.validate();
    return spec;
}

} // namespace qwalk
