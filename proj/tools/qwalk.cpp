// qwalk — command-line front end: run config files, run figure presets,
// fit power laws to sweep tables.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/experiment.hpp"
#include "qwalk/io.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qwalk::ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void report(const qwalk::RunManifest& manifest) {
    std::printf("preset %s: %zu output file(s) in %s (%.2f s)\n",
                std::string(qwalk::preset_name(manifest.spec.preset)).c_str(),
                manifest.outputs.size(), manifest.spec.output_dir.string().c_str(),
                manifest.duration_seconds);
}

int do_run(const std::string& config_path) {
    const qwalk::ExperimentSpec spec = qwalk::parse_config(slurp(config_path));
    report(qwalk::run_experiment(spec));
    return 0;
}

int do_preset(const std::string& name, bool seed_set, std::uint64_t seed,
              const std::string& out_dir) {
    qwalk::ExperimentSpec spec = qwalk::make_preset_spec(qwalk::preset_from_name(name));
    if (name == "custom") {
        throw qwalk::ConfigError("preset 'custom' needs a config file; use the run command");
    }
    if (seed_set) {
        spec.base.master_seed = seed;
    }
    if (!out_dir.empty()) {
        spec.output_dir = out_dir;
    }
    report(qwalk::run_experiment(spec));
    return 0;
}

int do_fit(const std::string& csv_path, const std::string& column, const std::string& against,
           const std::string& range) {
    if (against != "theta" && against != "W") {
        throw qwalk::ConfigError("--against must be theta or W, got '" + against + "'");
    }
    const std::size_t comma = range.find(',');
    if (comma == std::string::npos) {
        throw qwalk::ConfigError("--range expects lo,hi; got '" + range + "'");
    }
    double lo = 0.0;
    double hi = 0.0;
    try {
        lo = std::stod(range.substr(0, comma));
        hi = std::stod(range.substr(comma + 1));
    } catch (const std::exception&) {
        throw qwalk::ConfigError("--range expects lo,hi numbers; got '" + range + "'");
    }

    const qwalk::CsvTable table = qwalk::read_csv_columns(csv_path);
    const auto& xs = table.columns[table.column_index(against)];
    const auto& ys = table.columns[table.column_index(column)];
    const qwalk::PowerLawFit fit = qwalk::fit_power_law(xs, ys, lo, hi);

    nlohmann::json j;
    j["exponent"] = fit.exponent;
    j["log_prefactor"] = fit.log_prefactor;
    j["r_squared"] = fit.r_squared;
    j["fit_lo"] = fit.fit_lo;
    j["fit_hi"] = fit.fit_hi;
    j["n_points"] = fit.n_points;
    std::cout << j.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"disordered discrete-time quantum walk simulator"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment from a key=value config file");
    run->add_option("config", config_path, "config file path")->required();

    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 0;
    CLI::App* preset_cmd = app.add_subcommand("preset", "run a named figure preset");
    preset_cmd->add_option("name", preset, "fig1|fig2|fig3|fig4a|fig4b")->required();
    CLI::Option* seed_opt = preset_cmd->add_option("--seed", seed, "master seed override");
    preset_cmd->add_option("--out", out_dir, "output directory override");

    std::string csv_path;
    std::string column = "x_max";
    std::string against;
    std::string range;
    CLI::App* fit = app.add_subcommand("fit", "fit a power law to a sweep table CSV");
    fit->add_option("csv", csv_path, "sweep table CSV")->required();
    fit->add_option("--column", column, "dependent column (default x_max)");
    fit->add_option("--against", against, "independent column: theta|W")->required();
    fit->add_option("--range", range, "fit window lo,hi")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return do_run(config_path);
        }
        if (preset_cmd->parsed()) {
            return do_preset(preset, seed_opt->count() > 0, seed, out_dir);
        }
        if (fit->parsed()) {
            return do_fit(csv_path, column, against, range);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qwalk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const qwalk::FitError& e) {
        std::cerr << "fit error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
