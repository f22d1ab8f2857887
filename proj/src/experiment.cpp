#include "qwalk/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Condition {
    const char* label;
    double alpha;
    double beta;
};

// The three canonical starts: right-polarized, left-polarized, symmetric.
constexpr Condition kConditions[] = {
    {"R", 0.0, 0.0},
    {"L", kPi, 0.0},
    {"S", kPi / 2.0, kPi / 2.0},
};

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

nlohmann::json config_json(const SimConfig& config) {
    nlohmann::json j;
    j["theta"] = config.theta;
    j["disorder_width"] = config.disorder_width;
    j["alpha"] = config.alpha;
    j["beta"] = config.beta;
    j["horizon"] = config.horizon;
    j["ensemble_size"] = config.ensemble_size;
    j["master_seed"] = config.master_seed;
    j["disorder_mode"] =
        config.disorder_mode == DisorderMode::static_field ? "static" : "dynamic";
    return j;
}

std::string write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
    std::string out = table.parameter_name + ",x_max,t_max,at_horizon,horizon\n";
    for (const SweepRow& row : table.rows) {
        out += format_double(row.parameter);
        out += ',';
        out += format_double(row.peak.x_max);
        out += ',';
        out += std::to_string(row.peak.t_max);
        out += ',';
        out += row.peak.at_horizon ? "1" : "0";
        out += ',';
        out += std::to_string(row.horizon);
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    f.flush();
    if (!f) {
        throw IoError("write failed for " + path.string());
    }
    return file_checksum(path);
}

// Collects everything run_experiment produces and cleans up on failure.
struct Pipeline {
    const ExperimentSpec& spec;
    RunManifest manifest;
    std::vector<RunRecord> runs;
    std::vector<SweepTable> tables;
    std::vector<FitRecord> fits;
    std::vector<std::filesystem::path> created;

    explicit Pipeline(const ExperimentSpec& s) : spec(s) {
        manifest.spec = s;
        manifest.version = kVersion;
    }

    void add_run(const SimConfig& config, const CentroidSeries& series,
                 const std::string& file_stem) {
        RunRecord record;
        record.config = config;
        if (spec.write_csv) {
            const std::filesystem::path path = spec.output_dir / (file_stem + ".csv");
            const std::string checksum = write_series_csv(series, path);
            created.push_back(path);
            manifest.outputs.emplace_back(path.filename().string(), checksum);
            record.file = path.filename().string();
        }
        runs.push_back(std::move(record));
    }

    void add_sweep(std::string name, std::string parameter_name, std::vector<SweepRow> rows) {
        SweepTable table;
        table.name = std::move(name);
        table.parameter_name = std::move(parameter_name);
        table.rows = std::move(rows);
        if (spec.write_csv) {
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                char stem[64];
                std::snprintf(stem, sizeof stem, "%s_point%02zu.csv", table.name.c_str(), i);
                const std::filesystem::path path = spec.output_dir / stem;
                const std::string checksum = write_series_csv(table.rows[i].series, path);
                created.push_back(path);
                manifest.outputs.emplace_back(path.filename().string(), checksum);
            }
            const std::filesystem::path path = spec.output_dir / (table.name + ".csv");
            const std::string checksum = write_sweep_csv(table, path);
            created.push_back(path);
            manifest.outputs.emplace_back(path.filename().string(), checksum);
            table.file = path.filename().string();
        }
        tables.push_back(std::move(table));
    }

    void remove_created() {
        for (const auto& path : created) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
    }
};

void run_fig1(Pipeline& p) {
    std::uint64_t index = 0;
    for (const double width : {0.0, 0.2}) {
        for (const Condition& cond : kConditions) {
            SimConfig cfg = p.spec.base;
            cfg.disorder_width = width;
            cfg.alpha = cond.alpha;
            cfg.beta = cond.beta;
            cfg.master_seed = derive_stream_seed(p.spec.base.master_seed, index++);
            const CentroidSeries series = run_ensemble(cfg);
            p.add_run(cfg, series, "fig1_W" + fmt_param(width) + "_" + cond.label);
        }
    }
}

void run_fig2(Pipeline& p) {
    std::uint64_t index = 0;
    for (const Condition& cond : kConditions) {
        SimConfig cfg = p.spec.base;
        cfg.alpha = cond.alpha;
        cfg.beta = cond.beta;
        cfg.master_seed = derive_stream_seed(p.spec.base.master_seed, index++);
        const CentroidSeries series = run_ensemble(cfg);
        p.add_run(cfg, series, std::string("fig2_") + cond.label);
    }
}

void run_fig3(Pipeline& p) {
    const double thetas[] = {kPi / 9.0, kPi / 4.0, 7.0 * kPi / 18.0};
    const char* theta_labels[] = {"theta20deg", "theta45deg", "theta70deg"};
    const double widths[] = {0.1, 0.2, 0.3, 0.4, 0.5};
    std::uint64_t index = 0;
    for (std::size_t ti = 0; ti < 3; ++ti) {
        for (std::size_t wi = 0; wi < 5; ++wi) {
            SimConfig cfg = p.spec.base;
            cfg.theta = thetas[ti];
            cfg.disorder_width = widths[wi];
            cfg.alpha = 0.0;
            cfg.beta = 0.0;
            // The near-transparent coin at weak disorder turns around late.
            cfg.horizon = (ti == 0 && wi == 0) ? 2000 : 500;
            cfg.master_seed = derive_stream_seed(p.spec.base.master_seed, index++);
            const CentroidSeries series = run_ensemble(cfg);
            p.add_run(cfg, series,
                      std::string("fig3_") + theta_labels[ti] + "_W" + fmt_param(widths[wi]));
        }
    }
}

void run_fig4a(Pipeline& p) {
    const double fit_lo = kPi / 90.0;
    const double fit_hi = kPi / 9.0;
    std::vector<double> thetas = log_spaced(fit_lo, fit_hi, 8);
    thetas.push_back(7.0 * kPi / 18.0); // past the fit window: the decay breaks down here
    thetas.push_back(kPi / 2.0);
    std::vector<SweepRow> rows = sweep_theta(p.spec.base, thetas);

    std::vector<double> xs;
    std::vector<double> ys;
    for (const SweepRow& row : rows) {
        xs.push_back(row.parameter);
        ys.push_back(row.peak.x_max);
    }
    p.fits.push_back({"x_max_vs_theta", fit_power_law(xs, ys, fit_lo, fit_hi)});
    p.add_sweep("fig4a_sweep", "theta", std::move(rows));
}

void run_fig4b(Pipeline& p) {
    const double fit_lo = 0.05;
    const double fit_hi = 0.5;
    const std::vector<double> widths = log_spaced(fit_lo, fit_hi, 8);
    std::vector<SweepRow> rows = sweep_disorder(p.spec.base, widths);

    std::vector<double> xs;
    std::vector<double> ys;
    for (const SweepRow& row : rows) {
        xs.push_back(row.parameter);
        ys.push_back(row.peak.x_max);
    }
    p.fits.push_back({"x_max_vs_W", fit_power_law(xs, ys, fit_lo, fit_hi)});
    p.add_sweep("fig4b_sweep", "W", std::move(rows));
}

void run_custom(Pipeline& p) {
    const CentroidSeries series = run_ensemble(p.spec.base);
    p.add_run(p.spec.base, series, "custom_series");
}

} // namespace

std::string write_summary_json(const RunManifest& manifest, const std::vector<RunRecord>& runs,
                               const std::vector<SweepTable>& tables,
                               const std::vector<FitRecord>& fits,
                               const std::filesystem::path& path) {
    nlohmann::json j;
    j["version"] = manifest.version;
    j["preset"] = std::string(preset_name(manifest.spec.preset));
    j["config"] = config_json(manifest.spec.base);

    j["runs"] = nlohmann::json::array();
    for (const RunRecord& run : runs) {
        nlohmann::json r = config_json(run.config);
        r["file"] = run.file;
        j["runs"].push_back(std::move(r));
    }

    j["tables"] = nlohmann::json::object();
    for (const SweepTable& table : tables) {
        nlohmann::json t;
        t["parameter"] = table.parameter_name;
        t["file"] = table.file;
        t["rows"] = nlohmann::json::array();
        for (const SweepRow& row : table.rows) {
            nlohmann::json r;
            r["parameter"] = row.parameter;
            r["x_max"] = row.peak.x_max;
            r["t_max"] = row.peak.t_max;
            r["at_horizon"] = row.peak.at_horizon;
            r["horizon"] = row.horizon;
            r["seed"] = row.seed;
            t["rows"].push_back(std::move(r));
        }
        j["tables"][table.name] = std::move(t);
    }

    j["fits"] = nlohmann::json::object();
    for (const FitRecord& fit : fits) {
        nlohmann::json f;
        f["exponent"] = fit.fit.exponent;
        f["log_prefactor"] = fit.fit.log_prefactor;
        f["r_squared"] = fit.fit.r_squared;
        f["fit_lo"] = fit.fit.fit_lo;
        f["fit_hi"] = fit.fit.fit_hi;
        f["n_points"] = fit.fit.n_points;
        j["fits"][fit.name] = std::move(f);
    }

    j["checksums"] = nlohmann::json::object();
    for (const auto& [file, checksum] : manifest.outputs) {
        j["checksums"][file] = checksum;
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
    return file_checksum(path);
}

void write_manifest_text(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "qwalk manifest\n";
    out << "version: " << manifest.version << '\n';
    out << "preset: " << preset_name(manifest.spec.preset) << '\n';
    out << "output_dir: " << manifest.spec.output_dir.string() << '\n';
    const SimConfig& c = manifest.spec.base;
    out << "theta: " << format_double(c.theta) << '\n';
    out << "disorder_width: " << format_double(c.disorder_width) << '\n';
    out << "alpha: " << format_double(c.alpha) << '\n';
    out << "beta: " << format_double(c.beta) << '\n';
    out << "horizon: " << c.horizon << '\n';
    out << "ensemble_size: " << c.ensemble_size << '\n';
    out << "master_seed: " << c.master_seed << '\n';
    out << "disorder_mode: "
        << (c.disorder_mode == DisorderMode::static_field ? "static" : "dynamic") << '\n';
    out << "duration_seconds: " << format_double(manifest.duration_seconds) << '\n';
    out << "outputs:\n";
    for (const auto& [file, checksum] : manifest.outputs) {
        out << "  " << checksum << "  " << file << '\n';
    }
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

RunManifest run_experiment(const ExperimentSpec& spec) {
    spec.base.validate();
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + spec.output_dir.string() + ": " +
                      ec.message());
    }

    const auto start = std::chrono::steady_clock::now();
    Pipeline p(spec);
    try {
        switch (spec.preset) {
        case Preset::fig1: run_fig1(p); break;
        case Preset::fig2: run_fig2(p); break;
        case Preset::fig3: run_fig3(p); break;
        case Preset::fig4a: run_fig4a(p); break;
        case Preset::fig4b: run_fig4b(p); break;
        case Preset::custom: run_custom(p); break;
        }

        if (spec.write_json) {
            const std::filesystem::path path = spec.output_dir / "summary.json";
            const std::string checksum =
                write_summary_json(p.manifest, p.runs, p.tables, p.fits, path);
            p.created.push_back(path);
            p.manifest.outputs.emplace_back(path.filename().string(), checksum);
        }

        p.manifest.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest_text(p.manifest, spec.output_dir / "manifest.txt");
    } catch (...) {
        p.remove_created();
        throw;
    }
    return p.manifest;
}

} // namespace qwalk
