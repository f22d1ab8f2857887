// experiment.hpp — experiment specs, figure presets, and the orchestration
// that turns a config into CSV/JSON artifacts plus a manifest.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/ensemble.hpp"

namespace qwalk {

inline constexpr const char* kVersion = "0.1.0";

enum class Preset { fig1, fig2, fig3, fig4a, fig4b, custom };

std::string_view preset_name(Preset preset);
Preset preset_from_name(std::string_view name); // throws ConfigError

struct ExperimentSpec {
    Preset preset = Preset::custom;
    SimConfig base;
    std::filesystem::path output_dir = "qwalk_out";
    bool write_csv = true;
    bool write_json = true;
};

// Preset defaults with no overrides applied.
ExperimentSpec make_preset_spec(Preset preset);

// Flat key=value text, one pair per line; blank lines and '#' comments are
// ignored. Keys: preset, theta, disorder_width, alpha, beta, horizon,
// ensemble_size, master_seed, disorder_mode, output_dir, format. Unknown keys
// are rejected; missing keys fall back to the preset defaults; preset=custom
// requires every simulation key to be present.
ExperimentSpec parse_config(std::string_view text);

struct RunRecord {
    std::string file; // CSV written for this ensemble ("" when csv disabled)
    SimConfig config; // exact parameters of this run (seed included)
};

struct SweepTable {
    std::string name;           // e.g. "theta_sweep"
    std::string parameter_name; // "theta" or "W"
    std::string file;           // sweep table CSV ("" when csv disabled)
    std::vector<SweepRow> rows;
};

struct FitRecord {
    std::string name; // e.g. "x_max_vs_theta"
    PowerLawFit fit;
};

struct RunManifest {
    ExperimentSpec spec;
    std::string version;
    double duration_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs; // (filename, checksum)
};

// Execute the preset's pipeline, write every artifact under spec.output_dir,
// and return the manifest. Partial outputs are removed when anything throws.
RunManifest run_experiment(const ExperimentSpec& spec);

// Single JSON document: config echo, seed, runs, sweep tables, fit blocks,
// and checksums of the data files written so far. Keys are emitted sorted,
// so documents are byte-stable. Returns the file checksum.
std::string write_summary_json(const RunManifest& manifest,
                               const std::vector<RunRecord>& runs,
                               const std::vector<SweepTable>& tables,
                               const std::vector<FitRecord>& fits,
                               const std::filesystem::path& path);

// Plain-text manifest (the one artifact allowed to vary run-to-run: it
// carries the wall-clock duration).
void write_manifest_text(const RunManifest& manifest, const std::filesystem::path& path);

} // namespace qwalk
