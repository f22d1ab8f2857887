// ensemble.hpp — disorder realizations, single-walk runs, and the
// deterministic parallel ensemble average.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/rng.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class DisorderMode {
    static_field, // one field per realization, reused every step
    dynamic_field // fresh field each step, same realization stream
};

struct DisorderField {
    std::vector<double> nu; // per-site phase parameters, each in [-W, W]
    DisorderMode mode = DisorderMode::static_field;
};

// Full experiment description. origin is always the chain center; the chain
// itself is sized 2*horizon + 3 so edges are unreachable.
struct SimConfig {
    double theta = 0.78539816339744830961566084581988; // pi/4, Hadamard
    double disorder_width = 0.0;                       // W >= 0
    double alpha = 0.0;                                // initial-state polar angle
    double beta = 0.0;                                 // initial-state azimuth
    int horizon = 100;                                 // steps T >= 1
    int ensemble_size = 1;                             // realizations M >= 1
    std::uint64_t master_seed = 0;
    DisorderMode disorder_mode = DisorderMode::static_field;

    void validate() const; // throws ConfigError
    std::size_t n_sites() const { return 2 * static_cast<std::size_t>(horizon) + 3; }
    std::size_t origin() const { return static_cast<std::size_t>(horizon) + 1; }
};

// Ensemble-averaged centroid series, one entry per time index 0..T.
struct CentroidSeries {
    std::vector<double> x_mean;   // mean position relative to the start site
    std::vector<double> x_r;      // contribution of the right coin component
    std::vector<double> x_l;      // contribution of the left coin component
    std::vector<double> x_stderr; // standard error of x_mean across realizations
    long samples = 0;

    int horizon() const { return static_cast<int>(x_mean.size()) - 1; }
};

// Each nu_n i.i.d. uniform on [-width, width). width = 0 gives the zero field.
DisorderField sample_field(double width, std::size_t n_sites, RandomStream& stream);

// Field reflected about origin_index: nu'_n = nu_{2 origin - n}.
// Requires the chain to be symmetric about the origin (2*origin == n-1).
DisorderField mirrored(const DisorderField& field, std::size_t origin_index);

// Sum over sites of (n - origin) * P[n]; no normalization.
double centroid(std::span<const double> site_prob, std::size_t origin_index);

// Same sum over one unnormalized coin component, so that the component
// centroids add up exactly to the total one.
double component_centroid(std::span<const double> component_prob, std::size_t origin_index);

// One disorder realization: derives the stream from (master_seed, index),
// samples the field (static: once; dynamic: every step), evolves T steps and
// records the centroid at every time. samples = 1, x_stderr = 0.
CentroidSeries run_realization(const SimConfig& config, std::uint64_t realization_index);

// One walk with a caller-supplied field held fixed for the whole run
// (mirror checks, oracle comparisons). Field length must equal config.n_sites().
CentroidSeries run_with_field(const SimConfig& config, const DisorderField& field);

// Final state after config.horizon steps with the given fixed field.
WalkState evolve_walk(const SimConfig& config, const DisorderField& field);

// Mean over ensemble_size independent realizations, with the standard error
// of x_mean per time index. Accumulation runs over fixed-size blocks folded
// in index order, so the result is bit-identical for a given master_seed no
// matter how many workers execute it.
CentroidSeries run_ensemble(const SimConfig& config, unsigned workers);

// Worker count from QWALK_THREADS if set (positive), else hardware concurrency.
CentroidSeries run_ensemble(const SimConfig& config);

unsigned resolve_worker_count();

} // namespace qwalk
