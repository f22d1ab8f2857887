// analysis.hpp — observables extracted from centroid series: displacement
// maxima, power-law fits of their scaling, parameter sweeps, plateau levels.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/ensemble.hpp"

namespace qwalk {

enum class Direction { rightward, leftward };

struct MaxDisplacement {
    double x_max = 0.0;      // peak |displacement|, lattice sites
    int t_max = 0;           // earliest step index attaining it
    bool at_horizon = false; // peak sits at the end of the series: no return seen
};

// Peak of the raw series, no smoothing. rightward takes the maximum of
// x_mean, leftward the magnitude of the minimum; ties resolve to the
// earliest index.
MaxDisplacement extract_x_max(const CentroidSeries& series, Direction direction);

struct PowerLawFit {
    double exponent = 0.0;      // slope of ln y vs ln x
    double log_prefactor = 0.0; // intercept, ln of the prefactor
    double r_squared = 0.0;
    double fit_lo = 0.0; // independent-variable window actually used
    double fit_hi = 0.0;
    int n_points = 0;
};

// Ordinary least squares on (ln x, ln y) restricted to x in [lo, hi]
// inclusive. Requires >= 3 points in range, all coordinates positive.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys,
                          double lo, double hi);

struct SweepRow {
    double parameter = 0.0;    // theta or W of this point
    std::uint64_t seed = 0;    // master seed of this point's ensemble
    int horizon = 0;           // steps actually run
    MaxDisplacement peak;
    CentroidSeries series;     // full series, persisted for audit
};

// One ensemble per parameter value. Point i runs with master seed
// derive_stream_seed(base.master_seed, i) and horizon
// max(base.horizon, suggested_horizon(theta_i, W_i)).
std::vector<SweepRow> sweep_theta(const SimConfig& base, std::span<const double> thetas,
                                  Direction direction = Direction::rightward);
std::vector<SweepRow> sweep_disorder(const SimConfig& base, std::span<const double> widths,
                                     Direction direction = Direction::rightward);

// Horizon comfortably past the expected displacement peak at (theta, W).
// The peak time tracks xi(theta)/W^2 with xi = -1/ln(cos theta); the rule
// multiplies that by a safety margin and clamps to [500, 24000].
int suggested_horizon(double theta, double width);

struct PlateauStats {
    double level = 0.0; // mean of x_mean over the tail window
    double band = 0.0;  // standard deviation over the same window
};

// Statistics of x_mean over the final tail_fraction of the series.
// tail_fraction in (0, 0.5]; the window must contain >= 10 points.
PlateauStats plateau_level(const CentroidSeries& series, double tail_fraction);

// count log-spaced values from lo to hi, endpoints exact.
std::vector<double> log_spaced(double lo, double hi, int count);

} // namespace qwalk
