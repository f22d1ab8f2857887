#include "qwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

MaxDisplacement extract_x_max(const CentroidSeries& series, Direction direction) {
    if (series.x_mean.empty()) {
        throw ConfigError("cannot extract a maximum from an empty series");
    }
    std::size_t best = 0;
    if (direction == Direction::rightward) {
        for (std::size_t t = 1; t < series.x_mean.size(); ++t) {
            if (series.x_mean[t] > series.x_mean[best]) {
                best = t;
            }
        }
    } else {
        for (std::size_t t = 1; t < series.x_mean.size(); ++t) {
            if (series.x_mean[t] < series.x_mean[best]) {
                best = t;
            }
        }
    }
    MaxDisplacement peak;
    peak.x_max = std::abs(series.x_mean[best]);
    peak.t_max = static_cast<int>(best);
    peak.at_horizon = best + 1 == series.x_mean.size();
    return peak;
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys,
                          double lo, double hi) {
    if (xs.size() != ys.size()) {
        throw FitError("x and y arrays differ in length");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < lo || xs[i] > hi) {
            continue;
        }
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
            throw FitError("power-law fit needs strictly positive data in range, got (" +
                           std::to_string(xs[i]) + ", " + std::to_string(ys[i]) + ")");
        }
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const std::size_t n = lx.size();
    if (n < 3) {
        throw FitError("power-law fit needs at least 3 points in range, found " +
                       std::to_string(n));
    }

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) {
        throw FitError("power-law fit needs distinct x values");
    }

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    fit.fit_lo = lo;
    fit.fit_hi = hi;
    fit.n_points = static_cast<int>(n);

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.log_prefactor + fit.exponent * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    if (ss_tot == 0.0) {
        fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
    } else {
        fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    }
    return fit;
}

int suggested_horizon(double theta, double width) {
    // The displacement peak time measured across the (theta, W) grid tracks
    // 0.012 * xi / W^4 within a factor ~1.5, where xi = -1/ln(cos theta) is
    // the transparency scale of the coin (xi ~ 2/theta^2 toward Pauli-Z).
    // The constant below carries that factor-of-two margin.
    constexpr double kCoefficient = 0.013;
    constexpr int kFloor = 500;
    constexpr int kCap = 26000;
    const double c = std::cos(theta);
    if (!(c > 0.0) || width <= 0.0) {
        return kCap;
    }
    const double log_c = std::log(c);
    if (!(log_c < 0.0)) {
        return kCap; // transparent coin: never returns
    }
    const double xi = -1.0 / log_c;
    const double w2 = width * width;
    const double estimate = kCoefficient * xi / (w2 * w2);
    if (!(estimate < static_cast<double>(kCap))) {
        return kCap;
    }
    return std::max(kFloor, static_cast<int>(std::ceil(estimate)));
}

namespace {

std::vector<SweepRow> sweep_impl(const SimConfig& base, std::span<const double> params,
                                 bool vary_theta, Direction direction) {
    base.validate();
    std::vector<SweepRow> rows;
    rows.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        SimConfig point = base;
        if (vary_theta) {
            point.theta = params[i];
        } else {
            if (!(params[i] > 0.0)) {
                throw ConfigError("disorder sweep widths must be positive");
            }
            point.disorder_width = params[i];
        }
        point.master_seed = derive_stream_seed(base.master_seed, i);
        point.horizon = std::max(base.horizon,
                                 suggested_horizon(point.theta, point.disorder_width));
        SweepRow row;
        row.parameter = params[i];
        row.seed = point.master_seed;
        row.horizon = point.horizon;
        row.series = run_ensemble(point);
        row.peak = extract_x_max(row.series, direction);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::vector<SweepRow> sweep_theta(const SimConfig& base, std::span<const double> thetas,
                                  Direction direction) {
    for (double theta : thetas) {
        if (!(theta > 0.0)) {
            throw ConfigError("theta sweep values must be positive");
        }
        (void)CoinAngle(theta);
    }
    return sweep_impl(base, thetas, true, direction);
}

std::vector<SweepRow> sweep_disorder(const SimConfig& base, std::span<const double> widths,
                                     Direction direction) {
    return sweep_impl(base, widths, false, direction);
}

PlateauStats plateau_level(const CentroidSeries& series, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.5)) {
        throw ConfigError("tail_fraction must lie in (0, 0.5]");
    }
    const std::size_t len = series.x_mean.size();
    const std::size_t window =
        static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(len)));
    if (window < 10) {
        throw ConfigError("plateau window has " + std::to_string(window) +
                          " points; need at least 10");
    }
    const std::size_t start = len - window;
    double mean = 0.0;
    for (std::size_t t = start; t < len; ++t) {
        mean += series.x_mean[t];
    }
    mean /= static_cast<double>(window);
    double ss = 0.0;
    for (std::size_t t = start; t < len; ++t) {
        ss += (series.x_mean[t] - mean) * (series.x_mean[t] - mean);
    }
    PlateauStats stats;
    stats.level = mean;
    stats.band = window > 1 ? std::sqrt(ss / static_cast<double>(window - 1)) : 0.0;
    return stats;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw ConfigError("log_spaced needs 0 < lo < hi and count >= 2");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    out.front() = lo;
    out.back() = hi;
    for (int i = 1; i + 1 < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        out[static_cast<std::size_t>(i)] = std::exp(llo + f * (lhi - llo));
    }
    return out;
}

} // namespace qwalk
