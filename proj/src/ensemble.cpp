#include "qwalk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// Light-cone edge amplitudes decay geometrically and sink into subnormals
// after a few thousand steps, where every arithmetic op takes a microcode
// assist. Flush them to zero inside the evolution loop: anything below
// 1e-308 is hundreds of orders below every tolerance in use.
class ScopedFlushDenormals {
public:
#if defined(__SSE2__)
    ScopedFlushDenormals() : saved_(_mm_getcsr()) {
        _mm_setcsr(saved_ | 0x8040); // FTZ | DAZ
    }
    ~ScopedFlushDenormals() { _mm_setcsr(saved_); }

private:
    unsigned int saved_;
#endif
};

// Per-realization centroid traces; the ensemble layer averages these.
struct RealizationTrace {
    std::vector<double> x;
    std::vector<double> xr;
    std::vector<double> xl;
};

// The conditional shift never needs a copy: each step the right coin
// component's frame slides one site right and the left one's slides one site
// left, so holding the two components in separate buffers and bumping base
// offsets reinterprets the same storage. With the walker started at the
// chain center, the pre-shift window at step t is [origin-t+1, origin+t-1]:
// the left component always starts at slot 0 and the right component at slot
// 2T - 2(t-1), walking into untouched zero-initialized slots as the light
// cone widens.
//
// One pass applies phase and coin, stores the new amplitudes, and folds up
// the post-shift component centroids (weights d0a + k for the right-movers,
// d0b + k for the left ones). Kept out of line so the vectorizer sees plain
// restrict-qualified streams instead of loads folded into the step loop.
__attribute__((noinline)) void fused_step_pass(double* __restrict ar, double* __restrict ai,
                                               double* __restrict br, double* __restrict bi,
                                               const double* __restrict pr,
                                               const double* __restrict pi, double cos_t,
                                               double sin_t, double d0a, double d0b,
                                               std::size_t count, double& xr_out,
                                               double& xl_out) {
    double xr = 0.0;
    double xl = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double vr = pr[k] * ar[k] - pi[k] * ai[k];
        const double vi = pr[k] * ai[k] + pi[k] * ar[k];
        const double wr = pr[k] * br[k] - pi[k] * bi[k];
        const double wi = pr[k] * bi[k] + pi[k] * br[k];
        const double nar = vr * cos_t + wr * sin_t;
        const double nai = vi * cos_t + wi * sin_t;
        const double nbr = vr * sin_t - wr * cos_t;
        const double nbi = vi * sin_t - wi * cos_t;
        ar[k] = nar;
        ai[k] = nai;
        br[k] = nbr;
        bi[k] = nbi;
        xr += (d0a + static_cast<double>(k)) * (nar * nar + nai * nai);
        xl += (d0b + static_cast<double>(k)) * (nbr * nbr + nbi * nbi);
    }
    xr_out = xr;
    xl_out = xl;
}

// Evolve one walker over config.horizon steps, calling record(t, xr, xl)
// with the component centroids after every step. Static disorder passes the
// field in `nu_static`; dynamic mode passes a stream instead and redraws the
// whole field before each step (the draw count never depends on the window,
// so streams stay aligned whatever the horizon).
template <typename Recorder>
WalkState evolve_windowed(const SimConfig& config, std::span<const double> nu_static,
                          RandomStream* dynamic_stream, Recorder&& record) {
    const int horizon = config.horizon;
    const std::size_t n = config.n_sites();
    const std::size_t origin = config.origin();
    const std::size_t span = 2 * static_cast<std::size_t>(horizon) + 1;

    const WalkState start =
        initial_state(InitialStateAngles(config.alpha, config.beta), n, origin);
    std::vector<double> a_re(span, 0.0);
    std::vector<double> a_im(span, 0.0);
    std::vector<double> b_re(span, 0.0);
    std::vector<double> b_im(span, 0.0);
    a_re[span - 1] = start.amp_r[origin].real();
    a_im[span - 1] = start.amp_r[origin].imag();
    b_re[0] = start.amp_l[origin].real();
    b_im[0] = start.amp_l[origin].imag();

    std::vector<double> p_re(n);
    std::vector<double> p_im(n);

    const double cos_t = std::cos(config.theta);
    const double sin_t = std::sin(config.theta);
    const ScopedFlushDenormals ftz;

    std::vector<double> nu_dynamic;
    if (dynamic_stream == nullptr) {
        assert(nu_static.size() == n);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex p = detail::phase_factor(nu_static[i]);
            p_re[i] = p.real();
            p_im[i] = p.imag();
        }
    } else {
        nu_dynamic.resize(n);
    }

    for (int t = 1; t <= horizon; ++t) {
        const std::size_t count = 2 * static_cast<std::size_t>(t) - 1;
        const std::size_t lo = origin - static_cast<std::size_t>(t) + 1; // pre-shift window
        const std::size_t a_base = span - count;
        if (dynamic_stream != nullptr) {
            for (std::size_t i = 0; i < n; ++i) {
                nu_dynamic[i] = dynamic_stream->next_symmetric(config.disorder_width);
            }
            for (std::size_t i = lo; i < lo + count; ++i) {
                const Complex p = detail::phase_factor(nu_dynamic[i]);
                p_re[i] = p.real();
                p_im[i] = p.imag();
            }
        }
        double xr = 0.0;
        double xl = 0.0;
        fused_step_pass(a_re.data() + a_base, a_im.data() + a_base, b_re.data(), b_im.data(),
                        p_re.data() + lo, p_im.data() + lo, cos_t, sin_t,
                        2.0 - static_cast<double>(t), -static_cast<double>(t), count, xr, xl);
        record(t, xr, xl);
    }

    WalkState state;
    state.amp_r.assign(n, Complex(0.0, 0.0));
    state.amp_l.assign(n, Complex(0.0, 0.0));
    state.origin_index = origin;
    state.time = horizon;
    for (std::size_t j = 0; j < span; ++j) {
        const std::size_t site = j + origin - static_cast<std::size_t>(horizon);
        state.amp_r[site] = Complex(a_re[j], a_im[j]);
        state.amp_l[site] = Complex(b_re[j], b_im[j]);
    }
    return state;
}

RealizationTrace evolve_trace(const SimConfig& config, std::span<const double> nu_static,
                              RandomStream* dynamic_stream) {
    RealizationTrace trace;
    trace.x.assign(static_cast<std::size_t>(config.horizon) + 1, 0.0);
    trace.xr.assign(static_cast<std::size_t>(config.horizon) + 1, 0.0);
    trace.xl.assign(static_cast<std::size_t>(config.horizon) + 1, 0.0);
    // t = 0: the walker sits on the origin, every centroid is exactly zero.
    evolve_windowed(config, nu_static, dynamic_stream, [&](int t, double xr, double xl) {
        trace.x[static_cast<std::size_t>(t)] = xr + xl;
        trace.xr[static_cast<std::size_t>(t)] = xr;
        trace.xl[static_cast<std::size_t>(t)] = xl;
    });
    return trace;
}

RealizationTrace trace_realization(const SimConfig& config, std::uint64_t realization_index) {
    RandomStream stream(derive_stream_seed(config.master_seed, realization_index));
    if (config.disorder_mode == DisorderMode::static_field) {
        const DisorderField field = sample_field(config.disorder_width, config.n_sites(), stream);
        return evolve_trace(config, field.nu, nullptr);
    }
    return evolve_trace(config, {}, &stream);
}

CentroidSeries single_sample_series(RealizationTrace trace) {
    CentroidSeries series;
    series.x_stderr.assign(trace.x.size(), 0.0);
    series.x_mean = std::move(trace.x);
    series.x_r = std::move(trace.xr);
    series.x_l = std::move(trace.xl);
    series.samples = 1;
    return series;
}

// Fixed block size for the ensemble reduction. Partial sums are formed per
// block in realization order and folded in block order, which pins the
// floating-point result independently of the worker count.
constexpr std::uint64_t kBlockSize = 32;

struct BlockPartial {
    std::vector<double> dx;    // sum of (x - shift)
    std::vector<double> dx2;   // sum of (x - shift)^2
    std::vector<double> dxr;
    std::vector<double> dxl;
};

BlockPartial accumulate_block(const SimConfig& config, const RealizationTrace& shift,
                              std::uint64_t first, std::uint64_t last) {
    const std::size_t len = shift.x.size();
    BlockPartial p;
    p.dx.assign(len, 0.0);
    p.dx2.assign(len, 0.0);
    p.dxr.assign(len, 0.0);
    p.dxl.assign(len, 0.0);
    for (std::uint64_t r = first; r < last; ++r) {
        const RealizationTrace trace = trace_realization(config, r);
        for (std::size_t t = 0; t < len; ++t) {
            const double d = trace.x[t] - shift.x[t];
            p.dx[t] += d;
            p.dx2[t] += d * d;
            p.dxr[t] += trace.xr[t] - shift.xr[t];
            p.dxl[t] += trace.xl[t] - shift.xl[t];
        }
    }
    return p;
}

} // namespace

void SimConfig::validate() const {
    (void)CoinAngle(theta);
    (void)InitialStateAngles(alpha, beta);
    if (!(disorder_width >= 0.0)) {
        throw ConfigError("disorder_width must be >= 0, got " + std::to_string(disorder_width));
    }
    if (horizon < 1) {
        throw ConfigError("horizon must be >= 1, got " + std::to_string(horizon));
    }
    if (ensemble_size < 1) {
        throw ConfigError("ensemble_size must be >= 1, got " + std::to_string(ensemble_size));
    }
}

DisorderField sample_field(double width, std::size_t n_sites, RandomStream& stream) {
    if (!(width >= 0.0)) {
        throw ConfigError("disorder width must be >= 0, got " + std::to_string(width));
    }
    DisorderField field;
    field.nu.resize(n_sites);
    for (std::size_t i = 0; i < n_sites; ++i) {
        field.nu[i] = stream.next_symmetric(width);
    }
    return field;
}

DisorderField mirrored(const DisorderField& field, std::size_t origin_index) {
    const std::size_t n = field.nu.size();
    if (2 * origin_index + 1 != n) {
        throw DimensionError("mirroring requires the origin at the chain center");
    }
    DisorderField out;
    out.mode = field.mode;
    out.nu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.nu[i] = field.nu[n - 1 - i];
    }
    return out;
}

double centroid(std::span<const double> site_prob, std::size_t origin_index) {
    double sum = 0.0;
    const double origin_d = static_cast<double>(origin_index);
    for (std::size_t i = 0; i < site_prob.size(); ++i) {
        sum += (static_cast<double>(i) - origin_d) * site_prob[i];
    }
    return sum;
}

double component_centroid(std::span<const double> component_prob, std::size_t origin_index) {
    return centroid(component_prob, origin_index);
}

CentroidSeries run_realization(const SimConfig& config, std::uint64_t realization_index) {
    config.validate();
    return single_sample_series(trace_realization(config, realization_index));
}

CentroidSeries run_with_field(const SimConfig& config, const DisorderField& field) {
    config.validate();
    if (field.nu.size() != config.n_sites()) {
        throw DimensionError("field has " + std::to_string(field.nu.size()) +
                             " entries, config needs " + std::to_string(config.n_sites()));
    }
    return single_sample_series(evolve_trace(config, field.nu, nullptr));
}

WalkState evolve_walk(const SimConfig& config, const DisorderField& field) {
    config.validate();
    if (field.nu.size() != config.n_sites()) {
        throw DimensionError("field has " + std::to_string(field.nu.size()) +
                             " entries, config needs " + std::to_string(config.n_sites()));
    }
    return evolve_windowed(config, field.nu, nullptr, [](int, double, double) {});
}

unsigned resolve_worker_count() {
    if (const char* env = std::getenv("QWALK_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

CentroidSeries run_ensemble(const SimConfig& config) {
    return run_ensemble(config, resolve_worker_count());
}

CentroidSeries run_ensemble(const SimConfig& config, unsigned workers) {
    config.validate();
    const std::uint64_t m = static_cast<std::uint64_t>(config.ensemble_size);
    const std::size_t len = static_cast<std::size_t>(config.horizon) + 1;

    // Realization 0 doubles as the shift reference: deviations from it keep
    // the variance accumulation well conditioned and make a zero-variance
    // ensemble report exactly zero standard error.
    const RealizationTrace shift = trace_realization(config, 0);

    const std::uint64_t n_blocks = (m + kBlockSize - 1) / kBlockSize;
    std::vector<BlockPartial> partials(n_blocks);

    const unsigned used =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), n_blocks));
    if (used <= 1) {
        for (std::uint64_t blk = 0; blk < n_blocks; ++blk) {
            partials[blk] = accumulate_block(config, shift, blk * kBlockSize,
                                             std::min(m, (blk + 1) * kBlockSize));
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        auto work = [&] {
            for (;;) {
                const std::uint64_t blk = next.fetch_add(1);
                if (blk >= n_blocks) {
                    return;
                }
                partials[blk] = accumulate_block(config, shift, blk * kBlockSize,
                                                 std::min(m, (blk + 1) * kBlockSize));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(used);
        for (unsigned w = 0; w < used; ++w) {
            pool.emplace_back(work);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::vector<double> dx(len, 0.0);
    std::vector<double> dx2(len, 0.0);
    std::vector<double> dxr(len, 0.0);
    std::vector<double> dxl(len, 0.0);
    for (std::uint64_t blk = 0; blk < n_blocks; ++blk) {
        for (std::size_t t = 0; t < len; ++t) {
            dx[t] += partials[blk].dx[t];
            dx2[t] += partials[blk].dx2[t];
            dxr[t] += partials[blk].dxr[t];
            dxl[t] += partials[blk].dxl[t];
        }
    }

    CentroidSeries series;
    series.x_mean.resize(len);
    series.x_r.resize(len);
    series.x_l.resize(len);
    series.x_stderr.resize(len);
    const double md = static_cast<double>(m);
    for (std::size_t t = 0; t < len; ++t) {
        series.x_mean[t] = shift.x[t] + dx[t] / md;
        series.x_r[t] = shift.xr[t] + dxr[t] / md;
        series.x_l[t] = shift.xl[t] + dxl[t] / md;
        if (m > 1) {
            const double var = std::max(0.0, (dx2[t] - dx[t] * dx[t] / md) / (md - 1.0));
            series.x_stderr[t] = std::sqrt(var / md);
        } else {
            series.x_stderr[t] = 0.0;
        }
    }
    series.samples = static_cast<long>(m);
    return series;
}

} // namespace qwalk
