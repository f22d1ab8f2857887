#include "qwalk/walk.hpp"

#include <cmath>
#include <string>

namespace qwalk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kTwoPi = 2.0 * kPi;

} // namespace

CoinAngle::CoinAngle(double theta_rad) : theta_(theta_rad) {
    if (!(theta_rad >= 0.0 && theta_rad <= kHalfPi)) {
        throw ConfigError("coin angle theta must lie in [0, pi/2], got " +
                          std::to_string(theta_rad));
    }
}

InitialStateAngles::InitialStateAngles(double alpha_rad, double beta_rad)
    : alpha_(alpha_rad), beta_(beta_rad) {
    if (!(alpha_rad >= 0.0 && alpha_rad <= kPi)) {
        throw ConfigError("initial-state alpha must lie in [0, pi], got " +
                          std::to_string(alpha_rad));
    }
    if (!(beta_rad >= 0.0 && beta_rad < kTwoPi)) {
        throw ConfigError("initial-state beta must lie in [0, 2*pi), got " +
                          std::to_string(beta_rad));
    }
}

double WalkState::norm() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < amp_r.size(); ++i) {
        sum += detail::abs2(amp_r[i]) + detail::abs2(amp_l[i]);
    }
    return sum;
}

WalkState initial_state(const InitialStateAngles& angles, std::size_t n_sites,
                        std::size_t origin_index) {
    if (n_sites < 1) {
        throw ConfigError("chain needs at least one site");
    }
    if (origin_index >= n_sites) {
        throw ConfigError("origin_index " + std::to_string(origin_index) +
                          " outside chain of " + std::to_string(n_sites) + " sites");
    }
    WalkState state;
    state.amp_r.assign(n_sites, Complex(0.0, 0.0));
    state.amp_l.assign(n_sites, Complex(0.0, 0.0));
    state.origin_index = origin_index;
    state.time = 0;
    const double half = angles.alpha() / 2.0;
    state.amp_r[origin_index] = Complex(std::cos(half), 0.0);
    state.amp_l[origin_index] =
        detail::cmul(Complex(std::cos(angles.beta()), std::sin(angles.beta())),
                     Complex(std::sin(half), 0.0));
    return state;
}

WalkState apply_phase(WalkState state, std::span<const double> nu) {
    if (nu.size() != state.n_sites()) {
        throw DimensionError("disorder field has " + std::to_string(nu.size()) +
                             " entries for a chain of " + std::to_string(state.n_sites()) +
                             " sites");
    }
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const Complex p = detail::phase_factor(nu[i]);
        state.amp_r[i] = detail::cmul(p, state.amp_r[i]);
        state.amp_l[i] = detail::cmul(p, state.amp_l[i]);
    }
    return state;
}

WalkState apply_coin(WalkState state, const CoinAngle& coin) {
    const double c = std::cos(coin.theta());
    const double s = std::sin(coin.theta());
    for (std::size_t i = 0; i < state.n_sites(); ++i) {
        const Complex ar = state.amp_r[i];
        const Complex bl = state.amp_l[i];
        state.amp_r[i] = ar * c + bl * s;
        state.amp_l[i] = ar * s - bl * c;
    }
    return state;
}

WalkState apply_shift(WalkState state) {
    const std::size_t n = state.n_sites();
    if (n < 2) {
        throw BoundaryError("chain too short to shift");
    }
    const bool boundary_occupied =
        state.amp_r.front() != Complex(0.0, 0.0) || state.amp_l.front() != Complex(0.0, 0.0) ||
        state.amp_r.back() != Complex(0.0, 0.0) || state.amp_l.back() != Complex(0.0, 0.0);
    if (boundary_occupied) {
        throw BoundaryError("nonzero amplitude at a boundary site; the chain is too "
                            "small for this evolution");
    }
    detail::shift_pass(state.amp_r.data(), state.amp_l.data(), 1, n - 2);
    return state;
}

WalkState step(WalkState state, std::span<const double> nu, const CoinAngle& coin) {
    if (nu.size() != state.n_sites()) {
        throw DimensionError("disorder field has " + std::to_string(nu.size()) +
                             " entries for a chain of " + std::to_string(state.n_sites()) +
                             " sites");
    }
    const std::size_t n = state.n_sites();
    if (n < 2) {
        throw BoundaryError("chain too short to shift");
    }
    // Phase and coin act site-locally, so the boundary check can run first:
    // a site occupied after them was occupied before.
    const bool boundary_occupied =
        state.amp_r.front() != Complex(0.0, 0.0) || state.amp_l.front() != Complex(0.0, 0.0) ||
        state.amp_r.back() != Complex(0.0, 0.0) || state.amp_l.back() != Complex(0.0, 0.0);
    if (boundary_occupied) {
        throw BoundaryError("nonzero amplitude at a boundary site; the chain is too "
                            "small for this evolution");
    }
    const double c = std::cos(coin.theta());
    const double s = std::sin(coin.theta());
    std::vector<Complex> phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        phase[i] = detail::phase_factor(nu[i]);
    }
    detail::phase_coin_pass(state.amp_r.data(), state.amp_l.data(), phase.data(), c, s, 0,
                            n - 1);
    detail::shift_pass(state.amp_r.data(), state.amp_l.data(), 1, n - 2);
    state.time += 1;
    return state;
}

SiteProbabilities probabilities(const WalkState& state) {
    const std::size_t n = state.n_sites();
    SiteProbabilities p;
    p.total.resize(n);
    p.right.resize(n);
    p.left.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.right[i] = detail::abs2(state.amp_r[i]);
        p.left[i] = detail::abs2(state.amp_l[i]);
        p.total[i] = p.right[i] + p.left[i];
    }
    return p;
}

namespace detail {

void phase_coin_pass(Complex* a, Complex* b, const Complex* phase, double cos_t,
                     double sin_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i <= hi; ++i) {
        const Complex ar = cmul(phase[i], a[i]);
        const Complex bl = cmul(phase[i], b[i]);
        a[i] = ar * cos_t + bl * sin_t;
        b[i] = ar * sin_t - bl * cos_t;
    }
}

void shift_pass(Complex* a, Complex* b, std::size_t lo, std::size_t hi) {
    for (std::size_t i = hi + 1; i > lo; --i) {
        a[i] = a[i - 1];
    }
    a[lo] = Complex(0.0, 0.0);
    for (std::size_t i = lo - 1; i < hi; ++i) {
        b[i] = b[i + 1];
    }
    b[hi] = Complex(0.0, 0.0);
}

} // namespace detail

} // namespace qwalk
