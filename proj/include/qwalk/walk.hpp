// walk.hpp — coined walker state on a finite chain and its elementary operators.
//
// A walker carries a two-level coin; amp_r[n] and amp_l[n] are the complex
// amplitudes of the right/left coin component at site n. One time step is
// phase gain, then coin mix, then conditional shift (rightmost acts first):
//
//   phase:  a_n <- e^{i 2 pi nu_n} a_n,  b_n <- e^{i 2 pi nu_n} b_n
//   coin:   (a, b) <- (a cos(theta) + b sin(theta), a sin(theta) - b cos(theta))
//   shift:  a_{n+1} <- a_n,  b_{n-1} <- b_n
//
// All operations are pure state transformers (value in, value out); callers
// that pass rvalues pay no allocation. Amplitudes move at most one site per
// step, so a chain of 2T+3 sites centered on the start site can absorb T
// steps without the shift ever touching a boundary.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

using Complex = std::complex<double>;

// Coin mixing angle, radians in [0, pi/2]. theta = 0 is Pauli-Z, pi/4 the
// Hadamard coin, pi/2 Pauli-X.
class CoinAngle {
public:
    explicit CoinAngle(double theta_rad);
    double theta() const { return theta_; }

private:
    double theta_;
};

// Bloch angles of the initial coin state:
//   cos(alpha/2) |R> + e^{i beta} sin(alpha/2) |L>
// alpha in [0, pi], beta in [0, 2 pi).
class InitialStateAngles {
public:
    InitialStateAngles(double alpha_rad, double beta_rad);
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

private:
    double alpha_;
    double beta_;
};

struct WalkState {
    std::vector<Complex> amp_r; // a_n, right coin component
    std::vector<Complex> amp_l; // b_n, left coin component
    std::size_t origin_index = 0;
    int time = 0;

    std::size_t n_sites() const { return amp_r.size(); }
    double norm() const; // sum over sites of |a|^2 + |b|^2
};

struct SiteProbabilities {
    std::vector<double> total; // P_n = P_R + P_L
    std::vector<double> right; // |a_n|^2
    std::vector<double> left;  // |b_n|^2
};

// Walker localized at origin_index with the given coin superposition.
WalkState initial_state(const InitialStateAngles& angles, std::size_t n_sites,
                        std::size_t origin_index);

// Multiply both coin components at site n by e^{i 2 pi nu[n]}.
WalkState apply_phase(WalkState state, std::span<const double> nu);

// Per-site SU(2) coin mix.
WalkState apply_coin(WalkState state, const CoinAngle& coin);

// Conditional displacement. Requires all four boundary amplitudes
// (both components at site 0 and site n-1) to be zero.
WalkState apply_shift(WalkState state);

// shift(coin(phase(state))) with time incremented.
WalkState step(WalkState state, std::span<const double> nu, const CoinAngle& coin);

SiteProbabilities probabilities(const WalkState& state);

namespace detail {

// e^{i 2 pi nu} as used by every phase path; one definition keeps the
// precomputed-factor path of the ensemble runner bit-identical to apply_phase.
inline Complex phase_factor(double nu);

// Fused phase+coin update of a[i], b[i] for i in [lo, hi].
void phase_coin_pass(Complex* a, Complex* b, const Complex* phase, double cos_t,
                     double sin_t, std::size_t lo, std::size_t hi);

// Unchecked windowed shift: a[lo..hi] moves up one site, b[lo..hi] down one.
// Requires lo >= 1 and hi + 1 < n_sites; callers size the chain accordingly.
void shift_pass(Complex* a, Complex* b, std::size_t lo, std::size_t hi);

inline Complex phase_factor(double nu) {
    const double angle = 6.283185307179586476925286766559 * nu; // 2 pi nu
    return Complex(std::cos(angle), std::sin(angle));
}

// Complex product spelled out so the instruction sequence is identical in
// every translation unit (and no Annex-G library call is emitted).
inline Complex cmul(Complex x, Complex y) {
    return Complex(x.real() * y.real() - x.imag() * y.imag(),
                   x.real() * y.imag() + x.imag() * y.real());
}

inline double abs2(Complex z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

} // namespace detail

} // namespace qwalk
