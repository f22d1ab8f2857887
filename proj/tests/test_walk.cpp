#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

constexpr double kPi = std::numbers::pi;

WalkState make_state(std::vector<Complex> a, std::vector<Complex> b, std::size_t origin) {
    WalkState s;
    s.amp_r = std::move(a);
    s.amp_l = std::move(b);
    s.origin_index = origin;
    return s;
}

std::vector<double> random_field(double width, std::size_t n, std::uint64_t seed) {
    RandomStream stream(seed);
    std::vector<double> nu(n);
    for (auto& v : nu) {
        v = stream.next_symmetric(width);
    }
    return nu;
}

} // namespace

TEST_CASE("initial_state places the coin superposition on the origin") {
    SUBCASE("pure right polarization") {
        const WalkState s = initial_state(InitialStateAngles(0.0, 0.0), 5, 2);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(s.amp_r[i] == (i == 2 ? Complex(1.0, 0.0) : Complex(0.0, 0.0)));
            CHECK(s.amp_l[i] == Complex(0.0, 0.0));
        }
        CHECK(s.time == 0);
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("pure left polarization") {
        const WalkState s = initial_state(InitialStateAngles(kPi, 0.0), 5, 2);
        CHECK(std::abs(s.amp_l[2] - Complex(1.0, 0.0)) < 1e-15);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(std::abs(s.amp_r[i]) < 1e-16);
        }
    }
    SUBCASE("symmetric superposition") {
        const WalkState s = initial_state(InitialStateAngles(kPi / 2.0, kPi / 2.0), 5, 2);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(s.amp_r[2] - Complex(inv_sqrt2, 0.0)) < 1e-15);
        CHECK(std::abs(s.amp_l[2] - Complex(0.0, inv_sqrt2)) < 1e-15);
    }
    SUBCASE("rejects bad geometry") {
        CHECK_THROWS_AS(initial_state(InitialStateAngles(0.0, 0.0), 5, 5), ConfigError);
        CHECK_THROWS_AS(initial_state(InitialStateAngles(0.0, 0.0), 0, 0), ConfigError);
    }
    SUBCASE("rejects out-of-range angles") {
        CHECK_THROWS_AS(InitialStateAngles(-0.1, 0.0), ConfigError);
        CHECK_THROWS_AS(InitialStateAngles(kPi + 0.1, 0.0), ConfigError);
        CHECK_THROWS_AS(InitialStateAngles(0.0, 2.0 * kPi), ConfigError);
        CHECK_THROWS_AS(CoinAngle(-0.1), ConfigError);
        CHECK_THROWS_AS(CoinAngle(kPi / 2.0 + 0.1), ConfigError);
    }
}

TEST_CASE("apply_phase multiplies both components by the site factor") {
    SUBCASE("zero field is the identity") {
        WalkState s = initial_state(InitialStateAngles(kPi / 2.0, 1.0), 7, 3);
        const WalkState before = s;
        s = apply_phase(std::move(s), std::vector<double>(7, 0.0));
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(s.amp_r[i] == before.amp_r[i]);
            CHECK(s.amp_l[i] == before.amp_l[i]);
        }
    }
    SUBCASE("quarter turn at a single site") {
        WalkState s = make_state({Complex(0.6, 0.0), Complex(0.0, 0.0)},
                                 {Complex(0.0, 0.0), Complex(0.8, 0.0)}, 0);
        std::vector<double> nu = {0.25, 0.0};
        const WalkState out = apply_phase(std::move(s), nu);
        CHECK(std::abs(out.amp_r[0] - Complex(0.0, 0.6)) < 1e-15);
        CHECK(out.amp_l[1] == Complex(0.8, 0.0));
        CHECK(detail::abs2(out.amp_r[0]) == doctest::Approx(0.36).epsilon(1e-12));
    }
    SUBCASE("random field preserves the total probability") {
        WalkState s = initial_state(InitialStateAngles(1.0, 2.0), 100, 50);
        // spread the state a bit first so many sites are occupied
        const CoinAngle coin(kPi / 4.0);
        const std::vector<double> zero(100, 0.0);
        for (int t = 0; t < 20; ++t) {
            s = step(std::move(s), zero, coin);
        }
        const double norm_before = s.norm();
        s = apply_phase(std::move(s), random_field(0.5, 100, 99));
        CHECK(std::abs(s.norm() - norm_before) < 1e-14);
    }
    SUBCASE("length mismatch is rejected") {
        WalkState s = initial_state(InitialStateAngles(0.0, 0.0), 5, 2);
        CHECK_THROWS_AS(apply_phase(std::move(s), std::vector<double>(4, 0.0)),
                        DimensionError);
    }
}

TEST_CASE("apply_coin mixes the components site by site") {
    SUBCASE("theta = 0 flips the left component's sign") {
        WalkState s = make_state({Complex(0.3, 0.1)}, {Complex(0.2, -0.4)}, 0);
        const WalkState out = apply_coin(std::move(s), CoinAngle(0.0));
        CHECK(out.amp_r[0] == Complex(0.3, 0.1));
        CHECK(out.amp_l[0] == Complex(-0.2, 0.4));
    }
    SUBCASE("theta = pi/2 swaps the components") {
        WalkState s = make_state({Complex(0.3, 0.1)}, {Complex(0.2, -0.4)}, 0);
        const WalkState out = apply_coin(std::move(s), CoinAngle(kPi / 2.0));
        CHECK(std::abs(out.amp_r[0] - Complex(0.2, -0.4)) < 1e-15);
        CHECK(std::abs(out.amp_l[0] - Complex(0.3, 0.1)) < 1e-15);
    }
    SUBCASE("theta = pi/4 on a pure right state") {
        WalkState s = make_state({Complex(1.0, 0.0)}, {Complex(0.0, 0.0)}, 0);
        const WalkState out = apply_coin(std::move(s), CoinAngle(kPi / 4.0));
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(out.amp_r[0] - Complex(inv_sqrt2, 0.0)) < 1e-15);
        CHECK(std::abs(out.amp_l[0] - Complex(inv_sqrt2, 0.0)) < 1e-15);
    }
}

TEST_CASE("apply_shift moves the components in opposite directions") {
    SUBCASE("right mover advances one site") {
        WalkState s = make_state({Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0)},
                                 std::vector<Complex>(3, Complex(0.0, 0.0)), 1);
        const WalkState out = apply_shift(std::move(s));
        CHECK(out.amp_r[0] == Complex(0.0, 0.0));
        CHECK(out.amp_r[1] == Complex(0.0, 0.0));
        CHECK(out.amp_r[2] == Complex(1.0, 0.0));
    }
    SUBCASE("left mover retreats one site") {
        WalkState s = make_state(std::vector<Complex>(3, Complex(0.0, 0.0)),
                                 {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0)}, 1);
        const WalkState out = apply_shift(std::move(s));
        CHECK(out.amp_l[0] == Complex(1.0, 0.0));
        CHECK(out.amp_l[1] == Complex(0.0, 0.0));
        CHECK(out.amp_l[2] == Complex(0.0, 0.0));
    }
    SUBCASE("occupied boundary sites are rejected") {
        auto zeros = std::vector<Complex>(3, Complex(0.0, 0.0));
        WalkState right_edge = make_state({Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)},
                                          zeros, 1);
        CHECK_THROWS_AS(apply_shift(std::move(right_edge)), BoundaryError);
        WalkState left_edge = make_state({Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0)},
                                         zeros, 1);
        CHECK_THROWS_AS(apply_shift(std::move(left_edge)), BoundaryError);
        WalkState left_mover_at_zero = make_state(zeros,
                                                  {Complex(1.0, 0.0), Complex(0.0, 0.0),
                                                   Complex(0.0, 0.0)},
                                                  1);
        CHECK_THROWS_AS(apply_shift(std::move(left_mover_at_zero)), BoundaryError);
    }
}

TEST_CASE("step equals shift(coin(phase(state)))") {
    const std::size_t n = 41;
    const std::size_t origin = 20;
    const CoinAngle coin(kPi / 4.0);
    WalkState fused = initial_state(InitialStateAngles(1.1, 2.2), n, origin);
    WalkState composed = fused;
    for (int t = 0; t < 15; ++t) {
        const std::vector<double> nu = random_field(0.4, n, 1000 + static_cast<unsigned>(t));
        fused = step(std::move(fused), nu, coin);
        composed = apply_shift(apply_coin(apply_phase(std::move(composed), nu), coin));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(fused.amp_r[i] == composed.amp_r[i]);
            CHECK(fused.amp_l[i] == composed.amp_l[i]);
        }
    }
    CHECK(fused.time == 15);
}

TEST_CASE("step with the transparent coin marches right regardless of disorder") {
    const std::size_t n = 25;
    WalkState s = initial_state(InitialStateAngles(0.0, 0.0), n, 12);
    const CoinAngle coin(0.0);
    for (int t = 1; t <= 10; ++t) {
        s = step(std::move(s), random_field(0.5, n, 7 + static_cast<unsigned>(t)), coin);
        const SiteProbabilities p = probabilities(s);
        CHECK(p.total[12 + static_cast<std::size_t>(t)] == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("step with the swap coin is a two-cycle") {
    const std::size_t n = 11;
    const std::size_t origin = 5;
    const std::vector<double> zero(n, 0.0);
    const CoinAngle coin(kPi / 2.0);
    WalkState s = initial_state(InitialStateAngles(0.0, 0.0), n, origin);
    s = step(std::move(s), zero, coin);
    SiteProbabilities p = probabilities(s);
    CHECK(p.left[origin - 1] == doctest::Approx(1.0).epsilon(1e-13));
    s = step(std::move(s), zero, coin);
    p = probabilities(s);
    CHECK(p.right[origin] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("three Hadamard steps match the dense oracle") {
    const std::size_t n = 9;
    const std::size_t origin = 4;
    const std::vector<double> zero(n, 0.0);
    const CoinAngle coin(kPi / 4.0);
    WalkState s = initial_state(InitialStateAngles(0.0, 0.0), n, origin);

    oracle::Vector v = oracle::initial_vector(0.0, 0.0, n, origin);
    const oracle::Matrix u = oracle::step_matrix(zero, kPi / 4.0);
    for (int t = 0; t < 3; ++t) {
        s = step(std::move(s), zero, coin);
        v = oracle::apply(u, v);
    }
    const SiteProbabilities p = probabilities(s);
    const std::vector<double> p_ref = oracle::site_probabilities(v);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(p.total[i] - p_ref[i]) < 1e-14);
    }
}

TEST_CASE("dense-oracle equivalence across coins and random states") {
    const std::size_t n = 15; // 2*6 + 3
    const std::size_t origin = 7;
    const double thetas[] = {0.0, kPi / 9.0, kPi / 4.0, 7.0 * kPi / 18.0, kPi / 2.0};
    RandomStream angles(4242);
    for (const double theta : thetas) {
        const double alpha = angles.next_unit() * kPi;
        const double beta = angles.next_unit() * 2.0 * kPi;
        const std::vector<double> nu =
            random_field(0.5, n, 5000 + static_cast<std::uint64_t>(theta * 1e6));

        WalkState s = initial_state(InitialStateAngles(alpha, beta), n, origin);
        oracle::Vector v = oracle::initial_vector(alpha, beta, n, origin);
        const oracle::Matrix u = oracle::step_matrix(nu, theta);
        const CoinAngle coin(theta);
        for (int t = 1; t <= 6; ++t) {
            s = step(std::move(s), nu, coin);
            v = oracle::apply(u, v);
            const SiteProbabilities p = probabilities(s);
            const std::vector<double> p_ref = oracle::site_probabilities(v);
            const std::vector<double> pr_ref = oracle::component_probabilities(v, true);
            const std::vector<double> pl_ref = oracle::component_probabilities(v, false);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(p.total[i] - p_ref[i]) < 1e-12);
                CHECK(std::abs(p.right[i] - pr_ref[i]) < 1e-12);
                CHECK(std::abs(p.left[i] - pl_ref[i]) < 1e-12);
            }
        }
    }
}

TEST_CASE("probabilities splits into components that sum to one") {
    SUBCASE("fresh right-polarized state") {
        const WalkState s = initial_state(InitialStateAngles(0.0, 0.0), 5, 2);
        const SiteProbabilities p = probabilities(s);
        CHECK(p.right[2] == 1.0);
        for (double v : p.left) {
            CHECK(v == 0.0);
        }
    }
    SUBCASE("fresh symmetric state") {
        const WalkState s = initial_state(InitialStateAngles(kPi / 2.0, kPi / 2.0), 5, 2);
        const SiteProbabilities p = probabilities(s);
        CHECK(p.right[2] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(p.left[2] == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("normalization holds after 50 Hadamard steps") {
        const std::size_t n = 103;
        WalkState s = initial_state(InitialStateAngles(0.0, 0.0), n, 51);
        const std::vector<double> zero(n, 0.0);
        const CoinAngle coin(kPi / 4.0);
        for (int t = 0; t < 50; ++t) {
            s = step(std::move(s), zero, coin);
        }
        const SiteProbabilities p = probabilities(s);
        double sum = 0.0;
        for (double v : p.total) {
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
}

TEST_CASE("light cone: support stays within one site per step, exactly") {
    const std::size_t n = 63;
    const std::size_t origin = 31;
    WalkState s = initial_state(InitialStateAngles(kPi / 2.0, kPi / 2.0), n, origin);
    const CoinAngle coin(kPi / 4.0);
    for (int t = 1; t <= 25; ++t) {
        s = step(std::move(s), random_field(0.5, n, 300 + static_cast<unsigned>(t)), coin);
        for (std::size_t i = 0; i < n; ++i) {
            const auto dist = i > origin ? i - origin : origin - i;
            if (dist > static_cast<std::size_t>(t)) {
                CHECK(s.amp_r[i] == Complex(0.0, 0.0));
                CHECK(s.amp_l[i] == Complex(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("norm drift stays below 1e-10 over many disordered steps") {
    const std::size_t n = 2 * 1000 + 3;
    WalkState s = initial_state(InitialStateAngles(0.4, 5.0), n, 1001);
    const CoinAngle coin(kPi / 4.0);
    const std::vector<double> nu = random_field(0.5, n, 12345);
    for (int t = 0; t < 1000; ++t) {
        s = step(std::move(s), nu, coin);
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
}

TEST_CASE("mirrored field and swapped polarization mirror the walk exactly") {
    const std::size_t n = 81;
    const std::size_t origin = 40;
    const CoinAngle coin(kPi / 4.0);
    const std::vector<double> nu = random_field(0.5, n, 777);
    std::vector<double> nu_mirror(n);
    for (std::size_t i = 0; i < n; ++i) {
        nu_mirror[i] = nu[n - 1 - i];
    }

    WalkState right = initial_state(InitialStateAngles(0.0, 0.0), n, origin);
    WalkState left = initial_state(InitialStateAngles(kPi, 0.0), n, origin);
    for (int t = 1; t <= 35; ++t) {
        right = step(std::move(right), nu, coin);
        left = step(std::move(left), nu_mirror, coin);
        const SiteProbabilities pr = probabilities(right);
        const SiteProbabilities pl = probabilities(left);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t mi = n - 1 - i;
            CHECK(std::abs(pr.total[i] - pl.total[mi]) < 1e-12);
            CHECK(std::abs(pr.right[i] - pl.left[mi]) < 1e-12);
            CHECK(std::abs(pr.left[i] - pl.right[mi]) < 1e-12);
        }
    }
}
