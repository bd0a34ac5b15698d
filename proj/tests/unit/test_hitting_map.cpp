#include <cmath>
#include <random>

#include "doctest.h"
#include "stopflow/classifier.hpp"
#include "stopflow/error.hpp"
#include "stopflow/hitting_map.hpp"

using namespace stopflow;

namespace {

const PlanarParams kP = PlanarParams::from_lambda_a(-0.5, 2.0);

}  // namespace

TEST_CASE("breakpoints") {
    CHECK(r_k(kP, 1) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(q_k(kP, 1) == doctest::Approx(20.0 / 3.0).epsilon(1e-14));
    CHECK(T_at_rk(kP, 1) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(t_star(kP) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)r_k(PlanarParams::from_lambda_beta(0.5, 1.5), 1), UnsupportedRegime);

    const auto ladder = build_ladder(kP, 30);
    for (int k = 1; k < 30; ++k) {
        CHECK(ladder.q[k - 1] > ladder.r[k - 1]);
        CHECK(ladder.r[k - 1] > ladder.q[k]);
    }
    CHECK(ladder.r.back() > ladder.x_star);
}

TEST_CASE("breakpoint orbits") {
    for (int k = 1; k <= 8; ++k) {
        const double rk = r_k(kP, k);
        const auto end_r = step_n(kP, {rk, 1}, static_cast<std::uint64_t>(k));
        CHECK(end_r.x == doctest::Approx(rk - 2).epsilon(1e-9));
        CHECK(end_r.s == doctest::Approx(-1.0).epsilon(1e-12));

        const double qk = q_k(kP, k);
        const auto end_q = step_n(kP, {qk, 1}, static_cast<std::uint64_t>(k));
        CHECK(end_q.x == doctest::Approx(-kP.x_star()).epsilon(1e-9));
        CHECK(end_q.s == -1.0);
    }
}

TEST_CASE("piece slopes") {
    const auto T = build_T(kP, 12);
    CHECK(T.piece_at(q_k(kP, 1) + 1).slope == doctest::Approx(0.5));
    CHECK(T.piece_at(0.5 * (r_k(kP, 1) + q_k(kP, 1))).slope == doctest::Approx(-0.25));
    CHECK(falling_slope(kP, 1) == doctest::Approx(-0.25));
    for (int k = 1; k <= 10; ++k) CHECK(T(q_k(kP, k)) == doctest::Approx(kP.x_star()).epsilon(1e-10));
}

TEST_CASE("closed form agrees with direct iteration") {
    CHECK(eval_numeric(kP, q_k(kP, 1)) == doctest::Approx(kP.x_star()).epsilon(1e-12));

    const auto T = build_T(kP, default_k_max(kP));
    std::mt19937_64 rng(41);
    const double lo = std::max(T.ladder_min(), kP.x_star() + 1e-3);
    std::uniform_real_distribution<double> x(lo, q_k(kP, 1) + 5);
    for (int i = 0; i < 1000; ++i) {
        const double xi = x(rng);
        CHECK(T(xi) == doctest::Approx(eval_numeric(kP, xi)).epsilon(1e-9).scale(1));
    }
}

TEST_CASE("closed form agrees across case (e) parameters") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> lam(-0.9, -0.2), bet(1.2, 2.5), u(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = PlanarParams::from_lambda_beta(lam(rng), bet(rng));
        const auto T = build_T(p, 20);
        const double lo = std::max(T.ladder_min(), p.x_star() + 0.05);
        const double hi = q_k(p, 1) + 3;
        for (int i = 0; i < 50; ++i) {
            const double xi = lo + (hi - lo) * u(rng);
            CHECK(T(xi) == doctest::Approx(eval_numeric(p, xi)).epsilon(1e-9).scale(1));
        }
    }
}

TEST_CASE("continuity at breakpoints") {
    const auto T = build_T(kP, 20);
    for (int k = 1; k <= 19; ++k) {
        for (double b : {r_k(kP, k), q_k(kP, k)}) {
            const double h = 1e-10 * std::max(1.0, b);
            const double steep = std::max(std::abs(T.piece_at(b + h).slope), std::abs(T.piece_at(b - h).slope));
            CHECK(std::abs(T(b + h) - T(b - h)) <= 2 * h * steep + 1e-9);
        }
    }
}

TEST_CASE("fixed points") {
    const auto p4 = PlanarParams::from_lambda_beta(-2.0 / 3.0, 2.0);
    const auto fp = fixed_points(p4, 20);
    int stable = 0;
    for (const auto& f : fp) {
        if (f.stable) {
            ++stable;
            CHECK(f.kind == PieceKind::falling);
            CHECK(f.system_period == 4);
        }
        const auto T = build_T(p4, 20);
        CHECK(T(f.x) == doctest::Approx(f.x).epsilon(1e-9));
    }
    CHECK(stable == 1);

    // 1 + lambda beta = 0: the k = 1 pair collapses onto r_1, which is unstable.
    const auto eq = PlanarParams::from_lambda_beta(-0.5, 2.0);
    int at_k1 = 0;
    for (const auto& f : fixed_points(eq, 20)) {
        CHECK_FALSE(f.stable);
        if (f.k != 1) continue;
        ++at_k1;
        CHECK(f.x == doctest::Approx(r_k(eq, 1)).epsilon(1e-12));
    }
    CHECK(at_k1 == 1);
}

TEST_CASE("at most one stable fixed point") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> lam(-0.95, -0.05), bet(1.05, 3.0);
    for (int i = 0; i < 200; ++i) {
        const auto p = PlanarParams::from_lambda_beta(lam(rng), bet(rng));
        int stable = 0;
        for (const auto& f : fixed_points(p, 40)) stable += f.stable ? 1 : 0;
        CHECK(stable <= 1);
        const auto w = omega_index(p);
        if (stable == 1 && w) {
            for (const auto& f : fixed_points(p, 40))
                if (f.stable) CHECK(f.system_period == 2 * *w + 2);
        }
    }
}

TEST_CASE("offset evaluation matches the absolute form") {
    const auto T = build_T(kP, 30);
    for (double u : {0.1, 1.0, 3.0, 10.0}) {
        CHECK(T.offset_value(u) == doctest::Approx(T(kP.x_star() + u) - kP.x_star()).epsilon(1e-12).scale(1));
    }
    CHECK_THROWS_AS((void)T.offset_value(-1.0), DomainError);
    CHECK_THROWS_AS((void)T(kP.x_star() - 1), DomainError);
}
