#include "stopflow/planar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stopflow/error.hpp"

namespace stopflow {
namespace {

void require_lambda(double lambda) {
    if (!std::isfinite(lambda)) {
        throw DomainError("lambda must be finite");
    }
    if (!(std::abs(lambda) < 1.0)) {
        throw DomainError("|lambda| must be < 1, got lambda = " + std::to_string(lambda));
    }
}

void require_state(PlanarState st) {
    if (!std::isfinite(st.x) || !std::isfinite(st.s)) {
        throw DomainError("state must be finite");
    }
    if (std::abs(st.s) > 1.0) {
        throw DomainError("state must lie in the strip |s| <= 1");
    }
}

}  // namespace

PlanarParams PlanarParams::from_lambda_a(double lambda, double a) {
    require_lambda(lambda);
    if (!std::isfinite(a)) {
        throw DomainError("a must be finite");
    }
    return PlanarParams{lambda, a, lambda + a};
}

PlanarParams PlanarParams::from_lambda_beta(double lambda, double beta) {
    require_lambda(lambda);
    if (!std::isfinite(beta)) {
        throw DomainError("beta must be finite");
    }
    return PlanarParams{lambda, beta - lambda, beta};
}

double sup_distance(PlanarState lhs, PlanarState rhs) noexcept {
    return std::max(std::abs(lhs.x - rhs.x), std::abs(lhs.s - rhs.s));
}

PlanarState step(const PlanarParams& p, PlanarState st) {
    require_state(st);
    return advance(p, st);
}

PlanarState step_n(const PlanarParams& p, PlanarState st, std::uint64_t n) {
    require_state(st);
    for (std::uint64_t i = 0; i < n; ++i) {
        st = advance(p, st);
    }
    return st;
}

bool SegmentEF::contains(PlanarState st, double tol) const noexcept {
    return distance(st) <= tol;
}

double SegmentEF::distance(PlanarState st) const noexcept {
    const double dx = E.x - F.x;
    const double ds = E.s - F.s;
    const double len2 = dx * dx + ds * ds;
    double t = ((st.x - F.x) * dx + (st.s - F.s) * ds) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(st.x - (F.x + t * dx), st.s - (F.s + t * ds));
}

SegmentEF equilibrium_segment(const PlanarParams& p) {
    const double xs = p.x_star();
    return {{xs, 1.0}, {-xs, -1.0}};
}

std::pair<PlanarState, PlanarState> two_cycle(const PlanarParams& p) {
    if (!(p.beta() <= -1.0)) {
        throw UnsupportedRegime("the 2-cycle +-Q exists only for beta <= -1");
    }
    const PlanarState q{-p.a() / (1.0 + p.lambda()), 1.0};
    return {q, -q};
}

std::array<PlanarState, 4> Parallelogram::vertices() const noexcept {
    return {PlanarState{lo + shear, 1.0}, PlanarState{hi + shear, 1.0},
            PlanarState{hi - shear, -1.0}, PlanarState{lo - shear, -1.0}};
}

bool Parallelogram::contains(PlanarState st, double tol) const noexcept {
    if (std::abs(st.s) > 1.0 + tol) return false;
    const double offset = st.x - shear * st.s;
    return offset >= lo - tol && offset <= hi + tol;
}

Parallelogram pi_region(const PlanarParams& p) {
    const double half_width = std::abs(p.x_star() - 1.0);
    return {1.0, -half_width, half_width};
}

Parallelogram sigma_region(const PlanarParams& p) {
    if (p.beta() != -1.0) {
        throw UnsupportedRegime("Sigma exists only for beta == -1");
    }
    // Sides through E and -Q (left) and through Q and F (right).
    const double shear = (1.0 - p.lambda() + p.a()) / (2.0 * (1.0 - p.lambda()));
    return {shear, shear - 1.0, 1.0 - shear};
}

SegmentAB ab_segment(const PlanarParams& p) {
    if (!(p.lambda() >= 0.0 && p.beta() < -1.0)) {
        throw UnsupportedRegime("segment AB is defined for lambda >= 0, beta < -1");
    }
    const double lambda = p.lambda();
    const double a = p.a();
    SegmentAB ab;
    ab.a_x = (a + 2.0) / (1.0 - lambda);
    if (lambda > 0.0) {
        ab.b_x = (-(a + 2.0) / (1.0 - lambda) - a) / lambda;
    }
    return ab;
}

}  // namespace stopflow
