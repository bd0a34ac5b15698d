#include "stopflow/hitting_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stopflow/classifier.hpp"
#include "stopflow/error.hpp"

namespace stopflow {
namespace {

constexpr double kContinuityTol = 1e-9;
constexpr double kAccumulationTol = 1e-12;

void require_case_e(const PlanarParams& p) {
    if (!(p.lambda() < 0.0 && p.beta() > 1.0)) {
        throw UnsupportedRegime("the first-hitting map is defined for lambda < 0, beta > 1");
    }
}

void require_k(int k) {
    if (k < 1) {
        throw DomainError("ladder index k must be >= 1, got " + std::to_string(k));
    }
}

// beta^k - 1 without cancellation for beta close to 1.
double pow_minus_one(double beta, int k) {
    return std::expm1(static_cast<double>(k) * std::log1p(beta - 1.0));
}

// S_k = ((1 - lambda) beta^k - a) / (beta - 1) = a g_k - beta^k, g_k = (beta^k - 1)/(beta - 1).
double ladder_gain(const PlanarParams& p, int k) {
    const double c = 1.0 - p.lambda();
    return (c * std::pow(p.beta(), k) - p.a()) / (p.beta() - 1.0);
}

}  // namespace

double r_offset(const PlanarParams& p, int k) {
    require_case_e(p);
    require_k(k);
    const double denom = (1.0 - p.lambda()) * pow_minus_one(p.beta(), k);
    if (denom == 0.0) {
        throw SingularParameter("r_k denominator vanishes");
    }
    return 2.0 * (p.beta() - 1.0) / denom;
}

double q_offset(const PlanarParams& p, int k) {
    require_case_e(p);
    require_k(k);
    const double denom = (1.0 - p.lambda()) * std::pow(p.beta(), k) - p.a();
    if (denom == 0.0) {
        throw SingularParameter("q_k denominator vanishes");
    }
    return 2.0 * p.x_star() * (p.beta() - 1.0) / denom;
}

double r_k(const PlanarParams& p, int k) { return p.x_star() + r_offset(p, k); }

double q_k(const PlanarParams& p, int k) { return p.x_star() + q_offset(p, k); }

double T_at_rk(const PlanarParams& p, int k) {
    return p.a() - p.lambda() * (r_k(p, k) - 2.0);
}

double t_star(const PlanarParams& p) {
    require_case_e(p);
    const double lambda = p.lambda();
    return 2.0 * lambda * (1.0 - p.a() - lambda) / (1.0 - lambda);
}

double falling_slope(const PlanarParams& p, int k) {
    require_case_e(p);
    require_k(k);
    return p.lambda() * ladder_gain(p, k);
}

double rising_slope(const PlanarParams& p, int k) {
    require_case_e(p);
    require_k(k);
    return ladder_gain(p, k + 1);
}

BreakpointLadder build_ladder(const PlanarParams& p, int k_max) {
    require_case_e(p);
    require_k(k_max);
    BreakpointLadder ladder;
    ladder.k_max = k_max;
    ladder.x_star = p.x_star();
    ladder.t_star = t_star(p);
    for (int k = 1; k <= k_max; ++k) {
        ladder.r_off.push_back(r_offset(p, k));
        ladder.q_off.push_back(q_offset(p, k));
        ladder.r.push_back(ladder.x_star + ladder.r_off.back());
        ladder.q.push_back(ladder.x_star + ladder.q_off.back());
    }
    return ladder;
}

int default_k_max(const PlanarParams& p) { return std::max(50, k0(p) + 10); }

double LinearPiece::intercept(double x_star) const noexcept {
    return x_star + anchor_value - slope * (x_star + anchor_offset);
}

PiecewiseLinearT::PiecewiseLinearT(double x_star, std::vector<LinearPiece> pieces)
    : x_star_{x_star}, pieces_{std::move(pieces)} {
    if (pieces_.empty()) {
        throw DomainError("piecewise-linear map needs at least one piece");
    }
}

double PiecewiseLinearT::ladder_min() const noexcept { return pieces_.back().left; }

const LinearPiece& PiecewiseLinearT::piece_at(double x) const {
    if (x < ladder_min()) {
        throw DomainError("x = " + std::to_string(x) + " lies below the ladder; increase k_max");
    }
    // pieces_ is ordered by decreasing left end; find the first with left <= x.
    const auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                         [x](const LinearPiece& piece) { return piece.left > x; });
    return *it;
}

double PiecewiseLinearT::operator()(double x) const {
    if (!std::isfinite(x) || x < x_star_) {
        throw DomainError("T is defined on [x*, inf)");
    }
    if (x - x_star_ <= kAccumulationTol) return x_star_;
    const LinearPiece& piece = piece_at(x);
    return x_star_ + piece.anchor_value + piece.slope * ((x - x_star_) - piece.anchor_offset);
}

double PiecewiseLinearT::offset_value(double u) const {
    if (!std::isfinite(u) || u < 0.0) {
        throw DomainError("T is defined on [x*, inf)");
    }
    if (u < pieces_.back().left_offset) {
        throw DomainError("offset " + std::to_string(u) + " lies below the ladder; increase k_max");
    }
    const auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                         [u](const LinearPiece& piece) { return piece.left_offset > u; });
    return it->anchor_value + it->slope * (u - it->anchor_offset);
}

PiecewiseLinearT build_T(const PlanarParams& p, int k_max) {
    require_case_e(p);
    require_k(k_max);
    const double x_star = p.x_star();
    const double lambda = p.lambda();
    const double limit = t_star(p);

    std::vector<double> q_off(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max + 1; ++k) q_off[static_cast<std::size_t>(k - 1)] = q_offset(p, k);

    std::vector<LinearPiece> pieces;
    pieces.reserve(2 * static_cast<std::size_t>(k_max) + 1);
    pieces.push_back({x_star + q_off[0], std::numeric_limits<double>::infinity(), -lambda, q_off[0], 0.0,
                      PieceKind::tail, 0, q_off[0]});

    for (int k = 1; k <= k_max; ++k) {
        const double qk = q_off[static_cast<std::size_t>(k - 1)];
        const double qk1 = q_off[static_cast<std::size_t>(k)];
        const double rk = r_offset(p, k);
        const double falling = lambda * ladder_gain(p, k);
        const double rising = ladder_gain(p, k + 1);

        // T(r_k) - x* from the falling piece, the rising piece, and the closed form.
        const double from_falling = falling * (rk - qk);
        const double from_rising = rising * (rk - qk1);
        const double closed = 2.0 * lambda * (1.0 - x_star) - lambda * rk;
        const double scale = std::max(1.0, std::abs(closed));
        if (std::abs(from_falling - closed) > kContinuityTol * scale ||
            std::abs(from_rising - closed) > kContinuityTol * scale) {
            throw InternalConsistency("T is discontinuous at r_" + std::to_string(k) +
                                      " (T_* = " + std::to_string(limit) + ")");
        }

        pieces.push_back({x_star + rk, x_star + qk, falling, qk, 0.0, PieceKind::falling, k, rk});
        pieces.push_back({x_star + qk1, x_star + rk, rising, qk1, 0.0, PieceKind::rising, k, qk1});
    }
    return PiecewiseLinearT{x_star, std::move(pieces)};
}

double eval_numeric(const PlanarParams& p, double x, std::uint64_t max_iter) {
    require_case_e(p);
    const double x_star = p.x_star();
    if (!std::isfinite(x) || x < x_star) {
        throw DomainError("eval_numeric needs x >= x*");
    }
    if (x - x_star <= kAccumulationTol) return x_star;
    PlanarState st{x, 1.0};
    for (std::uint64_t i = 0; i < max_iter; ++i) {
        st = advance(p, st);
        if (st.s == -1.0 && st.x <= -x_star) return -st.x;
    }
    throw Nontermination("no arrival on the half-line left of F after " + std::to_string(max_iter) +
                         " iterations");
}

std::vector<TFixedPoint> fixed_points(const PlanarParams& p, int k_max) {
    require_case_e(p);
    require_k(k_max);
    const double lambda = p.lambda();
    const double x_star = p.x_star();
    std::vector<TFixedPoint> out;
    double power = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        power *= p.beta();
        const double existence = 1.0 + lambda * power;
        if (existence > 0.0) continue;
        const int period = 2 * k + 2;
        if (existence == 0.0) {
            out.push_back({r_k(p, k), PieceKind::rising, k, false, period});
            continue;
        }
        // Falling piece: u = lambda S_k (u - q_off_k), u = x - x*.
        const double gain = ladder_gain(p, k);
        const double qk = q_offset(p, k);
        const double u_fall = -lambda * gain * qk / (1.0 - lambda * gain);
        // Rising piece: u = S_{k+1} (u - q_off_{k+1}).
        const double gain1 = ladder_gain(p, k + 1);
        const double u_rise = gain1 * q_offset(p, k + 1) / (gain1 - 1.0);

        const bool stable = lambda * power + p.a() - 1.0 >= 0.0;
        out.push_back({x_star + u_rise, PieceKind::rising, k, false, period});
        out.push_back({x_star + u_fall, PieceKind::falling, k, stable, period});
    }
    return out;
}

}  // namespace stopflow
