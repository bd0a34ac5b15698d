#pragma once

#include <cstdint>
#include <vector>

#include "stopflow/planar.hpp"

namespace stopflow {

// First-hitting map T of case (e) (lambda < 0, beta > 1). A point (x, 1)
// with x > x* is iterated until it first lands on the closed half-line
// { x <= -x*, s = -1 } at (-T(x), -1). T is continuous and piecewise
// linear with breakpoints
//   q_1 > r_1 > q_2 > r_2 > ... > x*
// where f^k(r_k, 1) = (r_k - 2, -1) and f^k(q_k, 1) = F.
//
// All breakpoints are carried as offsets from x*: the raw formulas lose
// every significant digit once beta^k is large.

/// r_k - x* = 2 (beta - 1) / ((1 - lambda)(beta^k - 1))
[[nodiscard]] double r_offset(const PlanarParams& p, int k);
/// q_k - x* = 2 x* (beta - 1) / ((1 - lambda) beta^k - a)
[[nodiscard]] double q_offset(const PlanarParams& p, int k);

[[nodiscard]] double r_k(const PlanarParams& p, int k);
[[nodiscard]] double q_k(const PlanarParams& p, int k);

/// T(r_k) = a - lambda (r_k - 2).
[[nodiscard]] double T_at_rk(const PlanarParams& p, int k);

/// T_* = lim T(r_k) - x* = 2 lambda (1 - a - lambda) / (1 - lambda).
[[nodiscard]] double t_star(const PlanarParams& p);

/// Slope of T on (r_k, q_k), the decreasing pieces.
[[nodiscard]] double falling_slope(const PlanarParams& p, int k);
/// Slope of T on (q_{k+1}, r_k), the increasing pieces.
[[nodiscard]] double rising_slope(const PlanarParams& p, int k);

struct BreakpointLadder {
    int k_max = 0;
    double x_star = 0.0;
    double t_star = 0.0;
    std::vector<double> r;  ///< r[k-1] = r_k
    std::vector<double> q;  ///< q[k-1] = q_k
    std::vector<double> r_off;
    std::vector<double> q_off;
};

[[nodiscard]] BreakpointLadder build_ladder(const PlanarParams& p, int k_max);

/// max(50, k0 + 10)
[[nodiscard]] int default_k_max(const PlanarParams& p);

enum class PieceKind { tail, falling, rising };

/// T(x) = x* + anchor_value + slope * ((x - x*) - anchor_offset) on [left, right).
struct LinearPiece {
    double left = 0.0;
    double right = 0.0;  ///< +inf for the tail piece
    double slope = 0.0;
    double anchor_offset = 0.0;
    double anchor_value = 0.0;  ///< T(anchor) - x*
    PieceKind kind = PieceKind::tail;
    int k = 0;
    double left_offset = 0.0;  ///< left - x*, exact where left itself has rounded onto x*

    /// T(0) of the affine extension, for tabular export.
    [[nodiscard]] double intercept(double x_star) const noexcept;
};

class PiecewiseLinearT {
public:
    PiecewiseLinearT(double x_star, std::vector<LinearPiece> pieces);

    [[nodiscard]] double domain_min() const noexcept { return x_star_; }
    /// Smallest x the ladder covers; below it (but above x*) T is not represented.
    [[nodiscard]] double ladder_min() const noexcept;
    [[nodiscard]] const std::vector<LinearPiece>& pieces() const noexcept { return pieces_; }

    /// Evaluates T. Inputs within 1e-12 of x* return x*; inputs below x* or
    /// below ladder_min() throw DomainError.
    [[nodiscard]] double operator()(double x) const;
    /// T(x* + u) - x*. Keeps full relative precision for small offsets u,
    /// where operator() loses digits to the rounding of x* + u.
    [[nodiscard]] double offset_value(double u) const;
    [[nodiscard]] const LinearPiece& piece_at(double x) const;

private:
    double x_star_;
    std::vector<LinearPiece> pieces_;  ///< ordered right to left
};

/// Assembles T on [r_{k_max}, inf). Throws InternalConsistency when adjacent
/// pieces disagree at a breakpoint by more than 1e-9.
[[nodiscard]] PiecewiseLinearT build_T(const PlanarParams& p, int k_max);

/// T(x) by direct iteration of the map. Throws Nontermination after max_iter steps.
[[nodiscard]] double eval_numeric(const PlanarParams& p, double x, std::uint64_t max_iter = 1'000'000);

struct TFixedPoint {
    double x = 0.0;
    PieceKind kind = PieceKind::falling;  ///< rising or falling
    int k = 0;
    bool stable = false;
    int system_period = 0;  ///< 2k + 2
};

/// Fixed points of T in (q_{k+1}, q_k) for k = 1 ... k_max, solved in closed form.
[[nodiscard]] std::vector<TFixedPoint> fixed_points(const PlanarParams& p, int k_max);

}  // namespace stopflow
