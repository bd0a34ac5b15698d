#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

namespace stopflow {

/// Parameters of the planar map
///   x' = lambda * x + a * s,   s' = Phi(s + x' - x)
/// with beta = lambda + a. Requires |lambda| < 1.
///
/// beta is kept alongside a so that a caller who specifies (lambda, beta)
/// gets exactly that beta back; the regime boundaries beta = +-1 would
/// otherwise be lost to rounding in lambda + (beta - lambda).
class PlanarParams {
public:
    [[nodiscard]] static PlanarParams from_lambda_a(double lambda, double a);
    [[nodiscard]] static PlanarParams from_lambda_beta(double lambda, double beta);

    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }

    /// x-coordinate of the upper equilibrium E, a / (1 - lambda).
    [[nodiscard]] double x_star() const noexcept { return a_ / (1.0 - lambda_); }

private:
    PlanarParams(double lambda, double a, double beta) : lambda_{lambda}, a_{a}, beta_{beta} {}

    double lambda_;
    double a_;
    double beta_;
};

/// A point of the strip L = R x [-1, 1].
struct PlanarState {
    double x = 0.0;
    double s = 0.0;

    /// Play coordinate p = x - s.
    [[nodiscard]] constexpr double play() const noexcept { return x - s; }

    friend constexpr PlanarState operator-(PlanarState st) noexcept { return {-st.x, -st.s}; }
    friend constexpr bool operator==(PlanarState, PlanarState) = default;
};

/// Sup-norm distance between two states.
[[nodiscard]] double sup_distance(PlanarState lhs, PlanarState rhs) noexcept;

/// One application of the map. Throws DomainError for states off the strip.
[[nodiscard]] PlanarState step(const PlanarParams& p, PlanarState st);

/// n-fold composition of step; n = 0 is the identity.
[[nodiscard]] PlanarState step_n(const PlanarParams& p, PlanarState st, std::uint64_t n);

/// Unchecked single step used inside hot loops.
[[nodiscard]] inline PlanarState advance(const PlanarParams& p, PlanarState st) noexcept {
    const double x_next = p.lambda() * st.x + p.a() * st.s;
    double s_next = st.s + (x_next - st.x);
    if (s_next > 1.0) s_next = 1.0;
    else if (s_next < -1.0) s_next = -1.0;
    return {x_next, s_next};
}

/// Segment of equilibria x = a s / (1 - lambda), |s| <= 1.
struct SegmentEF {
    PlanarState E;
    PlanarState F;

    [[nodiscard]] bool contains(PlanarState st, double tol = 0.0) const noexcept;
    /// Euclidean distance from st to the closed segment.
    [[nodiscard]] double distance(PlanarState st) const noexcept;
};

[[nodiscard]] SegmentEF equilibrium_segment(const PlanarParams& p);

/// The 2-cycle +-Q, Q = (-a / (1 + lambda), 1). Requires beta <= -1.
[[nodiscard]] std::pair<PlanarState, PlanarState> two_cycle(const PlanarParams& p);

/// Parallelogram bounded by s = +-1 and by the two parallel lines
/// x - shear * s = lo and x - shear * s = hi.
struct Parallelogram {
    double shear = 1.0;
    double lo = 0.0;
    double hi = 0.0;

    /// Vertices in the order (lo, +1), (hi, +1), (hi, -1), (lo, -1).
    [[nodiscard]] std::array<PlanarState, 4> vertices() const noexcept;
    [[nodiscard]] bool contains(PlanarState st, double tol = 0.0) const noexcept;
    [[nodiscard]] bool degenerate() const noexcept { return hi <= lo; }
};

/// Pi = { |x - s| <= |a / (1 - lambda) - 1|, |s| <= 1 }, diagonal EF.
[[nodiscard]] Parallelogram pi_region(const PlanarParams& p);

/// Sigma, spanned by E, F, Q = (1, 1) and -Q. Exists only for beta == -1.
[[nodiscard]] Parallelogram sigma_region(const PlanarParams& p);

/// Segment AB on s = 1 that f^2 maps into itself in case (c).
/// For lambda == 0 the right end is at infinity and b_x is empty.
struct SegmentAB {
    double a_x = 0.0;
    std::optional<double> b_x;

    [[nodiscard]] bool contains(double x) const noexcept {
        return x >= a_x && (!b_x || x <= *b_x);
    }
};

/// Requires lambda >= 0 and beta < -1.
[[nodiscard]] SegmentAB ab_segment(const PlanarParams& p);

}  // namespace stopflow
