#pragma once

#include <span>
#include <vector>

namespace stopflow {

/// Saturation Phi: identity on [-1, 1], clamps to -1 / 1 outside.
/// Throws DomainError for non-finite input.
[[nodiscard]] double clip(double tau);

/// State of the discrete stop operator, always in [-1, 1].
class StopState {
public:
    constexpr StopState() = default;
    /// Throws DomainError unless s is finite with |s| <= 1.
    explicit StopState(double s);

    [[nodiscard]] constexpr double value() const noexcept { return value_; }

    friend constexpr bool operator==(StopState, StopState) = default;
    friend constexpr StopState operator-(StopState s) noexcept { return StopState{Unchecked{}, -s.value_}; }

private:
    struct Unchecked {};
    constexpr StopState(Unchecked, double s) noexcept : value_{s} {}

    double value_ = 0.0;
};

/// s' = Phi(s + x_next - x_prev)
[[nodiscard]] StopState stop_step(StopState s, double x_prev, double x_next);

/// Folds stop_step over xs and returns s_1 ... s_N (s_0 is not repeated).
/// xs must be nonempty and finite.
[[nodiscard]] std::vector<StopState> stop_transduce(StopState s0, std::span<const double> xs);

/// Play output p_n = x_n - s_n for n = 1 ... N.
[[nodiscard]] std::vector<double> play_transduce(StopState s0, std::span<const double> xs);

struct ScaledPlayResult {
    StopState state;
    double sigma = 0.0;
};

/// Play operator with threshold rho acting on u:
///   s' = Phi(s + (u_next - u_prev) / rho),  sigma = u_next - rho * s'.
[[nodiscard]] ScaledPlayResult scaled_play_step(StopState s, double u_prev, double u_next, double rho);

}  // namespace stopflow
