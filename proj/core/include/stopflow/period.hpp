#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace stopflow {

struct PeriodMatch {
    std::size_t period = 0;
    double residual = 0.0;  ///< max distance between states one period apart
};

/// Smallest period P <= period_max such that each of the first `window`
/// states agrees with the state P steps later within tol under `dist`.
/// `states` must hold at least window + period_max entries.
template <typename State, typename Dist>
[[nodiscard]] std::optional<PeriodMatch> find_period(std::span<const State> states, std::size_t window,
                                                     std::size_t period_max, double tol, Dist dist) {
    for (std::size_t period = 1; period <= period_max; ++period) {
        double worst = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < window && i + period < states.size(); ++i) {
            const double d = dist(states[i], states[i + period]);
            if (!(d <= tol)) {
                ok = false;
                break;
            }
            if (d > worst) worst = d;
        }
        if (ok) return PeriodMatch{period, worst};
    }
    return std::nullopt;
}

}  // namespace stopflow
