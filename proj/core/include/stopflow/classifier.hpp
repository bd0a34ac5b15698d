#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stopflow/planar.hpp"

namespace stopflow {

/// The seven parameter regimes of the planar map. Letters follow the
/// bifurcation diagram: (a) |beta| < 1, (b) lambda >= 0, beta >= 1,
/// (c) lambda >= 0, beta < -1, (d) lambda < 0, beta < -1,
/// (e) lambda < 0, beta > 1, (f) lambda < 0, beta == 1, (g) beta == -1.
enum class Regime { a, b, c, d, e, f, g };

[[nodiscard]] char regime_letter(Regime r) noexcept;
[[nodiscard]] std::optional<Regime> regime_from_letter(char c) noexcept;

struct RegimeLabel {
    Regime regime;
    std::string descriptor;
};

/// Throws DomainError for |lambda| >= 1 (enforced by PlanarParams).
[[nodiscard]] RegimeLabel classify(const PlanarParams& p);

/// Unique k with (lambda, beta) in
///   Omega_k = { (beta^k - 1)/(beta - 1) <= -1/lambda < beta^k, beta > 1, -1/lambda > 1 },
/// scanning k = 1 ... kOmegaScanLimit. Throws UnsupportedRegime outside case (e).
inline constexpr int kOmegaScanLimit = 200;
[[nodiscard]] std::optional<int> omega_index(const PlanarParams& p);

/// Smallest k >= 1 with 1 + lambda * beta^k <= 0. Case (e) only.
[[nodiscard]] int k0(const PlanarParams& p);

struct PeriodPrediction {
    enum class Kind { stable_period, all_unstable };
    Kind kind = Kind::all_unstable;
    int k = 0;
    int period = 0;
};

/// Case (e) period prediction from omega_index.
[[nodiscard]] PeriodPrediction predict_period(const PlanarParams& p);

enum class Stability { stable, semi_stable, unstable };
[[nodiscard]] std::string_view to_string(Stability s) noexcept;

/// Sets that attract non-equilibrium trajectories.
enum class AttractingSet {
    equilibrium_points,  ///< each trajectory converges to some point of EF
    endpoint_E,
    endpoint_F,
    two_cycle_Q,         ///< the stable 2-cycle +-Q
    sigma_two_cycles,    ///< 2-cycles filling Sigma (beta == -1)
    stable_cycle,        ///< stable (2k+2)-cycle in Omega_k
    segment_EF,          ///< convergence to EF without a single limit point
};
[[nodiscard]] std::string_view to_string(AttractingSet s) noexcept;

struct AttractorPrediction {
    Regime regime;
    Stability interior_equilibria;  ///< points of EF other than E, F
    Stability endpoints;            ///< E and F
    std::vector<AttractingSet> attractors;
    std::optional<PeriodPrediction> period;  ///< case (e) only
    /// Period of the predicted stable cycle, 0 when none is predicted.
    int stable_cycle_period = 0;
    std::string summary;
};

[[nodiscard]] AttractorPrediction predict_attractor(const PlanarParams& p);

}  // namespace stopflow
