#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stopflow/planar.hpp"

namespace stopflow {

struct DetectionConfig {
    std::uint64_t transient = 10'000;
    std::size_t window = 1'000;
    double tol = 1e-9;
    std::size_t period_max = 64;
    std::uint64_t seed = 0x5eed5eedULL;

    /// Throws DomainError unless tol > 0 and window >= 2 * period_max.
    void validate() const;
};

enum class AttractorKind { fixed_point, cycle, segment_EF, undetermined };

[[nodiscard]] std::string to_string(AttractorKind kind);

struct AttractorReport {
    AttractorKind kind = AttractorKind::undetermined;
    std::size_t period = 0;            ///< 1 for fixed points, 0 when not periodic
    std::vector<PlanarState> witness;  ///< one period of the limit cycle, or the last state
    double residual = 0.0;
};

/// Trajectory of length n + 1 starting with st0.
[[nodiscard]] std::vector<PlanarState> simulate(const PlanarParams& p, PlanarState st0, std::size_t n);

/// Advances n steps, replacing long runs inside the open strip by their
/// closed form. Runs along p = const satisfy x' = beta x - a p, so they
/// can be summed exactly; steps touching s = +-1 are taken one at a time.
[[nodiscard]] PlanarState fast_forward(const PlanarParams& p, PlanarState st, std::uint64_t n);

/// Drops cfg.transient steps, then looks at the next cfg.window states:
/// a tail within tol of EF that still drifts by more than tol is segment_EF;
/// otherwise the minimal period <= period_max under tol (sup norm) gives
/// fixed_point or cycle; anything else is undetermined.
[[nodiscard]] AttractorReport detect_attractor(const PlanarParams& p, PlanarState st0,
                                               const DetectionConfig& cfg);

/// Roots of x -> [f^period(x, 1)]_x - x on a uniform grid over [x_lo, x_hi],
/// refined by bisection and re-validated by iteration. Orbits whose roots
/// fall between grid points of the same sign are missed.
[[nodiscard]] std::vector<PlanarState> find_periodic_orbits(const PlanarParams& p, std::size_t period,
                                                            double x_lo, double x_hi,
                                                            std::size_t grid = 10'000);

/// Coarse label of a report: "fixed_point:E", "fixed_point:F", "fixed_point:EF",
/// "fixed_point:off", "cycle:<period>", "segment_EF", "undetermined".
[[nodiscard]] std::string outcome_label(const PlanarParams& p, const AttractorReport& report);

struct BasinTally {
    std::vector<PlanarState> starts;
    std::vector<AttractorReport> reports;  ///< by start index
    std::map<std::string, std::size_t> counts;
};

/// Runs detect_attractor from n_starts uniform random starts in
/// [-X, X] x [-1, 1], X = 2 max(1, |x*|) + 2. Starts are drawn from
/// per-index seeds derived from cfg.seed, so the result does not depend on
/// how many worker threads are used.
[[nodiscard]] BasinTally basin_sample(const PlanarParams& p, std::size_t n_starts, const DetectionConfig& cfg,
                                      unsigned workers = 0);

/// splitmix64 finalizer used to derive independent per-item seeds.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace stopflow
