#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stopflow/classifier.hpp"
#include "stopflow/dynamics.hpp"

namespace stopflow {

/// Uniform axis of cell centers: value(i) = min + (i + 1/2) (max - min) / resolution.
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t resolution = 2;

    [[nodiscard]] double value(std::size_t i) const noexcept {
        if (min == max) return min;
        return min + (static_cast<double>(i) + 0.5) * (max - min) / static_cast<double>(resolution);
    }
    /// Finite bounds with min < max and resolution >= 2, or the degenerate
    /// single point min == max with resolution 1.
    void validate(const char* name) const;
};

/// Distance in the (lambda, beta) plane to the nearest regime boundary:
/// the lines beta = +-1 and the half-lines lambda = 0, |beta| >= 1.
[[nodiscard]] double boundary_distance(double lambda, double beta) noexcept;

/// Whether one simulated outcome is allowed by the predicted attractor.
[[nodiscard]] bool report_consistent(const PlanarParams& p, const AttractorPrediction& prediction,
                                     const AttractorReport& report);

/// All outcomes consistent, and in case (e) with a stable orbit at least one
/// start found it.
[[nodiscard]] bool tally_consistent(const PlanarParams& p, const AttractorPrediction& prediction,
                                    const BasinTally& tally);

struct SweepCell {
    std::size_t row = 0;
    std::size_t col = 0;
    double lambda = 0.0;
    double beta = 0.0;
    std::optional<Regime> regime;
    int predicted_period = 0;
    int observed_period = 0;  ///< most frequent cycle period, 0 when no cycle was seen
    bool agreement = false;
    std::map<std::string, std::size_t> counts;
    std::string error;  ///< nonempty when the cell could not be evaluated
};

struct SweepConfig {
    GridAxis lambda{-0.95, 0.95, 50};
    GridAxis beta{-2.0, 2.0, 50};
    std::size_t starts = 20;
    DetectionConfig detection{};

    /// Axes valid and the lambda range inside (-1, 1).
    void validate() const;
};

/// Classify, predict and basin-sample one parameter pair. Never throws;
/// failures land in SweepCell::error.
[[nodiscard]] SweepCell evaluate_cell(double lambda, double beta, std::size_t starts,
                                      const DetectionConfig& cfg);

/// Row-major over (lambda row, beta column). Rows are distributed over
/// workers; the result order is fixed by grid index.
[[nodiscard]] std::vector<SweepCell> sweep(const SweepConfig& cfg, unsigned workers = 0);

}  // namespace stopflow
