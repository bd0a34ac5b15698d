#include "stopflow/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "stopflow/error.hpp"

namespace stopflow {
namespace {

constexpr double kWitnessTol = 1e-6;

bool is_endpoint(const std::string& label) {
    return label == "fixed_point:E" || label == "fixed_point:F";
}

bool near_two_cycle(const PlanarParams& p, const AttractorReport& report) {
    if (report.kind != AttractorKind::cycle || report.period != 2) return false;
    const auto [q, minus_q] = two_cycle(p);
    return std::all_of(report.witness.begin(), report.witness.end(), [&](PlanarState w) {
        return sup_distance(w, q) <= kWitnessTol || sup_distance(w, minus_q) <= kWitnessTol;
    });
}

}  // namespace

double boundary_distance(double lambda, double beta) noexcept {
    double d = std::min(std::abs(beta - 1.0), std::abs(beta + 1.0));
    const double upper = beta >= 1.0 ? std::abs(lambda) : std::hypot(lambda, beta - 1.0);
    const double lower = beta <= -1.0 ? std::abs(lambda) : std::hypot(lambda, beta + 1.0);
    return std::min({d, upper, lower});
}

bool report_consistent(const PlanarParams& p, const AttractorPrediction& prediction,
                       const AttractorReport& report) {
    const std::string label = outcome_label(p, report);
    switch (prediction.regime) {
        case Regime::a:
            return is_endpoint(label) || label == "fixed_point:EF";
        case Regime::b:
            return is_endpoint(label);
        case Regime::c:
            return is_endpoint(label) || near_two_cycle(p, report);
        case Regime::d:
            return near_two_cycle(p, report);
        case Regime::e:
            if (report.kind == AttractorKind::undetermined) return true;
            return prediction.stable_cycle_period > 0 && report.kind == AttractorKind::cycle &&
                   report.period == static_cast<std::size_t>(prediction.stable_cycle_period);
        case Regime::f:
            return is_endpoint(label) || label == "segment_EF" || label == "fixed_point:EF";
        case Regime::g: {
            if (is_endpoint(label) || label == "fixed_point:EF") return true;
            if (report.kind != AttractorKind::cycle || report.period != 2) return false;
            const Parallelogram sigma = sigma_region(p);
            return std::all_of(report.witness.begin(), report.witness.end(),
                               [&](PlanarState w) { return sigma.contains(w, kWitnessTol); });
        }
    }
    return false;
}

bool tally_consistent(const PlanarParams& p, const AttractorPrediction& prediction, const BasinTally& tally) {
    for (const auto& report : tally.reports) {
        if (!report_consistent(p, prediction, report)) return false;
    }
    if (prediction.regime == Regime::e && prediction.stable_cycle_period > 0) {
        return std::any_of(tally.reports.begin(), tally.reports.end(),
                           [](const AttractorReport& r) { return r.kind == AttractorKind::cycle; });
    }
    return true;
}

SweepCell evaluate_cell(double lambda, double beta, std::size_t starts, const DetectionConfig& cfg) {
    SweepCell cell;
    cell.lambda = lambda;
    cell.beta = beta;
    try {
        const auto p = PlanarParams::from_lambda_beta(lambda, beta);
        const auto prediction = predict_attractor(p);
        cell.regime = prediction.regime;
        cell.predicted_period = prediction.stable_cycle_period;
        const auto tally = basin_sample(p, starts, cfg, 1);
        cell.counts = tally.counts;
        std::map<std::size_t, std::size_t> periods;
        for (const auto& r : tally.reports) {
            if (r.kind == AttractorKind::cycle) ++periods[r.period];
        }
        if (!periods.empty()) {
            const auto best = std::max_element(periods.begin(), periods.end(),
                                               [](const auto& x, const auto& y) { return x.second < y.second; });
            cell.observed_period = static_cast<int>(best->first);
        }
        cell.agreement = tally_consistent(p, prediction, tally);
    } catch (const std::exception& e) {
        cell.error = e.what();
        cell.agreement = false;
    }
    return cell;
}

void GridAxis::validate(const char* name) const {
    const std::string axis{name};
    if (!std::isfinite(min) || !std::isfinite(max)) throw DomainError(axis + " range must be finite");
    if (min == max) {
        if (resolution != 1) throw DomainError(axis + " range is a single point; resolution must be 1");
        return;
    }
    if (!(min < max)) throw DomainError(axis + " range must satisfy min < max");
    if (resolution < 2) throw DomainError(axis + " resolution must be >= 2");
}

void SweepConfig::validate() const {
    lambda.validate("lambda");
    beta.validate("beta");
    if (!(lambda.min > -1.0 && lambda.max < 1.0)) throw DomainError("lambda range must lie inside (-1, 1)");
    if (starts < 1) throw DomainError("starts must be >= 1");
    detection.validate();
}

std::vector<SweepCell> sweep(const SweepConfig& cfg, unsigned workers) {
    cfg.validate();
    const std::size_t rows = cfg.lambda.resolution;
    const std::size_t cols = cfg.beta.resolution;
    std::vector<SweepCell> cells(rows * cols);
    std::atomic<std::size_t> next_row{0};
    const auto run = [&] {
        for (std::size_t row = next_row++; row < rows; row = next_row++) {
            for (std::size_t col = 0; col < cols; ++col) {
                SweepCell cell = evaluate_cell(cfg.lambda.value(row), cfg.beta.value(col), cfg.starts, cfg.detection);
                cell.row = row;
                cell.col = col;
                cells[row * cols + col] = std::move(cell);
            }
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows));
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    return cells;
}

}  // namespace stopflow
