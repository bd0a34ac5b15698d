#include "stopflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "stopflow/error.hpp"
#include "stopflow/period.hpp"

namespace stopflow {
namespace {

constexpr double kEndpointTol = 1e-6;
constexpr double kOrbitValidationTol = 1e-9;
constexpr double kEquilibriumExclusion = 1e-12;

void require_state(PlanarState st) {
    if (!std::isfinite(st.x) || !std::isfinite(st.s) || std::abs(st.s) > 1.0) {
        throw DomainError("state must be finite and lie in the strip |s| <= 1");
    }
}

bool finite(PlanarState st) { return std::isfinite(st.x) && std::isfinite(st.s); }

// Number of further steps j >= 1 for which a run along p = const from the
// interior state st stays strictly inside the strip. Infinity when the run
// never leaves; 0 when no closed form is used.
double interior_run_length(const PlanarParams& p, PlanarState st) {
    const double beta = p.beta();
    const double pp = st.play();
    const double s = st.s;
    if (beta == 1.0) {
        const double drift = -p.a() * pp;  // change of s per step
        if (drift == 0.0) return std::numeric_limits<double>::infinity();
        const double room = drift > 0.0 ? 1.0 - s : -1.0 - s;
        return std::ceil(room / drift) - 1.0;
    }
    if (!(beta > 0.0)) return 0.0;
    // s_j = L + beta^j (s - L) with L the limit of the run.
    const double x_bar = -p.a() * pp / (1.0 - beta);
    const double limit = x_bar - pp;
    const double gap = s - limit;
    if (gap == 0.0) return std::numeric_limits<double>::infinity();
    double bound = 0.0;
    if (beta > 1.0) {
        bound = gap > 0.0 ? 1.0 : -1.0;
    } else {
        if (std::abs(limit) < 1.0) return std::numeric_limits<double>::infinity();
        bound = limit > 0.0 ? 1.0 : -1.0;
    }
    const double ratio = (bound - limit) / gap;
    if (!(ratio > 0.0)) return 0.0;
    return std::ceil(std::log(ratio) / std::log(beta)) - 1.0;
}

PlanarState jump_along_run(const PlanarParams& p, PlanarState st, std::uint64_t m) {
    const double beta = p.beta();
    const double pp = st.play();
    double x = 0.0;
    if (beta == 1.0) {
        x = st.x - static_cast<double>(m) * p.a() * pp;
    } else {
        const double x_bar = -p.a() * pp / (1.0 - beta);
        x = x_bar + std::pow(beta, static_cast<double>(m)) * (st.x - x_bar);
    }
    return {x, std::clamp(x - pp, -1.0, 1.0)};
}

double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

void DetectionConfig::validate() const {
    if (!(tol > 0.0)) throw DomainError("detection tolerance must be positive");
    if (period_max < 1) throw DomainError("period_max must be >= 1");
    if (window < 2 * period_max) throw DomainError("window must be at least 2 * period_max");
}

std::string to_string(AttractorKind kind) {
    switch (kind) {
        case AttractorKind::fixed_point: return "fixed_point";
        case AttractorKind::cycle: return "cycle";
        case AttractorKind::segment_EF: return "segment_EF";
        case AttractorKind::undetermined: return "undetermined";
    }
    return "?";
}

std::vector<PlanarState> simulate(const PlanarParams& p, PlanarState st0, std::size_t n) {
    require_state(st0);
    std::vector<PlanarState> out;
    out.reserve(n + 1);
    out.push_back(st0);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(advance(p, out.back()));
    }
    return out;
}

PlanarState fast_forward(const PlanarParams& p, PlanarState st, std::uint64_t n) {
    require_state(st);
    constexpr double kMargin = 2.0;
    constexpr double kMinJump = 8.0;
    while (n > 0) {
        if (std::abs(st.s) < 1.0) {
            const double run = interior_run_length(p, st) - kMargin;
            if (run >= kMinJump) {
                const auto m = run >= static_cast<double>(n) ? n : static_cast<std::uint64_t>(run);
                st = jump_along_run(p, st, m);
                n -= m;
                continue;
            }
        }
        st = advance(p, st);
        --n;
    }
    return st;
}

AttractorReport detect_attractor(const PlanarParams& p, PlanarState st0, const DetectionConfig& cfg) {
    cfg.validate();
    require_state(st0);
    PlanarState st = st0;
    for (std::uint64_t i = 0; i < cfg.transient; ++i) st = advance(p, st);

    std::vector<PlanarState> tail;
    tail.reserve(cfg.window + cfg.period_max + 1);
    tail.push_back(st);
    for (std::size_t i = 0; i < cfg.window + cfg.period_max; ++i) tail.push_back(advance(p, tail.back()));

    AttractorReport report;
    if (!std::all_of(tail.begin(), tail.end(), finite)) {
        report.witness = {tail.back()};
        report.residual = std::numeric_limits<double>::infinity();
        return report;
    }

    const SegmentEF ef = equilibrium_segment(p);
    double ef_distance = 0.0;
    for (std::size_t i = 0; i <= cfg.window; ++i) ef_distance = std::max(ef_distance, ef.distance(tail[i]));
    // Drift along EF: either visible over the window, or per-step motion that
    // stays above rounding level without decaying (a slow sweep, not an approach).
    const double first_move = sup_distance(tail[1], tail[0]);
    const double last_move = sup_distance(tail[cfg.window], tail[cfg.window - 1]);
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() *
                            std::max({1.0, std::abs(tail[cfg.window].x), std::abs(p.x_star())});
    const bool drifting = sup_distance(tail[cfg.window], tail[0]) > cfg.tol ||
                          (last_move > rounding && last_move >= 0.5 * first_move);
    if (ef_distance < cfg.tol && drifting) {
        report.kind = AttractorKind::segment_EF;
        report.witness = {tail[cfg.window]};
        report.residual = ef_distance;
        return report;
    }

    const auto match = find_period(std::span<const PlanarState>(tail), cfg.window, cfg.period_max, cfg.tol,
                                   [](PlanarState a, PlanarState b) { return sup_distance(a, b); });
    if (match) {
        report.kind = match->period == 1 ? AttractorKind::fixed_point : AttractorKind::cycle;
        report.period = match->period;
        report.witness.assign(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(match->period));
        report.residual = match->residual;
        return report;
    }
    report.witness = {tail.back()};
    report.residual = std::numeric_limits<double>::infinity();
    return report;
}

std::vector<PlanarState> find_periodic_orbits(const PlanarParams& p, std::size_t period, double x_lo,
                                              double x_hi, std::size_t grid) {
    if (period < 1) throw DomainError("period must be >= 1");
    if (grid < 2) throw DomainError("grid must have at least 2 points");
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_lo < x_hi)) {
        throw DomainError("x range must be a finite nonempty interval");
    }
    const auto image = [&](double x) {
        PlanarState st{x, 1.0};
        for (std::size_t i = 0; i < period; ++i) st = advance(p, st);
        return st;
    };
    const auto g = [&](double x) { return image(x).x - x; };

    std::vector<double> roots;
    const double h = (x_hi - x_lo) / static_cast<double>(grid - 1);
    double x_prev = x_lo;
    double g_prev = g(x_prev);
    if (g_prev == 0.0) roots.push_back(x_prev);
    for (std::size_t i = 1; i < grid; ++i) {
        const double x = i + 1 == grid ? x_hi : x_lo + h * static_cast<double>(i);
        const double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if (g_prev != 0.0 && std::signbit(gx) != std::signbit(g_prev)) {
            double lo = x_prev;
            double hi = x;
            double g_lo = g_prev;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(gm) == std::signbit(g_lo)) {
                    lo = mid;
                    g_lo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x_prev = x;
        g_prev = gx;
    }

    std::vector<PlanarState> out;
    for (double x : roots) {
        const PlanarState start{x, 1.0};
        if (sup_distance(image(x), start) > kOrbitValidationTol * std::max(1.0, std::abs(x))) continue;
        if (!out.empty() && std::abs(out.back().x - x) <= kOrbitValidationTol) continue;
        out.push_back(start);
    }
    return out;
}

std::string outcome_label(const PlanarParams& p, const AttractorReport& report) {
    switch (report.kind) {
        case AttractorKind::fixed_point: {
            const PlanarState w = report.witness.front();
            const SegmentEF ef = equilibrium_segment(p);
            if (sup_distance(w, ef.E) <= kEndpointTol) return "fixed_point:E";
            if (sup_distance(w, ef.F) <= kEndpointTol) return "fixed_point:F";
            if (ef.distance(w) <= kEndpointTol) return "fixed_point:EF";
            return "fixed_point:off";
        }
        case AttractorKind::cycle: return "cycle:" + std::to_string(report.period);
        case AttractorKind::segment_EF: return "segment_EF";
        case AttractorKind::undetermined: return "undetermined";
    }
    return "undetermined";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

BasinTally basin_sample(const PlanarParams& p, std::size_t n_starts, const DetectionConfig& cfg,
                        unsigned workers) {
    if (n_starts < 1) throw DomainError("basin_sample needs at least one start");
    cfg.validate();
    const double half_width = 2.0 * std::max(1.0, std::abs(p.x_star())) + 2.0;
    const SegmentEF ef = equilibrium_segment(p);

    BasinTally tally;
    tally.starts.resize(n_starts);
    tally.reports.resize(n_starts);
    for (std::size_t i = 0; i < n_starts; ++i) {
        std::mt19937_64 rng{derive_seed(cfg.seed, i)};
        PlanarState st{half_width * (2.0 * to_unit(rng()) - 1.0), 2.0 * to_unit(rng()) - 1.0};
        if (ef.distance(st) < kEquilibriumExclusion) st.x += 1e-9;
        tally.starts[i] = st;
    }

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_starts));
    const auto run = [&](std::size_t first) {
        for (std::size_t i = first; i < n_starts; i += workers) {
            tally.reports[i] = detect_attractor(p, tally.starts[i], cfg);
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    for (const auto& report : tally.reports) ++tally.counts[outcome_label(p, report)];
    return tally;
}

}  // namespace stopflow
