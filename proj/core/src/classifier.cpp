#include "stopflow/classifier.hpp"

#include <cmath>
#include <iostream>

#include "stopflow/error.hpp"

namespace stopflow {
namespace {

void require_case_e(const PlanarParams& p, const char* what) {
    if (!(p.lambda() < 0.0 && p.beta() > 1.0)) {
        throw UnsupportedRegime(std::string(what) + " requires lambda < 0 and beta > 1");
    }
}

}  // namespace

char regime_letter(Regime r) noexcept {
    return static_cast<char>('a' + static_cast<int>(r));
}

std::optional<Regime> regime_from_letter(char c) noexcept {
    if (c < 'a' || c > 'g') return std::nullopt;
    return static_cast<Regime>(c - 'a');
}

RegimeLabel classify(const PlanarParams& p) {
    const double lambda = p.lambda();
    const double beta = p.beta();
    if (beta == -1.0) {
        return {Regime::g, "equilibria stable; Sigma filled with stable 2-cycles"};
    }
    if (beta == 1.0 && lambda < 0.0) {
        return {Regime::f, "equilibria unstable; trajectories end at E or F or converge to EF"};
    }
    if (lambda >= 0.0 && beta >= 1.0) {
        return {Regime::b, "E, F semi-stable; other equilibria unstable"};
    }
    if (std::abs(beta) < 1.0) {
        return {Regime::a, "all equilibria stable"};
    }
    if (lambda >= 0.0 && beta < -1.0) {
        return {Regime::c, "E, F semi-stable; stable 2-cycle +-Q"};
    }
    if (lambda < 0.0 && beta < -1.0) {
        return {Regime::d, "equilibria unstable; stable 2-cycle +-Q"};
    }
    return {Regime::e, "equilibria unstable; periodic orbits of all large periods"};
}

std::optional<int> omega_index(const PlanarParams& p) {
    require_case_e(p, "omega_index");
    const double beta = p.beta();
    const double inv = -1.0 / p.lambda();
    if (!(inv > 1.0)) return std::nullopt;
    double power = 1.0;    // beta^k
    double partial = 0.0;  // (beta^k - 1) / (beta - 1) = 1 + beta + ... + beta^(k-1)
    for (int k = 1; k <= kOmegaScanLimit; ++k) {
        partial += power;
        power *= beta;
        // partial grows with k, so once it exceeds -1/lambda no later k fits.
        if (partial > inv) return std::nullopt;
        if (inv < power) return k;
    }
    std::clog << "stopflow: omega_index scan reached k = " << kOmegaScanLimit
              << " without a decision (lambda = " << p.lambda() << ", beta = " << beta << ")\n";
    return std::nullopt;
}

int k0(const PlanarParams& p) {
    require_case_e(p, "k0");
    double power = 1.0;
    for (int k = 1;; ++k) {
        power *= p.beta();
        if (1.0 + p.lambda() * power <= 0.0) return k;
        if (!std::isfinite(power)) {
            throw SingularParameter("k0 search overflowed");
        }
    }
}

PeriodPrediction predict_period(const PlanarParams& p) {
    const auto k = omega_index(p);
    if (!k) return {};
    return {PeriodPrediction::Kind::stable_period, *k, 2 * *k + 2};
}

std::string_view to_string(Stability s) noexcept {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::semi_stable: return "semi-stable";
        case Stability::unstable: return "unstable";
    }
    return "?";
}

std::string_view to_string(AttractingSet s) noexcept {
    switch (s) {
        case AttractingSet::equilibrium_points: return "equilibrium_points";
        case AttractingSet::endpoint_E: return "E";
        case AttractingSet::endpoint_F: return "F";
        case AttractingSet::two_cycle_Q: return "two_cycle_Q";
        case AttractingSet::sigma_two_cycles: return "sigma_two_cycles";
        case AttractingSet::stable_cycle: return "stable_cycle";
        case AttractingSet::segment_EF: return "segment_EF";
    }
    return "?";
}

AttractorPrediction predict_attractor(const PlanarParams& p) {
    const auto label = classify(p);
    AttractorPrediction out{label.regime, Stability::unstable, Stability::unstable, {}, std::nullopt, 0, {}};
    using AS = AttractingSet;
    switch (label.regime) {
        case Regime::a:
            out.interior_equilibria = out.endpoints = Stability::stable;
            out.attractors = {AS::equilibrium_points};
            out.summary = "all equilibria stable; every trajectory converges to an equilibrium";
            break;
        case Regime::b:
            out.endpoints = Stability::semi_stable;
            out.attractors = {AS::endpoint_E, AS::endpoint_F};
            out.summary = "E, F semi-stable, other equilibria unstable; trajectories converge to E or F";
            break;
        case Regime::c:
            out.endpoints = Stability::semi_stable;
            out.attractors = {AS::endpoint_E, AS::endpoint_F, AS::two_cycle_Q};
            out.stable_cycle_period = 2;
            out.summary = "E, F semi-stable; stable 2-cycle +-Q; trajectories converge to E, F or +-Q";
            break;
        case Regime::d:
            out.attractors = {AS::two_cycle_Q};
            out.stable_cycle_period = 2;
            out.summary = "all equilibria unstable; every trajectory converges to the stable 2-cycle +-Q";
            break;
        case Regime::e: {
            out.period = predict_period(p);
            if (out.period->kind == PeriodPrediction::Kind::stable_period) {
                out.attractors = {AS::stable_cycle};
                out.stable_cycle_period = out.period->period;
                out.summary = "all equilibria unstable; unique stable " + std::to_string(out.period->period) +
                              "-cycle among infinitely many periodic orbits";
            } else {
                out.summary = "all equilibria unstable; all periodic orbits unstable";
            }
            break;
        }
        case Regime::f:
            out.attractors = {AS::endpoint_E, AS::endpoint_F, AS::segment_EF};
            out.summary = "all equilibria unstable; trajectories end at E or F or converge to the segment EF";
            break;
        case Regime::g:
            out.interior_equilibria = out.endpoints = Stability::stable;
            out.attractors = {AS::endpoint_E, AS::endpoint_F, AS::sigma_two_cycles};
            out.stable_cycle_period = 2;
            out.summary = "all equilibria stable; trajectories converge to E, F or a 2-cycle in Sigma";
            break;
    }
    return out;
}

}  // namespace stopflow
