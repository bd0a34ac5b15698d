#include "stopflow/hysteresis.hpp"

#include <cmath>
#include <string>

#include "stopflow/error.hpp"

namespace stopflow {
namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

void require_input(std::span<const double> xs) {
    if (xs.empty()) {
        throw DomainError("input sequence must be nonempty");
    }
    for (double x : xs) {
        require_finite(x, "input sequence entry");
    }
}

}  // namespace

double clip(double tau) {
    require_finite(tau, "clip argument");
    if (tau < -1.0) return -1.0;
    if (tau > 1.0) return 1.0;
    return tau;
}

StopState::StopState(double s) : value_{s} {
    require_finite(s, "stop state");
    if (std::abs(s) > 1.0) {
        throw DomainError("stop state must lie in [-1, 1], got " + std::to_string(s));
    }
}

StopState stop_step(StopState s, double x_prev, double x_next) {
    require_finite(x_prev, "x_prev");
    require_finite(x_next, "x_next");
    return StopState{clip(s.value() + (x_next - x_prev))};
}

std::vector<StopState> stop_transduce(StopState s0, std::span<const double> xs) {
    require_input(xs);
    std::vector<StopState> out;
    out.reserve(xs.size() - 1);
    StopState s = s0;
    for (std::size_t n = 1; n < xs.size(); ++n) {
        s = StopState{clip(s.value() + xs[n] - xs[n - 1])};
        out.push_back(s);
    }
    return out;
}

std::vector<double> play_transduce(StopState s0, std::span<const double> xs) {
    const auto stops = stop_transduce(s0, xs);
    std::vector<double> out;
    out.reserve(stops.size());
    for (std::size_t n = 0; n < stops.size(); ++n) {
        out.push_back(xs[n + 1] - stops[n].value());
    }
    return out;
}

ScaledPlayResult scaled_play_step(StopState s, double u_prev, double u_next, double rho) {
    require_finite(rho, "rho");
    if (!(rho > 0.0)) {
        throw DomainError("play threshold rho must be positive");
    }
    require_finite(u_prev, "u_prev");
    require_finite(u_next, "u_next");
    const StopState next{clip(s.value() + (u_next - u_prev) / rho)};
    return {next, u_next - rho * next.value()};
}

}  // namespace stopflow
