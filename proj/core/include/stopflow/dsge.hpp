#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace stopflow {

/// Parameters of the macro model
///   y' = y - a1 (v' - sigma') + eps
///   u' = b1 sigma' + (1 - b1) u + b2 y' + eta
///   v' = c1 (u' - u*) + c2 y' + c3 v + xi
///   sigma' = u' - rho s',   s' = Phi(s + (u' - u) / rho)
struct DsgeParams {
    double a1 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double rho = 1.0;
    double u_target = 0.0;

    /// Sign constraints, b1 < 1, rho > 0, and a nonsingular linear solve on
    /// each of the three branches. Throws DomainError / SingularParameter.
    void validate() const;
};

/// Named parameter sets: "fig7a" ... "fig7e".
[[nodiscard]] std::optional<DsgeParams> dsge_preset(std::string_view name);

struct DsgeState {
    double y = 0.0;
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    double sigma = 0.0;  ///< u - rho s

    /// State with sigma filled in from u and s.
    [[nodiscard]] static DsgeState make(const DsgeParams& p, double y, double u, double v, double s);
};

/// Default initial state used with the presets: (y, u, v, s) = (10, 10, 10, 0).
/// Small starts fall into the equilibrium segment for every preset.
[[nodiscard]] DsgeState dsge_preset_start(const DsgeParams& p);

/// Sup norm over (y, u, v, s).
[[nodiscard]] double sup_distance(const DsgeState& lhs, const DsgeState& rhs) noexcept;

struct Shock {
    double eps = 0.0;
    double eta = 0.0;
    double xi = 0.0;
};

struct ShockSequence {
    std::vector<double> eps;
    std::vector<double> eta;
    std::vector<double> xi;

    [[nodiscard]] std::size_t size() const noexcept { return eps.size(); }
    [[nodiscard]] bool empty() const noexcept { return eps.empty(); }
    /// Throws DomainError unless all three have equal length.
    void validate() const;
    /// Zero shock past the end.
    [[nodiscard]] Shock at(std::size_t n) const noexcept;
};

enum class Branch { interior, upper, lower };
[[nodiscard]] std::string_view to_string(Branch b) noexcept;

struct StepInfo {
    Branch branch = Branch::interior;
    int consistent_branches = 0;  ///< > 1 flags a non-unique implicit step
};

/// One implicit step, resolved by trying the interior, upper and lower
/// branches of Phi in that order and accepting the first whose linear
/// solve satisfies its activation inequality (non-strict).
/// Throws ModelInconsistency when no branch is consistent.
[[nodiscard]] DsgeState dsge_step(const DsgeParams& p, const DsgeState& st, const Shock& shock = {},
                                  StepInfo* info = nullptr);

/// Explicit form of the interior branch with zero shocks:
///   (y, u, v)' = Lambda (y, u, v) + A s + offset,
/// offset vanishing for u* = 0.
struct InteriorForm {
    std::array<std::array<double, 3>, 3> Lambda{};
    std::array<double, 3> A{};
    std::array<double, 3> offset{};

    [[nodiscard]] std::array<double, 3> apply(const std::array<double, 3>& z, double s) const noexcept;
};

[[nodiscard]] InteriorForm interior_form(const DsgeParams& p);

/// Zero-noise equilibrium with stop state s: solves (I - Lambda) z = A s + offset.
[[nodiscard]] DsgeState dsge_equilibrium(const DsgeParams& p, double s);

struct DsgeTrajectory {
    std::vector<DsgeState> states;  ///< n + 1 entries including the start
    std::size_t multi_branch_steps = 0;
};

/// n steps; shocks must be empty (zero noise) or hold at least n entries.
[[nodiscard]] DsgeTrajectory simulate_dsge(const DsgeParams& p, const DsgeState& st0, std::size_t n,
                                           const ShockSequence& shocks = {});

enum class DsgeOutcome { fixed_point, cycle, unbounded, undetermined };
[[nodiscard]] std::string_view to_string(DsgeOutcome o) noexcept;

struct DsgeDetection {
    std::size_t transient = 10'000;
    std::size_t window = 1'024;
    std::size_t period_max = 512;
    double tol = 1e-6;
    double bound = 1e8;  ///< sup norm above which a trajectory counts as unbounded
};

struct DsgeAttractor {
    DsgeOutcome kind = DsgeOutcome::undetermined;
    std::size_t period = 0;
    std::vector<DsgeState> witness;
    double residual = 0.0;
    std::size_t multi_branch_steps = 0;
};

/// Zero-noise long-run behaviour from st0.
[[nodiscard]] DsgeAttractor detect_dsge_attractor(const DsgeParams& p, const DsgeState& st0,
                                                  const DsgeDetection& cfg = {});

}  // namespace stopflow
