#include "stopflow/dsge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "stopflow/error.hpp"
#include "stopflow/hysteresis.hpp"
#include "stopflow/period.hpp"

namespace stopflow {
namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

constexpr double kPivotTol = 1e-12;
// Rounding slack for the activation inequality when no branch passes exactly.
constexpr double kBranchSlack = 1e-12;

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Gaussian elimination with partial pivoting.
Vec3 solve3(Mat3 m, Vec3 b) {
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < kPivotTol) {
            throw SingularParameter("singular 3x3 system in the macro model");
        }
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double factor = m[r][col] / m[col][col];
            for (std::size_t c = col; c < 3; ++c) m[r][c] -= factor * m[col][c];
            b[r] -= factor * b[col];
        }
    }
    Vec3 x{};
    for (std::size_t i = 3; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < 3; ++c) acc -= m[i][c] * x[c];
        x[i] = acc / m[i][i];
    }
    return x;
}

// sigma' = kappa u' + sigma0 on a branch: kappa = 0 on the interior branch,
// 1 on the saturated ones.
Mat3 branch_matrix(const DsgeParams& p, double kappa) {
    return {{{1.0, -p.a1 * kappa, p.a1}, {-p.b2, 1.0 - p.b1 * kappa, 0.0}, {-p.c2, -p.c1, 1.0}}};
}

Vec3 branch_rhs(const DsgeParams& p, const DsgeState& st, const Shock& shock, double sigma0) {
    return {st.y + p.a1 * sigma0 + shock.eps, p.b1 * sigma0 + (1.0 - p.b1) * st.u + shock.eta,
            -p.c1 * p.u_target + p.c3 * st.v + shock.xi};
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

}  // namespace

void DsgeParams::validate() const {
    require_finite(a1, "a1");
    require_finite(b1, "b1");
    require_finite(b2, "b2");
    require_finite(c1, "c1");
    require_finite(c2, "c2");
    require_finite(c3, "c3");
    require_finite(rho, "rho");
    require_finite(u_target, "u_target");
    if (a1 < 0.0 || b1 < 0.0 || b2 < 0.0 || c1 < 0.0 || c2 < 0.0 || c3 < 0.0) {
        throw DomainError("macro model coefficients must be non-negative");
    }
    if (!(b1 < 1.0)) throw DomainError("b1 must be < 1");
    if (!(rho > 0.0)) throw DomainError("rho must be positive");
    if (std::abs(1.0 + a1 * (c1 * b2 + c2)) < kPivotTol) {
        throw SingularParameter("interior branch is singular: 1 + a1 (c1 b2 + c2) = 0");
    }
    if (std::abs(det3(branch_matrix(*this, 1.0))) < kPivotTol) {
        throw SingularParameter("saturated branches are singular for these parameters");
    }
}

std::optional<DsgeParams> dsge_preset(std::string_view name) {
    if (name == "fig7a") return DsgeParams{0.99, 0.76, 0.9, 1.4, 9.7, 0.025, 1.0, 0.0};
    if (name == "fig7b") return DsgeParams{0.7, 0.75, 0.5, 4.8, 3.6, 3.45, 1.0, 0.0};
    if (name == "fig7c") return DsgeParams{0.9, 0.73, 0.9, 1.2, 3.15, 1.3, 1.0, 0.0};
    if (name == "fig7d") return DsgeParams{0.7, 0.7, 0.55, 4.8, 4.15, 3.8, 1.0, 0.0};
    if (name == "fig7e") return DsgeParams{0.01, 0.01, 0.03, 1.0, 6.0, 0.54, 1.0, 0.0};
    return std::nullopt;
}

DsgeState DsgeState::make(const DsgeParams& p, double y, double u, double v, double s) {
    return {y, u, v, s, u - p.rho * s};
}

DsgeState dsge_preset_start(const DsgeParams& p) { return DsgeState::make(p, 10.0, 10.0, 10.0, 0.0); }

double sup_distance(const DsgeState& lhs, const DsgeState& rhs) noexcept {
    return std::max({std::abs(lhs.y - rhs.y), std::abs(lhs.u - rhs.u), std::abs(lhs.v - rhs.v),
                     std::abs(lhs.s - rhs.s)});
}

void ShockSequence::validate() const {
    if (eta.size() != eps.size() || xi.size() != eps.size()) {
        throw DomainError("shock sequences eps, eta, xi must have equal length");
    }
}

Shock ShockSequence::at(std::size_t n) const noexcept {
    if (n >= eps.size()) return {};
    return {eps[n], eta[n], xi[n]};
}

std::string_view to_string(Branch b) noexcept {
    switch (b) {
        case Branch::interior: return "interior";
        case Branch::upper: return "upper";
        case Branch::lower: return "lower";
    }
    return "?";
}

DsgeState dsge_step(const DsgeParams& p, const DsgeState& st, const Shock& shock, StepInfo* info) {
    if (std::abs(st.s) > 1.0) throw DomainError("stop state must lie in [-1, 1]");

    struct Candidate {
        Branch branch;
        Vec3 z;
        double t;
        double violation;
    };
    const std::array<std::pair<Branch, std::pair<double, double>>, 3> branches{{
        {Branch::interior, {0.0, st.u - p.rho * st.s}},
        {Branch::upper, {1.0, -p.rho}},
        {Branch::lower, {1.0, p.rho}},
    }};

    std::optional<Candidate> accepted;
    std::optional<Candidate> closest;
    int consistent = 0;
    for (const auto& [branch, coeffs] : branches) {
        const auto [kappa, sigma0] = coeffs;
        const Vec3 z = solve3(branch_matrix(p, kappa), branch_rhs(p, st, shock, sigma0));
        const double t = st.s + (z[1] - st.u) / p.rho;
        double violation = 0.0;
        switch (branch) {
            case Branch::interior: violation = std::max(0.0, std::abs(t) - 1.0); break;
            case Branch::upper: violation = std::max(0.0, 1.0 - t); break;
            case Branch::lower: violation = std::max(0.0, t + 1.0); break;
        }
        const Candidate cand{branch, z, t, violation};
        if (violation == 0.0) {
            ++consistent;
            if (!accepted) accepted = cand;
        }
        if (!closest || violation < closest->violation) closest = cand;
    }
    if (!accepted) {
        if (closest && closest->violation <= kBranchSlack * (1.0 + std::abs(closest->t))) {
            accepted = closest;
        } else {
            throw ModelInconsistency("no branch of the implicit step is consistent");
        }
    }
    if (info) *info = {accepted->branch, consistent};

    const double s_next = clip(accepted->t);
    const double u_next = accepted->z[1];
    return {accepted->z[0], u_next, accepted->z[2], s_next, u_next - p.rho * s_next};
}

std::array<double, 3> InteriorForm::apply(const std::array<double, 3>& z, double s) const noexcept {
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        out[i] = Lambda[i][0] * z[0] + Lambda[i][1] * z[1] + Lambda[i][2] * z[2] + A[i] * s + offset[i];
    }
    return out;
}

InteriorForm interior_form(const DsgeParams& p) {
    const double pivot = 1.0 + p.a1 * (p.c1 * p.b2 + p.c2);
    if (std::abs(pivot) < kPivotTol) {
        throw SingularParameter("interior branch is singular: 1 + a1 (c1 b2 + c2) = 0");
    }
    InteriorForm form;
    auto& [row_y, row_u, row_v] = form.Lambda;

    // y' from the IS equation after eliminating v' and u'.
    row_y = {1.0 / pivot, p.a1 * (1.0 - p.c1) / pivot, -p.a1 * p.c3 / pivot};
    form.A[0] = -p.a1 * p.rho * (1.0 - p.c1 * p.b1) / pivot;
    form.offset[0] = p.a1 * p.c1 * p.u_target / pivot;

    // u' = u - b1 rho s + b2 y'
    for (std::size_t j = 0; j < 3; ++j) row_u[j] = p.b2 * row_y[j];
    row_u[1] += 1.0;
    form.A[1] = -p.b1 * p.rho + p.b2 * form.A[0];
    form.offset[1] = p.b2 * form.offset[0];

    // v' = c1 (u' - u*) + c2 y' + c3 v
    for (std::size_t j = 0; j < 3; ++j) row_v[j] = p.c1 * row_u[j] + p.c2 * row_y[j];
    row_v[2] += p.c3;
    form.A[2] = p.c1 * form.A[1] + p.c2 * form.A[0];
    form.offset[2] = p.c1 * form.offset[1] + p.c2 * form.offset[0] - p.c1 * p.u_target;
    return form;
}

DsgeState dsge_equilibrium(const DsgeParams& p, double s) {
    if (!(std::abs(s) <= 1.0)) throw DomainError("stop state must lie in [-1, 1]");
    const InteriorForm form = interior_form(p);
    Mat3 m{};
    Vec3 rhs{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = (i == j ? 1.0 : 0.0) - form.Lambda[i][j];
        rhs[i] = form.A[i] * s + form.offset[i];
    }
    const Vec3 z = solve3(m, rhs);
    return DsgeState::make(p, z[0], z[1], z[2], s);
}

DsgeTrajectory simulate_dsge(const DsgeParams& p, const DsgeState& st0, std::size_t n, const ShockSequence& shocks) {
    p.validate();
    shocks.validate();
    if (!shocks.empty() && shocks.size() < n) {
        throw DomainError("shock sequence shorter than the number of steps");
    }
    DsgeTrajectory out;
    out.states.reserve(n + 1);
    out.states.push_back(st0);
    for (std::size_t i = 0; i < n; ++i) {
        StepInfo info;
        out.states.push_back(dsge_step(p, out.states.back(), shocks.at(i), &info));
        if (info.consistent_branches > 1) ++out.multi_branch_steps;
    }
    return out;
}

std::string_view to_string(DsgeOutcome o) noexcept {
    switch (o) {
        case DsgeOutcome::fixed_point: return "fixed_point";
        case DsgeOutcome::cycle: return "cycle";
        case DsgeOutcome::unbounded: return "unbounded";
        case DsgeOutcome::undetermined: return "undetermined";
    }
    return "?";
}

DsgeAttractor detect_dsge_attractor(const DsgeParams& p, const DsgeState& st0, const DsgeDetection& cfg) {
    p.validate();
    if (!(cfg.tol > 0.0) || cfg.window < 1 || cfg.period_max < 1) {
        throw DomainError("invalid detection settings");
    }
    const auto out_of_bounds = [&](const DsgeState& st) {
        const double m = std::max({std::abs(st.y), std::abs(st.u), std::abs(st.v)});
        return !std::isfinite(m) || m > cfg.bound;
    };

    DsgeAttractor result;
    DsgeState st = st0;
    for (std::size_t i = 0; i < cfg.transient; ++i) {
        StepInfo info;
        st = dsge_step(p, st, {}, &info);
        if (info.consistent_branches > 1) ++result.multi_branch_steps;
        if (out_of_bounds(st)) {
            result.kind = DsgeOutcome::unbounded;
            result.witness = {st};
            return result;
        }
    }
    std::vector<DsgeState> tail;
    tail.reserve(cfg.window + cfg.period_max + 1);
    tail.push_back(st);
    for (std::size_t i = 0; i < cfg.window + cfg.period_max; ++i) {
        StepInfo info;
        tail.push_back(dsge_step(p, tail.back(), {}, &info));
        if (info.consistent_branches > 1) ++result.multi_branch_steps;
        if (out_of_bounds(tail.back())) {
            result.kind = DsgeOutcome::unbounded;
            result.witness = {tail.back()};
            return result;
        }
    }
    const auto match = find_period(std::span<const DsgeState>(tail), cfg.window, cfg.period_max, cfg.tol,
                                   [](const DsgeState& a, const DsgeState& b) { return sup_distance(a, b); });
    if (match) {
        result.kind = match->period == 1 ? DsgeOutcome::fixed_point : DsgeOutcome::cycle;
        result.period = match->period;
        result.residual = match->residual;
        result.witness.assign(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(match->period));
    } else {
        result.witness = {tail.back()};
        result.residual = std::numeric_limits<double>::infinity();
    }
    return result;
}

}  // namespace stopflow
