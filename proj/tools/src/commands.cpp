#include "stopflow_cli/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stopflow/atlas.hpp"
#include "stopflow/classifier.hpp"
#include "stopflow/dsge.hpp"
#include "stopflow/dynamics.hpp"
#include "stopflow/error.hpp"
#include "stopflow/hitting_map.hpp"
#include "stopflow/planar.hpp"
#include "stopflow_cli/output.hpp"

namespace stopflow::cli {
namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kCommands{"classify", "simulate", "sweep", "omega-map", "hitting-map", "orbits", "dsge"};

struct Common {
    std::string config;
    std::string out;
    std::string format;
    std::uint64_t seed = DetectionConfig{}.seed;
};

struct PlanarArgs {
    std::optional<double> lambda;
    std::optional<double> beta;
    std::optional<double> a;

    PlanarParams params() const {
        if (!lambda) throw DomainError("--lambda is required");
        if (beta && a) throw DomainError("give either --beta or --a, not both");
        if (beta) return PlanarParams::from_lambda_beta(*lambda, *beta);
        if (a) return PlanarParams::from_lambda_a(*lambda, *a);
        throw DomainError("one of --beta or --a is required");
    }
};

struct DetectionArgs {
    DetectionConfig cfg;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--config", c.config, "JSON file with option values; flags override it");
    sub->add_option("--out", c.out, "Write output to this file instead of stdout");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", c.seed, "64-bit seed for random starts");
}

void add_planar(CLI::App* sub, PlanarArgs& p) {
    sub->add_option("--lambda", p.lambda, "lambda, |lambda| < 1");
    sub->add_option("--beta", p.beta, "beta = lambda + a");
    sub->add_option("--a", p.a, "a");
}

void add_detection(CLI::App* sub, DetectionConfig& d) {
    sub->add_option("--transient", d.transient, "Iterations dropped before detection");
    sub->add_option("--window", d.window, "Iterations scanned for a period");
    sub->add_option("--tol", d.tol, "Sup-norm tolerance");
    sub->add_option("--period-max", d.period_max, "Largest period searched");
}

Json params_json(const PlanarParams& p) {
    return {{"lambda", p.lambda()}, {"beta", p.beta()}, {"a", p.a()}, {"x_star", p.x_star()}};
}

Json header(std::string_view command) { return {{"schema", kJsonSchema}, {"command", command}}; }

Json state_json(PlanarState st) { return Json::array({st.x, st.s}); }

Json report_json(const PlanarParams& p, const AttractorReport& r) {
    Json j{{"kind", to_string(r.kind)}, {"period", r.period}, {"label", outcome_label(p, r)}, {"residual", r.residual}};
    j["witness"] = Json::array();
    for (const auto& w : r.witness) j["witness"].push_back(state_json(w));
    return j;
}

std::string counts_text(const std::map<std::string, std::size_t>& counts) {
    std::string out;
    for (const auto& [label, n] : counts) {
        if (!out.empty()) out += ';';
        out += label + '=' + std::to_string(n);
    }
    return out;
}

std::size_t modal_cycle_period(const BasinTally& tally) {
    std::map<std::size_t, std::size_t> freq;
    for (const auto& r : tally.reports) {
        if (r.kind == AttractorKind::cycle) ++freq[r.period];
    }
    std::size_t best = 0;
    std::size_t best_n = 0;
    for (const auto& [period, n] : freq) {
        if (n > best_n) {
            best = period;
            best_n = n;
        }
    }
    return best;
}

void dump_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

struct ClassifyCmd {
    Common common;
    PlanarArgs planar;

    void run(std::ostream& os) const {
        const auto p = planar.params();
        const auto label = classify(p);
        const auto pred = predict_attractor(p);
        std::optional<PeriodPrediction> period;
        if (label.regime == Regime::e) period = predict_period(p);

        if (common.format == "csv") {
            CsvWriter csv(os, {"lambda", "beta", "a", "case", "predicted_period", "summary"});
            csv.field(p.lambda()).field(p.beta()).field(p.a()).field(std::string(1, regime_letter(label.regime)));
            csv.field(pred.stable_cycle_period).field(pred.summary);
            csv.end_row();
            return;
        }
        Json j = header("classify");
        j["params"] = params_json(p);
        j["case"] = std::string(1, regime_letter(label.regime));
        j["descriptor"] = label.descriptor;
        j["interior_equilibria"] = to_string(pred.interior_equilibria);
        j["endpoints"] = to_string(pred.endpoints);
        j["attractors"] = Json::array();
        for (auto a : pred.attractors) j["attractors"].push_back(to_string(a));
        j["stable_cycle_period"] = pred.stable_cycle_period;
        if (period) {
            j["period_prediction"] = {
                {"kind", period->kind == PeriodPrediction::Kind::stable_period ? "stable_period" : "all_unstable"},
                {"k", period->k},
                {"period", period->period}};
        } else {
            j["period_prediction"] = nullptr;
        }
        j["summary"] = pred.summary;
        dump_json(os, j);
    }
};

struct SimulateCmd {
    Common common;
    PlanarArgs planar;
    DetectionConfig detection;
    double x0 = 0.0;
    double s0 = 0.0;
    std::size_t n = 1000;
    bool detect = false;

    void run(std::ostream& os) const {
        const auto p = planar.params();
        if (n < 1) throw DomainError("--n must be positive");
        const auto traj = simulate(p, {x0, s0}, n);
        std::optional<AttractorReport> report;
        if (detect) {
            DetectionConfig cfg = detection;
            cfg.seed = common.seed;
            report = detect_attractor(p, {x0, s0}, cfg);
        }

        if (common.format == "csv") {
            CsvWriter csv(os, {"n", "x", "s", "p"});
            for (std::size_t i = 0; i < traj.size(); ++i) {
                csv.field(i).field(traj[i].x).field(traj[i].s).field(traj[i].play());
                csv.end_row();
            }
            if (report) {
                os << "# attractor " << outcome_label(p, *report) << " residual=" << num(report->residual) << '\n';
            }
            return;
        }
        Json j = header("simulate");
        j["params"] = params_json(p);
        j["n"] = n;
        Json xs = Json::array(), ss = Json::array(), ps = Json::array();
        for (const auto& st : traj) {
            xs.push_back(st.x);
            ss.push_back(st.s);
            ps.push_back(st.play());
        }
        j["trajectory"] = {{"x", xs}, {"s", ss}, {"p", ps}};
        if (report) j["attractor"] = report_json(p, *report);
        dump_json(os, j);
    }
};

struct SweepCmd {
    Common common;
    SweepConfig sweep_cfg;
    std::optional<std::size_t> resolution;
    unsigned workers = 0;

    void run(std::ostream& os) const {
        SweepConfig cfg = sweep_cfg;
        if (resolution) cfg.lambda.resolution = cfg.beta.resolution = *resolution;
        cfg.detection.seed = common.seed;
        const auto cells = sweep(cfg, workers);

        if (common.format == "csv") {
            CsvWriter csv(os, {"lambda", "beta", "case", "predicted_period", "observed_period", "agreement",
                               "boundary_distance", "outcomes", "error"});
            for (const auto& c : cells) {
                csv.field(c.lambda).field(c.beta);
                csv.field(c.regime ? std::string(1, regime_letter(*c.regime)) : std::string{});
                csv.field(c.predicted_period).field(c.observed_period).field(c.agreement);
                csv.field(boundary_distance(c.lambda, c.beta)).field(counts_text(c.counts)).field(c.error);
                csv.end_row();
            }
            return;
        }
        Json j = header("sweep");
        j["grid"] = {{"lambda", {cfg.lambda.min, cfg.lambda.max, cfg.lambda.resolution}},
                     {"beta", {cfg.beta.min, cfg.beta.max, cfg.beta.resolution}},
                     {"starts", cfg.starts},
                     {"seed", cfg.detection.seed}};
        std::size_t agree = 0;
        j["cells"] = Json::array();
        for (const auto& c : cells) {
            agree += c.agreement ? 1 : 0;
            Json cell{{"row", c.row},
                      {"col", c.col},
                      {"lambda", c.lambda},
                      {"beta", c.beta},
                      {"case", c.regime ? Json(std::string(1, regime_letter(*c.regime))) : Json(nullptr)},
                      {"predicted_period", c.predicted_period},
                      {"observed_period", c.observed_period},
                      {"agreement", c.agreement},
                      {"boundary_distance", boundary_distance(c.lambda, c.beta)},
                      {"outcomes", c.counts}};
            if (!c.error.empty()) cell["error"] = c.error;
            j["cells"].push_back(std::move(cell));
        }
        j["summary"] = {{"cells", cells.size()}, {"agree", agree}};
        dump_json(os, j);
    }
};

struct OmegaMapCmd {
    Common common;
    GridAxis beta{1.0, 3.0, 100};
    GridAxis inv_lambda{1.0, 9.0, 100};
    std::optional<std::size_t> resolution;
    std::size_t starts = 0;
    DetectionConfig detection;
    unsigned workers = 0;

    void run(std::ostream& os) const {
        GridAxis b = beta;
        GridAxis il = inv_lambda;
        if (resolution) b.resolution = il.resolution = *resolution;
        b.validate("beta");
        il.validate("inverse lambda");
        if (!(b.min >= 1.0 && b.value(0) > 1.0)) throw DomainError("beta cells must lie above 1");
        if (!(il.min >= 1.0 && il.value(0) > 1.0)) throw DomainError("-1/lambda cells must lie above 1");
        DetectionConfig det = detection;
        det.seed = common.seed;
        if (starts > 0) det.validate();

        struct Row {
            double beta, inv_lambda, lambda, a;
            std::optional<int> omega;
            int k0, predicted, observed;
        };
        std::vector<Row> rows;
        rows.reserve(b.resolution * il.resolution);
        for (std::size_t i = 0; i < il.resolution; ++i) {
            for (std::size_t j = 0; j < b.resolution; ++j) {
                const double inv = il.value(i);
                const auto p = PlanarParams::from_lambda_beta(-1.0 / inv, b.value(j));
                const auto omega = omega_index(p);
                int observed = 0;
                if (starts > 0) observed = static_cast<int>(modal_cycle_period(basin_sample(p, starts, det, workers)));
                rows.push_back({p.beta(), inv, p.lambda(), p.a(), omega, k0(p), omega ? 2 * *omega + 2 : 0, observed});
            }
        }

        if (common.format == "csv") {
            CsvWriter csv = starts > 0 ? CsvWriter(os, {"beta", "inv_lambda", "lambda", "a", "omega_k", "k0",
                                                        "predicted_period", "observed_period"})
                                       : CsvWriter(os, {"beta", "inv_lambda", "lambda", "a", "omega_k", "k0",
                                                        "predicted_period"});
            for (const auto& r : rows) {
                csv.field(r.beta).field(r.inv_lambda).field(r.lambda).field(r.a).field(r.omega.value_or(0));
                csv.field(r.k0).field(r.predicted);
                if (starts > 0) csv.field(r.observed);
                csv.end_row();
            }
            return;
        }
        Json j = header("omega-map");
        j["grid"] = {{"beta", {b.min, b.max, b.resolution}}, {"inv_lambda", {il.min, il.max, il.resolution}}};
        j["cells"] = Json::array();
        for (const auto& r : rows) {
            Json cell{{"beta", r.beta},
                      {"inv_lambda", r.inv_lambda},
                      {"lambda", r.lambda},
                      {"a", r.a},
                      {"omega_k", r.omega ? Json(*r.omega) : Json(nullptr)},
                      {"k0", r.k0},
                      {"predicted_period", r.predicted}};
            if (starts > 0) cell["observed_period"] = r.observed;
            j["cells"].push_back(std::move(cell));
        }
        dump_json(os, j);
    }
};

std::string_view piece_kind(PieceKind k) {
    switch (k) {
        case PieceKind::tail: return "tail";
        case PieceKind::falling: return "falling";
        case PieceKind::rising: return "rising";
    }
    return "?";
}

struct HittingMapCmd {
    Common common;
    PlanarArgs planar;
    std::optional<int> k_max;

    void run(std::ostream& os) const {
        const auto p = planar.params();
        const int km = k_max ? *k_max : default_k_max(p);
        const auto T = build_T(p, km);
        const double xs = p.x_star();

        if (common.format == "csv") {
            CsvWriter csv(os, {"kind", "k", "left", "right", "slope", "intercept"});
            for (const auto& piece : T.pieces()) {
                csv.field(piece_kind(piece.kind)).field(piece.k).field(piece.left).field(piece.right);
                csv.field(piece.slope).field(piece.intercept(xs));
                csv.end_row();
            }
            return;
        }
        const auto ladder = build_ladder(p, km);
        Json j = header("hitting-map");
        j["params"] = params_json(p);
        j["k_max"] = km;
        j["t_star"] = ladder.t_star;
        j["ladder"] = Json::array();
        for (int k = 1; k <= km; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            j["ladder"].push_back({{"k", k},
                                   {"q", ladder.q[i]},
                                   {"r", ladder.r[i]},
                                   {"q_offset", ladder.q_off[i]},
                                   {"r_offset", ladder.r_off[i]},
                                   {"T_at_r", T.offset_value(ladder.r_off[i]) + xs}});
        }
        j["pieces"] = Json::array();
        for (const auto& piece : T.pieces()) {
            j["pieces"].push_back({{"kind", piece_kind(piece.kind)},
                                   {"k", piece.k},
                                   {"left", piece.left},
                                   {"right", piece.right},
                                   {"slope", piece.slope},
                                   {"intercept", piece.intercept(xs)}});
        }
        j["fixed_points"] = Json::array();
        for (const auto& fp : fixed_points(p, km)) {
            j["fixed_points"].push_back({{"x", fp.x},
                                         {"kind", piece_kind(fp.kind)},
                                         {"k", fp.k},
                                         {"stable", fp.stable},
                                         {"system_period", fp.system_period}});
        }
        dump_json(os, j);
    }
};

struct OrbitsCmd {
    Common common;
    PlanarArgs planar;
    std::size_t period = 2;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::size_t grid = 10'000;

    void run(std::ostream& os) const {
        const auto p = planar.params();
        const double half = 2.0 * std::max(1.0, std::abs(p.x_star())) + 2.0;
        const auto starts = find_periodic_orbits(p, period, x_min.value_or(-half), x_max.value_or(half), grid);
        std::vector<std::vector<PlanarState>> orbits;
        for (const auto& st : starts) orbits.push_back(simulate(p, st, period - 1));

        if (common.format == "csv") {
            CsvWriter csv(os, {"orbit", "n", "x", "s"});
            for (std::size_t o = 0; o < orbits.size(); ++o) {
                for (std::size_t i = 0; i < orbits[o].size(); ++i) {
                    csv.field(o).field(i).field(orbits[o][i].x).field(orbits[o][i].s);
                    csv.end_row();
                }
            }
            return;
        }
        Json j = header("orbits");
        j["params"] = params_json(p);
        j["period"] = period;
        j["orbits"] = Json::array();
        for (const auto& orbit : orbits) {
            Json pts = Json::array();
            for (const auto& st : orbit) pts.push_back(state_json(st));
            j["orbits"].push_back(std::move(pts));
        }
        dump_json(os, j);
    }
};

struct DsgeCmd {
    Common common;
    std::string preset;
    std::optional<double> a1, b1, b2, c1, c2, c3, rho, u_target;
    std::optional<double> y0, u0, v0, s0;
    std::size_t n = 2000;
    std::string shocks_path;
    bool detect = false;
    DsgeDetection detection;

    DsgeParams params() const {
        DsgeParams p;
        if (!preset.empty()) {
            const auto found = dsge_preset(preset);
            if (!found) throw DomainError("unknown preset '" + preset + "' (expected fig7a ... fig7e)");
            p = *found;
        } else if (!(a1 && b1 && b2 && c1 && c2 && c3)) {
            throw DomainError("without --preset, all of --a1 --b1 --b2 --c1 --c2 --c3 are required");
        }
        const auto set = [](double& field, const std::optional<double>& v) {
            if (v) field = *v;
        };
        set(p.a1, a1);
        set(p.b1, b1);
        set(p.b2, b2);
        set(p.c1, c1);
        set(p.c2, c2);
        set(p.c3, c3);
        set(p.rho, rho);
        set(p.u_target, u_target);
        p.validate();
        return p;
    }

    ShockSequence shocks() const {
        ShockSequence seq;
        if (shocks_path.empty()) return seq;
        Json j;
        try {
            j = Json::parse(read_file(shocks_path));
            for (const char* key : {"eps", "eta", "xi"}) {
                if (!j.contains(key)) throw DomainError(std::string("shock file lacks '") + key + "'");
            }
            seq.eps = j.at("eps").get<std::vector<double>>();
            seq.eta = j.at("eta").get<std::vector<double>>();
            seq.xi = j.at("xi").get<std::vector<double>>();
        } catch (const Json::exception& e) {
            throw DomainError("malformed shock file '" + shocks_path + "': " + e.what());
        }
        seq.validate();
        return seq;
    }

    void run(std::ostream& os, std::ostream& err) const {
        const auto p = params();
        const auto base = dsge_preset_start(p);
        const auto st0 = DsgeState::make(p, y0.value_or(base.y), u0.value_or(base.u), v0.value_or(base.v),
                                         s0.value_or(base.s));
        if (!(std::abs(st0.s) <= 1.0)) throw DomainError("--s0 must lie in [-1, 1]");
        if (n < 1) throw DomainError("--n must be positive");
        const auto traj = simulate_dsge(p, st0, n, shocks());
        std::optional<DsgeAttractor> report;
        if (detect) report = detect_dsge_attractor(p, st0, detection);
        if (traj.multi_branch_steps > 0) {
            err << "warning: " << traj.multi_branch_steps
                << " steps had more than one consistent branch; the interior branch was used\n";
        }

        if (common.format == "csv") {
            CsvWriter csv(os, {"n", "y", "u", "v", "s", "sigma"});
            for (std::size_t i = 0; i < traj.states.size(); ++i) {
                const auto& st = traj.states[i];
                csv.field(i).field(st.y).field(st.u).field(st.v).field(st.s).field(st.sigma);
                csv.end_row();
            }
            if (report) {
                os << "# attractor " << to_string(report->kind) << " period=" << report->period
                   << " residual=" << num(report->residual) << '\n';
            }
            return;
        }
        Json j = header("dsge");
        j["params"] = {{"a1", p.a1}, {"b1", p.b1}, {"b2", p.b2}, {"c1", p.c1}, {"c2", p.c2},
                       {"c3", p.c3}, {"rho", p.rho}, {"u_target", p.u_target}};
        if (!preset.empty()) j["preset"] = preset;
        j["n"] = n;
        j["multi_branch_steps"] = traj.multi_branch_steps;
        Json cols{{"y", Json::array()}, {"u", Json::array()}, {"v", Json::array()},
                  {"s", Json::array()}, {"sigma", Json::array()}};
        for (const auto& st : traj.states) {
            cols["y"].push_back(st.y);
            cols["u"].push_back(st.u);
            cols["v"].push_back(st.v);
            cols["s"].push_back(st.s);
            cols["sigma"].push_back(st.sigma);
        }
        j["trajectory"] = std::move(cols);
        if (report) {
            Json w = Json::array();
            for (const auto& st : report->witness) w.push_back({st.y, st.u, st.v, st.s, st.sigma});
            j["attractor"] = {{"kind", to_string(report->kind)},
                              {"period", report->period},
                              {"residual", report->residual},
                              {"witness", std::move(w)}};
        }
        dump_json(os, j);
    }
};

// Splices `--config FILE` contents in right after the subcommand name, so
// that later command-line flags take precedence under TakeLast.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path) return args;

    Json j;
    try {
        j = Json::parse(read_file(*path));
    } catch (const Json::exception& e) {
        throw DomainError("malformed config file '" + *path + "': " + e.what());
    }
    if (!j.is_object()) throw DomainError("config file '" + *path + "' must hold a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : j.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back(flag);
        } else if (value.is_number_integer()) {
            injected.push_back(flag);
            injected.push_back(value.dump());
        } else if (value.is_number()) {
            injected.push_back(flag);
            injected.push_back(num(value.get<double>()));
        } else if (value.is_string()) {
            injected.push_back(flag);
            injected.push_back(value.get<std::string>());
        } else {
            throw DomainError("config key '" + key + "' must be a number, string or boolean");
        }
    }

    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
        return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
    });
    if (sub == args.end()) return args;
    std::vector<std::string> out(args.begin(), sub + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), sub + 1, args.end());
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamics of a planar map with a stop operator, and a macro model closed by a play operator"};
    app.name("stopflow");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    ClassifyCmd classify_cmd;
    SimulateCmd simulate_cmd;
    SweepCmd sweep_cmd;
    OmegaMapCmd omega_cmd;
    HittingMapCmd hitting_cmd;
    OrbitsCmd orbits_cmd;
    DsgeCmd dsge_cmd;
    const Common* active = nullptr;
    std::function<void(std::ostream&)> action;

    auto* c = app.add_subcommand("classify", "Case of the main classification and predicted stable period");
    add_common(c, classify_cmd.common, "json");
    add_planar(c, classify_cmd.planar);
    c->callback([&] {
        active = &classify_cmd.common;
        action = [&](std::ostream& os) { classify_cmd.run(os); };
    });

    auto* s = app.add_subcommand("simulate", "Iterate the planar map");
    add_common(s, simulate_cmd.common, "csv");
    add_planar(s, simulate_cmd.planar);
    add_detection(s, simulate_cmd.detection);
    s->add_option("--x0", simulate_cmd.x0, "Initial x");
    s->add_option("--s0", simulate_cmd.s0, "Initial stop state in [-1, 1]");
    s->add_option("--n", simulate_cmd.n, "Number of steps");
    s->add_flag("--detect", simulate_cmd.detect, "Also report the detected attractor");
    s->callback([&] {
        active = &simulate_cmd.common;
        action = [&](std::ostream& os) { simulate_cmd.run(os); };
    });

    auto* w = app.add_subcommand("sweep", "Classification versus simulation over a (lambda, beta) grid");
    add_common(w, sweep_cmd.common, "csv");
    auto& sc = sweep_cmd.sweep_cfg;
    w->add_option("--lambda-min", sc.lambda.min);
    w->add_option("--lambda-max", sc.lambda.max);
    w->add_option("--lambda-res", sc.lambda.resolution, "Grid points along lambda");
    w->add_option("--beta-min", sc.beta.min);
    w->add_option("--beta-max", sc.beta.max);
    w->add_option("--beta-res", sc.beta.resolution, "Grid points along beta");
    w->add_option("--resolution", sweep_cmd.resolution, "Grid points along both axes");
    w->add_option("--starts", sc.starts, "Random starts per cell");
    w->add_option("--workers", sweep_cmd.workers, "Worker threads (0 = hardware concurrency)");
    add_detection(w, sc.detection);
    w->callback([&] {
        active = &sweep_cmd.common;
        action = [&](std::ostream& os) { sweep_cmd.run(os); };
    });

    auto* o = app.add_subcommand("omega-map", "Stable-period regions over beta > 1 and -1/lambda > 1");
    add_common(o, omega_cmd.common, "csv");
    o->add_option("--beta-min", omega_cmd.beta.min);
    o->add_option("--beta-max", omega_cmd.beta.max);
    o->add_option("--beta-res", omega_cmd.beta.resolution);
    o->add_option("--inv-lambda-min", omega_cmd.inv_lambda.min, "Lower bound of -1/lambda");
    o->add_option("--inv-lambda-max", omega_cmd.inv_lambda.max, "Upper bound of -1/lambda");
    o->add_option("--inv-lambda-res", omega_cmd.inv_lambda.resolution);
    o->add_option("--resolution", omega_cmd.resolution, "Grid points along both axes");
    o->add_option("--starts", omega_cmd.starts, "Random starts per cell for an observed period (0 = none)");
    o->add_option("--workers", omega_cmd.workers, "Worker threads (0 = hardware concurrency)");
    add_detection(o, omega_cmd.detection);
    o->callback([&] {
        active = &omega_cmd.common;
        action = [&](std::ostream& os) { omega_cmd.run(os); };
    });

    auto* h = app.add_subcommand("hitting-map", "Breakpoints and pieces of the first-hitting map");
    add_common(h, hitting_cmd.common, "csv");
    add_planar(h, hitting_cmd.planar);
    h->add_option("--kmax", hitting_cmd.k_max, "Depth of the breakpoint ladder");
    h->callback([&] {
        active = &hitting_cmd.common;
        action = [&](std::ostream& os) { hitting_cmd.run(os); };
    });

    auto* r = app.add_subcommand("orbits", "Periodic orbits through the line s = 1");
    add_common(r, orbits_cmd.common, "csv");
    add_planar(r, orbits_cmd.planar);
    r->add_option("--period", orbits_cmd.period, "Orbit period");
    r->add_option("--x-min", orbits_cmd.x_min);
    r->add_option("--x-max", orbits_cmd.x_max);
    r->add_option("--grid", orbits_cmd.grid, "Sample points for the sign-change search");
    r->callback([&] {
        active = &orbits_cmd.common;
        action = [&](std::ostream& os) { orbits_cmd.run(os); };
    });

    auto* d = app.add_subcommand("dsge", "Macro model with play-operator expectations");
    add_common(d, dsge_cmd.common, "csv");
    d->add_option("--preset", dsge_cmd.preset, "fig7a ... fig7e");
    d->add_option("--a1", dsge_cmd.a1);
    d->add_option("--b1", dsge_cmd.b1);
    d->add_option("--b2", dsge_cmd.b2);
    d->add_option("--c1", dsge_cmd.c1);
    d->add_option("--c2", dsge_cmd.c2);
    d->add_option("--c3", dsge_cmd.c3);
    d->add_option("--rho", dsge_cmd.rho);
    d->add_option("--u-target", dsge_cmd.u_target);
    d->add_option("--y0", dsge_cmd.y0);
    d->add_option("--u0", dsge_cmd.u0);
    d->add_option("--v0", dsge_cmd.v0);
    d->add_option("--s0", dsge_cmd.s0);
    d->add_option("--n", dsge_cmd.n, "Number of steps");
    d->add_option("--shocks", dsge_cmd.shocks_path, "JSON file with eps, eta, xi arrays");
    d->add_flag("--detect", dsge_cmd.detect, "Also report the long-run attractor");
    d->add_option("--transient", dsge_cmd.detection.transient);
    d->add_option("--window", dsge_cmd.detection.window);
    d->add_option("--period-max", dsge_cmd.detection.period_max);
    d->add_option("--tol", dsge_cmd.detection.tol);
    d->add_option("--bound", dsge_cmd.detection.bound, "Sup norm treated as divergence");
    std::ostream* err_stream = &err;
    d->callback([&] {
        active = &dsge_cmd.common;
        action = [&, err_stream](std::ostream& os) { dsge_cmd.run(os, *err_stream); };
    });

    try {
        auto expanded = expand_config(args);
        std::reverse(expanded.begin(), expanded.end());
        app.parse(expanded);

        std::ostringstream buf;
        action(buf);
        if (active->out.empty()) {
            out << buf.str();
        } else {
            write_file(active->out, buf.str());
        }
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const ModelInconsistency& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const Nontermination& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace stopflow::cli
