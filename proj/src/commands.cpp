#include "mobcost/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "cli-io";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_cost_row(std::ostream& out, const std::string& param, const std::string& value, const CostBreakdown& c) {
    out << param << ',' << value << ',' << to_string(c.strategy) << ',' << num(c.signalling) << ','
        << num(c.processing) << ',' << num(c.air) << ',' << num(c.total) << '\n';
}

std::vector<Strategy> strategies_or(const std::string& text, std::vector<Strategy> fallback) {
    return text.empty() ? fallback : parse_strategy_list(text);
}

// H used by the simulator: the configured one, else the analytic optimum of
// the first tracking strategy requested.
std::optional<TrackingPolicy> sim_tracking(const Scenario& s, const Analysis& a, const std::vector<Strategy>& list) {
    const TrackingSettings t = s.tracking_for(a);
    for (Strategy st : list)
        if (is_tracking(st)) {
            if (t.fixed_H) return TrackingPolicy{*t.fixed_H, t.p_loop};
            const auto opt = optimize_H(st, a.inputs(), s.constants, s.weights, t.H_max, t.p_loop, s.cost_options);
            return TrackingPolicy{opt.H, t.p_loop};
        }
    if (t.fixed_H) return TrackingPolicy{*t.fixed_H, t.p_loop};
    return std::nullopt;
}

SimConfig sim_config(const Scenario& s, const Analysis& a, const std::vector<Strategy>& list) {
    SimConfig cfg;
    cfg.seed = s.sim.seed;
    cfg.horizon = s.sim.horizon;
    cfg.warmup = s.sim.warmup;
    cfg.batches = s.sim.batches;
    cfg.strategies = list;
    cfg.constants = s.constants;
    cfg.weights = s.weights;
    cfg.cost_options = s.cost_options;
    cfg.tracking = sim_tracking(s, a, list);
    cfg.plan = a.plan;
    cfg.P_M = a.P_M;
    cfg.w = a.params.w;
    return cfg;
}

}  // namespace

void cmd_derive(const Scenario& s, std::ostream& out) {
    const Analysis a = s.analyze();
    const auto& p = a.params;
    out << "quantity,value,source\n";
    out << "w," << num(p.w) << ",computed\n";
    out << "m," << num(p.m) << ',' << to_string(p.m_source) << '\n';
    out << "g_T," << num(p.g_T) << ',' << to_string(p.g_T_source) << '\n';
    out << "delta," << num(p.delta) << ',' << to_string(p.delta_source) << '\n';
    out << "g_H," << num(p.g_H) << ',' << to_string(p.g_H_source) << '\n';
    const char* plan_source = s.analysis.plan ? "explicit-plan" : "computed";
    out << "g_C," << num(a.plan.g_C) << ',' << plan_source << '\n';
    out << "n_C," << num(a.plan.n_C) << ',' << plan_source << '\n';
    out << "n_d," << a.plan.n_d << ',' << plan_source << '\n';
    out << "P_cell," << num(a.plan.P_cell) << ',' << plan_source << '\n';
    out << "lambda," << num(a.rates.lambda) << ",computed\n";
    out << "mu," << num(a.rates.mu) << ",input\n";
    out << "rho," << num(a.rates.rho) << ",computed\n";
    out << "P_M," << num(a.P_M) << ",input\n";
    for (std::size_t i = 0; i < a.b.size(); ++i) out << 'b' << i << ',' << num(a.b[i]) << ",computed\n";
}

void cmd_costs(const Scenario& s, const std::string& strategies, const std::string& sweep, std::ostream& out) {
    const auto list = strategies_or(strategies, {kAllStrategies.begin(), kAllStrategies.end()});
    const Analysis a = s.analyze();
    const TrackingSettings tracking = s.tracking_for(a);
    out << "param,value,strategy,signalling,processing,air,total\n";
    if (sweep.empty()) {
        for (Strategy st : list) write_cost_row(out, "base", "", evaluate(st, a, s.constants, s.weights, tracking, s.cost_options));
        return;
    }
    const auto eq = sweep.find('=');
    if (eq == std::string::npos) throw Error(kModule, "--sweep must look like param=lo:hi:steps[:log]");
    const std::string param = sweep.substr(0, eq);
    if (!is_sweep_parameter(param)) throw Error("cost-models", "unknown sweep parameter '" + param + "'");
    const auto grid = parse_grid(sweep.substr(eq + 1));
    const ChainRefresh refresh = chain_refresh(tracking, s.cost_options);
    for (Strategy st : list) {
        StrategyInputs base = a.inputs();
        if (is_tracking(st)) base.chain = refresh(st, base, s.constants, s.weights);
        for (const auto& pt : total_cost_curve(st, param, grid, base, s.constants, s.weights, s.cost_options, refresh))
            write_cost_row(out, param, num(pt.value), pt.cost);
    }
}

void cmd_optimize_tracking(const Scenario& s, const std::string& strategies, std::ostream& out) {
    const auto list = strategies_or(strategies, {Strategy::WirelessTracking, Strategy::WiredTracking});
    const Analysis a = s.analyze();
    const TrackingSettings t = s.tracking_for(a);
    out << "strategy,H,P_H,P_0,Mh_r,signalling,processing,air,total,optimal\n";
    for (Strategy st : list) {
        if (!is_tracking(st)) throw Error("tracking-optimizer", to_string(st) + " is not a tracking strategy");
        const auto opt = optimize_H(st, a.inputs(), s.constants, s.weights, t.H_max, t.p_loop, s.cost_options);
        for (std::size_t h = 0; h < opt.curve.size(); ++h) {
            const ChainStatistics cs = chain_statistics({h, t.p_loop}, a.rates.rho);
            const CostBreakdown& c = opt.curve[h];
            out << to_string(st) << ',' << h << ',' << num(cs.P_H) << ',' << num(cs.P_0) << ',' << num(cs.Mh_r) << ','
                << num(c.signalling) << ',' << num(c.processing) << ',' << num(c.air) << ',' << num(c.total) << ','
                << (h == opt.H ? 1 : 0) << '\n';
        }
    }
}

void cmd_vho(const Scenario& s, const std::string& strategies, std::ostream& out, std::ostream& err) {
    if (!s.vho) throw Error(kModule, s.config.path().string() + ": vho command needs the vho.* keys");
    const auto list = strategies_or(strategies, {s.vho->strategy});
    VhoOptions opts;
    opts.analysis = s.analysis;
    opts.analysis.plan.reset();  // node indices refer to network A alone
    opts.tracking = s.tracking;
    opts.cost = s.cost_options;
    opts.form = s.vho->form;
    out << "nu,strategy,total,p_choose_a,p_e1e2,p_e3e4\n";
    for (Strategy st : list) {
        const VhoResult r = sweep_nu(s.vho->scenario, st, s.vho->nu_grid, s.constants, s.weights, opts);
        for (const auto& p : r.points)
            out << num(p.nu) << ',' << to_string(st) << ',' << num(p.cost.total) << ',' << num(p.p_choose_a.value)
                << ',' << num(p.p_e1_given_e2) << ',' << num(p.p_e3_given_e4) << '\n';
        err << "strategy=" << to_string(st) << " nu_star=" << num(r.nu_star) << " tau=" << num(r.tau)
            << " p_choose_a=" << num(r.p_choose_a.value) << (r.p_choose_a.clamped ? " (clamped)" : "")
            << " p_e1e2=" << num(r.p_e1_given_e2) << " p_e3e4=" << num(r.p_e3_given_e4) << '\n';
    }
}

void cmd_simulate(const Scenario& s, const std::string& strategies, std::ostream& out) {
    const auto list = strategies_or(strategies.empty() ? s.sim.strategies : strategies,
                                    {Strategy::Centralized, Strategy::Hierarchical});
    const Analysis a = s.analyze();
    SimConfig cfg = sim_config(s, a, list);
    cfg.record_trace = s.sim.trace.has_value();
    const SimReport rep = run(s.graph, s.rates, s.mu, cfg);
    out << report_csv(rep) << "\n# summary\n" << report_summary(rep);
    if (s.sim.trace) {
        std::ofstream trace(*s.sim.trace);
        if (!trace) throw Error(kModule, "cannot write trace file '" + s.sim.trace->string() + "'");
        trace << trace_csv(rep);
    }
}

std::vector<ValidationRow> validate_scenario(const Scenario& s, const std::string& strategies) {
    const auto list = strategies_or(strategies.empty() ? s.sim.strategies : strategies,
                                    {Strategy::Centralized, Strategy::Hierarchical});
    const Analysis a = s.analyze();
    SimConfig cfg = sim_config(s, a, list);
    if (!cfg.tracking && s.tracking.fixed_H) cfg.tracking = TrackingPolicy{*s.tracking.fixed_H, s.tracking_for(a).p_loop};
    const SimReport rep = run(s.graph, s.rates, s.mu, cfg);
    const std::string fixture = s.config.path().filename().string();

    std::vector<ValidationRow> rows;
    auto within_se = [&](const std::string& q, double analytic, const Estimate& e) {
        const double diff = std::abs(analytic - e.mean);
        const bool pass = e.se > 0.0 ? diff <= 3.0 * e.se : diff <= 1e-9 * std::max(1.0, std::abs(analytic));
        rows.push_back({fixture, q, analytic, e.mean, e.se, "3se", pass});
    };
    for (std::size_t i = 0; i < a.b.size(); ++i)
        if (s.graph.is_map(i)) within_se("b" + std::to_string(i), a.b[i], rep.occupancy[i]);
    within_se("rho", a.rates.rho, rep.rho);
    within_se("m", depth_m(a.dist, a.b, a.params.w), rep.m);
    within_se("g_T", tracking_distance_g_T(a.dist, a.transitions, a.b, a.params.w), rep.g_T);
    if (a.plan.n_d > 1 && rep.P_cell) within_se("P_cell", a.plan.P_cell, *rep.P_cell);
    if (cfg.tracking && rep.P_H) {
        const ChainStatistics cs = chain_statistics(*cfg.tracking, a.rates.rho);
        within_se("P_H", cs.P_H, *rep.P_H);
        within_se("P_0", cs.P_0, *rep.P_0);
        within_se("Mh_r", cs.Mh_r, *rep.Mh_r);
    }
    const TrackingSettings tracking = s.tracking_for(a);
    for (const auto& est : rep.costs) {
        if (est.strategy != Strategy::Centralized && est.strategy != Strategy::Hierarchical) continue;
        const double analytic = evaluate(est.strategy, a, s.constants, s.weights, tracking, s.cost_options).total;
        const double rel = std::abs(est.total.mean - analytic) / std::max(std::abs(analytic), 1e-300);
        rows.push_back({fixture, "total." + to_string(est.strategy), analytic, est.total.mean, est.total.se, "5%",
                        rel <= 0.05});
    }
    return rows;
}

int cmd_validate(const std::vector<std::filesystem::path>& configs, const std::string& strategies, std::ostream& out) {
    std::vector<ValidationRow> rows;
    for (const auto& path : configs) {
        const Scenario s = Scenario::load(path);
        auto more = validate_scenario(s, strategies);
        rows.insert(rows.end(), more.begin(), more.end());
    }
    bool ok = true;
    out << "fixture,quantity,analytic,simulated,se,tolerance,status\n";
    for (const auto& r : rows) {
        out << r.fixture << ',' << r.quantity << ',' << num(r.analytic) << ',' << num(r.simulated) << ',' << num(r.se)
            << ',' << r.tolerance << ',' << (r.pass ? "pass" : "FAIL") << '\n';
        ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitToleranceBreach;
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.configs.empty()) throw Error(kModule, "--config is required");
        if (name != "validate" && opts.configs.size() != 1)
            throw Error(kModule, "only validate accepts more than one --config");
        std::ostringstream buffer;
        int code = kExitOk;
        if (name == "validate") {
            code = cmd_validate(opts.configs, opts.strategies, buffer);
        } else {
            const Scenario s = Scenario::load(opts.configs.front());
            if (name == "derive") cmd_derive(s, buffer);
            else if (name == "costs") cmd_costs(s, opts.strategies, opts.sweep, buffer);
            else if (name == "optimize-tracking") cmd_optimize_tracking(s, opts.strategies, buffer);
            else if (name == "vho") cmd_vho(s, opts.strategies, buffer, err);
            else if (name == "simulate") cmd_simulate(s, opts.strategies, buffer);
            else throw Error(kModule, "unknown command '" + name + "'");
        }
        if (opts.out) {
            std::ofstream file(*opts.out);
            if (!file) throw Error(kModule, "cannot write output file '" + opts.out->string() + "'");
            file << buffer.str();
        } else {
            out << buffer.str();
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace mobcost
