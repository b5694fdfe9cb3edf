#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mobcost/commands.hpp"
#include "mobcost/config.hpp"
#include "mobcost/error.hpp"
#include "mobcost/pipeline.hpp"
#include "mobcost/simulator.hpp"
#include "mobcost/tracking.hpp"

namespace py = pybind11;
using namespace mobcost;

namespace {

std::vector<bool> map_flags(std::size_t n, const std::vector<std::size_t>& maps, std::size_t ha) {
    std::vector<bool> flags(n, maps.empty());
    if (maps.empty()) {
        if (ha < n) flags[ha] = false;
        return flags;
    }
    for (auto i : maps) {
        if (i >= n) throw Error("python", "MAP index " + std::to_string(i) + " out of range");
        flags[i] = true;
    }
    return flags;
}

py::dict breakdown(const CostBreakdown& c) {
    py::dict d;
    d["strategy"] = to_string(c.strategy);
    d["signalling"] = c.signalling;
    d["processing"] = c.processing;
    d["air"] = c.air;
    d["total"] = c.total;
    return d;
}

py::tuple estimate(const Estimate& e) { return py::make_tuple(e.mean, e.se); }

StrategyInputs strategy_inputs(double rho, double m, double g_H, double g_T, std::optional<py::dict> paging,
                               std::optional<double> P_M, std::optional<py::dict> chain) {
    StrategyInputs in;
    in.rho = rho;
    in.m = m;
    in.g_H = g_H;
    in.g_T = g_T;
    if (paging)
        in.paging = PagingInputs{(*paging)["g_C"].cast<double>(), (*paging)["n_C"].cast<double>(),
                                 (*paging)["n_d"].cast<double>(), (*paging)["P_cell"].cast<double>()};
    in.P_M = P_M;
    if (chain)
        in.chain = ChainStatistics{(*chain)["P_H"].cast<double>(), (*chain)["P_0"].cast<double>(),
                                   (*chain)["Mh_r"].cast<double>()};
    return in;
}

}  // namespace

PYBIND11_MODULE(_mobcost, m) {
    m.doc() = "Mobility-management cost models, tracking optimization and simulation";
    py::register_exception<Error>(m, "MobcostError", PyExc_ValueError);

    m.def(
        "run_command",
        [](const std::string& command, const std::vector<std::string>& configs, const std::string& strategies,
           const std::string& sweep) {
            CommandOptions opts;
            for (const auto& c : configs) opts.configs.emplace_back(c);
            opts.strategies = strategies;
            opts.sweep = sweep;
            std::ostringstream out, err;
            const int code = run_command(command, opts, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("command"), py::arg("configs"), py::arg("strategies") = "", py::arg("sweep") = "",
        "Run a CLI command in-process; returns (exit_code, stdout, stderr).");

    m.def(
        "analyze",
        [](const Matrix& weights, const Matrix& rates, double mu, std::size_t ha, const std::vector<std::size_t>& maps,
           std::size_t areas, bool g_H_measured) {
            const auto flags = map_flags(static_cast<std::size_t>(weights.rows()), maps, ha);
            AnalysisOptions opts;
            opts.target_areas = areas;
            opts.g_H_measured = g_H_measured;
            const auto a = analyze(NetworkGraph(weights, flags, ha), RateMatrix(rates, flags), mu, opts);
            py::dict d;
            d["w"] = a.params.w;
            d["m"] = a.params.m;
            d["g_T"] = a.params.g_T;
            d["delta"] = a.params.delta;
            d["g_H"] = a.params.g_H;
            d["g_H_source"] = to_string(a.params.g_H_source);
            d["lambda"] = a.rates.lambda;
            d["rho"] = a.rates.rho;
            d["b"] = a.b.b;
            d["dist"] = a.dist.dist;
            d["g_C"] = a.plan.g_C;
            d["n_C"] = a.plan.n_C;
            d["n_d"] = a.plan.n_d;
            d["P_cell"] = a.plan.P_cell;
            return d;
        },
        py::arg("weights"), py::arg("rates"), py::arg("mu"), py::arg("ha") = 0,
        py::arg("maps") = std::vector<std::size_t>{}, py::arg("areas") = 1, py::arg("g_H_measured") = false,
        "Distances, stationary distribution, rho and the derived parameters of one scenario.");

    m.def(
        "cost",
        [](const std::string& strategy, double rho, double m_, double g_H, double g_T, const std::string& preset,
           std::optional<py::dict> paging, std::optional<double> P_M, std::optional<py::dict> chain) {
            return breakdown(cost(parse_strategy(strategy), strategy_inputs(rho, m_, g_H, g_T, paging, P_M, chain),
                                  cost_preset(preset), {}));
        },
        py::arg("strategy"), py::arg("rho"), py::arg("m"), py::arg("g_H"), py::arg("g_T"), py::arg("preset") = "MIPV4",
        py::arg("paging") = py::none(), py::arg("P_M") = py::none(), py::arg("chain") = py::none(),
        "Per-event cost of one strategy, split by class.");

    m.def(
        "chain_statistics",
        [](std::size_t H, double rho, double p_loop) {
            const auto s = chain_statistics(TrackingPolicy{H, p_loop}, rho);
            py::dict d;
            d["P_H"] = s.P_H;
            d["P_0"] = s.P_0;
            d["Mh_r"] = s.Mh_r;
            return d;
        },
        py::arg("H"), py::arg("rho"), py::arg("p_loop") = 0.0);

    m.def(
        "optimize_H",
        [](const std::string& strategy, double rho, double m_, double g_H, double g_T, std::size_t H_max,
           double p_loop, const std::string& preset) {
            const auto o = optimize_H(parse_strategy(strategy), strategy_inputs(rho, m_, g_H, g_T, {}, {}, {}),
                                      cost_preset(preset), {}, H_max, p_loop);
            py::dict d;
            d["H"] = o.H;
            d["cost"] = breakdown(o.cost);
            std::vector<double> curve;
            for (const auto& c : o.curve) curve.push_back(c.total);
            d["curve"] = curve;
            return d;
        },
        py::arg("strategy"), py::arg("rho"), py::arg("m"), py::arg("g_H"), py::arg("g_T"), py::arg("H_max") = 32,
        py::arg("p_loop") = 0.0, py::arg("preset") = "MIPV4",
        "Exhaustive search for the tracking-chain bound H minimizing total cost.");

    m.def(
        "simulate",
        [](const std::string& config, std::optional<std::uint64_t> seed, std::optional<std::uint64_t> horizon) {
            const auto s = Scenario::load(config);
            SimConfig cfg;
            cfg.seed = seed.value_or(s.sim.seed);
            cfg.horizon = horizon.value_or(s.sim.horizon);
            cfg.warmup = s.sim.warmup;
            cfg.batches = s.sim.batches;
            cfg.constants = s.constants;
            cfg.weights = s.weights;
            cfg.cost_options = s.cost_options;
            cfg.strategies = {Strategy::Centralized, Strategy::Hierarchical};
            const auto rep = run(s.graph, s.rates, s.mu, cfg);
            py::dict d;
            d["rng"] = rep.rng;
            d["seed"] = rep.seed;
            d["events"] = rep.counts.events;
            d["rho"] = estimate(rep.rho);
            d["lambda"] = estimate(rep.lambda);
            d["m"] = estimate(rep.m);
            d["g_T"] = estimate(rep.g_T);
            py::dict costs;
            for (const auto& c : rep.costs) costs[to_string(c.strategy).c_str()] = estimate(c.total);
            d["costs"] = costs;
            d["report_csv"] = report_csv(rep);
            return d;
        },
        py::arg("config"), py::arg("seed") = py::none(), py::arg("horizon") = py::none(),
        "Simulate a scenario file with the Centralized and Hierarchical strategies.");
}
