#include "mobcost/costs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "cost-models";

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

// A count that multiplies a unit cost; negative values mean the network
// violates the structure the strategy's cost row assumes.
double count(double value, const char* expression, const char* assumption) {
    if (value < -1e-12)
        throw Error(kModule, std::string(assumption) + " (" + expression + " = " + std::to_string(value) + ")");
    return value;
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(kModule, std::string(name) + " must lie in [0,1]");
}

void check_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(kModule, std::string(name) + " must be finite and >= 0");
}

struct Resolved {
    double rho, m, gH, gT;
    double gC = 0, nC = 0, nd = 0, Pcell = 0, U = 0;  // U: handover update factor
    double PM = 0;
    double PH = 1, P0 = 1, Mh = 0;
};

Resolved resolve(Strategy s, const StrategyInputs& in, const CostOptions& opts) {
    check_probability(in.rho, "rho");
    check_non_negative(in.m, "m");
    check_non_negative(in.g_H, "g_H");
    check_non_negative(in.g_T, "g_T");
    Resolved r{in.rho, in.m, in.g_H, in.g_T};
    if (is_tracking(s)) {
        if (!in.chain) throw Error(kModule, to_string(s) + " requires tracking chain statistics");
        check_probability(in.chain->P_H, "P_H");
        check_probability(in.chain->P_0, "P_0");
        check_non_negative(in.chain->Mh_r, "M[h_r]");
        r.PH = in.chain->P_H;
        r.P0 = in.chain->P_0;
        r.Mh = in.chain->Mh_r;
    }
    if (is_cellular_family(s)) {
        if (!in.paging) throw Error(kModule, to_string(s) + " requires a paging plan (g_C, n_C, n_d, P_cell)");
        check_non_negative(in.paging->g_C, "g_C");
        check_non_negative(in.paging->n_C, "n_C");
        check_non_negative(in.paging->n_d, "n_d");
        check_probability(in.paging->P_cell, "P_cell");
        r.gC = in.paging->g_C;
        r.nC = in.paging->n_C;
        r.nd = in.paging->n_d;
        r.Pcell = in.paging->P_cell;
        r.U = opts.update_on_crossing ? r.Pcell : 1.0 - r.Pcell;
    }
    if (s == Strategy::Manet) {
        if (!in.P_M) throw Error(kModule, "Manet requires the flooding fraction P_M");
        check_probability(*in.P_M, "P_M");
        r.PM = *in.P_M;
    }
    return r;
}

}  // namespace

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Centralized: return "Centralized";
        case Strategy::Hierarchical: return "Hierarchical";
        case Strategy::WirelessTracking: return "WirelessTracking";
        case Strategy::WiredTracking: return "WiredTracking";
        case Strategy::Cellular: return "Cellular";
        case Strategy::HPage: return "HPage";
        case Strategy::Manet: return "Manet";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    static const std::map<std::string, Strategy> names{
        {"centralized", Strategy::Centralized},       {"cent", Strategy::Centralized},
        {"hierarchical", Strategy::Hierarchical},     {"hier", Strategy::Hierarchical},
        {"wirelesstracking", Strategy::WirelessTracking}, {"wireless", Strategy::WirelessTracking},
        {"wlesst", Strategy::WirelessTracking},       {"wiredtracking", Strategy::WiredTracking},
        {"wired", Strategy::WiredTracking},           {"wiredt", Strategy::WiredTracking},
        {"cellular", Strategy::Cellular},             {"cell", Strategy::Cellular},
        {"hpage", Strategy::HPage},                   {"manet", Strategy::Manet}};
    const auto it = names.find(lower(name));
    if (it == names.end()) throw Error(kModule, "unknown strategy '" + std::string(name) + "'");
    return it->second;
}

bool is_tracking(Strategy s) { return s == Strategy::WirelessTracking || s == Strategy::WiredTracking; }

bool is_cellular_family(Strategy s) {
    return s == Strategy::Cellular || s == Strategy::HPage || s == Strategy::Manet;
}

void CostConstants::validate() const {
    for (double v : {c_u, c_d, c_r, c_f, c_m, c_ec, c_rc, c_dc, c_au, c_ad})
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(kModule, "cost constants must be finite and >= 0");
}

void CostClassWeights::validate() const {
    for (double v : {w_sig, w_proc, w_air})
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(kModule, "class weights must be finite and >= 0");
    if (w_sig == 0.0 && w_proc == 0.0 && w_air == 0.0) throw Error(kModule, "class weights cannot all be zero");
}

CostConstants cost_preset(std::string_view name) {
    // Measured technology constants: c_u c_d c_r c_f c_m c_ec c_rc c_dc c_au c_ad.
    static const std::map<std::string, CostConstants> presets{
        {"mipv4", {499, 1825, 187, 652, 543, 240, 0, 240, 136, 390}},
        {"mipv6", {777, 1821, 1068, 685, 1239, 234, 0, 234, 181, 396}},
        {"ltrackv4", {481, 1814, 711, 636, 538, 237, 235, 240, 138, 368}},
        {"ltrackv6", {695, 1843, 821, 690, 541, 239, 238, 240, 165, 397}},
    };
    const auto it = presets.find(lower(name));
    if (it == presets.end()) throw Error(kModule, "unknown cost preset '" + std::string(name) + "'");
    return it->second;
}

std::vector<std::string> cost_preset_names() { return {"MIPV4", "MIPV6", "LTRACKV4", "LTRACKV6"}; }

double signalling_cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostOptions& opts) {
    const Resolved r = resolve(s, in, opts);
    const double h = r.rho, p = 1.0 - r.rho;
    switch (s) {
        case Strategy::Centralized:
            return h * r.m * c.c_u + p * (r.m * c.c_d);
        case Strategy::Hierarchical:
            return h * r.gH * c.c_u + p * (r.m * c.c_d);
        case Strategy::WirelessTracking:
            return h * r.PH * r.gH * c.c_u +
                   p * (r.gH * c.c_d + r.Mh * r.gT * c.c_d + (1.0 - r.P0) * r.gH * c.c_u);
        case Strategy::WiredTracking:
            return h * (r.gT * (1.0 - r.PH) + r.gH * r.PH) * c.c_u +
                   p * (r.m * c.c_d + r.Mh * r.gT * c.c_d + (1.0 - r.P0) * r.gH * c.c_u);
        case Strategy::Cellular: {
            const double backbone = count(r.m - r.gC, "m - g_C", "hierarchy shallower than the paging radius");
            return h * r.U * r.gH * c.c_u + p * ((backbone + r.nC * r.gC) * c.c_d + r.gC * c.c_u);
        }
        case Strategy::HPage: {
            const double backbone = count(r.m - r.gC, "m - g_C", "hierarchy shallower than the paging radius");
            return h * r.U * r.gC * c.c_u + p * ((backbone * r.nd + r.nC * r.gC) * c.c_d + r.gC * c.c_u);
        }
        case Strategy::Manet: {
            const double backbone =
                count(r.m - r.gC + 1.0, "m - g_C + 1", "hierarchy shallower than the paging radius");
            return h * r.U * r.gH * c.c_u + p * ((backbone + r.PM * r.nC * r.gC) * c.c_d + r.gC * c.c_u);
        }
    }
    return 0.0;
}

double processing_cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostOptions& opts) {
    const Resolved r = resolve(s, in, opts);
    const double h = r.rho, p = 1.0 - r.rho;
    switch (s) {
        case Strategy::Centralized: {
            const double up = count(r.m - 1.0, "m - 1", "HA closer than one hop");
            const double down = count(r.m - 2.0, "m - 2", "HA closer than two hops");
            return h * (c.c_r + up * c.c_f + c.c_m) + p * (c.c_ec + down * c.c_f + c.c_dc);
        }
        case Strategy::Hierarchical: {
            const double up = count(r.gH - 1.0, "g_H - 1", "hierarchy junction closer than one hop");
            const double above = count(r.m - r.gH - 1.0, "m - g_H - 1", "hierarchy shallower than the junction depth");
            return h * (c.c_r + up * c.c_f + c.c_m) + p * (c.c_ec + above * c.c_f + c.c_rc + up * c.c_f + c.c_dc);
        }
        case Strategy::WirelessTracking:
        case Strategy::WiredTracking: {
            const double up = count(r.gH - 1.0, "g_H - 1", "hierarchy junction closer than one hop");
            const double path = count(r.m - 1.0, "m - 1", "HA closer than one hop");
            const double link = count(r.gT - 1.0, "g_T - 1", "handover distance below one hop");
            const double call = c.c_ec + path * c.c_f + r.P0 * c.c_dc +
                                (1.0 - r.P0) * (r.Mh * (link * c.c_f + c.c_rc) + c.c_dc + up * c.c_f + c.c_m);
            if (s == Strategy::WirelessTracking)
                return h * ((1.0 - r.PH) * (c.c_r + c.c_m) + r.PH * (c.c_r + up * c.c_f + c.c_m)) + p * call;
            return h * (c.c_r + link * c.c_f + c.c_m) + p * call;
        }
        case Strategy::Cellular: {
            const double above = count(r.m - r.gC - 1.0, "m - g_C - 1", "hierarchy shallower than the paging depth");
            const double area = count(r.gC - 1.0, "g_C - 1", "paging radius below one hop");
            return h * (r.U * (c.c_r + r.gH * c.c_f + c.c_m)) +
                   p * (c.c_ec + above * c.c_f + c.c_rc + area * r.nC * c.c_f + r.nC * c.c_dc);
        }
        case Strategy::HPage: {
            const double above = count(r.m - r.gC - 1.0, "m - g_C - 1", "hierarchy shallower than the paging depth");
            const double area = count(r.gC - 1.0, "g_C - 1", "paging radius below one hop");
            return h * (r.U * c.c_r + r.gC * c.c_f + c.c_m) +
                   p * (c.c_ec + above * r.nd * c.c_f + c.c_rc + area * r.nC * c.c_f + c.c_dc);
        }
        case Strategy::Manet: {
            const double above = count(r.m - r.gC, "m - g_C", "hierarchy shallower than the paging radius");
            return h * (r.U * c.c_r + r.gH * c.c_f + c.c_m) +
                   p * (c.c_ec + above * c.c_f + c.c_rc + r.PM * r.gC * r.nC * c.c_f + c.c_dc);
        }
    }
    return 0.0;
}

double air_cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostOptions& opts) {
    const Resolved r = resolve(s, in, opts);
    const double h = r.rho, p = 1.0 - r.rho;
    switch (s) {
        case Strategy::Centralized:
        case Strategy::Hierarchical:
        case Strategy::WiredTracking:
            return h * c.c_au + p * c.c_ad;
        case Strategy::WirelessTracking:
            return h * ((1.0 - r.PH) * 2.0 * c.c_au + r.PH * c.c_au) + p * c.c_ad;
        case Strategy::Cellular:
        case Strategy::HPage:
            return h * (r.U * c.c_au) + p * (r.nC * c.c_ad + c.c_au);
        case Strategy::Manet: {
            const double hops = count(r.gC - 1.0, "g_C - 1", "paging radius below one hop");
            return h * (r.U * hops * c.c_au) + p * (r.PM * r.nC * r.gC * c.c_ad + c.c_au);
        }
    }
    return 0.0;
}

CostBreakdown cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostClassWeights& w,
                   const CostOptions& opts) {
    c.validate();
    w.validate();
    CostBreakdown out;
    out.strategy = s;
    out.signalling = signalling_cost(s, in, c, opts);
    out.processing = processing_cost(s, in, c, opts);
    out.air = air_cost(s, in, c, opts);
    out.total = w.w_sig * out.signalling + w.w_proc * out.processing + w.w_air * out.air;
    return out;
}

bool is_sweep_parameter(std::string_view name) {
    static const char* const known[] = {"rho", "cu_over_cd", "proc_over_sig", "air_over_sig", "m",   "g_h",
                                        "g_t", "g_c",        "n_c",           "n_d",          "p_cell", "p_m",
                                        "p_h", "p_0",        "mh_r"};
    const std::string key = lower(name);
    return std::any_of(std::begin(known), std::end(known), [&](const char* k) { return key == k; });
}

std::vector<CurvePoint> total_cost_curve(Strategy s, std::string_view param, const std::vector<double>& grid,
                                         const StrategyInputs& base, const CostConstants& c,
                                         const CostClassWeights& w, const CostOptions& opts,
                                         const ChainRefresh& refresh) {
    const std::string key = lower(param);
    if (!is_sweep_parameter(key)) throw Error(kModule, "unknown sweep parameter '" + std::string(param) + "'");

    auto paging = [&](StrategyInputs& in) -> PagingInputs& {
        if (!in.paging) in.paging = PagingInputs{};
        return *in.paging;
    };
    auto chain = [&](StrategyInputs& in) -> ChainStatistics& {
        if (!in.chain) in.chain = ChainStatistics{};
        return *in.chain;
    };

    std::vector<CurvePoint> rows;
    rows.reserve(grid.size());
    for (double v : grid) {
        if (!std::isfinite(v)) throw Error(kModule, "sweep grid values must be finite");
        StrategyInputs in = base;
        CostConstants cc = c;
        CostClassWeights ww = w;
        bool chain_swept = false;
        if (key == "rho") in.rho = v;
        else if (key == "m") in.m = v;
        else if (key == "g_h") in.g_H = v;
        else if (key == "g_t") in.g_T = v;
        else if (key == "g_c") paging(in).g_C = v;
        else if (key == "n_c") paging(in).n_C = v;
        else if (key == "n_d") paging(in).n_d = v;
        else if (key == "p_cell") paging(in).P_cell = v;
        else if (key == "p_m") in.P_M = v;
        else if (key == "p_h") chain(in).P_H = v, chain_swept = true;
        else if (key == "p_0") chain(in).P_0 = v, chain_swept = true;
        else if (key == "mh_r") chain(in).Mh_r = v, chain_swept = true;
        else {
            if (!(v > 0.0)) throw Error(kModule, "ratio multipliers must be positive");
            const double up = std::sqrt(v), down = 1.0 / std::sqrt(v);
            if (key == "cu_over_cd") {
                cc.c_u *= up;
                cc.c_d *= down;
            } else if (key == "proc_over_sig") {
                ww.w_proc *= up;
                ww.w_sig *= down;
            } else {  // air_over_sig
                ww.w_air *= up;
                ww.w_sig *= down;
            }
        }
        if (refresh && is_tracking(s) && !chain_swept) in.chain = refresh(s, in, cc, ww);
        rows.push_back({v, cost(s, in, cc, ww, opts)});
    }
    return rows;
}

}  // namespace mobcost
