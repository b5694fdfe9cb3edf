#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobcost {

enum class Strategy { Centralized, Hierarchical, WirelessTracking, WiredTracking, Cellular, HPage, Manet };

inline constexpr std::array<Strategy, 7> kAllStrategies{
    Strategy::Centralized, Strategy::Hierarchical, Strategy::WirelessTracking, Strategy::WiredTracking,
    Strategy::Cellular,    Strategy::HPage,        Strategy::Manet};

std::string to_string(Strategy s);
/// Accepts the canonical names and lowercase aliases ("centralized", "wired", ...).
Strategy parse_strategy(std::string_view name);
bool is_tracking(Strategy s);
bool is_cellular_family(Strategy s);

/// Relative unit costs of the primitive operations.
struct CostConstants {
    double c_u = 0, c_d = 0;                                          // link update / delivery
    double c_r = 0, c_f = 0, c_m = 0, c_ec = 0, c_rc = 0, c_dc = 0;  // node processing
    double c_au = 0, c_ad = 0;                                        // air uplink / downlink

    void validate() const;
};

/// Named technology presets: MIPV4, MIPV6, LTRACKV4, LTRACKV6.
CostConstants cost_preset(std::string_view name);
std::vector<std::string> cost_preset_names();

struct CostClassWeights {
    double w_sig = 1.0;
    double w_proc = 1.0;
    double w_air = 1.0;

    void validate() const;
};

/// Tracking-chain statistics: probability a handover is normal, probability
/// the chain is empty at a call, expected chain length at a call.
struct ChainStatistics {
    double P_H = 1.0;
    double P_0 = 1.0;
    double Mh_r = 0.0;
};

struct PagingInputs {
    double g_C = 0.0;
    double n_C = 1.0;
    double n_d = 1.0;
    double P_cell = 0.0;
};

struct StrategyInputs {
    double rho = 0.0;
    double m = 0.0;
    double g_H = 0.0;
    double g_T = 0.0;
    std::optional<PagingInputs> paging;     ///< cellular family
    std::optional<double> P_M;              ///< MANET flooding fraction
    std::optional<ChainStatistics> chain;   ///< tracking family
};

struct CostOptions {
    /// Replace the (1 - P_cell) factor on cellular-family handover terms by
    /// P_cell (update only when crossing an area boundary).
    bool update_on_crossing = false;
};

struct CostBreakdown {
    Strategy strategy = Strategy::Centralized;
    double signalling = 0.0;
    double processing = 0.0;
    double air = 0.0;
    double total = 0.0;
};

/// Per-class cost of one average event (rho * handover + (1 - rho) * call).
/// Each throws mobcost::Error when a count that multiplies a unit cost is
/// negative, naming the structural assumption that failed.
double signalling_cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostOptions& opts = {});
double processing_cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostOptions& opts = {});
double air_cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostOptions& opts = {});

CostBreakdown cost(Strategy s, const StrategyInputs& in, const CostConstants& c, const CostClassWeights& w,
                   const CostOptions& opts = {});

/// Sweepable names: rho, cu_over_cd, proc_over_sig, air_over_sig and the
/// StrategyInputs fields m, g_h, g_t, g_c, n_c, n_d, p_cell, p_m, p_h, p_0, mh_r.
/// Ratio sweeps take a multiplier k of the base ratio and rescale the pair by
/// sqrt(k) and 1/sqrt(k), preserving its product.
bool is_sweep_parameter(std::string_view name);

struct CurvePoint {
    double value = 0.0;
    CostBreakdown cost;
};

/// Recomputes chain statistics at each grid point (e.g. because they depend
/// on rho). Leave empty to keep the base statistics frozen.
using ChainRefresh =
    std::function<ChainStatistics(Strategy, const StrategyInputs&, const CostConstants&, const CostClassWeights&)>;

std::vector<CurvePoint> total_cost_curve(Strategy s, std::string_view param, const std::vector<double>& grid,
                                         const StrategyInputs& base, const CostConstants& c,
                                         const CostClassWeights& w, const CostOptions& opts = {},
                                         const ChainRefresh& refresh = {});

}  // namespace mobcost
