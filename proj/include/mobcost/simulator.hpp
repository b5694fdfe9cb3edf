#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobcost/costs.hpp"
#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"
#include "mobcost/paging.hpp"
#include "mobcost/tracking.hpp"

namespace mobcost {

/// Name of the generator recorded in every report.
inline constexpr const char* kRngAlgorithm = "mt19937_64/seed_seq";

struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t horizon = 1'000'000;  ///< total events, warmup included
    std::optional<std::uint64_t> warmup;  ///< default: 1% of the horizon
    std::vector<Strategy> strategies{Strategy::Centralized};
    CostConstants constants = cost_preset("MIPV4");
    CostClassWeights weights;
    CostOptions cost_options;
    std::optional<TrackingPolicy> tracking;  ///< required by tracking strategies
    std::optional<PagingPlan> plan;          ///< required by the cellular family
    double P_M = 1.0;
    std::optional<double> w;  ///< normalizing weight; default: edge-averaged weight
    std::size_t batches = 100;
    bool record_trace = false;

    std::uint64_t warmup_events() const;
    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double se = 0.0;  ///< batch-means standard error
};

struct SimCounts {
    std::uint64_t events = 0;  ///< post-warmup
    std::uint64_t handovers = 0;
    std::uint64_t normal_handovers = 0;
    std::uint64_t tracking_handovers = 0;
    std::uint64_t calls = 0;
    std::uint64_t crossings = 0;
};

struct StrategyEstimate {
    Strategy strategy = Strategy::Centralized;
    Estimate signalling;
    Estimate processing;
    Estimate air;
    Estimate total;
};

struct TraceRow {
    double time = 0.0;
    bool call = false;
    std::size_t from = 0;
    std::size_t to = 0;
    double sig = 0.0;
    double proc = 0.0;
    double air = 0.0;
};

struct SimReport {
    std::string rng = kRngAlgorithm;
    std::uint64_t seed = 0;
    SimCounts counts;
    double total_time = 0.0;  ///< post-warmup virtual time
    double w = 0.0;
    std::vector<Estimate> occupancy;  ///< time fraction per node
    Estimate lambda;
    Estimate rho;
    Estimate m;                      ///< time-averaged HA distance / w
    Estimate g_T;                    ///< rate-corrected handover distance / w
    Estimate g_T_per_handover;       ///< plain mean over handovers
    Estimate g_H_per_handover;       ///< mean shortest-path-tree junction distance / w
    std::optional<Estimate> P_cell;  ///< rate-corrected crossing frequency
    std::optional<Estimate> P_H;
    std::optional<Estimate> P_0;
    std::optional<Estimate> Mh_r;
    std::vector<std::uint64_t> chain_histogram;  ///< chain length at calls
    std::vector<StrategyEstimate> costs;
    std::vector<TraceRow> trace;  ///< first configured strategy only
};

/// Event-driven replay of the mobility process. Each event charges the
/// configured strategies' message sequences along actual shortest paths.
SimReport run(const NetworkGraph& g, const RateMatrix& r, double mu, const SimConfig& cfg);

struct SimJob {
    NetworkGraph graph;
    RateMatrix rates;
    double mu = 0.0;
    SimConfig config;
};

/// Independent runs executed concurrently; results equal sequential runs.
std::vector<SimReport> run_many(const std::vector<SimJob>& jobs);

enum class Quantity { Occupancy, TrackingDistance, CrossingProbability, ChainStatistics };

struct NamedEstimate {
    std::string name;
    Estimate value;
};

/// Empirical estimator of an analytic quantity from a finished run.
std::vector<NamedEstimate> estimate(const SimReport& report, Quantity q);

/// CSV blocks (counts, occupancy, estimates, costs, chain histogram).
std::string report_csv(const SimReport& report);
/// Flat key=value summary.
std::string report_summary(const SimReport& report);
/// time,event,from,to,cost_sig,cost_proc,cost_air
std::string trace_csv(const SimReport& report);

}  // namespace mobcost
