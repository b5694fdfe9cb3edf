#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobcost/costs.hpp"
#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"
#include "mobcost/pipeline.hpp"
#include "mobcost/simulator.hpp"
#include "mobcost/vho.hpp"

namespace mobcost {

/// n header-less rows of n comma-separated non-negative numbers.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Two-column integer CSV; a non-numeric first line is treated as a header.
std::vector<std::pair<std::size_t, std::size_t>> read_pairs_csv(const std::filesystem::path& path);

/// Flat `key = value` text. '#' starts a comment; blank lines are ignored.
/// Every key must be known; duplicates are errors.
class ConfigFile {
public:
    static ConfigFile load(const std::filesystem::path& path);
    static ConfigFile parse(const std::string& text, std::filesystem::path base_dir = ".",
                            std::filesystem::path name = "<inline>");

    const std::filesystem::path& path() const noexcept { return path_; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& raw(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::optional<double> number(const std::string& key) const;
    std::optional<std::uint64_t> count(const std::string& key) const;
    std::optional<bool> flag(const std::string& key) const;
    /// Relative paths are resolved against the config file's directory.
    std::optional<std::filesystem::path> file(const std::string& key) const;

    static const std::vector<std::string>& known_keys();

private:
    std::filesystem::path path_;
    std::filesystem::path dir_;
    std::map<std::string, std::string> values_;
};

/// "lo:hi:steps" (linear), "lo:hi:steps:log" or "v1,v2,...".
std::vector<double> parse_grid(const std::string& text);

/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);

/// Comma-separated strategy names; empty text means all seven.
std::vector<Strategy> parse_strategy_list(const std::string& text);

struct SimSettings {
    std::uint64_t seed = 1;
    std::uint64_t horizon = 1'000'000;
    std::optional<std::uint64_t> warmup;
    std::size_t batches = 100;
    std::optional<std::filesystem::path> trace;
    std::string strategies;  ///< default list for simulate and validate
};

struct VhoSettings {
    CompositeScenario scenario;
    std::vector<double> nu_grid;
    ChoiceForm form = ChoiceForm::NormalizedExponential;
    Strategy strategy = Strategy::Centralized;
};

/// A fully validated scenario. Every key is checked before any computation.
struct Scenario {
    ConfigFile config;
    NetworkGraph graph;
    RateMatrix rates;
    double mu = 0.0;
    AnalysisOptions analysis;
    CostConstants constants;
    CostClassWeights weights;
    CostOptions cost_options;
    TrackingSettings tracking;
    bool p_loop_auto = false;
    SimSettings sim;
    std::optional<VhoSettings> vho;

    static Scenario load(const std::filesystem::path& path);
    static Scenario from_config(ConfigFile config);

    Analysis analyze() const;
    /// Tracking settings with an automatic p_loop resolved on the analysis.
    TrackingSettings tracking_for(const Analysis& a) const;
};

}  // namespace mobcost
