#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mobcost/config.hpp"

namespace mobcost {

enum ExitCode : int { kExitOk = 0, kExitToleranceBreach = 1, kExitInputError = 2 };

struct CommandOptions {
    std::vector<std::filesystem::path> configs;
    std::optional<std::filesystem::path> out;
    std::string strategies;  ///< comma-separated; empty: command default
    std::string sweep;       ///< "param=lo:hi:steps[:log]" or "param=v1,v2"
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"derive", "costs", "optimize-tracking", "vho", "simulate", "validate"};
    return names;
}

/// Runs one command. Results go to `out` (or the --out file), diagnostics to
/// `err`. Input errors are reported as "error: <module>: <message>" and
/// return kExitInputError.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err);

void cmd_derive(const Scenario& s, std::ostream& out);
void cmd_costs(const Scenario& s, const std::string& strategies, const std::string& sweep, std::ostream& out);
void cmd_optimize_tracking(const Scenario& s, const std::string& strategies, std::ostream& out);
void cmd_vho(const Scenario& s, const std::string& strategies, std::ostream& out, std::ostream& err);
void cmd_simulate(const Scenario& s, const std::string& strategies, std::ostream& out);

struct ValidationRow {
    std::string fixture;
    std::string quantity;
    double analytic = 0.0;
    double simulated = 0.0;
    double se = 0.0;
    std::string tolerance;
    bool pass = false;
};

/// Analytic-vs-simulated comparison for one scenario: occupancy, rho, m,
/// g_T, P_cell (multi-area plans), chain statistics (fixed tracking.h) within
/// 3 standard errors; Centralized and Hierarchical totals within 5%.
std::vector<ValidationRow> validate_scenario(const Scenario& s, const std::string& strategies = {});
int cmd_validate(const std::vector<std::filesystem::path>& configs, const std::string& strategies, std::ostream& out);

}  // namespace mobcost
