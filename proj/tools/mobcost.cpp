#include <iostream>

#include <CLI11.hpp>

#include "mobcost/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Mobility-management cost models, parameter derivation and simulation"};
    app.require_subcommand(1);

    mobcost::CommandOptions opts;
    std::vector<std::string> configs;
    std::string out;
    for (const auto& name : mobcost::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", configs, "scenario config file")->required();
        sub->add_option("--out", out, "write results here instead of stdout");
        sub->add_option("--strategy", opts.strategies, "comma-separated strategy list");
        if (name == "costs") sub->add_option("--sweep", opts.sweep, "param=lo:hi:steps[:log] or param=v1,v2,...");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return mobcost::kExitInputError;
    }
    for (const auto& c : configs) opts.configs.emplace_back(c);
    if (!out.empty()) opts.out = out;
    return mobcost::run_command(app.get_subcommands().front()->get_name(), opts, std::cout, std::cerr);
}
