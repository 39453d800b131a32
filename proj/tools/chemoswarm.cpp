// chemoswarm: evolve chemotaxis controllers and analyze their swarms.
//
//   chemoswarm evolve    --out-dir run --seed 7
//   chemoswarm multi     --genome run/checkpoints/genome_000500.json --out-dir g500
//   chemoswarm rulebased --genome run/checkpoints/genome_000100.json --out-dir rules
//   chemoswarm analyze   --traces g500/trace.csv --out-dir reanalysis
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include "chemoswarm/commands.hpp"
#include "chemoswarm/run_config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace {

const std::set<std::string> kBooleanKeys = {"resume", "probe_traces", "write_trace",
                                            "field_snapshot", "rule_single", "rule_multi"};

std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

struct SubcommandOptions {
    std::string config_file;
    std::map<std::string, std::string> scalars;
    std::vector<std::string> traces;
};

void register_options(CLI::App& sub, SubcommandOptions& opts) {
    sub.add_option("--config", opts.config_file, "Flat key = value config file")->check(CLI::ExistingFile);
    for (const auto& key : chemo::RunConfig::keys()) {
        if (key == "traces") continue;
        if (kBooleanKeys.count(key)) {
            sub.add_option(flag_name(key), opts.scalars[key], "Sets " + key + " (bare flag means true)")
                ->expected(0, 1);
        } else {
            sub.add_option(flag_name(key), opts.scalars[key], "Sets " + key);
        }
    }
}

chemo::RunConfig build_config(const CLI::App& sub, const SubcommandOptions& opts) {
    chemo::RunConfig config;
    if (!opts.config_file.empty()) config.load_file(opts.config_file);
    for (const auto& [key, value] : opts.scalars) {
        if (sub.count(flag_name(key)) == 0) continue;
        config.set(key, value.empty() && kBooleanKeys.count(key) ? "true" : value);
    }
    if (!opts.traces.empty()) {
        config.traces.clear();
        for (const auto& t : opts.traces) config.set("traces", t);
    }
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolve chemotaxis controllers, clone them into swarms, and measure collective behavior"};
    app.require_subcommand(1);

    struct Command {
        CLI::App* app;
        SubcommandOptions opts;
        std::function<void(const chemo::RunConfig&)> run;
    };
    std::vector<Command> commands;
    commands.reserve(4);
    commands.push_back({app.add_subcommand("evolve", "Run CMA-ES evolution with periodic multi-agent probes"), {},
                        chemo::cmd_evolve});
    commands.push_back({app.add_subcommand("multi", "Simulate a cloned population of one genome checkpoint"), {},
                        chemo::cmd_multi});
    commands.push_back({app.add_subcommand("rulebased", "Run the rule-based reference agent"), {},
                        chemo::cmd_rulebased});
    commands.push_back({app.add_subcommand("analyze", "Recompute metrics from trace CSV files"), {},
                        chemo::cmd_analyze});
    for (auto& c : commands) register_options(*c.app, c.opts);
    commands.back().app->add_option("--traces,traces", commands.back().opts.traces, "Trace CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (auto& c : commands) {
        if (!c.app->parsed()) continue;
        chemo::RunConfig config;
        try {
            config = build_config(*c.app, c.opts);
        } catch (const chemo::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 1;
        }
        try {
            c.run(config);
        } catch (const chemo::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
        return 0;
    }
    return 1;
}
