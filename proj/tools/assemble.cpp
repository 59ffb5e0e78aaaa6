#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "assemble/error.h"
#include "assemble/metrics.h"
#include "assemble/replay.h"
#include "assemble/runner.h"

using namespace assemble;

int main(int argc, char** argv) {
    CLI::App app{"Agents Assemble grid-world simulator"};
    app.require_subcommand(1);

    std::string configPath, outPath, tracePath, format = "table", agent;
    int step = 0;

    auto* run = app.add_subcommand("run", "simulate a match and write its trace");
    run->add_option("--config", configPath, "config file (JSON)")->required();
    run->add_option("--out", outPath, "trace output path")->required();

    auto* metrics = app.add_subcommand("metrics", "compute team metrics from a trace");
    metrics->add_option("--trace", tracePath)->required();
    metrics->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* render = app.add_subcommand("render", "draw one step of a trace");
    render->add_option("--trace", tracePath)->required();
    render->add_option("--step", step)->required();
    render->add_option("--agent", agent, "draw this agent's map instead of the ground truth");

    auto* validate = app.add_subcommand("validate", "re-simulate a trace and compare");
    validate->add_option("--trace", tracePath)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto trace = run_match(load_config(configPath));
            save_trace(outPath, trace);
            std::cout << "wrote " << trace.steps.size() << " steps to " << outPath << '\n';
            for (std::size_t t = 0; t < trace.header.config.teams.size(); ++t) {
                const auto& scores = trace.steps.empty() ? trace.header.world.scores : trace.steps.back().scores;
                std::cout << trace.header.config.teams[t] << ": " << scores.at(t) << '\n';
            }
        } else if (*metrics) {
            const auto report = compute_metrics(load_trace(tracePath));
            if (format == "json")
                std::cout << metrics_to_json(report).dump(2) << '\n';
            else
                std::cout << format_table(report);
        } else if (*render) {
            const auto trace = load_trace(tracePath);
            std::cout << assemble::render(trace, step, agent.empty() ? std::nullopt : std::optional(agent));
        } else if (*validate) {
            const auto report = validate_trace(load_trace(tracePath));
            for (const auto& m : report.mismatches) std::cout << m << '\n';
            std::cout << (report.ok() ? "ok" : "MISMATCH") << ": " << report.stepsChecked << " steps checked\n";
            return report.ok() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
