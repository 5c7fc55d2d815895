#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace crmadapt::cli;
    CLI::App app{"Closed-loop reference model adaptive control simulator"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::string targets;
    std::string param;
    std::string values;

    auto* simulate = app.add_subcommand("simulate", "Simulate a scenario; writes trace.csv, scenario.json, plot.svg");
    simulate->add_option("--config", config, "Scenario JSON")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();

    auto* design = app.add_subcommand("design-gain", "Place the poles of W'_e and report the SPR certificate");
    design->add_option("--config", config, "Scenario JSON")->required();
    auto* tgt = design->add_option("--targets", targets, "Comma separated poles, e.g. -2,-4 or -1+2j,-1-2j");
    design->add_option("--poles", targets, "Alias of --targets")->excludes(tgt);

    auto* spr = app.add_subcommand("check-spr", "Certify the SPR precondition of the scenario's family");
    spr->add_option("--config", config, "Scenario JSON")->required();

    auto* bound = app.add_subcommand("bound", "Simulate and evaluate every applicable performance bound");
    bound->add_option("--config", config, "Scenario JSON")->required();
    bound->add_option("--out", out_dir, "Directory for bounds.json");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter; CSV table on stdout");
    sweep->add_option("--config", config, "Scenario JSON")->required();
    sweep->add_option("--param", param, "l, l1..lm, gamma or f1")->required();
    sweep->add_option("--values", values, "Comma separated values")->required();
    sweep->add_option("--out", out_dir, "Directory for per-run outputs");

    auto* compare = app.add_subcommand("compare", "Run the scenario with its ell and with ell = 0");
    compare->add_option("--config", config, "Scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    const auto optional_out = out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
    if (*simulate) {
        return cmd_simulate(config, out_dir, std::cout, std::cerr);
    }
    if (*design) {
        if (targets.empty()) {
            std::cerr << "config error: --targets is required\n";
            return kConfig;
        }
        return cmd_design_gain(config, targets, std::cout, std::cerr);
    }
    if (*spr) {
        return cmd_check_spr(config, std::cout, std::cerr);
    }
    if (*bound) {
        return cmd_bound(config, optional_out, std::cout, std::cerr);
    }
    if (*sweep) {
        return cmd_sweep(config, param, values, optional_out, std::cout, std::cerr);
    }
    if (*compare) {
        return cmd_compare(config, std::cout, std::cerr);
    }
    return kConfig;
}
