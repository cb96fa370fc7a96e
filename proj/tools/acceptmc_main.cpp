// Batch CLI: plan certified sample sizes, build banks, search for the
// near-minimal capital and evaluate fixed strategies.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptmc/commands.hpp"
#include "acceptmc/errors.hpp"

namespace {

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-minimal capital and trading strategies for scenario-based "
                 "convex risk measures"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_value = 0;
    bool seed_set = false;
    acceptmc::CommandOptions options;
    std::string s_text;
    double w0 = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t v) { seed_value = v; seed_set = true; },
               "override the config seed");
        cmd->add_option("--workers", options.workers, "worker thread cap")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", options.out_dir, "output directory for reports");
        cmd->add_option("--bank", options.bank_path,
                        "sample bank file (reused when present)");
    };

    CLI::App* plan = app.add_subcommand("plan", "compute constants and certified sample sizes");
    add_common(plan);
    CLI::App* sample = app.add_subcommand("sample", "build and persist the sample bank");
    add_common(sample);
    CLI::App* run = app.add_subcommand("run", "full search for (w0*, s*)");
    add_common(run);
    CLI::App* eval = app.add_subcommand("eval", "evaluate rho_hat at a fixed s");
    add_common(eval);
    eval->add_option("--s", s_text, "comma-separated parameter vector (one per measure)")
        ->required();
    eval->add_option("--w0", w0, "initial capital for the evaluation report");
    CLI::App* oracle = app.add_subcommand("oracle-check",
                                          "exhaustive verification on finite trees");
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = acceptmc::load_config_file(
            config_path,
            seed_set ? std::optional<std::uint64_t>(seed_value) : std::nullopt);
        acceptmc::CommandResult result;
        if (plan->parsed()) {
            result = acceptmc::cmd_plan(config, options);
        } else if (sample->parsed()) {
            result = acceptmc::cmd_sample(config, options);
        } else if (run->parsed()) {
            result = acceptmc::cmd_run(config, options);
        } else if (eval->parsed()) {
            result = acceptmc::cmd_eval(config, parse_vector(s_text), w0, options);
        } else {
            result = acceptmc::cmd_oracle_check(config, options);
        }
        std::cout << result.human;
        std::cout << result.report.dump(2) << "\n";
        return result.exit_code;
    } catch (const acceptmc::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
