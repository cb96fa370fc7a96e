#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acceptmc/config.hpp"

#include <json.hpp>

namespace acceptmc {

struct CommandOptions {
    int workers = 1;
    std::optional<std::string> out_dir;    // overrides config output.dir
    std::optional<std::string> bank_path;  // overrides config output.bank
};

struct CommandResult {
    int exit_code = 0;
    nlohmann::ordered_json report;
    std::string human;
};

/// Constants, aleph and certified sample sizes.
CommandResult cmd_plan(const RunConfig& config, const CommandOptions& options = {});

/// Build the sample bank and persist it (bank path required).
CommandResult cmd_sample(const RunConfig& config, const CommandOptions& options = {});

/// Full pipeline: plan, bank, grid search; emits capital, strategy and
/// certificate. Deterministic given (config, seed) for any worker count.
CommandResult cmd_run(const RunConfig& config, const CommandOptions& options = {});

/// rho_hat at a fixed parameter vector plus the plain Monte-Carlo
/// cross-check.
CommandResult cmd_eval(const RunConfig& config, const std::vector<double>& s,
                       double w0, const CommandOptions& options = {});

/// Exhaustive verification on finite trees: exact pipeline against the
/// estimator, plus the minimal-capital LP baseline.
CommandResult cmd_oracle_check(const RunConfig& config,
                               const CommandOptions& options = {});

}  // namespace acceptmc
