#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acceptmc/sampler.hpp"
#include "acceptmc/search.hpp"

namespace acceptmc {

struct KappaOverride {
    int i = 0;  // 0-based (config files use 1-based indices)
    char sign = '+';
    std::int64_t kappa = 0;
};

/// Parsed and validated run configuration. Owns the scenario; weights and
/// banks built from it must not outlive it.
struct RunConfig {
    std::unique_ptr<MarketScenario> scenario;
    RiskSpec risk;
    EtaKind eta = EtaKind::Normal;
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;

    BoundVariant bound_variant = BoundVariant::Devroye;
    std::vector<KappaOverride> kappa_overrides;
    double kappa_scale = 1.0;

    std::optional<std::int64_t> constants_budget;  // forces Monte-Carlo constants

    TiltRoute sampler_route = TiltRoute::Direct;
    double sampler_envelope = 0.0;

    // Grid overrides; anything unset falls back to default_grid().
    std::optional<std::vector<std::array<double, 2>>> grid_box;
    std::optional<int> grid_points_per_dim;
    std::optional<int> grid_refine_rounds;
    std::optional<double> grid_shrink_factor;
    std::optional<double> grid_tol;

    std::int64_t crosscheck_n = 100000;

    std::optional<std::string> output_dir;
    std::optional<std::string> bank_path;

    /// Stable hash of (scenario, risk, eta, epsilon, delta, seed); guards
    /// bank reuse against certificate-invalidating config changes.
    std::string fingerprint;
};

/// Load from a JSON file or an in-memory JSON string. An optional seed
/// override replaces the config seed before the fingerprint is computed.
RunConfig load_config_file(const std::string& path,
                           std::optional<std::uint64_t> seed_override = {});
RunConfig load_config_string(const std::string& text,
                             std::optional<std::uint64_t> seed_override = {});

/// Final grid for a weights object: defaults overlaid with the config.
GridSpec make_grid_spec(const RunConfig& config, const TiltedWeights& weights);

}  // namespace acceptmc
