#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acceptmc/market.hpp"

namespace acceptmc {

/// Built-in scenario-density families. Each is a Radon-Nikodym derivative
/// dQ/dP evaluated path-wise.
enum class DensityKind {
    Constant,         ///< f == 1 (Q = P)
    NormalMeanShift,  ///< drivers iid N(shift, 1) under Q; GBM scenarios only
    TreeLeafTable,    ///< explicit value per leaf in depth-first order
    TreeExpTilt,      ///< f proportional to exp(tilt * sum z), tree-normalized
};

struct DensityDesc {
    DensityKind kind = DensityKind::Constant;
    double shift = 0.0;               // NormalMeanShift
    double tilt = 0.0;                // TreeExpTilt
    std::vector<double> leaf_values;  // TreeLeafTable
};

/// The scenario measures and penalties generating the risk measure
///   rho(X) = max_i [ -E(X f_i) + alpha_i ].
struct RiskSpec {
    std::vector<DensityDesc> densities;
    std::vector<double> alphas;

    int m() const { return static_cast<int>(densities.size()); }
};

using DensityFn = std::function<double(const DriverPath&)>;

/// Bind a density descriptor to a scenario. Throws ConfigError when the
/// pairing is unsupported (e.g. mean shift on a tree).
DensityFn make_density_fn(const MarketScenario& scenario,
                          const DensityDesc& desc);

/// Validates the spec against the scenario: nonnegative densities and, on
/// finite trees, exact normalization sum f_i * P = 1 within 1e-10. For the
/// continuous built-ins normalization holds by construction.
void validate_risk_spec(const MarketScenario& scenario, const RiskSpec& spec);

/// Exact rho(w0 + W(xi)) by exhaustive enumeration; finite trees only.
/// Translation invariance in w0 holds by construction.
double rho_exact(const MarketScenario& scenario, const RiskSpec& spec,
                 const Strategy& strategy, double w0);

struct McRhoEstimate {
    double estimate = 0.0;            // sup_i [ -est_i + alpha_i ]
    std::vector<double> means;        // est_i of E[(w0 + W) f_i]
    std::vector<double> std_errors;   // per-i standard errors
    int argmax_i = 0;
};

/// Plain Monte-Carlo estimator of rho by direct averaging of W(xi) f_i
/// over reference-measure samples. Draws one sub-seed from the caller's
/// stream and then works on fixed chunks with derived streams, so the
/// result does not depend on the worker count.
McRhoEstimate rho_mc_crosscheck(const MarketScenario& scenario,
                                const RiskSpec& spec, const Strategy& strategy,
                                double w0, std::int64_t n, RngStream& rng,
                                int workers = 1);

}  // namespace acceptmc
