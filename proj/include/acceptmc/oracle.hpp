#pragma once

#include <vector>

#include "acceptmc/weights.hpp"

namespace acceptmc {

/// Exact desk-scale evaluation of every pipeline quantity on a finite tree
/// by exhaustive enumeration. The tilted probability uses the closed form
/// P(lambda - Z > 0 | path, t) = eta(lambda_t), so no sampling enters.
class ExactPipeline {
public:
    ExactPipeline(const MarketScenario& scenario, const RiskSpec& spec,
                  EtaKind eta);

    int m() const { return weights_.m; }
    const TiltedWeights& weights() const { return weights_; }

    /// v_t(f_i) at the information set of a path prefix.
    double v(int i, const DriverPath& path, int t) const;

    double c(int i) const { return weights_.c[static_cast<std::size_t>(i)]; }
    double d_plus(int i) const { return weights_.d_plus[static_cast<std::size_t>(i)]; }
    double d_minus(int i) const { return weights_.d_minus[static_cast<std::size_t>(i)]; }

    double lambda(std::span<const double> s, const DriverPath& path, int t) const;

    /// E[W(xi(s)) f_i], exact.
    double expected_wealth_density(int i, std::span<const double> s) const;

    /// rho(w0 + W(xi(s))), exact.
    double rho(std::span<const double> s, double w0 = 0.0) const;

    /// (mu_i(sign) x eta){ lambda(s) - Z > 0 }, exact.
    double tilted_probability(int i, char sign, std::span<const double> s) const;

private:
    const TreeScenario* tree_;
    RiskSpec spec_;
    EtaKind eta_;
    TiltedWeights weights_;
    std::vector<std::pair<DriverPath, double>> paths_;
};

struct LpResult {
    double w0_min = 0.0;
    std::vector<double> xi;      // one holding per decision node (depth-first)
    std::vector<double> slacks;  // per-measure constraint slack at the optimum
};

/// Exact minimal capital on a finite tree: minimize w0 subject to
///   w0 + sum_paths P f_i W(xi) >= alpha_i  for every i,
///   a <= xi <= b per decision node,
/// solved with the dense simplex. This bounds the parametric family from
/// below since it optimizes over all adapted strategies.
LpResult min_capital_lp(const MarketScenario& scenario, const RiskSpec& spec);

}  // namespace acceptmc
