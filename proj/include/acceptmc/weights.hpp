#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acceptmc/market.hpp"
#include "acceptmc/risk.hpp"

namespace acceptmc {

/// Continuous distribution function used to smooth the threshold rule into
/// a bounded strategy. Both built-ins have finite first moment.
enum class EtaKind { Normal, Logistic };

double eta_cdf(EtaKind eta, double x);
double eta_sample(EtaKind eta, RngStream& rng);
const char* eta_name(EtaKind eta);

enum class ConstantsProvenance { ClosedForm, TreeExact, MonteCarlo };
const char* provenance_name(ConstantsProvenance p);

using WeightFn = std::function<double(const DriverPath&, int t)>;

/// Per-measure weight processes v_t(f_i) = (b_t-a_t) E[(S_{t+1}-S_t) f_i | F_t]
/// together with the constants that normalize their positive and negative
/// parts into sampling measures. Immutable once computed; evaluators are
/// pure and thread-safe. The referenced scenario must outlive this object.
struct TiltedWeights {
    int m = 0;
    const MarketScenario* scenario = nullptr;
    std::vector<DensityDesc> densities;
    std::vector<double> alphas;

    std::vector<WeightFn> v;
    std::vector<double> c;
    std::vector<double> d_plus;
    std::vector<double> d_minus;
    std::vector<std::vector<double>> mean_v;  // [i][t] = E[v_t(f_i)]

    // Standard errors, nonzero only under Monte-Carlo provenance.
    std::vector<double> c_se;
    std::vector<double> d_plus_se;
    std::vector<double> d_minus_se;
    ConstantsProvenance provenance = ConstantsProvenance::ClosedForm;

    /// Count of strictly positive normalizers (at most 2m).
    int aleph() const;

    /// Measure indices with d_plus + d_minus > 0; these span the effective
    /// parameter space.
    std::vector<int> active_dims() const;
};

struct StrategyParams {
    std::vector<double> s;
    EtaKind eta = EtaKind::Normal;
};

/// Single weight evaluation v_t(f_i) at a path prefix. Convenience wrapper
/// that builds the evaluator on every call; workflows should hold a
/// TiltedWeights instead.
double v_weight(const MarketScenario& scenario, const RiskSpec& spec, int i,
                const DriverPath& path, int t);

/// Builds all weight evaluators and fills c_i, d_i+-, using closed forms
/// where the scenario/density pairing has them, exact enumeration on trees,
/// and Monte-Carlo estimation when a budget is supplied. Estimated
/// constants carry standard errors and are flagged as uncertified.
TiltedWeights compute_constants(const MarketScenario& scenario,
                                const RiskSpec& spec,
                                std::optional<std::int64_t> mc_budget = {},
                                RngStream* rng = nullptr);

/// lambda_t(s) = sum_i s_i v_t(f_i); linear in s, adapted in t.
double lambda_process(const TiltedWeights& weights, const StrategyParams& params,
                      const DriverPath& path, int t);

/// xi_t(s) = (b_t - a_t) eta(lambda_t(s)) + a_t for every period, clamped
/// into [a_t, b_t] against floating rounding.
std::vector<double> strategy_from_params(const TiltedWeights& weights,
                                         const StrategyParams& params,
                                         const DriverPath& path);

/// Path-wise strategy functor for the same rule.
Strategy make_strategy(const TiltedWeights& weights, StrategyParams params);

}  // namespace acceptmc
