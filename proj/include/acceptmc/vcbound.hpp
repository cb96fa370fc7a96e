#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acceptmc/weights.hpp"

namespace acceptmc {

/// Uniform-deviation tail bounds for empirical frequencies over a class of
/// finite VC dimension V:
///   Devroye:  4 n^{2V} exp(-2 n eps^2 + 4 eps + 4 eps^2)
///   Basic:    8 s_n    exp(-n eps^2 / 32), s_n the shatter bound
enum class BoundVariant { Devroye, Basic };

const char* bound_variant_name(BoundVariant v);
BoundVariant bound_variant_from_name(const std::string& name);

/// VC dimension bound for halfspace classes spanned by m features plus the
/// randomization coordinate: m + 1.
int halfspace_vc_dim(int m);

/// Shatter-coefficient bound: n^V when V > 2 and n > 2V, otherwise the
/// trivial 2^n. Returned as double; large regimes overflow to inf.
double sauer_bound(std::int64_t n, int vc_dim);

/// log of the deviation bound; all planner arithmetic runs here because
/// n^{2V} overflows double well inside the useful range.
double log_deviation_bound(std::int64_t n, double eps, int vc_dim,
                           BoundVariant variant);

double deviation_bound(std::int64_t n, double eps, int vc_dim,
                       BoundVariant variant);

/// Number of distinct subsets of `points` cut out by homogeneous
/// halfspaces {x : r.x > 0}, r in R^dim, counted exhaustively via a
/// feasibility LP per candidate subset. Limited to 20 points.
int empirical_shatter(const std::vector<std::vector<double>>& points, int dim);

/// Smallest n whose deviation bound at eps is <= delta.
std::int64_t minimal_kappa(double eps, double delta, int vc_dim,
                           BoundVariant variant);

struct PlanEntry {
    int i = 0;         // measure index, 0-based
    char sign = '+';
    double d = 0.0;    // normalizer
    double eps_over_d = 0.0;
    std::int64_t kappa = 0;
    double log_bound_value = 0.0;  // at kappa
};

/// Certified sampling budget: one minimal kappa per nonzero tilted measure.
struct SamplePlan {
    double epsilon = 0.0;
    double delta = 0.0;
    int vc_dim = 0;
    BoundVariant variant = BoundVariant::Devroye;
    std::vector<PlanEntry> entries;
    bool constants_certified = true;  // false when d's are MC estimates

    std::int64_t total_samples() const;
    const PlanEntry* find(int i, char sign) const;
};

/// Solves each sample-size inequality by doubling plus bisection. An empty
/// plan (aleph = 0) is returned as-is; callers treat it as a warning.
SamplePlan plan_samples(const TiltedWeights& weights, double epsilon,
                        double delta, BoundVariant variant = BoundVariant::Devroye);

/// Smallest certified epsilon for externally chosen kappas (used when a
/// config overrides or scales the planned budgets).
double certify_epsilon(const SamplePlan& plan, double delta);

}  // namespace acceptmc
