#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "acceptmc/estimator.hpp"

namespace acceptmc {

/// Grid over the effective parameter coordinates (measures with a nonzero
/// normalizer). Inactive coordinates are pinned to zero.
struct GridSpec {
    std::vector<int> active_dims;
    std::vector<std::array<double, 2>> box;  // per active dim
    int points_per_dim = 15;
    int refine_rounds = 3;
    double shrink_factor = 0.5;
    double tol = 1e-6;  // stop when a round improves by less than this
};

struct RoundTrace {
    int round = 0;
    std::vector<double> best_s;  // full m-vector
    double best_rho = 0.0;
    std::vector<std::array<double, 2>> box;
    std::int64_t evaluated = 0;
};

struct SearchResult {
    double w0_star = 0.0;
    std::vector<double> s_star;
    std::vector<RoundTrace> trace;
    Certificate certificate;
    std::string note;
};

/// Default search box: per active dim [-B, B] with
/// B = 10 * max(1, max_i alpha_i / (d_i+ + d_i-)).
GridSpec default_grid(const TiltedWeights& weights);

/// Shrinks the box around a point and clips it back into the given box.
std::vector<std::array<double, 2>> refine(
    const std::vector<std::array<double, 2>>& box, std::span<const double> best,
    double shrink_factor);

/// Iterated grid minimization of rho_hat over one immutable bank (the
/// uniform certificate covers every s simultaneously, so no resampling
/// happens between rounds). The reported minimum is taken over all
/// evaluated nodes across rounds; ties resolve to the lexicographically
/// smallest s.
SearchResult run_search(const TiltedWeights& weights, const SampleBank& bank,
                        const GridSpec& grid, int workers = 1);

}  // namespace acceptmc
