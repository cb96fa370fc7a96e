#include "acceptmc/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acceptmc/errors.hpp"

namespace acceptmc {

GridSpec default_grid(const TiltedWeights& weights) {
    GridSpec grid;
    grid.active_dims = weights.active_dims();
    double alpha_max = 0.0;
    for (double a : weights.alphas) alpha_max = std::max(alpha_max, a);
    for (int i : grid.active_dims) {
        const double d = weights.d_plus[static_cast<std::size_t>(i)] +
                         weights.d_minus[static_cast<std::size_t>(i)];
        const double b = 10.0 * std::max(1.0, alpha_max / d);
        grid.box.push_back({-b, b});
    }
    return grid;
}

std::vector<std::array<double, 2>> refine(
    const std::vector<std::array<double, 2>>& box, std::span<const double> best,
    double shrink_factor) {
    if (best.size() != box.size()) {
        throw std::invalid_argument("refine: dimension mismatch");
    }
    std::vector<std::array<double, 2>> out(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) {
        const double half = 0.5 * (box[k][1] - box[k][0]) * shrink_factor;
        out[k][0] = std::max(box[k][0], best[k] - half);
        out[k][1] = std::min(box[k][1], best[k] + half);
    }
    return out;
}

namespace {

void validate_grid(const GridSpec& grid, const TiltedWeights& weights) {
    if (grid.box.size() != grid.active_dims.size()) {
        throw ConfigError("grid box must list one interval per active dimension");
    }
    for (const auto& interval : grid.box) {
        if (!(interval[0] < interval[1])) {
            throw ConfigError("grid box intervals need lo < hi");
        }
    }
    if (grid.points_per_dim < 2) throw ConfigError("points_per_dim must be >= 2");
    if (grid.refine_rounds < 1) throw ConfigError("refine_rounds must be >= 1");
    if (!(grid.shrink_factor > 0.0 && grid.shrink_factor <= 1.0)) {
        throw ConfigError("shrink_factor must lie in (0, 1]");
    }
    for (int i : grid.active_dims) {
        if (i < 0 || i >= weights.m) {
            throw ConfigError("grid active dimension out of range");
        }
        if (weights.d_plus[static_cast<std::size_t>(i)] +
                weights.d_minus[static_cast<std::size_t>(i)] <= 0.0) {
            throw ConfigError("grid lists a zero-measure dimension as active");
        }
    }
}

std::vector<std::vector<double>> grid_points(
    const std::vector<std::array<double, 2>>& box,
    const std::vector<int>& active_dims, int m, int points_per_dim) {
    const std::size_t dims = box.size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < dims; ++k) total *= static_cast<std::size_t>(points_per_dim);
    std::vector<std::vector<double>> points;
    points.reserve(total);
    std::vector<int> index(dims, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<double> s(static_cast<std::size_t>(m), 0.0);
        for (std::size_t k = 0; k < dims; ++k) {
            const double frac = static_cast<double>(index[k]) /
                                static_cast<double>(points_per_dim - 1);
            s[static_cast<std::size_t>(active_dims[k])] =
                box[k][0] + frac * (box[k][1] - box[k][0]);
        }
        points.push_back(std::move(s));
        for (std::size_t k = dims; k-- > 0;) {
            if (++index[k] < points_per_dim) break;
            index[k] = 0;
        }
    }
    return points;
}

bool lexicographically_before(const std::vector<double>& a,
                              const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

SearchResult run_search(const TiltedWeights& weights, const SampleBank& bank,
                        const GridSpec& grid, int workers) {
    SearchResult result;
    result.certificate = Certificate{bank.epsilon, bank.delta, bank.aleph};
    result.s_star.assign(static_cast<std::size_t>(weights.m), 0.0);

    if (grid.active_dims.empty()) {
        // All tilted measures vanish: rho_hat(s) is the same constant for
        // every s, so the capital is exact and the zero strategy parametrizes
        // the answer.
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < weights.m; ++i) {
            best = std::max(best, weights.alphas[static_cast<std::size_t>(i)] -
                                      weights.c[static_cast<std::size_t>(i)]);
        }
        result.w0_star = best;
        result.note =
            "all tilted measures are zero; rho is constant in s and the "
            "reported capital is exact";
        return result;
    }

    validate_grid(grid, weights);

    std::vector<std::array<double, 2>> box = grid.box;
    bool have_best = false;
    std::vector<double> best_s;
    double best_rho = std::numeric_limits<double>::infinity();

    for (int round = 0; round < grid.refine_rounds; ++round) {
        const auto points =
            grid_points(box, grid.active_dims, weights.m, grid.points_per_dim);
        const auto estimates = rho_hat_batch(weights, bank, points, workers);
        const double previous_best = best_rho;
        for (const auto& est : estimates) {
            if (est.rho_hat < best_rho ||
                (est.rho_hat == best_rho && have_best &&
                 lexicographically_before(est.s, best_s))) {
                best_rho = est.rho_hat;
                best_s = est.s;
                have_best = true;
            }
        }
        RoundTrace trace;
        trace.round = round;
        trace.best_s = best_s;
        trace.best_rho = best_rho;
        trace.box = box;
        trace.evaluated = static_cast<std::int64_t>(points.size());
        result.trace.push_back(std::move(trace));

        if (round + 1 < grid.refine_rounds) {
            std::vector<double> active_best(grid.active_dims.size());
            for (std::size_t k = 0; k < grid.active_dims.size(); ++k) {
                active_best[k] = best_s[static_cast<std::size_t>(grid.active_dims[k])];
            }
            box = refine(box, active_best, grid.shrink_factor);
        }
        if (round > 0 && previous_best - best_rho < grid.tol) break;
    }

    result.w0_star = best_rho;
    result.s_star = best_s;
    return result;
}

}  // namespace acceptmc
