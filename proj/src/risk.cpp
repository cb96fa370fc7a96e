#include "acceptmc/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acceptmc/errors.hpp"
#include "acceptmc/parallel.hpp"

namespace acceptmc {

namespace {

double driver_sum(const DriverPath& path) {
    return std::accumulate(path.drivers.begin(), path.drivers.end(), 0.0);
}

}  // namespace

DensityFn make_density_fn(const MarketScenario& scenario,
                          const DensityDesc& desc) {
    switch (desc.kind) {
        case DensityKind::Constant:
            return [](const DriverPath&) { return 1.0; };
        case DensityKind::NormalMeanShift: {
            if (scenario.kind() != ScenarioKind::ContinuousDriver) {
                throw ConfigError(
                    "normal-mean-shift density requires a normal-driver scenario");
            }
            const double theta = desc.shift;
            const double T = static_cast<double>(scenario.horizon());
            // dQ/dP for iid N(theta,1) drivers against iid N(0,1).
            return [theta, T](const DriverPath& path) {
                return std::exp(theta * driver_sum(path) -
                                0.5 * theta * theta * T);
            };
        }
        case DensityKind::TreeLeafTable: {
            const auto* tree = dynamic_cast<const TreeScenario*>(&scenario);
            if (tree == nullptr) {
                throw ConfigError("leaf-table density requires a tree scenario");
            }
            if (desc.leaf_values.size() != tree->leaves().size()) {
                throw ConfigError(
                    "leaf-table density needs one value per leaf (depth-first order)");
            }
            for (double v : desc.leaf_values) {
                if (!(v >= 0.0)) {
                    throw ConfigError("leaf-table density values must be nonnegative");
                }
            }
            const auto values = desc.leaf_values;
            return [tree, values](const DriverPath& path) {
                const int node = tree->node_at(path.drivers);
                const auto& leaves = tree->leaves();
                const auto it = std::find(leaves.begin(), leaves.end(), node);
                if (it == leaves.end()) {
                    throw std::invalid_argument("leaf-table density: path is not a full path");
                }
                return values[static_cast<std::size_t>(it - leaves.begin())];
            };
        }
        case DensityKind::TreeExpTilt: {
            const auto* tree = dynamic_cast<const TreeScenario*>(&scenario);
            if (tree == nullptr) {
                throw ConfigError("exp-tilt density requires a tree scenario");
            }
            const double tilt = desc.tilt;
            double norm = 0.0;
            for (int leaf : tree->leaves()) {
                norm += tree->node_probability(leaf) *
                        std::exp(tilt * driver_sum(tree->path_for_leaf(leaf)));
            }
            return [tilt, norm](const DriverPath& path) {
                return std::exp(tilt * driver_sum(path)) / norm;
            };
        }
    }
    throw ConfigError("unknown density kind");
}

void validate_risk_spec(const MarketScenario& scenario, const RiskSpec& spec) {
    if (spec.densities.empty()) {
        throw ConfigError("risk spec needs at least one scenario measure");
    }
    if (spec.densities.size() != spec.alphas.size()) {
        throw ConfigError("risk spec: densities and penalties must pair up");
    }
    if (scenario.kind() != ScenarioKind::FiniteTree) {
        for (const auto& desc : spec.densities) {
            make_density_fn(scenario, desc);  // surfaces pairing errors
        }
        return;
    }
    const auto paths = enumerate_paths(scenario);
    for (int i = 0; i < spec.m(); ++i) {
        const auto f = make_density_fn(scenario, spec.densities[i]);
        double mass = 0.0;
        for (const auto& [path, prob] : paths) {
            const double value = f(path);
            if (!(value >= 0.0)) {
                throw ConfigError("density must be nonnegative path-wise");
            }
            mass += value * prob;
        }
        if (std::abs(mass - 1.0) > 1e-10) {
            throw ConfigError("scenario measure " + std::to_string(i + 1) +
                              " is not normalized on the tree");
        }
    }
}

double rho_exact(const MarketScenario& scenario, const RiskSpec& spec,
                 const Strategy& strategy, double w0) {
    if (scenario.kind() != ScenarioKind::FiniteTree) {
        throw UnsupportedKindError("rho_exact: requires a finite-tree scenario");
    }
    const auto paths = enumerate_paths(scenario);
    std::vector<DensityFn> fs;
    fs.reserve(spec.densities.size());
    for (const auto& desc : spec.densities) {
        fs.push_back(make_density_fn(scenario, desc));
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.m(); ++i) {
        double e_wf = 0.0;
        for (const auto& [path, prob] : paths) {
            const auto holdings = evaluate_strategy(strategy, path);
            e_wf += prob * wealth_increment(scenario, path, holdings) * fs[i](path);
        }
        best = std::max(best, -e_wf + spec.alphas[i]);
    }
    // E f_i = 1 (validated), so the w0 term separates exactly.
    return best - w0;
}

McRhoEstimate rho_mc_crosscheck(const MarketScenario& scenario,
                                const RiskSpec& spec, const Strategy& strategy,
                                double w0, std::int64_t n, RngStream& rng,
                                int workers) {
    if (n < 2) throw std::invalid_argument("rho_mc_crosscheck: need n >= 2");
    const int m = spec.m();
    std::vector<DensityFn> fs;
    fs.reserve(spec.densities.size());
    for (const auto& desc : spec.densities) {
        fs.push_back(make_density_fn(scenario, desc));
    }

    const std::uint64_t sub_seed = rng.next_u64();
    constexpr std::int64_t kChunk = 1 << 14;
    const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(n_chunks)),
        sq_sums(static_cast<std::size_t>(n_chunks));

    parallel_for(n_chunks, workers, [&](std::int64_t c) {
        RngStream stream = RngStream::derive(sub_seed, "rho-mc", static_cast<std::uint64_t>(c));
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(n, begin + kChunk);
        std::vector<double> sum(static_cast<std::size_t>(m), 0.0);
        std::vector<double> sq(static_cast<std::size_t>(m), 0.0);
        for (std::int64_t k = begin; k < end; ++k) {
            const DriverPath path = scenario.sample_path(stream);
            const auto holdings = evaluate_strategy(strategy, path);
            const double wealth = wealth_increment(scenario, path, holdings);
            for (int i = 0; i < m; ++i) {
                const double x = wealth * fs[static_cast<std::size_t>(i)](path);
                sum[static_cast<std::size_t>(i)] += x;
                sq[static_cast<std::size_t>(i)] += x * x;
            }
        }
        sums[static_cast<std::size_t>(c)] = std::move(sum);
        sq_sums[static_cast<std::size_t>(c)] = std::move(sq);
    });

    McRhoEstimate out;
    out.means.resize(static_cast<std::size_t>(m));
    out.std_errors.resize(static_cast<std::size_t>(m));
    out.estimate = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        double sum = 0.0, sq = 0.0;
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            sum += sums[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
            sq += sq_sums[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
        }
        const double mean_w = sum / static_cast<double>(n);
        const double var =
            std::max(0.0, sq / static_cast<double>(n) - mean_w * mean_w);
        out.means[static_cast<std::size_t>(i)] = w0 + mean_w;
        out.std_errors[static_cast<std::size_t>(i)] =
            std::sqrt(var / static_cast<double>(n));
        const double d_i = -(w0 + mean_w) + spec.alphas[static_cast<std::size_t>(i)];
        if (d_i > out.estimate) {
            out.estimate = d_i;
            out.argmax_i = i;
        }
    }
    return out;
}

}  // namespace acceptmc
