#include "acceptmc/market.hpp"

#include <cmath>
#include <set>
#include <string>

#include "acceptmc/errors.hpp"

namespace acceptmc {

DriverPath MarketScenario::path_from_drivers(
    std::span<const double> drivers) const {
    if (static_cast<int>(drivers.size()) != horizon()) {
        throw std::invalid_argument("path_from_drivers: need exactly T drivers");
    }
    DriverPath path;
    path.drivers.assign(drivers.begin(), drivers.end());
    path.prices.resize(drivers.size() + 1);
    for (std::size_t t = 0; t <= drivers.size(); ++t) {
        path.prices[t] = price(drivers.subspan(0, t));
    }
    return path;
}

GbmScenario::GbmScenario(int horizon, double s0, double log_drift, double sigma,
                         TradingBounds bounds)
    : horizon_(horizon), s0_(s0), log_drift_(log_drift), sigma_(sigma),
      bounds_(bounds) {
    if (horizon < 1) throw ConfigError("GbmScenario: horizon must be >= 1");
    if (!(s0 > 0.0)) throw ConfigError("GbmScenario: s0 must be positive");
    if (!(sigma > 0.0)) throw ConfigError("GbmScenario: sigma must be positive");
    if (!(bounds.hi > bounds.lo)) {
        throw ConfigError("GbmScenario: upper bound must exceed lower bound");
    }
}

DriverPath GbmScenario::sample_path(RngStream& rng) const {
    DriverPath path;
    path.drivers.resize(horizon_);
    path.prices.resize(horizon_ + 1);
    path.prices[0] = s0_;
    for (int t = 0; t < horizon_; ++t) {
        const double z = rng.normal();
        path.drivers[t] = z;
        path.prices[t + 1] = path.prices[t] * std::exp(sigma_ * z + log_drift_);
    }
    return path;
}

double GbmScenario::price(std::span<const double> driver_prefix) const {
    double sum = 0.0;
    for (double z : driver_prefix) sum += z;
    const double t = static_cast<double>(driver_prefix.size());
    return s0_ * std::exp(sigma_ * sum + log_drift_ * t);
}

TreeScenario::TreeScenario(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw ConfigError("TreeScenario: no nodes");
    node_prob_.assign(nodes_.size(), 0.0);
    node_prob_[0] = 1.0;
    for (std::size_t idx = 0; idx < nodes_.size(); ++idx) {
        const Node& node = nodes_[idx];
        if (idx == 0) {
            if (node.parent != -1 || node.depth != 0) {
                throw ConfigError("TreeScenario: node 0 must be the root");
            }
        } else {
            if (node.parent < 0 || node.parent >= static_cast<int>(idx)) {
                throw ConfigError("TreeScenario: nodes must come after parents");
            }
            node_prob_[idx] = node_prob_[node.parent] * node.prob;
            if (!(node.prob > 0.0)) {
                throw ConfigError("TreeScenario: branch probabilities must be positive");
            }
        }
        if (!(node.price > 0.0)) {
            throw ConfigError("TreeScenario: prices must be positive");
        }
        if (!node.children.empty()) {
            if (!(node.bnd.hi > node.bnd.lo)) {
                throw ConfigError("TreeScenario: upper bound must exceed lower bound");
            }
            double total = 0.0;
            std::set<double> labels;
            for (int child : node.children) {
                if (child <= static_cast<int>(idx) ||
                    child >= static_cast<int>(nodes_.size()) ||
                    nodes_[child].parent != static_cast<int>(idx)) {
                    throw ConfigError("TreeScenario: inconsistent child link");
                }
                total += nodes_[child].prob;
                if (!labels.insert(nodes_[child].z).second) {
                    throw ConfigError("TreeScenario: duplicate driver label among siblings");
                }
            }
            if (std::abs(total - 1.0) > 1e-12) {
                throw ConfigError("TreeScenario: branch probabilities must sum to 1");
            }
        }
        horizon_ = std::max(horizon_, node.depth);
    }
    for (std::size_t idx = 0; idx < nodes_.size(); ++idx) {
        const Node& node = nodes_[idx];
        if (node.children.empty()) {
            if (node.depth != horizon_) {
                throw ConfigError("TreeScenario: all leaves must sit at depth T");
            }
            leaves_.push_back(static_cast<int>(idx));
        } else {
            decision_nodes_.push_back(static_cast<int>(idx));
        }
    }
    if (horizon_ < 1) throw ConfigError("TreeScenario: horizon must be >= 1");
    double mass = 0.0;
    for (int leaf : leaves_) mass += node_prob_[leaf];
    if (std::abs(mass - 1.0) > 1e-12) {
        throw ConfigError("TreeScenario: leaf probabilities must sum to 1");
    }
}

DriverPath TreeScenario::sample_path(RngStream& rng) const {
    DriverPath path;
    path.drivers.reserve(horizon_);
    path.prices.reserve(horizon_ + 1);
    int node = 0;
    path.prices.push_back(nodes_[0].price);
    while (!nodes_[node].children.empty()) {
        const auto& kids = nodes_[node].children;
        double u = rng.uniform();
        int chosen = kids.back();
        for (int child : kids) {
            u -= nodes_[child].prob;
            if (u <= 0.0) {
                chosen = child;
                break;
            }
        }
        node = chosen;
        path.drivers.push_back(nodes_[node].z);
        path.prices.push_back(nodes_[node].price);
    }
    return path;
}

int TreeScenario::node_at(std::span<const double> driver_prefix) const {
    int node = 0;
    for (double z : driver_prefix) {
        int next = -1;
        for (int child : nodes_[node].children) {
            if (nodes_[child].z == z) {
                next = child;
                break;
            }
        }
        if (next < 0) {
            throw std::invalid_argument("TreeScenario: driver prefix not on the tree");
        }
        node = next;
    }
    return node;
}

double TreeScenario::price(std::span<const double> driver_prefix) const {
    return nodes_[node_at(driver_prefix)].price;
}

TradingBounds TreeScenario::bounds(std::span<const double> driver_prefix) const {
    return nodes_[node_at(driver_prefix)].bnd;
}

std::vector<int> TreeScenario::path_nodes(int leaf) const {
    std::vector<int> chain;
    for (int node = leaf; node >= 0; node = nodes_[node].parent) {
        chain.push_back(node);
    }
    return {chain.rbegin(), chain.rend()};
}

DriverPath TreeScenario::path_for_leaf(int leaf) const {
    DriverPath path;
    const auto chain = path_nodes(leaf);
    path.prices.reserve(chain.size());
    path.drivers.reserve(chain.size() - 1);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        path.prices.push_back(nodes_[chain[k]].price);
        if (k > 0) path.drivers.push_back(nodes_[chain[k]].z);
    }
    return path;
}

std::vector<double> evaluate_strategy(const Strategy& strategy,
                                      const DriverPath& path) {
    std::vector<double> values(path.drivers.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        values[t] = strategy(path, static_cast<int>(t));
    }
    return values;
}

double wealth_increment(const MarketScenario& scenario, const DriverPath& path,
                        std::span<const double> holdings) {
    const int T = scenario.horizon();
    if (static_cast<int>(holdings.size()) != T ||
        static_cast<int>(path.drivers.size()) != T) {
        throw std::invalid_argument("wealth_increment: size mismatch with horizon");
    }
    double wealth = 0.0;
    for (int t = 0; t < T; ++t) {
        const auto bnd = scenario.bounds(
            std::span<const double>(path.drivers).subspan(0, t));
        const double slack = 1e-9 * (1.0 + std::abs(bnd.lo) + std::abs(bnd.hi));
        if (holdings[t] < bnd.lo - slack || holdings[t] > bnd.hi + slack) {
            throw ConstraintError(
                "wealth_increment: holding outside [a_t, b_t] at t=" +
                    std::to_string(t),
                t);
        }
        wealth += holdings[t] * (path.prices[t + 1] - path.prices[t]);
    }
    return wealth;
}

std::vector<std::pair<DriverPath, double>> enumerate_paths(
    const MarketScenario& scenario) {
    const auto* tree = dynamic_cast<const TreeScenario*>(&scenario);
    if (scenario.kind() != ScenarioKind::FiniteTree || tree == nullptr) {
        throw UnsupportedKindError(
            "enumerate_paths: requires a finite-tree scenario");
    }
    std::vector<std::pair<DriverPath, double>> out;
    out.reserve(tree->leaves().size());
    for (int leaf : tree->leaves()) {
        out.emplace_back(tree->path_for_leaf(leaf), tree->node_probability(leaf));
    }
    return out;
}

}  // namespace acceptmc
