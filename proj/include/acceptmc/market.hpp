#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "acceptmc/rng.hpp"

namespace acceptmc {

enum class ScenarioKind { ContinuousDriver, FiniteTree };

/// One realized market path: model drivers z_1..z_T plus the implied
/// discounted prices S_0..S_T. Both are carried because densities read the
/// drivers while wealth reads the prices.
struct DriverPath {
    std::vector<double> drivers;  // length T
    std::vector<double> prices;   // length T+1
};

struct TradingBounds {
    double lo = 0.0;
    double hi = 1.0;
};

/// Discrete-time single-asset market. Immutable after construction and
/// safe to share across workers; every sampling call takes an externally
/// owned stream.
class MarketScenario {
public:
    virtual ~MarketScenario() = default;

    virtual ScenarioKind kind() const = 0;
    virtual int horizon() const = 0;
    virtual double initial_price() const = 0;

    /// Draw a full path under the reference measure.
    virtual DriverPath sample_path(RngStream& rng) const = 0;

    /// Price S_t implied by the driver prefix z_1..z_t (t = prefix size).
    virtual double price(std::span<const double> driver_prefix) const = 0;

    /// Trading bounds (a_t, b_t) at the information set given by the
    /// prefix z_1..z_t. Must satisfy hi > lo everywhere.
    virtual TradingBounds bounds(std::span<const double> driver_prefix) const = 0;

    /// Build a consistent DriverPath from given drivers.
    DriverPath path_from_drivers(std::span<const double> drivers) const;
};

/// Discretely observed geometric Brownian motion:
///   S_{t+1} = S_t * exp(sigma * Z_{t+1} + log_drift),  Z iid N(0,1),
/// with constant trading bounds.
class GbmScenario final : public MarketScenario {
public:
    GbmScenario(int horizon, double s0, double log_drift, double sigma,
                TradingBounds bounds);

    ScenarioKind kind() const override { return ScenarioKind::ContinuousDriver; }
    int horizon() const override { return horizon_; }
    double initial_price() const override { return s0_; }
    DriverPath sample_path(RngStream& rng) const override;
    double price(std::span<const double> driver_prefix) const override;
    TradingBounds bounds(std::span<const double>) const override { return bounds_; }

    double log_drift() const { return log_drift_; }
    double sigma() const { return sigma_; }

private:
    int horizon_;
    double s0_;
    double log_drift_;
    double sigma_;
    TradingBounds bounds_;
};

/// Finite scenario tree with explicit branch probabilities. Nodes are
/// stored in depth-first order; node 0 is the root at depth 0, leaves sit
/// at depth T. Driver values act as branch labels and must be distinct
/// among siblings.
class TreeScenario final : public MarketScenario {
public:
    struct Node {
        int parent = -1;
        int depth = 0;
        double z = 0.0;     // driver on the incoming edge (root: unused)
        double prob = 1.0;  // conditional probability of the incoming edge
        double price = 0.0;
        TradingBounds bnd;
        std::vector<int> children;
    };

    /// Construction input mirrors the node layout. Validates probabilities,
    /// bound ordering and branch label uniqueness.
    explicit TreeScenario(std::vector<Node> nodes);

    ScenarioKind kind() const override { return ScenarioKind::FiniteTree; }
    int horizon() const override { return horizon_; }
    double initial_price() const override { return nodes_[0].price; }
    DriverPath sample_path(RngStream& rng) const override;
    double price(std::span<const double> driver_prefix) const override;
    TradingBounds bounds(std::span<const double> driver_prefix) const override;

    const std::vector<Node>& nodes() const { return nodes_; }

    /// Node index reached by following the driver prefix from the root.
    int node_at(std::span<const double> driver_prefix) const;

    /// Unconditional probability of reaching a node.
    double node_probability(int node) const { return node_prob_[node]; }

    /// Non-leaf node indices in depth-first order (one per information set).
    const std::vector<int>& decision_nodes() const { return decision_nodes_; }

    /// Leaf node indices in depth-first order.
    const std::vector<int>& leaves() const { return leaves_; }

    /// Node sequence root..leaf for a leaf index.
    std::vector<int> path_nodes(int leaf) const;

    DriverPath path_for_leaf(int leaf) const;

private:
    std::vector<Node> nodes_;
    std::vector<double> node_prob_;
    std::vector<int> decision_nodes_;
    std::vector<int> leaves_;
    int horizon_ = 0;
};

/// Adapted holdings evaluated path-wise; the value at period t must depend
/// only on drivers[0..t-1].
using Strategy = std::function<double(const DriverPath&, int t)>;

/// Evaluate a strategy along a path, returning the T holding values.
std::vector<double> evaluate_strategy(const Strategy& strategy,
                                      const DriverPath& path);

/// Portfolio wealth increment W(xi) = sum_t xi_t (S_{t+1} - S_t).
/// Throws ConstraintError naming the first period whose holding violates
/// the scenario bounds (checked with a tiny relative tolerance).
double wealth_increment(const MarketScenario& scenario, const DriverPath& path,
                        std::span<const double> holdings);

/// Exhaustive list of (path, probability) for finite trees.
/// Throws UnsupportedKindError on continuous-driver scenarios.
std::vector<std::pair<DriverPath, double>> enumerate_paths(
    const MarketScenario& scenario);

}  // namespace acceptmc
