#include "acceptmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acceptmc/errors.hpp"
#include "acceptmc/lp.hpp"

namespace acceptmc {

ExactPipeline::ExactPipeline(const MarketScenario& scenario, const RiskSpec& spec,
                             EtaKind eta)
    : tree_(dynamic_cast<const TreeScenario*>(&scenario)), spec_(spec), eta_(eta) {
    if (tree_ == nullptr) {
        throw UnsupportedKindError("ExactPipeline: requires a finite-tree scenario");
    }
    if (tree_->leaves().size() > 10000) {
        throw std::invalid_argument("ExactPipeline: tree exceeds the 10^4 path limit");
    }
    weights_ = compute_constants(scenario, spec);
    paths_ = enumerate_paths(scenario);
}

double ExactPipeline::v(int i, const DriverPath& path, int t) const {
    return weights_.v[static_cast<std::size_t>(i)](path, t);
}

double ExactPipeline::lambda(std::span<const double> s, const DriverPath& path,
                             int t) const {
    StrategyParams params{{s.begin(), s.end()}, eta_};
    return lambda_process(weights_, params, path, t);
}

double ExactPipeline::expected_wealth_density(int i,
                                              std::span<const double> s) const {
    const StrategyParams params{{s.begin(), s.end()}, eta_};
    const DensityFn f = make_density_fn(*tree_, spec_.densities[static_cast<std::size_t>(i)]);
    double total = 0.0;
    for (const auto& [path, prob] : paths_) {
        const auto holdings = strategy_from_params(weights_, params, path);
        double wealth = 0.0;
        for (std::size_t t = 0; t < holdings.size(); ++t) {
            wealth += holdings[t] * (path.prices[t + 1] - path.prices[t]);
        }
        total += prob * wealth * f(path);
    }
    return total;
}

double ExactPipeline::rho(std::span<const double> s, double w0) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < weights_.m; ++i) {
        best = std::max(best, -expected_wealth_density(i, s) +
                                  spec_.alphas[static_cast<std::size_t>(i)]);
    }
    return best - w0;
}

double ExactPipeline::tilted_probability(int i, char sign,
                                         std::span<const double> s) const {
    const double d = (sign == '+') ? d_plus(i) : d_minus(i);
    if (d <= 0.0) {
        throw ZeroMeasureError("tilted_probability: zero normalizer");
    }
    const int T = tree_->horizon();
    double prob = 0.0;
    for (const auto& [path, p_path] : paths_) {
        for (int t = 0; t < T; ++t) {
            const double vv = v(i, path, t);
            const double part = (sign == '+') ? std::max(vv, 0.0) : std::max(-vv, 0.0);
            if (part <= 0.0) continue;
            prob += p_path * part * eta_cdf(eta_, lambda(s, path, t));
        }
    }
    return prob / d;
}

LpResult min_capital_lp(const MarketScenario& scenario, const RiskSpec& spec) {
    const auto* tree = dynamic_cast<const TreeScenario*>(&scenario);
    if (tree == nullptr || scenario.kind() != ScenarioKind::FiniteTree) {
        throw UnsupportedKindError("min_capital_lp: requires a finite-tree scenario");
    }
    if (tree->nodes().size() > 500) {
        throw std::invalid_argument("min_capital_lp: tree exceeds the 500 node limit");
    }
    validate_risk_spec(scenario, spec);

    const auto& decisions = tree->decision_nodes();
    const int n_dec = static_cast<int>(decisions.size());
    const int m = spec.m();
    const auto& nodes = tree->nodes();

    // coef[i][k]: contribution of holding xi at decision node k to
    // E[W(xi) f_i], i.e. sum over paths through the node of
    // P(path) f_i(path) (S_{t+1} - S_node).
    std::vector<std::vector<double>> coef(
        static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n_dec), 0.0));
    std::vector<int> node_to_decision(nodes.size(), -1);
    for (int k = 0; k < n_dec; ++k) {
        node_to_decision[static_cast<std::size_t>(decisions[static_cast<std::size_t>(k)])] = k;
    }
    for (int i = 0; i < m; ++i) {
        const DensityFn f = make_density_fn(*tree, spec.densities[static_cast<std::size_t>(i)]);
        for (int leaf : tree->leaves()) {
            const auto chain = tree->path_nodes(leaf);
            const DriverPath path = tree->path_for_leaf(leaf);
            const double mass = tree->node_probability(leaf) * f(path);
            for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
                const int k = node_to_decision[static_cast<std::size_t>(chain[t])];
                coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +=
                    mass * (nodes[static_cast<std::size_t>(chain[t + 1])].price -
                            nodes[static_cast<std::size_t>(chain[t])].price);
            }
        }
    }

    // Variables: w0 = p - q (both >= 0), then y_k = xi_k - a_k in [0, u_k].
    // Constraints (Ax <= b form):
    //   risk i:   -p + q - sum_k coef[i][k] y_k <= -alpha_i + sum_k coef[i][k] a_k
    //   bounds:   y_k <= u_k
    const int n_vars = 2 + n_dec;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (int i = 0; i < m; ++i) {
        std::vector<double> row(static_cast<std::size_t>(n_vars), 0.0);
        row[0] = -1.0;
        row[1] = 1.0;
        double rhs = -spec.alphas[static_cast<std::size_t>(i)];
        for (int k = 0; k < n_dec; ++k) {
            const auto& node = nodes[static_cast<std::size_t>(decisions[static_cast<std::size_t>(k)])];
            row[static_cast<std::size_t>(2 + k)] =
                -coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            rhs += coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * node.bnd.lo;
        }
        A.push_back(std::move(row));
        b.push_back(rhs);
    }
    for (int k = 0; k < n_dec; ++k) {
        const auto& node = nodes[static_cast<std::size_t>(decisions[static_cast<std::size_t>(k)])];
        std::vector<double> row(static_cast<std::size_t>(n_vars), 0.0);
        row[static_cast<std::size_t>(2 + k)] = 1.0;
        A.push_back(std::move(row));
        b.push_back(node.bnd.hi - node.bnd.lo);
    }
    std::vector<double> c(static_cast<std::size_t>(n_vars), 0.0);
    c[0] = -1.0;  // maximize -w0
    c[1] = 1.0;

    const auto solution = lp::simplex_max(A, b, c);
    if (solution.status != lp::Status::Optimal) {
        // Cannot happen: w0 large enough is always feasible and w0 is
        // bounded below by the box constraints.
        throw std::runtime_error("min_capital_lp: solver failed");
    }

    LpResult out;
    out.w0_min = solution.x[0] - solution.x[1];
    out.xi.resize(static_cast<std::size_t>(n_dec));
    for (int k = 0; k < n_dec; ++k) {
        const auto& node = nodes[static_cast<std::size_t>(decisions[static_cast<std::size_t>(k)])];
        out.xi[static_cast<std::size_t>(k)] =
            node.bnd.lo + solution.x[static_cast<std::size_t>(2 + k)];
    }
    out.slacks.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double lhs = out.w0_min;
        for (int k = 0; k < n_dec; ++k) {
            lhs += coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                   out.xi[static_cast<std::size_t>(k)];
        }
        out.slacks[static_cast<std::size_t>(i)] =
            lhs - spec.alphas[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace acceptmc
