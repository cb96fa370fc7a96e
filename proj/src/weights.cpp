#include "acceptmc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "acceptmc/errors.hpp"
#include "gbm_forms.hpp"

namespace acceptmc {

double eta_cdf(EtaKind eta, double x) {
    switch (eta) {
        case EtaKind::Normal:
            return normal_cdf(x);
        case EtaKind::Logistic:
            return 1.0 / (1.0 + std::exp(-x));
    }
    return 0.0;
}

double eta_sample(EtaKind eta, RngStream& rng) {
    switch (eta) {
        case EtaKind::Normal:
            return rng.normal();
        case EtaKind::Logistic: {
            const double u = rng.uniform();
            return std::log(u / (1.0 - u));
        }
    }
    return 0.0;
}

const char* eta_name(EtaKind eta) {
    return eta == EtaKind::Normal ? "normal" : "logistic";
}

const char* provenance_name(ConstantsProvenance p) {
    switch (p) {
        case ConstantsProvenance::ClosedForm: return "closed-form";
        case ConstantsProvenance::TreeExact: return "tree-exact";
        case ConstantsProvenance::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

int TiltedWeights::aleph() const {
    int count = 0;
    for (int i = 0; i < m; ++i) {
        if (d_plus[static_cast<std::size_t>(i)] > 0.0) ++count;
        if (d_minus[static_cast<std::size_t>(i)] > 0.0) ++count;
    }
    return count;
}

std::vector<int> TiltedWeights::active_dims() const {
    std::vector<int> dims;
    for (int i = 0; i < m; ++i) {
        if (d_plus[static_cast<std::size_t>(i)] +
                d_minus[static_cast<std::size_t>(i)] > 0.0) {
            dims.push_back(i);
        }
    }
    return dims;
}

namespace {

struct TreeWeightTable {
    const TreeScenario* tree;
    // v value per node (decision nodes only hold meaningful values).
    std::vector<std::vector<double>> per_measure;  // [i][node]
};

/// Exact per-node conditional expectations by leaf enumeration.
std::shared_ptr<TreeWeightTable> build_tree_table(const TreeScenario& tree,
                                                  const RiskSpec& spec) {
    auto table = std::make_shared<TreeWeightTable>();
    table->tree = &tree;
    const int m = spec.m();
    const auto& nodes = tree.nodes();
    table->per_measure.assign(static_cast<std::size_t>(m),
                              std::vector<double>(nodes.size(), 0.0));
    std::vector<DensityFn> fs;
    fs.reserve(static_cast<std::size_t>(m));
    for (const auto& desc : spec.densities) {
        fs.push_back(make_density_fn(tree, desc));
    }
    for (int leaf : tree.leaves()) {
        const auto chain = tree.path_nodes(leaf);
        const DriverPath path = tree.path_for_leaf(leaf);
        const double p_leaf = tree.node_probability(leaf);
        for (int i = 0; i < m; ++i) {
            const double mass = p_leaf * fs[static_cast<std::size_t>(i)](path);
            for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
                const int node = chain[t];
                const double step =
                    nodes[static_cast<std::size_t>(chain[t + 1])].price -
                    nodes[static_cast<std::size_t>(node)].price;
                table->per_measure[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(node)] += mass * step;
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        for (std::size_t node = 0; node < nodes.size(); ++node) {
            if (nodes[node].children.empty()) continue;
            const double range = nodes[node].bnd.hi - nodes[node].bnd.lo;
            table->per_measure[static_cast<std::size_t>(i)][node] *=
                range / tree.node_probability(static_cast<int>(node));
        }
    }
    return table;
}

WeightFn make_tree_weight_fn(std::shared_ptr<TreeWeightTable> table, int i) {
    return [table, i](const DriverPath& path, int t) {
        const auto prefix =
            std::span<const double>(path.drivers).subspan(0, static_cast<std::size_t>(t));
        const int node = table->tree->node_at(prefix);
        return table->per_measure[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(node)];
    };
}

WeightFn make_gbm_weight_fn(const GbmScenario& gbm, const DensityDesc& desc) {
    double theta = 0.0;
    if (!detail::mean_shift_theta(desc, &theta)) {
        throw MissingEvaluatorError(
            "no closed-form conditional expectation for this scenario/density pair");
    }
    const detail::GbmMeanShift forms = detail::gbm_mean_shift_forms(gbm, theta);
    return [forms](const DriverPath& path, int t) { return forms.v(path, t); };
}

}  // namespace

double v_weight(const MarketScenario& scenario, const RiskSpec& spec, int i,
                const DriverPath& path, int t) {
    if (i < 0 || i >= spec.m()) {
        throw std::invalid_argument("v_weight: measure index out of range");
    }
    if (t < 0 || t >= scenario.horizon()) {
        throw std::invalid_argument("v_weight: period out of range");
    }
    if (const auto* tree = dynamic_cast<const TreeScenario*>(&scenario)) {
        auto table = build_tree_table(*tree, spec);
        return make_tree_weight_fn(std::move(table), i)(path, t);
    }
    const auto* gbm = dynamic_cast<const GbmScenario*>(&scenario);
    if (gbm == nullptr) {
        throw MissingEvaluatorError("v_weight: unsupported scenario type");
    }
    return make_gbm_weight_fn(*gbm, spec.densities[static_cast<std::size_t>(i)])(
        path, t);
}

namespace {

void fill_tree_constants(const TreeScenario& tree, const RiskSpec& spec,
                         const TreeWeightTable& table, TiltedWeights& out) {
    const int m = spec.m();
    const auto& nodes = tree.nodes();
    for (int i = 0; i < m; ++i) {
        double dp = 0.0, dm = 0.0;
        for (int node : tree.decision_nodes()) {
            const double v =
                table.per_measure[static_cast<std::size_t>(i)][static_cast<std::size_t>(node)];
            const double p = tree.node_probability(node);
            dp += p * std::max(v, 0.0);
            dm += p * std::max(-v, 0.0);
            out.mean_v[static_cast<std::size_t>(i)]
                      [static_cast<std::size_t>(nodes[static_cast<std::size_t>(node)].depth)] +=
                p * v;
        }
        out.d_plus[static_cast<std::size_t>(i)] = dp;
        out.d_minus[static_cast<std::size_t>(i)] = dm;
    }
    // c(f_i) = E[f_i sum_t a_t (S_{t+1} - S_t)] by full enumeration.
    std::vector<DensityFn> fs;
    for (const auto& desc : spec.densities) fs.push_back(make_density_fn(tree, desc));
    for (int leaf : tree.leaves()) {
        const auto chain = tree.path_nodes(leaf);
        const DriverPath path = tree.path_for_leaf(leaf);
        double lower_gain = 0.0;
        for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
            const auto& node = nodes[static_cast<std::size_t>(chain[t])];
            lower_gain += node.bnd.lo *
                          (nodes[static_cast<std::size_t>(chain[t + 1])].price - node.price);
        }
        const double p_leaf = tree.node_probability(leaf);
        for (int i = 0; i < m; ++i) {
            out.c[static_cast<std::size_t>(i)] +=
                p_leaf * fs[static_cast<std::size_t>(i)](path) * lower_gain;
        }
    }
}

void fill_mc_constants(const MarketScenario& scenario, const RiskSpec& spec,
                       std::int64_t budget, RngStream& rng, TiltedWeights& out) {
    if (budget < 2) throw ConfigError("constants budget must be >= 2");
    const int m = spec.m();
    const int T = scenario.horizon();
    std::vector<DensityFn> fs;
    for (const auto& desc : spec.densities) {
        fs.push_back(make_density_fn(scenario, desc));
    }
    std::vector<double> sum_p(static_cast<std::size_t>(m), 0.0),
        sum_p2(static_cast<std::size_t>(m), 0.0),
        sum_n(static_cast<std::size_t>(m), 0.0),
        sum_n2(static_cast<std::size_t>(m), 0.0),
        sum_c(static_cast<std::size_t>(m), 0.0),
        sum_c2(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t k = 0; k < budget; ++k) {
        const DriverPath path = scenario.sample_path(rng);
        double lower_gain = 0.0;
        for (int t = 0; t < T; ++t) {
            const auto bnd = scenario.bounds(
                std::span<const double>(path.drivers).subspan(0, static_cast<std::size_t>(t)));
            lower_gain += bnd.lo * (path.prices[static_cast<std::size_t>(t) + 1] -
                                    path.prices[static_cast<std::size_t>(t)]);
        }
        for (int i = 0; i < m; ++i) {
            double pos = 0.0, neg = 0.0;
            for (int t = 0; t < T; ++t) {
                const double v = out.v[static_cast<std::size_t>(i)](path, t);
                pos += std::max(v, 0.0);
                neg += std::max(-v, 0.0);
                out.mean_v[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] +=
                    v / static_cast<double>(budget);
            }
            const double cf = fs[static_cast<std::size_t>(i)](path) * lower_gain;
            sum_p[static_cast<std::size_t>(i)] += pos;
            sum_p2[static_cast<std::size_t>(i)] += pos * pos;
            sum_n[static_cast<std::size_t>(i)] += neg;
            sum_n2[static_cast<std::size_t>(i)] += neg * neg;
            sum_c[static_cast<std::size_t>(i)] += cf;
            sum_c2[static_cast<std::size_t>(i)] += cf * cf;
        }
    }
    const double n = static_cast<double>(budget);
    auto finish = [n](double sum, double sum2, double* mean, double* se) {
        *mean = sum / n;
        const double var = std::max(0.0, sum2 / n - (*mean) * (*mean));
        *se = std::sqrt(var / n);
    };
    for (int i = 0; i < m; ++i) {
        finish(sum_p[static_cast<std::size_t>(i)], sum_p2[static_cast<std::size_t>(i)],
               &out.d_plus[static_cast<std::size_t>(i)],
               &out.d_plus_se[static_cast<std::size_t>(i)]);
        finish(sum_n[static_cast<std::size_t>(i)], sum_n2[static_cast<std::size_t>(i)],
               &out.d_minus[static_cast<std::size_t>(i)],
               &out.d_minus_se[static_cast<std::size_t>(i)]);
        finish(sum_c[static_cast<std::size_t>(i)], sum_c2[static_cast<std::size_t>(i)],
               &out.c[static_cast<std::size_t>(i)],
               &out.c_se[static_cast<std::size_t>(i)]);
        // An estimated normalizer within one standard error of zero is
        // treated as the zero measure.
        for (double* d : {&out.d_plus[static_cast<std::size_t>(i)],
                          &out.d_minus[static_cast<std::size_t>(i)]}) {
            if (*d <= 1e-12) *d = 0.0;
        }
    }
}

}  // namespace

TiltedWeights compute_constants(const MarketScenario& scenario,
                                const RiskSpec& spec,
                                std::optional<std::int64_t> mc_budget,
                                RngStream* rng) {
    validate_risk_spec(scenario, spec);
    const int m = spec.m();
    TiltedWeights out;
    out.m = m;
    out.scenario = &scenario;
    out.densities = spec.densities;
    out.alphas = spec.alphas;
    out.v.resize(static_cast<std::size_t>(m));
    out.c.assign(static_cast<std::size_t>(m), 0.0);
    out.d_plus.assign(static_cast<std::size_t>(m), 0.0);
    out.d_minus.assign(static_cast<std::size_t>(m), 0.0);
    out.mean_v.assign(static_cast<std::size_t>(m),
                      std::vector<double>(static_cast<std::size_t>(scenario.horizon()), 0.0));
    out.c_se.assign(static_cast<std::size_t>(m), 0.0);
    out.d_plus_se.assign(static_cast<std::size_t>(m), 0.0);
    out.d_minus_se.assign(static_cast<std::size_t>(m), 0.0);

    if (const auto* tree = dynamic_cast<const TreeScenario*>(&scenario)) {
        auto table = build_tree_table(*tree, spec);
        for (int i = 0; i < m; ++i) {
            out.v[static_cast<std::size_t>(i)] = make_tree_weight_fn(table, i);
        }
        fill_tree_constants(*tree, spec, *table, out);
        out.provenance = ConstantsProvenance::TreeExact;
        return out;
    }

    const auto* gbm = dynamic_cast<const GbmScenario*>(&scenario);
    if (gbm == nullptr) {
        throw MissingEvaluatorError(
            "compute_constants: no evaluation route for this scenario type");
    }
    for (int i = 0; i < m; ++i) {
        out.v[static_cast<std::size_t>(i)] =
            make_gbm_weight_fn(*gbm, spec.densities[static_cast<std::size_t>(i)]);
    }
    if (mc_budget.has_value()) {
        if (rng == nullptr) {
            throw ConfigError("Monte-Carlo constants need a random stream");
        }
        fill_mc_constants(scenario, spec, *mc_budget, *rng, out);
        out.provenance = ConstantsProvenance::MonteCarlo;
        return out;
    }
    for (int i = 0; i < m; ++i) {
        double theta = 0.0;
        detail::mean_shift_theta(spec.densities[static_cast<std::size_t>(i)], &theta);
        const detail::GbmMeanShift forms = detail::gbm_mean_shift_forms(*gbm, theta);
        out.d_plus[static_cast<std::size_t>(i)] = forms.d_plus();
        out.d_minus[static_cast<std::size_t>(i)] = forms.d_minus();
        out.c[static_cast<std::size_t>(i)] = forms.c();
        for (int t = 0; t < scenario.horizon(); ++t) {
            out.mean_v[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                forms.mean_v(t);
        }
    }
    out.provenance = ConstantsProvenance::ClosedForm;
    return out;
}

double lambda_process(const TiltedWeights& weights, const StrategyParams& params,
                      const DriverPath& path, int t) {
    if (static_cast<int>(params.s.size()) != weights.m) {
        throw std::invalid_argument(
            "lambda_process: parameter dimension must equal the measure count");
    }
    double lambda = 0.0;
    for (int i = 0; i < weights.m; ++i) {
        const double si = params.s[static_cast<std::size_t>(i)];
        if (si != 0.0) {
            lambda += si * weights.v[static_cast<std::size_t>(i)](path, t);
        }
    }
    return lambda;
}

std::vector<double> strategy_from_params(const TiltedWeights& weights,
                                         const StrategyParams& params,
                                         const DriverPath& path) {
    const MarketScenario& scenario = *weights.scenario;
    const int T = scenario.horizon();
    std::vector<double> values(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        const auto bnd = scenario.bounds(
            std::span<const double>(path.drivers).subspan(0, static_cast<std::size_t>(t)));
        const double lambda = lambda_process(weights, params, path, t);
        const double raw = bnd.lo + (bnd.hi - bnd.lo) * eta_cdf(params.eta, lambda);
        values[static_cast<std::size_t>(t)] = std::clamp(raw, bnd.lo, bnd.hi);
    }
    return values;
}

Strategy make_strategy(const TiltedWeights& weights, StrategyParams params) {
    const TiltedWeights* w = &weights;
    return [w, params = std::move(params)](const DriverPath& path, int t) {
        const auto bnd = w->scenario->bounds(
            std::span<const double>(path.drivers).subspan(0, static_cast<std::size_t>(t)));
        const double lambda = lambda_process(*w, params, path, t);
        const double raw = bnd.lo + (bnd.hi - bnd.lo) * eta_cdf(params.eta, lambda);
        return std::clamp(raw, bnd.lo, bnd.hi);
    };
}

}  // namespace acceptmc
