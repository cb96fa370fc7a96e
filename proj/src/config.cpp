#include "acceptmc/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "acceptmc/errors.hpp"

#include <json.hpp>

namespace acceptmc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        fail(std::string("config: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

std::unique_ptr<MarketScenario> parse_scenario(const json& j) {
    if (!j.is_object()) fail("config: 'scenario' section missing");
    const std::string model = j.value("model", "");
    const int horizon = static_cast<int>(require_number(j, "horizon"));
    TradingBounds bounds;
    if (j.contains("bounds")) {
        bounds.lo = require_number(j.at("bounds"), "lower");
        bounds.hi = require_number(j.at("bounds"), "upper");
    }
    if (model == "gbm") {
        const double s0 = require_number(j, "s0");
        const double drift = require_number(j, "log_drift");
        const double vol = require_number(j, "log_vol");
        return std::make_unique<GbmScenario>(horizon, s0, drift, vol, bounds);
    }
    if (model == "tree") {
        if (!j.contains("root")) fail("config: tree scenario needs a 'root' node");
        std::vector<TreeScenario::Node> nodes;
        // Depth-first construction so leaf order matches leaf-table densities.
        const std::function<void(const json&, int, int)> add =
            [&](const json& node_json, int parent, int depth) {
                TreeScenario::Node node;
                node.parent = parent;
                node.depth = depth;
                node.price = require_number(node_json, "price");
                node.bnd = bounds;
                if (node_json.contains("bounds")) {
                    node.bnd.lo = require_number(node_json.at("bounds"), "lower");
                    node.bnd.hi = require_number(node_json.at("bounds"), "upper");
                }
                if (parent >= 0) {
                    node.prob = require_number(node_json, "prob");
                    node.z = node_json.contains("z")
                                 ? node_json.at("z").get<double>()
                                 : 0.0;
                }
                const int index = static_cast<int>(nodes.size());
                nodes.push_back(node);
                if (node_json.contains("children")) {
                    int branch = 0;
                    for (const auto& child : node_json.at("children")) {
                        if (!child.contains("z")) {
                            // default driver label: branch position
                            json patched = child;
                            patched["z"] = static_cast<double>(branch);
                            nodes[static_cast<std::size_t>(index)].children.push_back(
                                static_cast<int>(nodes.size()));
                            add(patched, index, depth + 1);
                        } else {
                            nodes[static_cast<std::size_t>(index)].children.push_back(
                                static_cast<int>(nodes.size()));
                            add(child, index, depth + 1);
                        }
                        ++branch;
                    }
                }
            };
        add(j.at("root"), -1, 0);
        auto tree = std::make_unique<TreeScenario>(std::move(nodes));
        if (tree->horizon() != horizon) {
            fail("config: tree depth does not match 'horizon'");
        }
        return tree;
    }
    fail("config: scenario model must be 'gbm' or 'tree'");
}

RiskSpec parse_risk(const json& j) {
    if (!j.is_object() || !j.contains("measures")) {
        fail("config: 'risk.measures' section missing");
    }
    RiskSpec spec;
    for (const auto& mj : j.at("measures")) {
        DensityDesc desc;
        const std::string kind = mj.value("density", "");
        if (kind == "constant") {
            desc.kind = DensityKind::Constant;
        } else if (kind == "normal-mean-shift") {
            desc.kind = DensityKind::NormalMeanShift;
            desc.shift = require_number(mj, "shift");
        } else if (kind == "leaf-table") {
            desc.kind = DensityKind::TreeLeafTable;
            if (!mj.contains("values")) fail("config: leaf-table density needs 'values'");
            desc.leaf_values = mj.at("values").get<std::vector<double>>();
        } else if (kind == "exp-tilt") {
            desc.kind = DensityKind::TreeExpTilt;
            desc.tilt = require_number(mj, "tilt");
        } else {
            fail("config: unknown density kind '" + kind + "'");
        }
        spec.densities.push_back(std::move(desc));
        spec.alphas.push_back(require_number(mj, "alpha"));
    }
    return spec;
}

std::string compute_fingerprint(const json& scenario, const json& risk,
                                const std::string& eta, double epsilon,
                                double delta, std::uint64_t seed) {
    nlohmann::ordered_json canon;
    canon["scenario"] = scenario;
    canon["risk"] = risk;
    canon["eta"] = eta;
    canon["epsilon"] = epsilon;
    canon["delta"] = delta;
    canon["seed"] = seed;
    const std::uint64_t h = fnv1a64(canon.dump());
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%016" PRIx64, h);
    return buffer;
}

RunConfig parse(const json& j, std::optional<std::uint64_t> seed_override) {
    RunConfig config;
    config.scenario = parse_scenario(j.value("scenario", json::object()));
    config.risk = parse_risk(j.value("risk", json::object()));
    validate_risk_spec(*config.scenario, config.risk);

    const std::string eta = j.value("eta", "normal");
    if (eta == "normal") {
        config.eta = EtaKind::Normal;
    } else if (eta == "logistic") {
        config.eta = EtaKind::Logistic;
    } else {
        fail("config: eta must be 'normal' or 'logistic'");
    }

    config.epsilon = require_number(j, "epsilon");
    config.delta = require_number(j, "delta");
    if (!(config.epsilon > 0.0)) fail("config: epsilon must be > 0");
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        fail("config: delta must lie in (0,1)");
    }
    if (seed_override.has_value()) {
        config.seed = *seed_override;
    } else {
        if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) {
            fail("config: 'seed' is required (no wall-clock default)");
        }
        config.seed = j.at("seed").get<std::uint64_t>();
    }

    if (j.contains("plan")) {
        const json& pj = j.at("plan");
        if (pj.contains("bound_variant")) {
            config.bound_variant =
                bound_variant_from_name(pj.at("bound_variant").get<std::string>());
        }
        if (pj.contains("kappa_scale")) {
            config.kappa_scale = pj.at("kappa_scale").get<double>();
            if (!(config.kappa_scale > 0.0)) fail("config: kappa_scale must be > 0");
        }
        if (pj.contains("kappa_overrides")) {
            for (const auto& oj : pj.at("kappa_overrides")) {
                KappaOverride ov;
                ov.i = static_cast<int>(require_number(oj, "i")) - 1;
                const std::string sign = oj.value("sign", "");
                if (sign != "+" && sign != "-") {
                    fail("config: kappa override sign must be '+' or '-'");
                }
                ov.sign = sign[0];
                ov.kappa = static_cast<std::int64_t>(require_number(oj, "kappa"));
                if (ov.kappa < 1) fail("config: kappa override must be >= 1");
                config.kappa_overrides.push_back(ov);
            }
        }
    }

    if (j.contains("constants")) {
        const json& cj = j.at("constants");
        const std::string method = cj.value("method", "auto");
        if (method == "monte-carlo") {
            config.constants_budget =
                static_cast<std::int64_t>(require_number(cj, "budget"));
        } else if (method != "auto" && method != "closed-form") {
            fail("config: constants method must be auto, closed-form or monte-carlo");
        }
    }

    if (j.contains("sampler")) {
        const json& sj = j.at("sampler");
        const std::string route = sj.value("route", "direct");
        if (route == "rejection") {
            config.sampler_route = TiltRoute::Rejection;
            config.sampler_envelope = require_number(sj, "envelope");
        } else if (route != "direct") {
            fail("config: sampler route must be 'direct' or 'rejection'");
        }
    }

    if (j.contains("grid")) {
        const json& gj = j.at("grid");
        if (gj.contains("box")) {
            std::vector<std::array<double, 2>> box;
            for (const auto& interval : gj.at("box")) {
                if (!interval.is_array() || interval.size() != 2) {
                    fail("config: grid box entries must be [lo, hi] pairs");
                }
                box.push_back({interval[0].get<double>(), interval[1].get<double>()});
            }
            config.grid_box = std::move(box);
        }
        if (gj.contains("points_per_dim")) {
            config.grid_points_per_dim = gj.at("points_per_dim").get<int>();
        }
        if (gj.contains("refine_rounds")) {
            config.grid_refine_rounds = gj.at("refine_rounds").get<int>();
        }
        if (gj.contains("shrink_factor")) {
            config.grid_shrink_factor = gj.at("shrink_factor").get<double>();
        }
        if (gj.contains("tol")) config.grid_tol = gj.at("tol").get<double>();
    }

    if (j.contains("crosscheck")) {
        config.crosscheck_n = j.at("crosscheck").value("n", std::int64_t{100000});
    }
    if (j.contains("output")) {
        const json& oj = j.at("output");
        if (oj.contains("dir") && oj.at("dir").is_string()) {
            config.output_dir = oj.at("dir").get<std::string>();
        }
        if (oj.contains("bank") && oj.at("bank").is_string()) {
            config.bank_path = oj.at("bank").get<std::string>();
        }
    }

    config.fingerprint =
        compute_fingerprint(j.at("scenario"), j.at("risk"), eta, config.epsilon,
                            config.delta, config.seed);
    return config;
}

}  // namespace

RunConfig load_config_string(const std::string& text,
                             std::optional<std::uint64_t> seed_override) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: JSON parse error: ") + err.what());
    }
    return parse(j, seed_override);
}

RunConfig load_config_file(const std::string& path,
                           std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config_string(buffer.str(), seed_override);
}

GridSpec make_grid_spec(const RunConfig& config, const TiltedWeights& weights) {
    GridSpec grid = default_grid(weights);
    if (config.grid_box.has_value()) {
        if (config.grid_box->size() != grid.active_dims.size()) {
            throw ConfigError(
                "config: grid box must list one [lo,hi] per active dimension (" +
                std::to_string(grid.active_dims.size()) + " active)");
        }
        grid.box = *config.grid_box;
    }
    if (config.grid_points_per_dim) grid.points_per_dim = *config.grid_points_per_dim;
    if (config.grid_refine_rounds) grid.refine_rounds = *config.grid_refine_rounds;
    if (config.grid_shrink_factor) grid.shrink_factor = *config.grid_shrink_factor;
    if (config.grid_tol) grid.tol = *config.grid_tol;
    return grid;
}

}  // namespace acceptmc
