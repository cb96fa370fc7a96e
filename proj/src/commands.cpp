#include "acceptmc/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acceptmc/errors.hpp"
#include "acceptmc/oracle.hpp"
#include "gbm_forms.hpp"

namespace acceptmc {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchema = "acceptmc-report-v1";

std::string format_double(double v, const char* fmt = "%.6g") {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, fmt, v);
    return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
}

/// Shared state for every command: weights, the (possibly adjusted)
/// sampling plan and the certificate it implies.
struct Workflow {
    const RunConfig& config;
    TiltedWeights weights;
    SamplePlan plan;
    double epsilon_requested = 0.0;
    double epsilon_achieved = 0.0;
    bool budgets_modified = false;

    explicit Workflow(const RunConfig& cfg) : config(cfg) {
        RngStream constants_rng = RngStream::derive(cfg.seed, "constants");
        weights = compute_constants(*cfg.scenario, cfg.risk, cfg.constants_budget,
                                    &constants_rng);
        plan = plan_samples(weights, cfg.epsilon, cfg.delta, cfg.bound_variant);
        epsilon_requested = cfg.epsilon;
        for (const auto& ov : cfg.kappa_overrides) {
            bool found = false;
            for (auto& entry : plan.entries) {
                if (entry.i == ov.i && entry.sign == ov.sign) {
                    entry.kappa = ov.kappa;
                    found = true;
                    budgets_modified = true;
                }
            }
            if (!found) {
                throw ConfigError("kappa override references measure " +
                                  std::to_string(ov.i + 1) + std::string(1, ov.sign) +
                                  " which carries no mass");
            }
        }
        if (config.kappa_scale != 1.0) {
            for (auto& entry : plan.entries) {
                entry.kappa = std::max<std::int64_t>(
                    1, std::llround(static_cast<double>(entry.kappa) *
                                    config.kappa_scale));
            }
            budgets_modified = true;
        }
        if (!plan.entries.empty()) {
            epsilon_achieved = certify_epsilon(plan, config.delta);
            for (auto& entry : plan.entries) {
                entry.eps_over_d = epsilon_requested / entry.d;
                entry.log_bound_value = log_deviation_bound(
                    entry.kappa, entry.eps_over_d, plan.vc_dim, plan.variant);
            }
        } else {
            epsilon_achieved = 0.0;  // no stochastic term; figures are exact
        }
        plan.epsilon = plan.entries.empty() ? epsilon_requested : epsilon_achieved;
    }

    Certificate certificate() const {
        return Certificate{plan.epsilon, plan.delta, weights.aleph()};
    }

    SampleBank make_bank(const CommandOptions& options) const {
        const std::optional<std::string> path =
            options.bank_path ? options.bank_path : config.bank_path;
        if (path && std::filesystem::exists(*path)) {
            SampleBank bank = load_bank_csv(*path);
            if (bank.fingerprint != config.fingerprint) {
                throw CertificationError(
                    "bank file was built for a different (scenario, risk, eta, "
                    "epsilon, delta, seed) configuration; refusing to reuse it");
            }
            for (const auto& entry : plan.entries) {
                const BankEntry* be = bank.find(entry.i, entry.sign);
                if (be == nullptr || be->kappa != entry.kappa) {
                    throw CertificationError("bank file does not match the sampling plan");
                }
            }
            return bank;
        }
        SampleBank bank = build_bank(*config.scenario, weights, plan, config.eta,
                                     config.seed, options.workers,
                                     config.sampler_route, config.sampler_envelope);
        bank.fingerprint = config.fingerprint;
        if (path) {
            std::filesystem::path p(*path);
            if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
            save_bank_csv(bank, *path);
        }
        return bank;
    }
};

ordered_json scenario_block(const RunConfig& config) {
    ordered_json j;
    const MarketScenario& scenario = *config.scenario;
    j["kind"] = scenario.kind() == ScenarioKind::FiniteTree ? "tree" : "gbm";
    j["horizon"] = scenario.horizon();
    j["s0"] = scenario.initial_price();
    if (const auto* gbm = dynamic_cast<const GbmScenario*>(&scenario)) {
        j["log_drift"] = gbm->log_drift();
        j["log_vol"] = gbm->sigma();
        const auto bnd = gbm->bounds({});
        j["bounds"] = {bnd.lo, bnd.hi};
    } else if (const auto* tree = dynamic_cast<const TreeScenario*>(&scenario)) {
        j["nodes"] = tree->nodes().size();
        j["paths"] = tree->leaves().size();
    }
    return j;
}

ordered_json constants_block(const Workflow& wf) {
    ordered_json j;
    j["provenance"] = provenance_name(wf.weights.provenance);
    j["certified"] = wf.plan.constants_certified;
    auto measures = ordered_json::array();
    for (int i = 0; i < wf.weights.m; ++i) {
        ordered_json mj;
        mj["i"] = i + 1;
        mj["d_plus"] = wf.weights.d_plus[static_cast<std::size_t>(i)];
        mj["d_minus"] = wf.weights.d_minus[static_cast<std::size_t>(i)];
        mj["c"] = wf.weights.c[static_cast<std::size_t>(i)];
        mj["alpha"] = wf.weights.alphas[static_cast<std::size_t>(i)];
        if (wf.weights.provenance == ConstantsProvenance::MonteCarlo) {
            mj["d_plus_se"] = wf.weights.d_plus_se[static_cast<std::size_t>(i)];
            mj["d_minus_se"] = wf.weights.d_minus_se[static_cast<std::size_t>(i)];
            mj["c_se"] = wf.weights.c_se[static_cast<std::size_t>(i)];
        }
        measures.push_back(std::move(mj));
    }
    j["per_measure"] = std::move(measures);
    j["aleph"] = wf.weights.aleph();
    return j;
}

ordered_json plan_block(const Workflow& wf) {
    ordered_json j;
    j["epsilon_requested"] = wf.epsilon_requested;
    j["epsilon_achieved"] = wf.plan.epsilon;
    j["delta"] = wf.plan.delta;
    j["vc_dim"] = wf.plan.vc_dim;
    j["bound_variant"] = bound_variant_name(wf.plan.variant);
    j["budgets_modified"] = wf.budgets_modified;
    auto entries = ordered_json::array();
    for (const auto& entry : wf.plan.entries) {
        ordered_json ej;
        ej["i"] = entry.i + 1;
        ej["sign"] = std::string(1, entry.sign);
        ej["d"] = entry.d;
        ej["eps_over_d"] = entry.eps_over_d;
        ej["kappa"] = entry.kappa;
        ej["log_bound_value"] = entry.log_bound_value;
        ej["bound_value"] = std::exp(entry.log_bound_value);
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    j["total_samples"] = wf.plan.total_samples();
    return j;
}

ordered_json certificate_block(const Workflow& wf) {
    const Certificate cert = wf.certificate();
    ordered_json j;
    j["epsilon"] = cert.epsilon;
    j["epsilon_requested"] = wf.epsilon_requested;
    j["delta"] = cert.delta;
    j["aleph"] = cert.aleph;
    j["confidence"] = cert.confidence();
    j["constants_certified"] = wf.plan.constants_certified;
    std::string statement =
        "rho(w0_star + W(xi(s_star))) <= " + format_double(cert.epsilon, "%.9g") +
        " with probability >= " + format_double(cert.confidence(), "%.9g") +
        " over the sample draw";
    if (!wf.plan.constants_certified) {
        statement += "; normalizing constants are Monte-Carlo estimates, the "
                     "certificate is conditional on their accuracy";
    }
    j["statement"] = statement;
    return j;
}

ordered_json strategy_block(const Workflow& wf, std::span<const double> s_star) {
    ordered_json j;
    j["eta"] = eta_name(wf.config.eta);
    j["form"] = "xi_t = a_t + (b_t - a_t) * eta(lambda_t(s_star))";
    j["s_star"] = std::vector<double>(s_star.begin(), s_star.end());
    const MarketScenario& scenario = *wf.config.scenario;
    if (const auto* gbm = dynamic_cast<const GbmScenario*>(&scenario)) {
        // lambda_t(s) = sum_i s_i * scale_i * (S_t/S0)^p_i * exp(tau_i t)
        auto terms = ordered_json::array();
        std::ostringstream human;
        human << "lambda_t =";
        bool first = true;
        for (int i = 0; i < wf.weights.m; ++i) {
            double theta = 0.0;
            detail::mean_shift_theta(wf.weights.densities[static_cast<std::size_t>(i)],
                                     &theta);
            const auto forms = detail::gbm_mean_shift_forms(*gbm, theta);
            const double si = s_star[static_cast<std::size_t>(i)];
            if (si == 0.0 || forms.range_coef == 0.0) continue;
            const double power = forms.shifted_mean / gbm->sigma();
            const double decay = forms.log_decay - gbm->log_drift() * power;
            ordered_json tj;
            tj["i"] = i + 1;
            tj["weight"] = si;
            tj["scale"] = forms.range_coef;
            tj["price_power"] = power;
            tj["time_decay"] = decay;
            terms.push_back(std::move(tj));
            human << (first ? " " : " + ") << format_double(si * forms.range_coef)
                  << "*(S_t/S0)^" << format_double(power);
            if (decay != 0.0) human << "*exp(" << format_double(decay) << "*t)";
            first = false;
        }
        if (first) human << " 0";
        j["terms"] = std::move(terms);
        j["lambda"] = human.str();
    } else if (const auto* tree = dynamic_cast<const TreeScenario*>(&scenario)) {
        StrategyParams params{{s_star.begin(), s_star.end()}, wf.config.eta};
        auto nodes = ordered_json::array();
        for (int node : tree->decision_nodes()) {
            // evaluate lambda at the node via any leaf below it
            int leaf = node;
            while (!tree->nodes()[static_cast<std::size_t>(leaf)].children.empty()) {
                leaf = tree->nodes()[static_cast<std::size_t>(leaf)].children.front();
            }
            const DriverPath path = tree->path_for_leaf(leaf);
            const int depth = tree->nodes()[static_cast<std::size_t>(node)].depth;
            const double lambda = lambda_process(wf.weights, params, path, depth);
            const auto bnd = tree->nodes()[static_cast<std::size_t>(node)].bnd;
            ordered_json nj;
            nj["node"] = node;
            nj["depth"] = depth;
            nj["price"] = tree->nodes()[static_cast<std::size_t>(node)].price;
            nj["lambda"] = lambda;
            nj["xi"] = std::clamp(
                bnd.lo + (bnd.hi - bnd.lo) * eta_cdf(wf.config.eta, lambda), bnd.lo,
                bnd.hi);
            nodes.push_back(std::move(nj));
        }
        j["nodes"] = std::move(nodes);
    }
    return j;
}

ordered_json base_report(const Workflow& wf, const char* command) {
    ordered_json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["seed"] = wf.config.seed;
    j["fingerprint"] = wf.config.fingerprint;
    j["scenario"] = scenario_block(wf.config);
    j["eta"] = eta_name(wf.config.eta);
    j["constants"] = constants_block(wf);
    j["plan"] = plan_block(wf);
    return j;
}

std::string plan_human(const Workflow& wf) {
    std::ostringstream out;
    out << "constants (" << provenance_name(wf.weights.provenance) << ")\n";
    for (int i = 0; i < wf.weights.m; ++i) {
        out << "  i=" << (i + 1)
            << "  d+=" << format_double(wf.weights.d_plus[static_cast<std::size_t>(i)])
            << "  d-=" << format_double(wf.weights.d_minus[static_cast<std::size_t>(i)])
            << "  c=" << format_double(wf.weights.c[static_cast<std::size_t>(i)])
            << "  alpha=" << format_double(wf.weights.alphas[static_cast<std::size_t>(i)])
            << "\n";
    }
    out << "aleph = " << wf.weights.aleph() << "\n";
    if (wf.plan.entries.empty()) {
        out << "warning: all tilted measures vanish; the plan is empty and "
               "rho is constant in s\n";
        return out.str();
    }
    out << "plan (" << bound_variant_name(wf.plan.variant)
        << " bound, VC dim " << wf.plan.vc_dim << ", delta "
        << format_double(wf.plan.delta) << ")\n";
    out << "  i  sign  d          eps/d      kappa       bound\n";
    for (const auto& entry : wf.plan.entries) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-2d %c     %-10.5g %-10.5g %-11lld %-10.4g\n",
                      entry.i + 1, entry.sign, entry.d, entry.eps_over_d,
                      static_cast<long long>(entry.kappa),
                      std::exp(entry.log_bound_value));
        out << line;
    }
    out << "epsilon requested " << format_double(wf.epsilon_requested)
        << ", achieved " << format_double(wf.plan.epsilon) << "; confidence >= "
        << format_double(wf.certificate().confidence()) << "\n";
    return out.str();
}

void maybe_write_report(const CommandOptions& options, const RunConfig& config,
                        ordered_json* report, const std::string& name) {
    const std::optional<std::string> dir =
        options.out_dir ? options.out_dir : config.output_dir;
    if (!dir) return;
    const std::string path = (std::filesystem::path(*dir) / name).string();
    (*report)["report_path"] = path;
    write_text_file(path, report->dump(2) + "\n");
}

std::string trace_csv_text(const SearchResult& result) {
    std::ostringstream out;
    const std::size_t dims = result.trace.empty() ? 0 : result.trace.front().box.size();
    out << "round,best_rho";
    for (std::size_t k = 0; k < result.trace.front().best_s.size(); ++k) {
        out << ",s" << (k + 1);
    }
    for (std::size_t k = 0; k < dims; ++k) out << ",box" << (k + 1) << "_lo,box" << (k + 1) << "_hi";
    out << ",evaluated\n";
    char buffer[64];
    for (const auto& round : result.trace) {
        out << round.round;
        std::snprintf(buffer, sizeof buffer, ",%.17g", round.best_rho);
        out << buffer;
        for (double v : round.best_s) {
            std::snprintf(buffer, sizeof buffer, ",%.17g", v);
            out << buffer;
        }
        for (const auto& interval : round.box) {
            std::snprintf(buffer, sizeof buffer, ",%.17g,%.17g", interval[0], interval[1]);
            out << buffer;
        }
        out << ',' << round.evaluated << '\n';
    }
    return out.str();
}

}  // namespace

CommandResult cmd_plan(const RunConfig& config, const CommandOptions& options) {
    Workflow wf(config);
    CommandResult result;
    result.report = base_report(wf, "plan");
    result.report["certificate"] = certificate_block(wf);
    if (wf.plan.entries.empty()) {
        result.report["warning"] = "aleph is zero: no sampling required";
    }
    result.human = plan_human(wf);
    maybe_write_report(options, config, &result.report, "plan.json");
    return result;
}

CommandResult cmd_sample(const RunConfig& config, const CommandOptions& options) {
    Workflow wf(config);
    const std::optional<std::string> path =
        options.bank_path ? options.bank_path : config.bank_path;
    if (!path) throw ConfigError("cmd_sample: a bank path is required");
    if (std::filesystem::exists(*path)) {
        std::filesystem::remove(*path);  // rebuild rather than silently reuse
    }
    const SampleBank bank = wf.make_bank(options);
    CommandResult result;
    result.report = base_report(wf, "sample");
    result.report["bank"] = {{"path", *path},
                             {"total_samples", wf.plan.total_samples()},
                             {"epsilon", bank.epsilon},
                             {"delta", bank.delta},
                             {"aleph", bank.aleph}};
    std::ostringstream human;
    human << plan_human(wf) << "bank written to " << *path << " ("
          << wf.plan.total_samples() << " samples)\n";
    result.human = human.str();
    maybe_write_report(options, config, &result.report, "sample.json");
    return result;
}

CommandResult cmd_run(const RunConfig& config, const CommandOptions& options) {
    Workflow wf(config);
    const SampleBank bank = wf.make_bank(options);
    const GridSpec grid = make_grid_spec(config, wf.weights);
    const SearchResult search = run_search(wf.weights, bank, grid, options.workers);

    CommandResult result;
    result.report = base_report(wf, "run");
    ordered_json sj;
    sj["w0_star"] = search.w0_star;
    sj["s_star"] = search.s_star;
    if (!search.note.empty()) sj["note"] = search.note;
    auto rounds = ordered_json::array();
    std::int64_t total_evaluations = 0;
    for (const auto& round : search.trace) {
        ordered_json rj;
        rj["round"] = round.round;
        rj["best_rho"] = round.best_rho;
        rj["best_s"] = round.best_s;
        auto box = ordered_json::array();
        for (const auto& interval : round.box) {
            box.push_back({interval[0], interval[1]});
        }
        rj["box"] = std::move(box);
        rj["evaluated"] = round.evaluated;
        rounds.push_back(std::move(rj));
        total_evaluations += round.evaluated;
    }
    sj["rounds"] = std::move(rounds);
    sj["total_evaluations"] = total_evaluations;
    result.report["search"] = std::move(sj);
    result.report["certificate"] = certificate_block(wf);
    result.report["strategy"] = strategy_block(wf, search.s_star);

    if (config.scenario->kind() == ScenarioKind::FiniteTree) {
        const ExactPipeline exact(*config.scenario, config.risk, config.eta);
        const LpResult lp = min_capital_lp(*config.scenario, config.risk);
        ordered_json oj;
        oj["lp_w0_min"] = lp.w0_min;
        oj["exact_rho_at_s_star"] = exact.rho(search.s_star);
        oj["abs_deviation_at_s_star"] =
            std::abs(exact.rho(search.s_star) - search.w0_star);
        oj["gap_over_lp"] = search.w0_star - lp.w0_min;
        result.report["oracle"] = std::move(oj);
    }

    std::ostringstream human;
    human << plan_human(wf);
    human << "w0_star = " << format_double(search.w0_star, "%.9g") << " at s_star = (";
    for (std::size_t k = 0; k < search.s_star.size(); ++k) {
        human << (k ? ", " : "") << format_double(search.s_star[k]);
    }
    human << ")\n";
    human << result.report["certificate"]["statement"].get<std::string>() << "\n";
    if (result.report["strategy"].contains("lambda")) {
        human << result.report["strategy"]["lambda"].get<std::string>()
              << "; xi_t = a + (b-a)*" << eta_name(config.eta) << "(lambda_t)\n";
    }
    result.human = human.str();

    const std::optional<std::string> dir =
        options.out_dir ? options.out_dir : config.output_dir;
    if (dir && !search.trace.empty()) {
        const std::string trace_path =
            (std::filesystem::path(*dir) / "trace.csv").string();
        write_text_file(trace_path, trace_csv_text(search));
        result.report["trace_csv"] = trace_path;
    }
    maybe_write_report(options, config, &result.report, "report.json");
    return result;
}

CommandResult cmd_eval(const RunConfig& config, const std::vector<double>& s,
                       double w0, const CommandOptions& options) {
    Workflow wf(config);
    if (static_cast<int>(s.size()) != wf.weights.m) {
        throw std::invalid_argument(
            "cmd_eval: s must have one coordinate per scenario measure (m=" +
            std::to_string(wf.weights.m) + ")");
    }
    const SampleBank bank = wf.make_bank(options);
    const RhoEstimate estimate = rho_hat(wf.weights, bank, s);

    RngStream crosscheck_rng = RngStream::derive(config.seed, "crosscheck");
    const Strategy strategy =
        make_strategy(wf.weights, StrategyParams{s, config.eta});
    const McRhoEstimate mc =
        rho_mc_crosscheck(*config.scenario, config.risk, strategy, 0.0,
                          std::max<std::int64_t>(config.crosscheck_n, 2),
                          crosscheck_rng, options.workers);

    CommandResult result;
    result.report = base_report(wf, "eval");
    ordered_json ej;
    ej["s"] = s;
    ej["w0"] = w0;
    ej["rho_hat"] = estimate.rho_hat;
    ej["rho_hat_of_capitalized"] = estimate.rho_hat - w0;
    ej["per_i"] = estimate.per_i;
    ej["argmax_i"] = estimate.argmax_i + 1;
    result.report["estimate"] = std::move(ej);
    result.report["certificate"] = certificate_block(wf);

    double se_max = 0.0;
    for (double se : mc.std_errors) se_max = std::max(se_max, se);
    ordered_json cj;
    cj["n"] = std::max<std::int64_t>(config.crosscheck_n, 2);
    cj["rho_mc"] = mc.estimate;
    cj["per_i_mean"] = mc.means;
    cj["per_i_std_error"] = mc.std_errors;
    cj["abs_diff"] = std::abs(mc.estimate - estimate.rho_hat);
    cj["tolerance"] = wf.plan.epsilon + 4.0 * se_max;
    cj["agrees"] = std::abs(mc.estimate - estimate.rho_hat) <=
                   wf.plan.epsilon + 4.0 * se_max;
    result.report["crosscheck"] = std::move(cj);

    std::ostringstream human;
    human << "rho_hat(s) = " << format_double(estimate.rho_hat, "%.9g")
          << "  (argmax i = " << estimate.argmax_i + 1 << ")\n";
    for (int i = 0; i < wf.weights.m; ++i) {
        human << "  D_" << (i + 1) << " = "
              << format_double(estimate.per_i[static_cast<std::size_t>(i)], "%.9g")
              << "\n";
    }
    human << "plain-MC cross-check: " << format_double(mc.estimate, "%.9g")
          << " (|diff| = "
          << format_double(std::abs(mc.estimate - estimate.rho_hat)) << ", "
          << (result.report["crosscheck"]["agrees"].get<bool>() ? "agrees"
                                                                : "DISAGREES")
          << " within epsilon + 4 SE)\n";
    result.human = human.str();
    maybe_write_report(options, config, &result.report, "eval.json");
    return result;
}

CommandResult cmd_oracle_check(const RunConfig& config,
                               const CommandOptions& options) {
    if (config.scenario->kind() != ScenarioKind::FiniteTree) {
        throw UnsupportedKindError("oracle-check requires a finite-tree scenario");
    }
    Workflow wf(config);
    const SampleBank bank = wf.make_bank(options);
    const ExactPipeline exact(*config.scenario, config.risk, config.eta);
    const GridSpec grid = make_grid_spec(config, wf.weights);
    const SearchResult search = run_search(wf.weights, bank, grid, options.workers);

    // Uniform deviation of rho_hat against the exact rho over the first
    // round's grid.
    std::vector<std::vector<double>> points;
    {
        const int ppd = grid.points_per_dim;
        std::vector<int> index(grid.active_dims.size(), 0);
        std::size_t total = 1;
        for (std::size_t k = 0; k < grid.active_dims.size(); ++k) {
            total *= static_cast<std::size_t>(ppd);
        }
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::vector<double> s(static_cast<std::size_t>(wf.weights.m), 0.0);
            for (std::size_t k = 0; k < grid.active_dims.size(); ++k) {
                const double frac =
                    static_cast<double>(index[k]) / static_cast<double>(ppd - 1);
                s[static_cast<std::size_t>(grid.active_dims[k])] =
                    grid.box[k][0] + frac * (grid.box[k][1] - grid.box[k][0]);
            }
            points.push_back(std::move(s));
            for (std::size_t k = grid.active_dims.size(); k-- > 0;) {
                if (++index[k] < ppd) break;
                index[k] = 0;
            }
        }
    }
    const auto estimates = rho_hat_batch(wf.weights, bank, points, options.workers);
    double sup_deviation = 0.0;
    double exact_grid_min = std::numeric_limits<double>::infinity();
    for (const auto& est : estimates) {
        const double truth = exact.rho(est.s);
        sup_deviation = std::max(sup_deviation, std::abs(est.rho_hat - truth));
        exact_grid_min = std::min(exact_grid_min, truth);
    }
    const LpResult lp = min_capital_lp(*config.scenario, config.risk);

    CommandResult result;
    result.report = base_report(wf, "oracle-check");
    ordered_json oj;
    oj["grid_points"] = points.size();
    oj["sup_abs_deviation"] = sup_deviation;
    oj["epsilon"] = wf.plan.epsilon;
    oj["within_epsilon"] = sup_deviation <= wf.plan.epsilon;
    oj["exact_grid_min"] = exact_grid_min;
    oj["search_w0_star"] = search.w0_star;
    oj["exact_rho_at_s_star"] = exact.rho(search.s_star);
    oj["lp_w0_min"] = lp.w0_min;
    oj["lp_xi"] = lp.xi;
    oj["lp_slacks"] = lp.slacks;
    oj["w0_star_above_lp_minus_eps"] =
        search.w0_star >= lp.w0_min - wf.plan.epsilon;
    oj["parametric_gap_over_lp"] = exact_grid_min - lp.w0_min;
    result.report["oracle"] = std::move(oj);
    result.report["certificate"] = certificate_block(wf);

    std::ostringstream human;
    human << "sup |rho_hat - rho_exact| over " << points.size()
          << " grid points = " << format_double(sup_deviation) << " (epsilon "
          << format_double(wf.plan.epsilon) << ", "
          << (sup_deviation <= wf.plan.epsilon ? "within" : "EXCEEDS") << ")\n";
    human << "LP minimal capital = " << format_double(lp.w0_min, "%.9g")
          << ", search w0_star = " << format_double(search.w0_star, "%.9g")
          << ", exact parametric grid min = "
          << format_double(exact_grid_min, "%.9g") << "\n";
    result.human = human.str();
    maybe_write_report(options, config, &result.report, "oracle_check.json");
    return result;
}

}  // namespace acceptmc
