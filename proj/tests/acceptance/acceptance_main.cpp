// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "acceptmc/commands.hpp"
#include "acceptmc/oracle.hpp"
#include "../support/test_helpers.hpp"

#include <json.hpp>

using namespace acceptmc;
using namespace acceptmc::testing;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string fmt(double v, const char* format = "%.6g") {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, format, v);
    return buffer;
}

// --- 1: closed-form constants on the GBM example -----------------------------

Criterion criterion_constants() {
    Criterion crit{"constants-reproduction"};
    const auto start = std::chrono::steady_clock::now();
    const auto gbm = make_paper_gbm();
    const TiltedWeights weights = compute_constants(*gbm, make_paper_risk());

    crit.require(std::abs(weights.d_plus[0] - 76.34) <= 0.01,
                 "d1+ = " + fmt(weights.d_plus[0]) + " not within 76.34 +- 0.01");
    crit.require(weights.d_minus[0] == 0.0, "d1- must vanish");
    crit.require(weights.d_plus[1] == 0.0, "d2+ must vanish");
    crit.require(std::abs(weights.d_minus[1] - 3.80) <= 0.01,
                 "d2- = " + fmt(weights.d_minus[1]) + " not within 3.80 +- 0.01");
    crit.require(weights.d_plus[2] == 0.0 && weights.d_minus[2] == 0.0,
                 "the reference measure must carry no tilt");
    for (int i = 0; i < 3; ++i) {
        crit.require(std::abs(weights.c[static_cast<std::size_t>(i)]) <= 1e-12,
                     "c must vanish for flat lower bounds");
    }
    crit.require(weights.aleph() == 2, "aleph must be 2");
    for (int t = 0; t < 3; ++t) {
        const double coef =
            weights.mean_v[0][static_cast<std::size_t>(t)] / std::exp(t);
        crit.require(std::abs(coef - 6.87) <= 0.01,
                     "E[v_t(f_1)]/e^t = " + fmt(coef) + " not within 6.87 +- 0.01 at t=" +
                         std::to_string(t));
    }
    const double elapsed = seconds_since(start);
    crit.require(elapsed < 1.0, "runtime " + fmt(elapsed) + "s exceeds 1s");
    crit.note("d1+ = " + fmt(weights.d_plus[0], "%.6f") +
              ", d2- = " + fmt(weights.d_minus[1], "%.6f") +
              ", aleph = " + std::to_string(weights.aleph()) + ", " +
              fmt(elapsed, "%.3f") + "s");
    return crit;
}

// --- 2: sample-size certification --------------------------------------------

Criterion criterion_sample_sizes() {
    Criterion crit{"sample-size-certification"};
    const auto start = std::chrono::steady_clock::now();

    const double bound_plus =
        deviation_bound(1400000, 0.5 / 76.34, 4, BoundVariant::Devroye);
    const double bound_minus =
        deviation_bound(10500, 0.5 / 3.80, 4, BoundVariant::Devroye);
    crit.require(bound_plus <= 0.05,
                 "published kappa1+ fails its inequality (bound " + fmt(bound_plus) + ")");
    crit.require(bound_minus <= 0.05,
                 "published kappa2- fails its inequality (bound " + fmt(bound_minus) + ")");

    const auto gbm = make_paper_gbm();
    const TiltedWeights weights = compute_constants(*gbm, make_paper_risk());
    const SamplePlan plan = plan_samples(weights, 0.5, 0.05);
    const PlanEntry* plus = plan.find(0, '+');
    const PlanEntry* minus = plan.find(1, '-');
    crit.require(plus != nullptr && minus != nullptr, "plan must cover 1+ and 2-");
    if (plus && minus) {
        crit.require(plus->kappa <= 1400000,
                     "planned kappa1+ " + std::to_string(plus->kappa) +
                         " exceeds the published 1,400,000");
        crit.require(minus->kappa <= 10500,
                     "planned kappa2- " + std::to_string(minus->kappa) +
                         " exceeds the published 10,500");
        const double log_delta = std::log(0.05);
        for (const PlanEntry* entry : {plus, minus}) {
            crit.require(log_deviation_bound(entry->kappa, entry->eps_over_d, 4,
                                             BoundVariant::Devroye) <= log_delta,
                         "planned kappa violates its inequality");
            crit.require(log_deviation_bound(entry->kappa - 1, entry->eps_over_d, 4,
                                             BoundVariant::Devroye) > log_delta,
                         "planned kappa is not minimal");
        }
        crit.note("bounds " + fmt(bound_plus, "%.4g") + " / " + fmt(bound_minus, "%.3g") +
                  ", minimal kappas " + std::to_string(plus->kappa) + " / " +
                  std::to_string(minus->kappa));
    }
    const double elapsed = seconds_since(start);
    crit.require(elapsed < 1.0, "runtime " + fmt(elapsed) + "s exceeds 1s");
    return crit;
}

// --- 3: end-to-end GBM reproduction -------------------------------------------

Criterion criterion_end_to_end(int workers) {
    Criterion crit{"end-to-end-reproduction"};

    // full run at the published budgets
    const RunConfig config = load_config_file(config_path("gbm_paper.json"));
    CommandOptions options;
    options.workers = workers;
    const auto start_full = std::chrono::steady_clock::now();
    const CommandResult run = cmd_run(config, options);
    const double full_seconds = seconds_since(start_full);

    const double w0_star = run.report.at("search").at("w0_star").get<double>();
    const auto s_star =
        run.report.at("search").at("s_star").get<std::vector<double>>();
    crit.require(w0_star >= 0.41 - 0.5 && w0_star <= 0.41 + 0.5,
                 "w0_star = " + fmt(w0_star) + " outside 0.41 +- 0.5");

    // independent plain-MC cross-check at the found optimum
    const TiltedWeights weights = compute_constants(*config.scenario, config.risk);
    const Strategy strategy =
        make_strategy(weights, StrategyParams{s_star, config.eta});
    RngStream crosscheck_rng = RngStream::derive(config.seed, "acceptance-crosscheck");
    const McRhoEstimate mc =
        rho_mc_crosscheck(*config.scenario, config.risk, strategy, 0.0, 1000000,
                          crosscheck_rng, workers);
    const double diff = std::abs(mc.estimate - w0_star);
    crit.require(diff <= 0.1, "plain-MC cross-check differs by " + fmt(diff) +
                                  " > 0.1 (rho_mc = " + fmt(mc.estimate) + ")");

    // reduced-budget smoke variant with a recomputed certificate
    const RunConfig smoke = load_config_file(config_path("gbm_smoke.json"));
    const auto start_smoke = std::chrono::steady_clock::now();
    const CommandResult smoke_run = cmd_run(smoke, options);
    const double smoke_seconds = seconds_since(start_smoke);
    const double smoke_w0 = smoke_run.report.at("search").at("w0_star").get<double>();
    const double smoke_eps =
        smoke_run.report.at("certificate").at("epsilon").get<double>();
    crit.require(smoke_seconds < 30.0,
                 "smoke variant took " + fmt(smoke_seconds) + "s (>= 30s)");
    crit.require(std::abs(smoke_w0 - 0.41) <= smoke_eps,
                 "smoke w0_star = " + fmt(smoke_w0) +
                     " outside 0.41 +- recomputed epsilon " + fmt(smoke_eps));
    crit.note("w0_star = " + fmt(w0_star, "%.4f") + " (s* = " + fmt(s_star[0], "%.3f") +
              ", " + fmt(s_star[1], "%.3f") + "), |rho_mc - w0_star| = " + fmt(diff) +
              ", full " + fmt(full_seconds, "%.1f") + "s, smoke " +
              fmt(smoke_seconds, "%.1f") + "s (eps_smoke = " + fmt(smoke_eps, "%.3f") +
              ")");
    return crit;
}

// --- 4: uniform-deviation oracle property -------------------------------------

Criterion criterion_uniform_deviation(int workers) {
    Criterion crit{"oracle-uniform-deviation"};
    const auto tree = make_tree_a();
    const RiskSpec spec = make_tree_a_risk();
    const TiltedWeights weights = compute_constants(*tree, spec);
    const double epsilon = 0.1, delta = 0.05;
    const SamplePlan plan = plan_samples(weights, epsilon, delta);
    const ExactPipeline exact(*tree, spec, EtaKind::Normal);
    const int aleph = weights.aleph();

    std::vector<std::vector<double>> grid;
    for (int a = 0; a < 20; ++a) {
        for (int b = 0; b < 20; ++b) {
            grid.push_back({-5.0 + a * 10.0 / 19, -5.0 + b * 10.0 / 19});
        }
    }
    std::vector<double> exact_values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        exact_values[k] = exact.rho(grid[k]);
    }

    int failures = 0;
    double worst = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const SampleBank bank = build_bank(
            *tree, weights, plan, EtaKind::Normal,
            RngStream::derive(555, "acceptance-c4", rep).next_u64(), workers);
        const auto estimates = rho_hat_batch(weights, bank, grid, workers);
        double sup = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            sup = std::max(sup, std::abs(estimates[k].rho_hat - exact_values[k]));
        }
        worst = std::max(worst, sup);
        if (sup > epsilon) ++failures;
    }
    const int allowed = binomial_upper_quantile(20, aleph * delta, 0.99);
    crit.require(failures <= allowed,
                 std::to_string(failures) + " banks exceeded epsilon (allowed " +
                     std::to_string(allowed) + ")");
    crit.note("worst sup-deviation " + fmt(worst, "%.4f") + " vs epsilon " +
              fmt(epsilon) + "; failures " + std::to_string(failures) + "/20 (<= " +
              std::to_string(allowed) + " allowed at aleph*delta = " +
              fmt(aleph * delta) + ")");
    return crit;
}

// --- 5: optimality gap against the LP -----------------------------------------

Criterion criterion_optimality_gap(int workers) {
    Criterion crit{"lp-optimality-gap"};
    const auto tree = make_tree_a();
    const RiskSpec spec = make_tree_a_risk();

    // frozen vertex-enumeration value recorded before the solver was built
    std::ifstream in(test_data_path("tree_fixture.json"));
    if (!in.good()) {
        crit.require(false, "missing tree fixture data");
        return crit;
    }
    const auto fixture = nlohmann::json::parse(in);
    const double frozen = fixture.at("lp_w0_min").get<double>();

    const LpResult lp = min_capital_lp(*tree, spec);
    crit.require(std::abs(lp.w0_min - frozen) <= 1e-9,
                 "simplex " + fmt(lp.w0_min, "%.12g") +
                     " differs from the frozen vertex-enumeration value " +
                     fmt(frozen, "%.12g"));

    const double epsilon = 0.1, delta = 0.05;
    const TiltedWeights weights = compute_constants(*tree, spec);
    const SamplePlan plan = plan_samples(weights, epsilon, delta);
    const SampleBank bank = build_bank(*tree, weights, plan, EtaKind::Normal,
                                       20260810, workers);
    GridSpec grid;
    grid.active_dims = weights.active_dims();
    grid.box = {{-5.0, 5.0}, {-5.0, 5.0}};
    grid.points_per_dim = 9;
    grid.refine_rounds = 3;
    grid.shrink_factor = 0.5;
    grid.tol = 1e-12;
    const SearchResult search = run_search(weights, bank, grid, workers);
    crit.require(search.w0_star >= lp.w0_min - epsilon,
                 "search w0_star " + fmt(search.w0_star) + " fell below the LP floor " +
                     fmt(lp.w0_min) + " - epsilon");

    // exact minimum of the parametric family on a fine grid
    const ExactPipeline exact(*tree, spec, EtaKind::Normal);
    double family_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= 60; ++a) {
        for (int b = 0; b <= 60; ++b) {
            const std::vector<double> s{-6.0 + a * 0.2, -6.0 + b * 0.2};
            family_min = std::min(family_min, exact.rho(s));
        }
    }
    const double gap = family_min - lp.w0_min;
    crit.require(gap >= -1e-10, "parametric family undercut the LP floor");
    crit.require(std::isfinite(gap), "gap must be finite");
    crit.note("lp w0_min = " + fmt(lp.w0_min, "%.6f") + " (frozen " +
              fmt(frozen, "%.6f") + "), search w0_star = " +
              fmt(search.w0_star, "%.6f") + ", parametric-family gap over LP = " +
              fmt(gap, "%.6f"));
    return crit;
}

// --- 6: combinatorial appendix properties --------------------------------------

Criterion criterion_appendix() {
    Criterion crit{"shatter-and-bound-properties"};
    RngStream rng(2718);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int n = 1; n <= 8; ++n) {
            std::vector<std::vector<double>> points;
            for (int k = 0; k < n; ++k) {
                std::vector<double> p(static_cast<std::size_t>(dim));
                for (auto& coordinate : p) coordinate = rng.normal();
                points.push_back(std::move(p));
            }
            const int count = empirical_shatter(points, dim);
            crit.require(count <= (1 << n), "shatter count exceeded 2^n");
            if (dim > 2 && n > 2 * dim) {
                crit.require(count <= static_cast<int>(std::pow(n, dim) + 0.5),
                             "shatter count exceeded n^V inside the Sauer regime");
            }
            crit.require(count <= static_cast<int>(sauer_bound(n, dim)),
                         "shatter count exceeded the Sauer bound");
        }
    }

    const double eps = 0.05;
    for (BoundVariant variant : {BoundVariant::Devroye, BoundVariant::Basic}) {
        const std::int64_t n0 =
            static_cast<std::int64_t>(std::ceil(4.0 / (eps * eps))) + 1;
        double prev = log_deviation_bound(n0, eps, 4, variant);
        for (std::int64_t n = n0 + 500; n <= n0 + 50000; n += 500) {
            const double value = log_deviation_bound(n, eps, 4, variant);
            crit.require(value <= prev + 1e-12, "deviation bound increased in n");
            prev = value;
        }
    }

    // comparison table of the two theorems
    std::printf("    bound comparison at eps = 0.1, VC dim 4:\n");
    std::printf("    %-10s %-14s %-14s\n", "n", "basic", "devroye");
    for (std::int64_t n : {std::int64_t{1000}, std::int64_t{10000},
                           std::int64_t{100000}, std::int64_t{1000000}}) {
        std::printf("    %-10lld %-14.4g %-14.4g\n", static_cast<long long>(n),
                    deviation_bound(n, 0.1, 4, BoundVariant::Basic),
                    deviation_bound(n, 0.1, 4, BoundVariant::Devroye));
    }
    crit.note("shatter counts verified for n <= 8, d <= 3; monotonicity sampled");
    return crit;
}

// --- 7: byte-identical reports --------------------------------------------------

Criterion criterion_determinism() {
    Criterion crit{"report-determinism"};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "acceptmc_acceptance_c7";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const RunConfig config1 = load_config_file(config_path("gbm_smoke.json"));
    CommandOptions one;
    one.workers = 1;
    one.out_dir = dir.string();
    const CommandResult first = cmd_run(config1, one);
    std::ifstream in1(dir / "report.json", std::ios::binary);
    std::ostringstream buf1;
    buf1 << in1.rdbuf();
    in1.close();

    const RunConfig config2 = load_config_file(config_path("gbm_smoke.json"));
    CommandOptions four;
    four.workers = 4;
    four.out_dir = dir.string();
    const CommandResult second = cmd_run(config2, four);
    std::ifstream in2(dir / "report.json", std::ios::binary);
    std::ostringstream buf2;
    buf2 << in2.rdbuf();
    in2.close();
    fs::remove_all(dir);

    crit.require(!buf1.str().empty(), "first report was not written");
    crit.require(buf1.str() == buf2.str(),
                 "reports differ between runs / worker counts");
    crit.require(first.report.dump() == second.report.dump(),
                 "in-memory reports differ");
    crit.note("report bytes identical across repeat runs with 1 and 4 workers");
    return crit;
}

}  // namespace

int main() {
    const int workers = 4;
    std::vector<Criterion> results;
    results.push_back(criterion_constants());
    results.push_back(criterion_sample_sizes());
    results.push_back(criterion_end_to_end(workers));
    results.push_back(criterion_uniform_deviation(workers));
    results.push_back(criterion_optimality_gap(workers));
    results.push_back(criterion_appendix());
    results.push_back(criterion_determinism());

    int failures = 0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const Criterion& crit = results[k];
        if (!crit.pass) ++failures;
        std::printf("[%zu/%zu] %s %s: %s\n", k + 1, results.size(),
                    crit.pass ? "PASS" : "FAIL", crit.name.c_str(),
                    crit.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}
