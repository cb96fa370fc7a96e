#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <vector>

#include "acceptmc/errors.hpp"
#include "acceptmc/oracle.hpp"
#include "support/test_helpers.hpp"

#include <json.hpp>

using namespace acceptmc;
using namespace acceptmc::testing;

namespace {

// Independent minimal-capital oracle: enumerate the vertices of the
// (w0, xi) polytope by activating every full subset of constraints and
// keep the feasible vertex with the least w0. Only used to validate the
// simplex route on desk-size trees.
double min_capital_by_vertex_enumeration(const TreeScenario& tree,
                                         const RiskSpec& spec) {
    const auto& decisions = tree.decision_nodes();
    const int k = static_cast<int>(decisions.size());
    const int dim = 1 + k;  // w0 plus one holding per decision node
    const int m = spec.m();

    std::vector<int> node_to_decision(tree.nodes().size(), -1);
    for (int d = 0; d < k; ++d) {
        node_to_decision[static_cast<std::size_t>(decisions[static_cast<std::size_t>(d)])] = d;
    }
    // rows: a.x >= b with x = (w0, xi_1..xi_k)
    std::vector<std::vector<double>> lhs;
    std::vector<double> rhs;
    for (int i = 0; i < m; ++i) {
        const DensityFn f = make_density_fn(tree, spec.densities[static_cast<std::size_t>(i)]);
        std::vector<double> row(static_cast<std::size_t>(dim), 0.0);
        row[0] = 1.0;
        for (int leaf : tree.leaves()) {
            const auto chain = tree.path_nodes(leaf);
            const DriverPath path = tree.path_for_leaf(leaf);
            const double mass = tree.node_probability(leaf) * f(path);
            for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
                const int d = node_to_decision[static_cast<std::size_t>(chain[t])];
                row[static_cast<std::size_t>(1 + d)] +=
                    mass * (tree.nodes()[static_cast<std::size_t>(chain[t + 1])].price -
                            tree.nodes()[static_cast<std::size_t>(chain[t])].price);
            }
        }
        lhs.push_back(std::move(row));
        rhs.push_back(spec.alphas[static_cast<std::size_t>(i)]);
    }
    for (int d = 0; d < k; ++d) {
        const auto& node = tree.nodes()[static_cast<std::size_t>(decisions[static_cast<std::size_t>(d)])];
        std::vector<double> lo(static_cast<std::size_t>(dim), 0.0);
        lo[static_cast<std::size_t>(1 + d)] = 1.0;
        lhs.push_back(lo);
        rhs.push_back(node.bnd.lo);
        std::vector<double> hi(static_cast<std::size_t>(dim), 0.0);
        hi[static_cast<std::size_t>(1 + d)] = -1.0;
        lhs.push_back(hi);
        rhs.push_back(-node.bnd.hi);
    }

    const int rows = static_cast<int>(lhs.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(static_cast<std::size_t>(dim), 0);
    // iterate over all C(rows, dim) active sets
    std::function<void(int, int)> recurse = [&](int start, int chosen) {
        if (chosen == dim) {
            // solve the square system lhs[pick] x = rhs[pick]
            std::vector<std::vector<double>> a(static_cast<std::size_t>(dim),
                                               std::vector<double>(static_cast<std::size_t>(dim) + 1));
            for (int r = 0; r < dim; ++r) {
                for (int col = 0; col < dim; ++col) {
                    a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] =
                        lhs[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])]
                           [static_cast<std::size_t>(col)];
                }
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(dim)] =
                    rhs[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
            }
            // gaussian elimination with partial pivoting
            for (int col = 0; col < dim; ++col) {
                int pivot = -1;
                double best_abs = 1e-10;
                for (int r = col; r < dim; ++r) {
                    const double v = std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
                    if (v > best_abs) {
                        best_abs = v;
                        pivot = r;
                    }
                }
                if (pivot < 0) return;  // singular active set
                std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
                for (int r = 0; r < dim; ++r) {
                    if (r == col) continue;
                    const double factor = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                                          a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
                    for (int cc = col; cc <= dim; ++cc) {
                        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
                            factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(cc)];
                    }
                }
            }
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (int r = 0; r < dim; ++r) {
                x[static_cast<std::size_t>(r)] =
                    a[static_cast<std::size_t>(r)][static_cast<std::size_t>(dim)] /
                    a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
            }
            for (int r = 0; r < rows; ++r) {
                double dot = 0.0;
                for (int col = 0; col < dim; ++col) {
                    dot += lhs[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] *
                           x[static_cast<std::size_t>(col)];
                }
                if (dot < rhs[static_cast<std::size_t>(r)] - 1e-9) return;  // infeasible vertex
            }
            best = std::min(best, x[0]);
            return;
        }
        for (int r = start; r <= rows - (dim - chosen); ++r) {
            pick[static_cast<std::size_t>(chosen)] = r;
            recurse(r + 1, chosen + 1);
        }
    };
    recurse(0, 0);
    return best;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("one-period fixture matches the frozen expectations") {
    const auto tree = make_tree_b();
    const RiskSpec spec = make_tree_b_risk();
    const ExactPipeline exact(*tree, spec, EtaKind::Normal);
    std::ifstream in(test_data_path("tree_fixture.json"));
    REQUIRE(in.good());
    const auto fixture = nlohmann::json::parse(in).at("tree_b");
    const auto s_values = fixture.at("s_values").get<std::vector<double>>();
    const auto expected = fixture.at("expected_e_wf").get<std::vector<double>>();
    for (std::size_t k = 0; k < s_values.size(); ++k) {
        const std::vector<double> s{s_values[k]};
        CHECK(exact.expected_wealth_density(0, s) ==
              doctest::Approx(expected[k]).epsilon(1e-9));
    }
    CHECK(exact.d_plus(0) == doctest::Approx(fixture.at("v0").get<double>() * 1.0));
}

TEST_CASE("exact pipeline agrees with rho_exact on random parameters") {
    const auto tree = make_tree_a();
    const RiskSpec spec = make_tree_a_risk();
    const ExactPipeline exact(*tree, spec, EtaKind::Normal);
    const TiltedWeights weights = compute_constants(*tree, spec);
    RngStream rng(88);
    for (int rep = 0; rep < 20; ++rep) {
        const std::vector<double> s{6.0 * (rng.uniform() - 0.5),
                                    6.0 * (rng.uniform() - 0.5)};
        const double w0 = 2.0 * (rng.uniform() - 0.5);
        const Strategy strategy =
            make_strategy(weights, StrategyParams{s, EtaKind::Normal});
        CHECK(exact.rho(s, w0) ==
              doctest::Approx(rho_exact(*tree, spec, strategy, w0)).epsilon(1e-11));
    }
}

TEST_CASE("tilted probability at zero parameters is eta(0) = 1/2") {
    const auto tree = make_tree_a();
    const ExactPipeline exact(*tree, make_tree_a_risk(), EtaKind::Normal);
    const std::vector<double> s{0.0, 0.0};
    CHECK(exact.tilted_probability(0, '+', s) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact.tilted_probability(1, '+', s) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact.tilted_probability(1, '-', s) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("minimal capital LP") {
    SUBCASE("martingale tree with the reference measure needs nothing") {
        const auto tree = make_tree_b();
        RiskSpec spec;
        spec.densities = {DensityDesc{DensityKind::Constant, 0.0, 0.0, {}}};
        spec.alphas = {0.0};
        const LpResult lp = min_capital_lp(*tree, spec);
        CHECK(lp.w0_min == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("a positive floor forces that much capital") {
        const auto tree = make_tree_b();
        RiskSpec spec;
        spec.densities = {DensityDesc{DensityKind::Constant, 0.0, 0.0, {}}};
        spec.alphas = {0.35};
        const LpResult lp = min_capital_lp(*tree, spec);
        CHECK(lp.w0_min == doctest::Approx(0.35).epsilon(1e-10));
    }
    SUBCASE("two-measure fixture matches the frozen vertex-enumeration value") {
        const auto tree = make_tree_a();
        const RiskSpec spec = make_tree_a_risk();
        const LpResult lp = min_capital_lp(*tree, spec);
        std::ifstream in(test_data_path("tree_fixture.json"));
        REQUIRE(in.good());
        const auto fixture = nlohmann::json::parse(in);
        CHECK(lp.w0_min ==
              doctest::Approx(fixture.at("lp_w0_min").get<double>()).epsilon(1e-9));
        const auto xi = fixture.at("lp_xi").get<std::vector<double>>();
        REQUIRE(lp.xi.size() == xi.size());
        for (std::size_t k = 0; k < xi.size(); ++k) {
            CHECK(lp.xi[k] == doctest::Approx(xi[k]).epsilon(1e-8));
        }
        // at least one risk constraint binds at the optimum
        double min_slack = 1e9;
        for (double slack : lp.slacks) {
            CHECK(slack >= -1e-9);
            min_slack = std::min(min_slack, slack);
        }
        CHECK(std::abs(min_slack) <= 1e-9);
    }
    SUBCASE("vertex enumeration agrees with the simplex on random specs") {
        RngStream rng(404);
        for (int rep = 0; rep < 5; ++rep) {
            const auto tree = make_tree_a();
            RiskSpec spec;
            spec.densities = {
                DensityDesc{DensityKind::TreeExpTilt, 0.0,
                            1.2 * (rng.uniform() - 0.5), {}},
                DensityDesc{DensityKind::TreeLeafTable, 0.0, 0.0, {}},
            };
            // random normalized leaf table
            std::vector<double> table(4);
            double total = 0.0;
            for (auto& v : table) {
                v = 0.1 + rng.uniform();
                total += v * 0.25;
            }
            for (auto& v : table) v /= total;
            spec.densities[1].leaf_values = table;
            spec.alphas = {rng.uniform() - 0.3, rng.uniform() - 0.3};
            const LpResult lp = min_capital_lp(*tree, spec);
            const double vertex = min_capital_by_vertex_enumeration(*tree, spec);
            CHECK(lp.w0_min == doctest::Approx(vertex).epsilon(1e-8));
        }
    }
    SUBCASE("continuous scenarios are rejected") {
        const auto gbm = make_paper_gbm();
        CHECK_THROWS_AS(min_capital_lp(*gbm, make_paper_risk()),
                        UnsupportedKindError);
    }
}

TEST_CASE("parametric family minimum dominates the LP floor") {
    const auto tree = make_tree_a();
    const RiskSpec spec = make_tree_a_risk();
    const ExactPipeline exact(*tree, spec, EtaKind::Normal);
    const LpResult lp = min_capital_lp(*tree, spec);
    double family_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= 40; ++a) {
        for (int b = 0; b <= 40; ++b) {
            const std::vector<double> s{-8.0 + a * 0.4, -8.0 + b * 0.4};
            family_min = std::min(family_min, exact.rho(s));
        }
    }
    CHECK(family_min >= lp.w0_min - 1e-10);
}

}  // TEST_SUITE
