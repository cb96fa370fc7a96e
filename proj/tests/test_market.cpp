#include <doctest.h>

#include <cmath>

#include "acceptmc/errors.hpp"
#include "support/test_helpers.hpp"

using namespace acceptmc;
using namespace acceptmc::testing;

TEST_SUITE("market") {

TEST_CASE("gbm prices follow the driver prefix") {
    const auto gbm = make_paper_gbm();
    const double z[3] = {0.0, 0.0, 0.0};
    const DriverPath path = gbm->path_from_drivers(std::span<const double>(z, 3));
    CHECK(path.prices[0] == doctest::Approx(4.0));
    CHECK(path.prices[1] == doctest::Approx(4.0 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(path.prices[2] == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(path.prices[3] == doctest::Approx(4.0 * std::exp(-1.5)).epsilon(1e-14));
}

TEST_CASE("sampled paths are internally consistent and seed-deterministic") {
    const auto gbm = make_paper_gbm();
    RngStream a(11), b(11);
    const DriverPath pa = gbm->sample_path(a);
    const DriverPath pb = gbm->sample_path(b);
    REQUIRE(pa.drivers.size() == 3);
    REQUIRE(pa.prices.size() == 4);
    for (std::size_t k = 0; k < 3; ++k) CHECK(pa.drivers[k] == pb.drivers[k]);
    for (std::size_t t = 0; t <= 3; ++t) {
        CHECK(pa.prices[t] == pb.prices[t]);
        const auto prefix = std::span<const double>(pa.drivers).subspan(0, t);
        CHECK(pa.prices[t] == doctest::Approx(gbm->price(prefix)).epsilon(1e-14));
    }
}

TEST_CASE("gbm terminal price is a martingale (sample mean near S0)") {
    const auto gbm = make_paper_gbm();
    RngStream rng(2024);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const DriverPath path = gbm->sample_path(rng);
        sum += path.prices[3];
        sq += path.prices[3] * path.prices[3];
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 4.0) < 4.0 * se);
}

TEST_CASE("degenerate single-branch tree has the unique path") {
    std::vector<TreeScenario::Node> nodes(2);
    nodes[0].price = 4.0;
    nodes[0].bnd = {0.0, 1.0};
    nodes[0].children = {1};
    nodes[1] = {0, 1, 0.0, 1.0, 5.0, {0.0, 1.0}, {}};
    const TreeScenario tree(std::move(nodes));
    const auto paths = enumerate_paths(tree);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].second == doctest::Approx(1.0));
    CHECK(paths[0].first.prices[1] == doctest::Approx(5.0));
}

TEST_CASE("wealth increment") {
    const auto gbm = make_paper_gbm();
    RngStream rng(5);
    const DriverPath path = gbm->sample_path(rng);

    SUBCASE("zero strategy earns nothing") {
        const double xi[3] = {0.0, 0.0, 0.0};
        CHECK(wealth_increment(*gbm, path, std::span<const double>(xi, 3)) == 0.0);
    }
    SUBCASE("full holding telescopes") {
        const double xi[3] = {1.0, 1.0, 1.0};
        CHECK(wealth_increment(*gbm, path, std::span<const double>(xi, 3)) ==
              doctest::Approx(path.prices[3] - path.prices[0]).epsilon(1e-12));
    }
    SUBCASE("one period identity") {
        const GbmScenario one(1, 4.0, -0.5, 1.0, {0.0, 1.0});
        const double z = std::log(5.0 / 4.0) + 0.5;  // S1 = 5
        const DriverPath p = one.path_from_drivers(std::span<const double>(&z, 1));
        CHECK(p.prices[1] == doctest::Approx(5.0).epsilon(1e-14));
        const double xi[1] = {1.0};
        CHECK(wealth_increment(one, p, std::span<const double>(xi, 1)) ==
              doctest::Approx(1.0));
    }
    SUBCASE("bound violation names the period") {
        const double xi[3] = {0.5, 1.5, 0.5};
        try {
            wealth_increment(*gbm, path, std::span<const double>(xi, 3));
            FAIL("expected ConstraintError");
        } catch (const ConstraintError& err) {
            CHECK(err.t == 1);
        }
    }
}

TEST_CASE("enumerate_paths") {
    SUBCASE("two periods, binary") {
        const auto tree = make_tree_a();
        const auto paths = enumerate_paths(*tree);
        CHECK(paths.size() == 4);
        double total = 0.0;
        for (const auto& [path, p] : paths) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
    SUBCASE("one period, even split") {
        const auto tree = make_tree_b();
        const auto paths = enumerate_paths(*tree);
        REQUIRE(paths.size() == 2);
        CHECK(paths[0].second == doctest::Approx(0.5));
        CHECK(paths[1].second == doctest::Approx(0.5));
        CHECK(paths[0].first.prices[1] == doctest::Approx(5.0));
        CHECK(paths[1].first.prices[1] == doctest::Approx(3.0));
    }
    SUBCASE("three periods give 2^3 paths") {
        const auto tree = [] {
            std::vector<TreeScenario::Node> ns;
            TreeScenario::Node root;
            root.price = 1.0;
            root.bnd = {0.0, 1.0};
            ns.push_back(root);
            std::function<void(int)> expand = [&](int index) {
                if (ns[static_cast<std::size_t>(index)].depth == 3) return;
                for (int branch = 0; branch < 2; ++branch) {
                    TreeScenario::Node node;
                    node.parent = index;
                    node.depth = ns[static_cast<std::size_t>(index)].depth + 1;
                    node.z = branch == 0 ? 1.0 : -1.0;
                    node.prob = 0.5;
                    node.price = ns[static_cast<std::size_t>(index)].price *
                                 (branch == 0 ? 1.1 : 0.95);
                    node.bnd = {0.0, 1.0};
                    const int child = static_cast<int>(ns.size());
                    ns[static_cast<std::size_t>(index)].children.push_back(child);
                    ns.push_back(node);
                    expand(child);
                }
            };
            expand(0);
            return std::make_unique<TreeScenario>(std::move(ns));
        }();
        CHECK(enumerate_paths(*tree).size() == 8);
    }
    SUBCASE("continuous scenario is rejected") {
        const auto gbm = make_paper_gbm();
        CHECK_THROWS_AS(enumerate_paths(*gbm), UnsupportedKindError);
    }
}

TEST_CASE("tree validation catches bad input") {
    SUBCASE("probabilities must sum to one") {
        std::vector<TreeScenario::Node> nodes(3);
        nodes[0].price = 1.0;
        nodes[0].bnd = {0.0, 1.0};
        nodes[0].children = {1, 2};
        nodes[1] = {0, 1, 1.0, 0.6, 1.1, {0.0, 1.0}, {}};
        nodes[2] = {0, 1, -1.0, 0.6, 0.9, {0.0, 1.0}, {}};
        CHECK_THROWS_AS(TreeScenario(std::move(nodes)), ConfigError);
    }
    SUBCASE("bounds must be ordered") {
        CHECK_THROWS_AS(GbmScenario(3, 4.0, -0.5, 1.0, {1.0, 1.0}), ConfigError);
    }
}

}  // TEST_SUITE
