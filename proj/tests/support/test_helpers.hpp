#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "acceptmc/market.hpp"
#include "acceptmc/risk.hpp"

namespace acceptmc::testing {

// ---- fixtures -------------------------------------------------------------

/// T=3 GBM: S0=4, S_{t+1} = S_t exp(Z - 1/2), bounds [0,1]; three scenario
/// measures (driver mean shifts +1, -1, 0) with penalties (e^4, e^-1, 0.2).
std::unique_ptr<GbmScenario> make_paper_gbm();
RiskSpec make_paper_risk();

/// 2-period binary tree: S0=4, up x1.3 (z=+1), down x0.75 (z=-1), p=1/2,
/// bounds [0,1]; measures: exp-tilt(0.5) with alpha=0.3 and the leaf table
/// (0.4, 1.6, 1.6, 0.4) with alpha=0.1.
std::unique_ptr<TreeScenario> make_tree_a();
RiskSpec make_tree_a_risk();

/// 1-period tree: S0=4, up 5 / down 3 with p=1/2; single leaf-table measure
/// (1.2, 0.8), alpha=0.
std::unique_ptr<TreeScenario> make_tree_b();
RiskSpec make_tree_b_risk();

/// Per-node holdings turned into a path-wise strategy.
Strategy node_table_strategy(const TreeScenario& tree, std::vector<double> values);

// ---- statistics helpers ----------------------------------------------------

/// chi-square upper quantile via the Wilson-Hilferty approximation.
double chi_square_quantile(int dof, double p);

/// Smallest k with P(Binomial(n, p) <= k) >= level, by exact pmf summation.
int binomial_upper_quantile(int n, double p, double level);

/// Exact rho(W(xi(s))) for the paper GBM fixture (s3 = 0) by 1-d
/// quadrature over the running driver sum; composite Simpson, runs to
/// ~1e-9 absolute accuracy.
double exact_rho_paper_gbm(double s1, double s2);

std::string test_data_path(const std::string& name);
std::string config_path(const std::string& name);

}  // namespace acceptmc::testing
