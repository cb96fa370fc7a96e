#pragma once

#include <cmath>

#include "acceptmc/market.hpp"
#include "acceptmc/risk.hpp"

namespace acceptmc::detail {

/// Closed forms for a GBM scenario paired with a normal-mean-shift density
/// (a constant density is the zero-shift special case).
///
/// With S_{t+1} = S_t exp(sigma Z + mu), Z iid N(0,1), and dQ/dP tilting the
/// drivers to N(theta,1):
///   v_t(f) = (b-a) S0 (g-1) exp((sigma+theta) sum_{k<=t} z_k + t (mu - theta^2/2))
///   E[v_t] = (b-a) S0 (g-1) g^t,   g = exp(mu + sigma^2/2 + sigma theta).
struct GbmMeanShift {
    double growth = 1.0;        // g
    double range_coef = 0.0;    // (b-a) S0 (g-1)
    double shifted_mean = 0.0;  // sigma + theta, driver mean under the tilt
    double log_decay = 0.0;     // mu - theta^2/2
    double lower_coef = 0.0;    // a S0 (g-1), for c(f)
    int horizon = 0;

    double v(const DriverPath& path, int t) const {
        double sum = 0.0;
        for (int k = 0; k < t; ++k) sum += path.drivers[static_cast<std::size_t>(k)];
        return range_coef * std::exp(shifted_mean * sum + log_decay * t);
    }

    double mean_v(int t) const { return range_coef * std::pow(growth, t); }

    /// sum_{t<T} g^t
    double growth_series() const {
        double total = 0.0, term = 1.0;
        for (int t = 0; t < horizon; ++t) {
            total += term;
            term *= growth;
        }
        return total;
    }

    double d_plus() const { return range_coef > 0.0 ? range_coef * growth_series() : 0.0; }
    double d_minus() const { return range_coef < 0.0 ? -range_coef * growth_series() : 0.0; }
    double c() const { return lower_coef * growth_series(); }
};

inline GbmMeanShift gbm_mean_shift_forms(const GbmScenario& scenario,
                                         double theta) {
    GbmMeanShift forms;
    const double mu = scenario.log_drift();
    const double sigma = scenario.sigma();
    const auto bnd = scenario.bounds({});
    forms.growth = std::exp(mu + 0.5 * sigma * sigma + sigma * theta);
    forms.range_coef =
        (bnd.hi - bnd.lo) * scenario.initial_price() * (forms.growth - 1.0);
    forms.shifted_mean = sigma + theta;
    forms.log_decay = mu - 0.5 * theta * theta;
    forms.lower_coef = bnd.lo * scenario.initial_price() * (forms.growth - 1.0);
    forms.horizon = scenario.horizon();
    return forms;
}

/// theta for the supported density kinds, or no value when the pairing has
/// no closed form.
inline bool mean_shift_theta(const DensityDesc& desc, double* theta) {
    if (desc.kind == DensityKind::Constant) {
        *theta = 0.0;
        return true;
    }
    if (desc.kind == DensityKind::NormalMeanShift) {
        *theta = desc.shift;
        return true;
    }
    return false;
}

}  // namespace acceptmc::detail
