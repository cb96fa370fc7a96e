#include "acceptmc/vcbound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acceptmc/errors.hpp"
#include "acceptmc/lp.hpp"

namespace acceptmc {

const char* bound_variant_name(BoundVariant v) {
    return v == BoundVariant::Devroye ? "devroye" : "basic";
}

BoundVariant bound_variant_from_name(const std::string& name) {
    if (name == "devroye") return BoundVariant::Devroye;
    if (name == "basic") return BoundVariant::Basic;
    throw ConfigError("unknown bound variant: " + name);
}

int halfspace_vc_dim(int m) {
    if (m < 1) throw std::invalid_argument("halfspace_vc_dim: m must be >= 1");
    return m + 1;
}

namespace {

double log_sauer_bound(std::int64_t n, int vc_dim) {
    if (vc_dim > 2 && n > 2 * static_cast<std::int64_t>(vc_dim)) {
        return vc_dim * std::log(static_cast<double>(n));
    }
    return static_cast<double>(n) * std::log(2.0);
}

}  // namespace

double sauer_bound(std::int64_t n, int vc_dim) {
    if (n < 1 || vc_dim < 1) {
        throw std::invalid_argument("sauer_bound: need n >= 1 and vc_dim >= 1");
    }
    return std::exp(log_sauer_bound(n, vc_dim));
}

double log_deviation_bound(std::int64_t n, double eps, int vc_dim,
                           BoundVariant variant) {
    if (n < 1 || !(eps > 0.0)) {
        throw std::invalid_argument("deviation_bound: need n >= 1 and eps > 0");
    }
    const double nn = static_cast<double>(n);
    switch (variant) {
        case BoundVariant::Devroye:
            return std::log(4.0) + 2.0 * vc_dim * std::log(nn) -
                   2.0 * nn * eps * eps + 4.0 * eps + 4.0 * eps * eps;
        case BoundVariant::Basic:
            return std::log(8.0) + log_sauer_bound(n, vc_dim) -
                   nn * eps * eps / 32.0;
    }
    return 0.0;
}

double deviation_bound(std::int64_t n, double eps, int vc_dim,
                       BoundVariant variant) {
    return std::exp(log_deviation_bound(n, eps, vc_dim, variant));
}

int empirical_shatter(const std::vector<std::vector<double>>& points, int dim) {
    const int n = static_cast<int>(points.size());
    if (n > 20) {
        throw std::invalid_argument("empirical_shatter: limited to 20 points");
    }
    if (dim < 1) throw std::invalid_argument("empirical_shatter: dim must be >= 1");
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != dim) {
            throw std::invalid_argument("empirical_shatter: point dimension mismatch");
        }
    }
    if (n == 0) return 1;

    // Subset S is cut out by some halfspace iff r.p >= 1 on S (strictness up
    // to scaling) and r.p <= 0 off S has a solution; r = u - v, u,v >= 0.
    auto feasible = [&](std::uint32_t mask) {
        std::vector<std::vector<double>> A;
        std::vector<double> b;
        for (int k = 0; k < n; ++k) {
            std::vector<double> row(static_cast<std::size_t>(2 * dim), 0.0);
            const bool inside = (mask >> k) & 1u;
            const double sgn = inside ? -1.0 : 1.0;
            for (int j = 0; j < dim; ++j) {
                row[static_cast<std::size_t>(j)] =
                    sgn * points[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                row[static_cast<std::size_t>(dim + j)] =
                    -sgn * points[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            }
            A.push_back(std::move(row));
            b.push_back(inside ? -1.0 : 0.0);
        }
        const std::vector<double> zero(static_cast<std::size_t>(2 * dim), 0.0);
        return lp::simplex_max(A, b, zero).status == lp::Status::Optimal;
    };

    int count = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (feasible(mask)) ++count;
    }
    return count;
}

std::int64_t minimal_kappa(double eps, double delta, int vc_dim,
                           BoundVariant variant) {
    if (!(eps > 0.0)) throw std::invalid_argument("minimal_kappa: eps must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("minimal_kappa: delta must lie in (0,1)");
    }
    const double log_delta = std::log(delta);
    auto ok = [&](std::int64_t n) {
        return log_deviation_bound(n, eps, vc_dim, variant) <= log_delta;
    };
    std::int64_t hi = 1;
    while (!ok(hi)) {
        hi *= 2;
        if (hi > (std::int64_t{1} << 50)) {
            throw ConfigError("minimal_kappa: no attainable sample size (eps too small)");
        }
    }
    std::int64_t lo = hi / 2;  // bound(lo) > delta, bound(hi) <= delta
    while (lo + 1 < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

std::int64_t SamplePlan::total_samples() const {
    std::int64_t total = 0;
    for (const auto& entry : entries) total += entry.kappa;
    return total;
}

const PlanEntry* SamplePlan::find(int i, char sign) const {
    for (const auto& entry : entries) {
        if (entry.i == i && entry.sign == sign) return &entry;
    }
    return nullptr;
}

SamplePlan plan_samples(const TiltedWeights& weights, double epsilon,
                        double delta, BoundVariant variant) {
    if (!(epsilon > 0.0)) throw ConfigError("plan_samples: epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ConfigError("plan_samples: delta must lie in (0,1)");
    }
    SamplePlan plan;
    plan.epsilon = epsilon;
    plan.delta = delta;
    plan.vc_dim = halfspace_vc_dim(weights.m);
    plan.variant = variant;
    plan.constants_certified =
        weights.provenance != ConstantsProvenance::MonteCarlo;
    for (int i = 0; i < weights.m; ++i) {
        for (const char sign : {'+', '-'}) {
            const double d = (sign == '+') ? weights.d_plus[static_cast<std::size_t>(i)]
                                           : weights.d_minus[static_cast<std::size_t>(i)];
            if (d <= 0.0) continue;
            PlanEntry entry;
            entry.i = i;
            entry.sign = sign;
            entry.d = d;
            entry.eps_over_d = epsilon / d;
            entry.kappa = minimal_kappa(entry.eps_over_d, delta, plan.vc_dim, variant);
            entry.log_bound_value =
                log_deviation_bound(entry.kappa, entry.eps_over_d, plan.vc_dim, variant);
            plan.entries.push_back(entry);
        }
    }
    return plan;
}

double certify_epsilon(const SamplePlan& plan, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("certify_epsilon: delta must lie in (0,1)");
    }
    const double log_delta = std::log(delta);
    double epsilon = 0.0;
    for (const auto& entry : plan.entries) {
        // Smallest x with bound(kappa, x) <= delta; the bound decreases in x
        // past a negligible hump near x ~ 1/kappa.
        double lo = 1e-12, hi = 1.0;
        while (log_deviation_bound(entry.kappa, hi, plan.vc_dim, plan.variant) >
               log_delta) {
            hi *= 2.0;
            if (hi > 1e9) {
                throw ConfigError("certify_epsilon: budget certifies no finite precision");
            }
        }
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (log_deviation_bound(entry.kappa, mid, plan.vc_dim, plan.variant) <=
                log_delta) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        epsilon = std::max(epsilon, entry.d * hi);
    }
    return epsilon;
}

}  // namespace acceptmc
