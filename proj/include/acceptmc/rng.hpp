#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace acceptmc {

/// Deterministic random stream.
///
/// All sampling in the library goes through this wrapper so that results
/// depend only on the seed, never on platform distribution internals.
/// Normal variates use the inverse-CDF transform for the same reason.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Derive an independent stream from a master seed, a role tag and an
    /// index. Stable hashing, so parallel workers can own disjoint streams
    /// that do not depend on scheduling.
    static RngStream derive(std::uint64_t master, std::string_view tag,
                            std::uint64_t index = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0,1), 53-bit resolution.
    double uniform();

    /// Standard normal via inverse CDF.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, Wichura's AS 241 (double precision).
/// Throws std::domain_error outside (0,1).
double normal_quantile(double p);

/// Samples an index with probability proportional to fixed nonnegative
/// weights (binary search on the cumulative table).
class DiscreteSampler {
public:
    explicit DiscreteSampler(std::span<const double> weights);
    int operator()(RngStream& rng) const;
    double probability(int k) const;
    int size() const { return static_cast<int>(cum_.size()); }

private:
    std::vector<double> cum_;
    double total_ = 0.0;
};

/// Stable 64-bit content hash (FNV-1a), used for config fingerprints and
/// stream derivation.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace acceptmc
