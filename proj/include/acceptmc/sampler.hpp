#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acceptmc/vcbound.hpp"
#include "acceptmc/weights.hpp"

namespace acceptmc {

/// One draw from a tilted product measure mu_i(+/-) x eta, with the
/// feature vector (v_1..v_m at the drawn (path, t)) precomputed.
struct TiltedSample {
    DriverPath path;
    int t = 0;
    double z = 0.0;
    std::vector<double> features;
};

/// Column storage for one measure-sign pair; features are row-major with m
/// entries per sample. This is the layout the estimator scans.
struct SampleColumns {
    std::vector<std::int32_t> t;
    std::vector<double> z;
    std::vector<double> features;

    std::int64_t size() const { return static_cast<std::int64_t>(t.size()); }
};

enum class TiltRoute { Direct, Rejection };

struct BankEntry {
    int i = 0;
    char sign = '+';
    double d = 0.0;
    std::int64_t kappa = 0;
    SampleColumns cols;
};

/// Certified sample bank covering every nonzero tilted measure. Immutable
/// once built; reuse is guarded by the config fingerprint.
struct SampleBank {
    int m = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    int aleph = 0;
    EtaKind eta = EtaKind::Normal;
    std::uint64_t seed = 0;
    std::string fingerprint;
    std::vector<BankEntry> entries;

    const BankEntry* find(int i, char sign) const;
};

/// Draws n independent samples from mu_i(sign) x eta. Direct route uses the
/// scenario's known tilted law (GBM mean shift, or exact enumeration on
/// trees); the rejection route proposes from P x U_T against a caller
/// envelope M >= sup v and aborts with CertificationError when the envelope
/// is breached. Throws ZeroMeasureError when the requested normalizer is 0.
std::vector<TiltedSample> sample_tilted(const MarketScenario& scenario,
                                        const TiltedWeights& weights, int i,
                                        char sign, std::int64_t n, EtaKind eta,
                                        RngStream& rng,
                                        TiltRoute route = TiltRoute::Direct,
                                        double envelope = 0.0);

/// Populates a bank for every plan entry. Work is split into fixed 64k
/// chunks whose streams derive from (master_seed, i, sign, chunk), so the
/// result is byte-identical for any worker count.
SampleBank build_bank(const MarketScenario& scenario,
                      const TiltedWeights& weights, const SamplePlan& plan,
                      EtaKind eta, std::uint64_t master_seed, int workers = 1,
                      TiltRoute route = TiltRoute::Direct, double envelope = 0.0);

/// Versioned CSV persistence (columns i,sign,t,z,f1..fm plus a metadata
/// header line). Values round-trip exactly.
void save_bank_csv(const SampleBank& bank, const std::string& path);
SampleBank load_bank_csv(const std::string& path);

}  // namespace acceptmc
