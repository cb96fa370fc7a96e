#pragma once

#include <span>
#include <string>
#include <vector>

#include "acceptmc/sampler.hpp"

namespace acceptmc {

struct Certificate {
    double epsilon = 0.0;
    double delta = 0.0;
    int aleph = 0;

    double confidence() const { return 1.0 - aleph * delta; }
};

struct RhoEstimate {
    std::vector<double> s;
    double rho_hat = 0.0;
    std::vector<double> per_i;  // D_i(s)
    int argmax_i = 0;           // smallest index attaining the sup
    Certificate certificate;
};

/// Fraction of samples with features.s > z (strict; ties count as 0, a
/// null event under a continuous eta). Throws ZeroMeasureError on an empty
/// column set.
double empirical_frequency(const SampleColumns& cols, std::span<const double> s);

/// D_i(s) = -d_i+ E_i+ + d_i- E_i- - c_i + alpha_i; zero normalizers
/// contribute nothing. Throws CertificationError when the bank does not
/// cover the weights' nonzero measures.
double d_i_of_s(const TiltedWeights& weights, const SampleBank& bank, int i,
                std::span<const double> s);

/// rho_hat(s) = max_i D_i(s), carrying the bank's (epsilon, delta, aleph)
/// certificate: the uniform deviation over all s exceeds epsilon with
/// probability at most aleph * delta over the bank draw.
RhoEstimate rho_hat(const TiltedWeights& weights, const SampleBank& bank,
                    std::span<const double> s);

/// Batch evaluation over a grid in a single pass over each sample list,
/// chunked with a fixed reduction order; bit-identical to mapping rho_hat
/// and independent of the worker count.
std::vector<RhoEstimate> rho_hat_batch(const TiltedWeights& weights,
                                       const SampleBank& bank,
                                       const std::vector<std::vector<double>>& grid,
                                       int workers = 1);

/// CSV rows: s..., D_1..D_m, rho_hat.
void write_estimates_csv(const std::vector<RhoEstimate>& estimates,
                         const std::string& path);

}  // namespace acceptmc
