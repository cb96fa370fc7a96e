#include "acceptmc/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "acceptmc/errors.hpp"
#include "acceptmc/parallel.hpp"

namespace acceptmc {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

void check_coverage(const TiltedWeights& weights, const SampleBank& bank) {
    if (bank.m != weights.m) {
        throw CertificationError("bank/weights mismatch: measure count differs");
    }
    for (int i = 0; i < weights.m; ++i) {
        for (const char sign : {'+', '-'}) {
            const double d = (sign == '+') ? weights.d_plus[static_cast<std::size_t>(i)]
                                           : weights.d_minus[static_cast<std::size_t>(i)];
            if (d <= 0.0) continue;
            const BankEntry* entry = bank.find(i, sign);
            if (entry == nullptr || entry->cols.size() == 0) {
                throw CertificationError("bank does not cover measure " +
                                         std::to_string(i + 1) + std::string(1, sign));
            }
            if (std::abs(entry->d - d) > 1e-9 * (1.0 + std::abs(d))) {
                throw CertificationError("bank was built for different normalizers");
            }
        }
    }
}

// Counts of {features.s > z} per grid point for one column set, chunked
// with a fixed reduction order.
std::vector<std::int64_t> batch_counts(const SampleColumns& cols, int m,
                                       const std::vector<std::vector<double>>& grid,
                                       int workers) {
    const std::int64_t n = cols.size();
    const std::size_t n_points = grid.size();
    const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<std::int64_t>> per_chunk(
        static_cast<std::size_t>(n_chunks));
    parallel_for(n_chunks, workers, [&](std::int64_t c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(n, begin + kChunk);
        std::vector<std::int64_t> counts(n_points, 0);
        for (std::size_t p = 0; p < n_points; ++p) {
            const double* s = grid[p].data();
            std::int64_t hits = 0;
            const double* feat = cols.features.data() + begin * m;
            for (std::int64_t k = begin; k < end; ++k, feat += m) {
                double dot = 0.0;
                for (int j = 0; j < m; ++j) dot += feat[j] * s[j];
                hits += dot > cols.z[static_cast<std::size_t>(k)] ? 1 : 0;
            }
            counts[p] = hits;
        }
        per_chunk[static_cast<std::size_t>(c)] = std::move(counts);
    });
    std::vector<std::int64_t> total(n_points, 0);
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        for (std::size_t p = 0; p < n_points; ++p) {
            total[p] += per_chunk[static_cast<std::size_t>(c)][p];
        }
    }
    return total;
}

}  // namespace

double empirical_frequency(const SampleColumns& cols, std::span<const double> s) {
    if (cols.size() == 0) {
        throw ZeroMeasureError("empirical_frequency: empty sample list");
    }
    const int m = static_cast<int>(s.size());
    if (static_cast<std::int64_t>(cols.features.size()) != cols.size() * m) {
        throw std::invalid_argument("empirical_frequency: dimension mismatch");
    }
    std::int64_t hits = 0;
    const double* feat = cols.features.data();
    for (std::int64_t k = 0; k < cols.size(); ++k, feat += m) {
        double dot = 0.0;
        for (int j = 0; j < m; ++j) dot += feat[j] * s[j];
        hits += dot > cols.z[static_cast<std::size_t>(k)] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(cols.size());
}

double d_i_of_s(const TiltedWeights& weights, const SampleBank& bank, int i,
                std::span<const double> s) {
    if (i < 0 || i >= weights.m) {
        throw std::invalid_argument("d_i_of_s: measure index out of range");
    }
    check_coverage(weights, bank);
    double value = -weights.c[static_cast<std::size_t>(i)] +
                   weights.alphas[static_cast<std::size_t>(i)];
    const double dp = weights.d_plus[static_cast<std::size_t>(i)];
    if (dp > 0.0) {
        value -= dp * empirical_frequency(bank.find(i, '+')->cols, s);
    }
    const double dm = weights.d_minus[static_cast<std::size_t>(i)];
    if (dm > 0.0) {
        value += dm * empirical_frequency(bank.find(i, '-')->cols, s);
    }
    return value;
}

RhoEstimate rho_hat(const TiltedWeights& weights, const SampleBank& bank,
                    std::span<const double> s) {
    std::vector<std::vector<double>> grid{{s.begin(), s.end()}};
    return rho_hat_batch(weights, bank, grid, 1).front();
}

std::vector<RhoEstimate> rho_hat_batch(const TiltedWeights& weights,
                                       const SampleBank& bank,
                                       const std::vector<std::vector<double>>& grid,
                                       int workers) {
    if (grid.empty()) throw std::invalid_argument("rho_hat_batch: empty grid");
    for (const auto& s : grid) {
        if (static_cast<int>(s.size()) != weights.m) {
            throw std::invalid_argument("rho_hat_batch: grid point dimension mismatch");
        }
    }
    check_coverage(weights, bank);

    // Frequencies per bank entry per grid point.
    std::vector<std::vector<double>> freq(bank.entries.size());
    for (std::size_t e = 0; e < bank.entries.size(); ++e) {
        const auto counts = batch_counts(bank.entries[e].cols, weights.m, grid, workers);
        freq[e].resize(grid.size());
        for (std::size_t p = 0; p < grid.size(); ++p) {
            freq[e][p] = static_cast<double>(counts[p]) /
                         static_cast<double>(bank.entries[e].cols.size());
        }
    }

    const Certificate certificate{bank.epsilon, bank.delta, bank.aleph};
    std::vector<RhoEstimate> out(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        RhoEstimate& est = out[p];
        est.s = grid[p];
        est.certificate = certificate;
        est.per_i.assign(static_cast<std::size_t>(weights.m), 0.0);
        est.rho_hat = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < weights.m; ++i) {
            double value = -weights.c[static_cast<std::size_t>(i)] +
                           weights.alphas[static_cast<std::size_t>(i)];
            for (std::size_t e = 0; e < bank.entries.size(); ++e) {
                const auto& entry = bank.entries[e];
                if (entry.i != i) continue;
                const double d = (entry.sign == '+')
                                     ? weights.d_plus[static_cast<std::size_t>(i)]
                                     : weights.d_minus[static_cast<std::size_t>(i)];
                value += (entry.sign == '+' ? -1.0 : 1.0) * d * freq[e][p];
            }
            est.per_i[static_cast<std::size_t>(i)] = value;
            if (value > est.rho_hat) {
                est.rho_hat = value;
                est.argmax_i = i;
            }
        }
    }
    return out;
}

void write_estimates_csv(const std::vector<RhoEstimate>& estimates,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open estimates file for writing: " + path);
    if (estimates.empty()) return;
    const std::size_t m = estimates.front().per_i.size();
    const std::size_t dim = estimates.front().s.size();
    for (std::size_t j = 1; j <= dim; ++j) out << "s" << j << ",";
    for (std::size_t i = 1; i <= m; ++i) out << "D" << i << ",";
    out << "rho_hat\n";
    char buffer[64];
    for (const auto& est : estimates) {
        for (double v : est.s) {
            std::snprintf(buffer, sizeof buffer, "%.17g,", v);
            out << buffer;
        }
        for (double v : est.per_i) {
            std::snprintf(buffer, sizeof buffer, "%.17g,", v);
            out << buffer;
        }
        std::snprintf(buffer, sizeof buffer, "%.17g", est.rho_hat);
        out << buffer << '\n';
    }
}

}  // namespace acceptmc
