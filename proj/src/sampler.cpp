#include "acceptmc/sampler.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "acceptmc/errors.hpp"
#include "acceptmc/parallel.hpp"
#include "gbm_forms.hpp"

#include <json.hpp>

namespace acceptmc {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

double normalizer(const TiltedWeights& weights, int i, char sign) {
    return sign == '+' ? weights.d_plus[static_cast<std::size_t>(i)]
                       : weights.d_minus[static_cast<std::size_t>(i)];
}

// Draws (path, t) from the tilted measure; z is appended by the caller.
class PairSampler {
public:
    virtual ~PairSampler() = default;
    virtual void draw(RngStream& rng, DriverPath* path, int* t) const = 0;
};

class GbmDirectSampler final : public PairSampler {
public:
    GbmDirectSampler(const GbmScenario& gbm, double theta, char sign)
        : gbm_(gbm), forms_(detail::gbm_mean_shift_forms(gbm, theta)) {
        const bool positive_part = forms_.range_coef > 0.0;
        if ((sign == '+') != positive_part) {
            throw ZeroMeasureError("requested sign carries no mass for this measure");
        }
        std::vector<double> w(static_cast<std::size_t>(gbm.horizon()));
        double term = 1.0;
        for (int t = 0; t < gbm.horizon(); ++t) {
            w[static_cast<std::size_t>(t)] = term;
            term *= forms_.growth;
        }
        period_ = std::make_unique<DiscreteSampler>(w);
    }

    void draw(RngStream& rng, DriverPath* path, int* t) const override {
        const int T = gbm_.horizon();
        const int tt = (*period_)(rng);
        path->drivers.resize(static_cast<std::size_t>(T));
        path->prices.resize(static_cast<std::size_t>(T) + 1);
        path->prices[0] = gbm_.initial_price();
        for (int k = 0; k < T; ++k) {
            double z = rng.normal();
            if (k < tt) z += forms_.shifted_mean;
            path->drivers[static_cast<std::size_t>(k)] = z;
            path->prices[static_cast<std::size_t>(k) + 1] =
                path->prices[static_cast<std::size_t>(k)] *
                std::exp(gbm_.sigma() * z + gbm_.log_drift());
        }
        *t = tt;
    }

private:
    const GbmScenario& gbm_;
    detail::GbmMeanShift forms_;
    std::unique_ptr<DiscreteSampler> period_;
};

class TreeDirectSampler final : public PairSampler {
public:
    TreeDirectSampler(const TreeScenario& tree, const TiltedWeights& weights,
                      int i, char sign)
        : tree_(tree) {
        const int T = tree.horizon();
        std::vector<double> mass;
        for (int leaf : tree.leaves()) {
            const DriverPath path = tree.path_for_leaf(leaf);
            const double p = tree.node_probability(leaf);
            for (int t = 0; t < T; ++t) {
                const double v = weights.v[static_cast<std::size_t>(i)](path, t);
                const double part = (sign == '+') ? std::max(v, 0.0) : std::max(-v, 0.0);
                mass.push_back(p * part);
                atoms_.emplace_back(leaf, t);
            }
        }
        double total = 0.0;
        for (double w : mass) total += w;
        if (!(total > 0.0)) {
            throw ZeroMeasureError("requested sign carries no mass for this measure");
        }
        table_ = std::make_unique<DiscreteSampler>(mass);
    }

    void draw(RngStream& rng, DriverPath* path, int* t) const override {
        const int k = (*table_)(rng);
        const auto [leaf, tt] = atoms_[static_cast<std::size_t>(k)];
        *path = tree_.path_for_leaf(leaf);
        *t = tt;
    }

private:
    const TreeScenario& tree_;
    std::vector<std::pair<int, int>> atoms_;
    std::unique_ptr<DiscreteSampler> table_;
};

class RejectionSampler final : public PairSampler {
public:
    RejectionSampler(const MarketScenario& scenario, const TiltedWeights& weights,
                     int i, char sign, double envelope)
        : scenario_(scenario), weights_(weights), i_(i), sign_(sign),
          envelope_(envelope) {
        if (!(envelope > 0.0)) {
            throw ConfigError("rejection sampling needs a positive envelope constant");
        }
    }

    void draw(RngStream& rng, DriverPath* path, int* t) const override {
        const int T = scenario_.horizon();
        for (;;) {
            DriverPath candidate = scenario_.sample_path(rng);
            const int tt =
                static_cast<int>(std::min<double>(rng.uniform() * T, T - 1));
            const double v = weights_.v[static_cast<std::size_t>(i_)](candidate, tt);
            const double part = (sign_ == '+') ? std::max(v, 0.0) : std::max(-v, 0.0);
            if (part > envelope_ * (1.0 + 1e-12)) {
                throw CertificationError(
                    "rejection envelope breached: observed weight " +
                    std::to_string(part) + " > M = " + std::to_string(envelope_));
            }
            if (rng.uniform() * envelope_ < part) {
                *path = std::move(candidate);
                *t = tt;
                return;
            }
        }
    }

private:
    const MarketScenario& scenario_;
    const TiltedWeights& weights_;
    int i_;
    char sign_;
    double envelope_;
};

std::unique_ptr<PairSampler> make_pair_sampler(const MarketScenario& scenario,
                                               const TiltedWeights& weights,
                                               int i, char sign, TiltRoute route,
                                               double envelope) {
    if (i < 0 || i >= weights.m) {
        throw std::invalid_argument("sample_tilted: measure index out of range");
    }
    if (normalizer(weights, i, sign) <= 0.0) {
        throw ZeroMeasureError("sample_tilted: zero normalizer for measure " +
                               std::to_string(i + 1) + std::string(1, sign));
    }
    if (route == TiltRoute::Rejection) {
        return std::make_unique<RejectionSampler>(scenario, weights, i, sign,
                                                  envelope);
    }
    if (const auto* tree = dynamic_cast<const TreeScenario*>(&scenario)) {
        return std::make_unique<TreeDirectSampler>(*tree, weights, i, sign);
    }
    if (const auto* gbm = dynamic_cast<const GbmScenario*>(&scenario)) {
        double theta = 0.0;
        if (!detail::mean_shift_theta(weights.densities[static_cast<std::size_t>(i)],
                                      &theta)) {
            throw MissingEvaluatorError("no direct tilted sampler for this density");
        }
        return std::make_unique<GbmDirectSampler>(*gbm, theta, sign);
    }
    throw MissingEvaluatorError("no direct tilted sampler for this scenario");
}

void fill_features(const TiltedWeights& weights, const DriverPath& path, int t,
                   double* out) {
    for (int j = 0; j < weights.m; ++j) {
        out[j] = weights.v[static_cast<std::size_t>(j)](path, t);
    }
}

}  // namespace

const BankEntry* SampleBank::find(int i, char sign) const {
    for (const auto& entry : entries) {
        if (entry.i == i && entry.sign == sign) return &entry;
    }
    return nullptr;
}

std::vector<TiltedSample> sample_tilted(const MarketScenario& scenario,
                                        const TiltedWeights& weights, int i,
                                        char sign, std::int64_t n, EtaKind eta,
                                        RngStream& rng, TiltRoute route,
                                        double envelope) {
    if (n < 0) throw std::invalid_argument("sample_tilted: negative count");
    const auto sampler = make_pair_sampler(scenario, weights, i, sign, route, envelope);
    std::vector<TiltedSample> out(static_cast<std::size_t>(n));
    for (auto& sample : out) {
        sampler->draw(rng, &sample.path, &sample.t);
        sample.z = eta_sample(eta, rng);
        sample.features.resize(static_cast<std::size_t>(weights.m));
        fill_features(weights, sample.path, sample.t, sample.features.data());
    }
    return out;
}

SampleBank build_bank(const MarketScenario& scenario,
                      const TiltedWeights& weights, const SamplePlan& plan,
                      EtaKind eta, std::uint64_t master_seed, int workers,
                      TiltRoute route, double envelope) {
    SampleBank bank;
    bank.m = weights.m;
    bank.epsilon = plan.epsilon;
    bank.delta = plan.delta;
    bank.aleph = weights.aleph();
    bank.eta = eta;
    bank.seed = master_seed;

    struct Task {
        int entry;
        std::int64_t chunk;
    };
    std::vector<Task> tasks;
    for (const auto& pe : plan.entries) {
        BankEntry entry;
        entry.i = pe.i;
        entry.sign = pe.sign;
        entry.d = pe.d;
        entry.kappa = pe.kappa;
        entry.cols.t.resize(static_cast<std::size_t>(pe.kappa));
        entry.cols.z.resize(static_cast<std::size_t>(pe.kappa));
        entry.cols.features.resize(static_cast<std::size_t>(pe.kappa * weights.m));
        bank.entries.push_back(std::move(entry));
        const std::int64_t chunks = (pe.kappa + kChunk - 1) / kChunk;
        for (std::int64_t c = 0; c < chunks; ++c) {
            tasks.push_back({static_cast<int>(bank.entries.size()) - 1, c});
        }
    }

    parallel_for(static_cast<std::int64_t>(tasks.size()), workers,
                 [&](std::int64_t ti) {
        const Task task = tasks[static_cast<std::size_t>(ti)];
        BankEntry& entry = bank.entries[static_cast<std::size_t>(task.entry)];
        const auto sampler = make_pair_sampler(scenario, weights, entry.i,
                                               entry.sign, route, envelope);
        std::ostringstream tag;
        tag << "bank/" << entry.i << entry.sign;
        RngStream stream = RngStream::derive(master_seed, tag.str(),
                                             static_cast<std::uint64_t>(task.chunk));
        const std::int64_t begin = task.chunk * kChunk;
        const std::int64_t end = std::min(entry.kappa, begin + kChunk);
        DriverPath path;
        int t = 0;
        for (std::int64_t k = begin; k < end; ++k) {
            sampler->draw(stream, &path, &t);
            entry.cols.t[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(t);
            entry.cols.z[static_cast<std::size_t>(k)] = eta_sample(eta, stream);
            fill_features(weights, path, t,
                          entry.cols.features.data() + k * weights.m);
        }
    });
    return bank;
}

void save_bank_csv(const SampleBank& bank, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open bank file for writing: " + path);
    nlohmann::ordered_json meta;
    meta["m"] = bank.m;
    meta["epsilon"] = bank.epsilon;
    meta["delta"] = bank.delta;
    meta["aleph"] = bank.aleph;
    meta["eta"] = eta_name(bank.eta);
    meta["seed"] = bank.seed;
    meta["fingerprint"] = bank.fingerprint;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& entry : bank.entries) {
        entries.push_back({{"i", entry.i + 1},
                           {"sign", std::string(1, entry.sign)},
                           {"d", entry.d},
                           {"kappa", entry.kappa}});
    }
    meta["entries"] = entries;
    out << "#%acceptmc-bank v1\n";
    out << "#%meta " << meta.dump() << "\n";
    out << "i,sign,t,z";
    for (int j = 1; j <= bank.m; ++j) out << ",f" << j;
    out << "\n";
    char buffer[64];
    for (const auto& entry : bank.entries) {
        for (std::int64_t k = 0; k < entry.kappa; ++k) {
            out << (entry.i + 1) << ',' << entry.sign << ','
                << entry.cols.t[static_cast<std::size_t>(k)];
            std::snprintf(buffer, sizeof buffer, ",%.17g",
                          entry.cols.z[static_cast<std::size_t>(k)]);
            out << buffer;
            for (int j = 0; j < bank.m; ++j) {
                std::snprintf(buffer, sizeof buffer, ",%.17g",
                              entry.cols.features[static_cast<std::size_t>(
                                  k * bank.m + j)]);
                out << buffer;
            }
            out << '\n';
        }
    }
    if (!out) throw ConfigError("failed writing bank file: " + path);
}

SampleBank load_bank_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open bank file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "#%acceptmc-bank v1") {
        throw ConfigError("unrecognized bank file format: " + path);
    }
    if (!std::getline(in, line) || line.rfind("#%meta ", 0) != 0) {
        throw ConfigError("bank file missing metadata line: " + path);
    }
    const auto meta = nlohmann::json::parse(line.substr(7));
    SampleBank bank;
    bank.m = meta.at("m").get<int>();
    bank.epsilon = meta.at("epsilon").get<double>();
    bank.delta = meta.at("delta").get<double>();
    bank.aleph = meta.at("aleph").get<int>();
    bank.eta = meta.at("eta").get<std::string>() == "logistic" ? EtaKind::Logistic
                                                               : EtaKind::Normal;
    bank.seed = meta.at("seed").get<std::uint64_t>();
    bank.fingerprint = meta.at("fingerprint").get<std::string>();
    for (const auto& je : meta.at("entries")) {
        BankEntry entry;
        entry.i = je.at("i").get<int>() - 1;
        entry.sign = je.at("sign").get<std::string>().at(0);
        entry.d = je.at("d").get<double>();
        entry.kappa = je.at("kappa").get<std::int64_t>();
        entry.cols.t.reserve(static_cast<std::size_t>(entry.kappa));
        entry.cols.z.reserve(static_cast<std::size_t>(entry.kappa));
        entry.cols.features.reserve(static_cast<std::size_t>(entry.kappa * bank.m));
        bank.entries.push_back(std::move(entry));
    }
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* endp = nullptr;
        const int i = static_cast<int>(std::strtol(p, &endp, 10)) - 1;
        p = endp + 1;  // comma
        const char sign = *p;
        p += 2;
        BankEntry* entry = nullptr;
        for (auto& candidate : bank.entries) {
            if (candidate.i == i && candidate.sign == sign) {
                entry = &candidate;
                break;
            }
        }
        if (entry == nullptr) throw ConfigError("bank row references unknown measure");
        entry->cols.t.push_back(static_cast<std::int32_t>(std::strtol(p, &endp, 10)));
        p = endp + 1;
        entry->cols.z.push_back(std::strtod(p, &endp));
        p = endp;
        for (int j = 0; j < bank.m; ++j) {
            ++p;  // comma
            entry->cols.features.push_back(std::strtod(p, &endp));
            p = endp;
        }
    }
    for (const auto& entry : bank.entries) {
        if (entry.cols.size() != entry.kappa) {
            throw ConfigError("bank file truncated: sample count mismatch");
        }
    }
    return bank;
}

}  // namespace acceptmc
