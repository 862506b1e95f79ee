#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdcscreen/error.hpp"
#include "rdcscreen/parallel.hpp"
#include "rdcscreen/scenarios.hpp"
#include "rdcscreen/screening.hpp"

namespace rdcscreen {

/// Largest 1-based rank among the active features.
[[nodiscard]] inline std::size_t minimum_model_size(const std::vector<std::size_t>& ranking,
                                                    const std::vector<std::size_t>& active)
{
    if (active.empty()) {
        throw ParameterError("active set is empty");
    }
    std::vector<std::size_t> rank(ranking.size(), 0);
    for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
        rank.at(ranking[pos]) = pos + 1;
    }
    std::size_t worst = 0;
    for (std::size_t j : active) {
        if (j >= rank.size()) {
            throw ParameterError("active feature " + std::to_string(j + 1) + " exceeds p = "
                                 + std::to_string(rank.size()));
        }
        worst = std::max(worst, rank[j]);
    }
    return worst;
}

struct ReplicateMetrics {
    bool hit1 = false;   ///< at least one active feature in the top d
    bool hitall = false; ///< every active feature in the top d
    std::size_t tp_d = 0;
    std::size_t tp_d1 = 0;
    std::size_t tp_d2 = 0;
};

[[nodiscard]] inline ReplicateMetrics replicate_metrics(const std::vector<std::size_t>& ranking,
                                                        const std::vector<std::size_t>& active, std::size_t d,
                                                        std::size_t d1, std::size_t d2)
{
    if (!(d <= d1 && d1 <= d2 && d2 <= ranking.size())) {
        throw ParameterError("model sizes must satisfy d <= d1 <= d2 <= p");
    }
    std::vector<std::size_t> rank(ranking.size(), 0);
    for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
        rank.at(ranking[pos]) = pos + 1;
    }
    ReplicateMetrics m;
    for (std::size_t j : active) {
        const std::size_t r = rank.at(j);
        m.tp_d += r <= d ? 1 : 0;
        m.tp_d1 += r <= d1 ? 1 : 0;
        m.tp_d2 += r <= d2 ? 1 : 0;
    }
    m.hit1 = m.tp_d >= 1;
    m.hitall = m.tp_d == active.size();
    return m;
}

struct ReplicateRecord {
    std::size_t replicate = 0;
    std::uint64_t seed = 0; ///< base seed; (seed, replicate) regenerates the data
    Method method = Method::RDC;
    std::size_t mms = 0;
    ReplicateMetrics metrics;
};

struct MethodSummary {
    Method method = Method::RDC;
    std::size_t replicates = 0;
    double mms_median = 0.0;
    double p1 = 0.0;
    double pa = 0.0;
    double tp_d1 = 0.0;
    double tp_d2 = 0.0;
};

/// Median with the even-count convention (mean of the two middle values).
[[nodiscard]] inline double median(std::vector<double> v)
{
    if (v.empty()) {
        throw ParameterError("median of an empty set");
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Per-method summaries, in the order given by `methods`. Records are
/// sorted by replicate index first so the result does not depend on the
/// order they arrive in.
[[nodiscard]] inline std::vector<MethodSummary> summarize(std::vector<ReplicateRecord> records,
                                                          const std::vector<Method>& methods)
{
    std::stable_sort(records.begin(), records.end(), [](const ReplicateRecord& a, const ReplicateRecord& b) {
        return a.replicate < b.replicate;
    });
    std::vector<MethodSummary> out;
    for (Method m : methods) {
        MethodSummary s;
        s.method = m;
        std::vector<double> mms;
        double hit1 = 0.0;
        double hitall = 0.0;
        double tp1 = 0.0;
        double tp2 = 0.0;
        for (const auto& r : records) {
            if (r.method != m) {
                continue;
            }
            mms.push_back(static_cast<double>(r.mms));
            hit1 += r.metrics.hit1 ? 1.0 : 0.0;
            hitall += r.metrics.hitall ? 1.0 : 0.0;
            tp1 += static_cast<double>(r.metrics.tp_d1);
            tp2 += static_cast<double>(r.metrics.tp_d2);
        }
        if (mms.empty()) {
            throw ParameterError("no records for method " + std::string(to_string(m)));
        }
        const double b = static_cast<double>(mms.size());
        s.replicates = mms.size();
        s.mms_median = median(std::move(mms));
        s.p1 = hit1 / b;
        s.pa = hitall / b;
        s.tp_d1 = tp1 / b;
        s.tp_d2 = tp2 / b;
        out.push_back(s);
    }
    return out;
}

struct BenchmarkConfig {
    ScenarioConfig scenario;
    std::vector<Method> methods = {Method::RDC, Method::DC, Method::PearsonSIS};
    std::size_t replicates = 100;
    double c_const = 1.0;
    std::array<unsigned, 3> multipliers = {1, 2, 3};
    std::optional<std::size_t> d; ///< overrides floor(m1 n / ln n)
    std::size_t workers = 1;
};

struct BenchmarkResult {
    double t = 0.0;
    std::size_t d = 0;
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    std::vector<ReplicateRecord> records; ///< by replicate, then method order
    std::vector<MethodSummary> summaries;
};

/// Thrown when a replicate fails; carries what is needed to rerun it.
class ReplicateError : public DataError {
public:
    ReplicateError(std::size_t replicate, std::uint64_t seed, const std::string& what)
        : DataError("replicate " + std::to_string(replicate) + " (seed " + std::to_string(seed) + ") failed: " + what)
        , replicate_(replicate)
        , seed_(seed)
    {
    }
    [[nodiscard]] std::size_t replicate() const noexcept { return replicate_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

private:
    std::size_t replicate_;
    std::uint64_t seed_;
};

/// Model sizes (d, d1, d2) = floor(m_k n / ln n), with d optionally pinned.
[[nodiscard]] inline std::array<std::size_t, 3> model_sizes(std::size_t n, std::size_t p,
                                                            const std::array<unsigned, 3>& multipliers,
                                                            std::optional<std::size_t> d_override)
{
    std::array<std::size_t, 3> sizes{};
    for (std::size_t k = 0; k < 3; ++k) {
        sizes[k] = std::min(p, default_model_size(n, multipliers[k]));
    }
    if (d_override) {
        sizes[0] = *d_override;
    }
    if (!(sizes[0] >= 1 && sizes[0] <= sizes[1] && sizes[1] <= sizes[2] && sizes[2] <= p)) {
        throw ParameterError("model sizes must satisfy 1 <= d <= d1 <= d2 <= p");
    }
    return sizes;
}

/// Generates B replicates and screens each with every method.
/// Replicates are the parallel unit; each screen runs single-threaded.
[[nodiscard]] inline BenchmarkResult run_benchmark(const BenchmarkConfig& cfg)
{
    if (cfg.replicates == 0) {
        throw ParameterError("replicate count must be at least 1");
    }
    if (cfg.methods.empty()) {
        throw ParameterError("no screening methods selected");
    }
    if (is_multivariate(cfg.scenario.scenario)
        && std::find(cfg.methods.begin(), cfg.methods.end(), Method::PearsonSIS) != cfg.methods.end()) {
        throw ParameterError("Pearson screening is undefined for the 3-variate response of scenario "
                             + std::string(to_string(cfg.scenario.scenario)));
    }

    validate(cfg.scenario);

    BenchmarkResult res;
    res.t = screening_t(cfg.c_const, cfg.scenario.p);
    const auto sizes = model_sizes(cfg.scenario.n, cfg.scenario.p, cfg.multipliers, cfg.d);
    res.d = sizes[0];
    res.d1 = sizes[1];
    res.d2 = sizes[2];

    const std::size_t nm = cfg.methods.size();
    res.records.resize(cfg.replicates * nm);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t b) {
        ScenarioConfig sc = cfg.scenario;
        sc.replicate = b;
        try {
            const Dataset ds = generate(sc);
            for (std::size_t m = 0; m < nm; ++m) {
                const auto sr = screen(ds.data, cfg.methods[m], res.t, res.d, 1);
                ReplicateRecord& rec = res.records[b * nm + m];
                rec.replicate = b;
                rec.seed = sc.seed;
                rec.method = cfg.methods[m];
                rec.mms = minimum_model_size(sr.ranking, ds.active);
                rec.metrics = replicate_metrics(sr.ranking, ds.active, res.d, res.d1, res.d2);
            }
        } catch (const std::exception& e) {
            throw ReplicateError(b, sc.seed, e.what());
        }
    });
    res.summaries = summarize(res.records, cfg.methods);
    return res;
}

} // namespace rdcscreen
