#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdcscreen/data.hpp"
#include "rdcscreen/dcor.hpp"
#include "rdcscreen/error.hpp"
#include "rdcscreen/parallel.hpp"

namespace rdcscreen {

enum class Method { RDC, DC, PearsonSIS };

[[nodiscard]] inline std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::RDC: return "rdc";
    case Method::DC: return "dc";
    case Method::PearsonSIS: return "pearson";
    }
    return "unknown";
}

[[nodiscard]] inline Method parse_method(std::string_view name)
{
    if (name == "rdc") {
        return Method::RDC;
    }
    if (name == "dc") {
        return Method::DC;
    }
    if (name == "pearson" || name == "sis") {
        return Method::PearsonSIS;
    }
    throw ParameterError("unknown method '" + std::string(name) + "' (expected rdc, dc or pearson)");
}

/// floor(multiplier * n / ln n).
[[nodiscard]] inline std::size_t default_model_size(std::size_t n, unsigned multiplier = 1)
{
    if (n < 3) {
        throw ParameterError("default model size needs n >= 3, got " + std::to_string(n));
    }
    if (multiplier == 0) {
        throw ParameterError("model size multiplier must be positive");
    }
    const double nd = static_cast<double>(n);
    return static_cast<std::size_t>(std::floor(static_cast<double>(multiplier) * nd / std::log(nd)));
}

/// t = C ln p, shared by the response and every predictor.
[[nodiscard]] inline double screening_t(double c_const, std::size_t p)
{
    if (!(c_const > 0.0)) {
        throw ParameterError("C must be positive, got " + std::to_string(c_const));
    }
    const double t = c_const * std::log(static_cast<double>(p));
    if (!(t > 0.0)) {
        throw ParameterError("t = C ln p is not positive for p = " + std::to_string(p));
    }
    return t;
}

/// Feature indices sorted by decreasing utility, ties by ascending index.
[[nodiscard]] inline std::vector<std::size_t> rank_by_utility(std::span<const double> utilities)
{
    std::vector<std::size_t> order(utilities.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return utilities[a] > utilities[b]; });
    return order;
}

/// Feature indices below are 0-based; files report them 1-based.
struct ScreeningResult {
    Method method = Method::RDC;
    double t = 0.0;
    std::vector<double> utilities;
    std::vector<std::optional<double>> taus; ///< RDC only
    std::optional<double> tau_y;             ///< RDC only
    std::vector<bool> degenerate;            ///< constant feature, utility forced to 0
    std::vector<std::size_t> ranking;
    std::size_t d = 0;
    std::vector<std::size_t> retained;

    /// 1-based rank of each feature.
    [[nodiscard]] std::vector<std::size_t> ranks() const
    {
        std::vector<std::size_t> r(ranking.size());
        for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
            r[ranking[pos]] = pos + 1;
        }
        return r;
    }
};

/// Squared sample Pearson correlation. nullopt when either side is constant.
[[nodiscard]] inline std::optional<double> squared_pearson(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        return std::nullopt;
    }
    return std::min(1.0, (sxy * sxy) / (sxx * syy));
}

/// Marginal screening of every predictor against the response.
///
/// RDC tunes tau for the response once and for each feature separately,
/// then uses the squared robust distance correlation as the utility. DC and
/// PearsonSIS use the squared plain distance / Pearson correlation. The
/// per-feature loop runs on `workers` threads; results do not depend on
/// the worker count.
[[nodiscard]] inline ScreeningResult screen(const DataMatrix& data, Method method, double t, std::size_t d,
                                            std::size_t workers = 1)
{
    data.validate();
    if (data.p == 0 || data.q == 0) {
        throw SizeError("screening needs at least one predictor and one response column");
    }
    if (data.n < 2) {
        throw SizeError("screening needs at least 2 samples");
    }
    if (d == 0 || d > data.p) {
        throw ParameterError("model size d = " + std::to_string(d) + " must lie in [1, p = "
                             + std::to_string(data.p) + "]");
    }
    if (!(t > 0.0)) {
        throw ParameterError("t must be positive");
    }
    if (method == Method::PearsonSIS && data.q != 1) {
        throw ParameterError("Pearson screening requires a univariate response (q = 1), got q = "
                             + std::to_string(data.q));
    }
    require_finite(data.response_view());
    for (std::size_t j = 0; j < data.p; ++j) {
        require_finite(data.feature(j));
    }

    ScreeningResult res;
    res.method = method;
    res.t = t;
    res.d = d;
    res.utilities.assign(data.p, 0.0);
    res.degenerate.assign(data.p, false);
    // std::vector<bool> packs bits, so workers write flags through a byte array.
    std::vector<unsigned char> flags(data.p, 0);

    const SampleView y = data.response_view();
    switch (method) {
    case Method::RDC: {
        const TunedVariable ty = tune_variable(y, t);
        if (!ty.prepared || !(ty.prepared->self_dcov2 > 0.0)) {
            throw DataError("response is constant: every feature would be degenerate");
        }
        res.tau_y = ty.tau.tau;
        res.taus.assign(data.p, std::nullopt);
        parallel_for(data.p, workers, [&](std::size_t j) {
            const TunedVariable tx = tune_variable(data.feature(j), t);
            const DependenceEstimate est = combine(tx, ty);
            if (tx.tau.has_tau()) {
                res.taus[j] = tx.tau.tau;
            }
            flags[j] = est.degenerate ? 1 : 0;
            res.utilities[j] = est.degenerate ? 0.0 : est.dcor2;
        });
        break;
    }
    case Method::DC: {
        const PreparedVariable py = prepare_variable(pairwise_distances(y));
        if (!(py.self_dcov2 > 0.0)) {
            throw DataError("response is constant: every feature would be degenerate");
        }
        parallel_for(data.p, workers, [&](std::size_t j) {
            const DependenceEstimate est = combine(prepare_variable(pairwise_distances(data.feature(j))), py);
            flags[j] = est.degenerate ? 1 : 0;
            res.utilities[j] = est.degenerate ? 0.0 : est.dcor2;
        });
        break;
    }
    case Method::PearsonSIS: {
        if (!squared_pearson(data.response, data.response)) {
            throw DataError("response is constant: every feature would be degenerate");
        }
        parallel_for(data.p, workers, [&](std::size_t j) {
            const auto r2 = squared_pearson(data.column(j), data.response);
            flags[j] = r2 ? 0 : 1;
            res.utilities[j] = r2.value_or(0.0);
        });
        break;
    }
    }

    for (std::size_t j = 0; j < data.p; ++j) {
        res.degenerate[j] = flags[j] != 0;
    }
    res.ranking = rank_by_utility(res.utilities);
    res.retained.assign(res.ranking.begin(), res.ranking.begin() + static_cast<std::ptrdiff_t>(d));
    return res;
}

} // namespace rdcscreen
