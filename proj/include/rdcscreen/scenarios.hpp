#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rdcscreen/data.hpp"
#include "rdcscreen/error.hpp"
#include "rdcscreen/random.hpp"

// Heavy-tailed benchmark designs:
//   I   Y = x'b + t_2 noise, b = (2,-2,2,-2) on 4 evenly spaced features
//   II  3-variate normal response with common mean x'b, b = (1,1)
//   III Y built from X1, X2, X12, X22 (IIIb adds an X1*X2 interaction)
// with x either multivariate t_3 with AR(1) correlation (variants a) or
// iid Pareto(1,1) (Ib, IIb).

namespace rdcscreen {

enum class Scenario { Ia, Ib, IIa, IIb, IIIa, IIIb };

[[nodiscard]] inline std::string_view to_string(Scenario s) noexcept
{
    switch (s) {
    case Scenario::Ia: return "Ia";
    case Scenario::Ib: return "Ib";
    case Scenario::IIa: return "IIa";
    case Scenario::IIb: return "IIb";
    case Scenario::IIIa: return "IIIa";
    case Scenario::IIIb: return "IIIb";
    }
    return "unknown";
}

[[nodiscard]] inline Scenario parse_scenario(std::string_view name)
{
    for (Scenario s : {Scenario::Ia, Scenario::Ib, Scenario::IIa, Scenario::IIb, Scenario::IIIa, Scenario::IIIb}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw ParameterError("unknown scenario '" + std::string(name) + "' (expected Ia, Ib, IIa, IIb, IIIa or IIIb)");
}

[[nodiscard]] inline bool is_multivariate(Scenario s) noexcept { return s == Scenario::IIa || s == Scenario::IIb; }

struct ScenarioConfig {
    Scenario scenario = Scenario::Ia;
    std::size_t n = 100;
    std::size_t p = 2000;
    double rho = 0.5;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    bool adjacent_ii = false; ///< scenario II actives at {1, 2} instead of evenly spaced
};

/// Stream purposes within one replicate.
enum class Stream : std::uint64_t { Predictors = 0, Noise = 1, Coefficients = 2 };

[[nodiscard]] inline Rng make_rng(const ScenarioConfig& cfg, Stream purpose)
{
    return Rng(stream_seed(cfg.seed, cfg.replicate, static_cast<std::uint64_t>(purpose)));
}

/// 0-based positions floor(k p / s), k = 0..s-1.
[[nodiscard]] inline std::vector<std::size_t> evenly_spaced_active(std::size_t p, std::size_t s)
{
    if (s == 0 || s > p) {
        throw ParameterError("cannot place " + std::to_string(s) + " active features among p = " + std::to_string(p));
    }
    std::vector<std::size_t> idx(s);
    for (std::size_t k = 0; k < s; ++k) {
        idx[k] = k * p / s;
    }
    return idx;
}

/// Rows of multivariate t_df with AR(1) correlation rho^|j-j'|: an AR(1)
/// Gaussian row divided by sqrt(w / df), w ~ chi^2_df shared across the row.
[[nodiscard]] inline DataMatrix gen_ar1_mvt(std::size_t n, std::size_t p, double rho, double df, Rng& rng)
{
    if (!(std::fabs(rho) < 1.0)) {
        throw ParameterError("AR(1) correlation must satisfy |rho| < 1, got " + std::to_string(rho));
    }
    if (!(df > 0.0)) {
        throw ParameterError("degrees of freedom must be positive, got " + std::to_string(df));
    }
    DataMatrix out(n, p, 0);
    const double innovation = std::sqrt(1.0 - rho * rho);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double e = rng.normal();
            z[j] = j == 0 ? e : rho * z[j - 1] + innovation * e;
        }
        const double scale = 1.0 / std::sqrt(rng.chi_square(df) / df);
        for (std::size_t j = 0; j < p; ++j) {
            out.x(i, j) = z[j] * scale;
        }
    }
    return out;
}

/// iid Pareto(scale 1, shape 1) by inversion: 1/U, U ~ Uniform(0, 1].
[[nodiscard]] inline DataMatrix gen_pareto(std::size_t n, std::size_t p, Rng& rng)
{
    DataMatrix out(n, p, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            out.x(i, j) = 1.0 / rng.uniform_positive();
        }
    }
    return out;
}

/// x_i' beta restricted to the active features.
[[nodiscard]] inline std::vector<double> linear_predictor(const DataMatrix& x, const std::vector<std::size_t>& active,
                                                          const std::vector<double>& beta)
{
    if (active.size() != beta.size()) {
        throw SizeError("active set and coefficient vector differ in length");
    }
    std::vector<double> eta(x.n, 0.0);
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t k = 0; k < active.size(); ++k) {
            eta[i] += beta[k] * x.x(i, active[k]);
        }
    }
    return eta;
}

struct SimulatedResponse {
    std::vector<double> y; ///< n x q, row-major
    std::size_t q = 1;
    std::vector<std::size_t> active;
    std::vector<double> beta;
};

/// Scenario I: Y = x'b + eps, eps ~ t_df.
[[nodiscard]] inline SimulatedResponse gen_response_I(const DataMatrix& x, Rng& noise, double df = 2.0,
                                                      std::vector<double> beta = {2.0, -2.0, 2.0, -2.0})
{
    if (x.p < beta.size()) {
        throw ParameterError("scenario I needs p >= " + std::to_string(beta.size()));
    }
    SimulatedResponse r;
    r.active = evenly_spaced_active(x.p, beta.size());
    r.beta = std::move(beta);
    r.y = linear_predictor(x, r.active, r.beta);
    for (double& v : r.y) {
        v += noise.student_t(df);
    }
    return r;
}

/// Scenario II: y_i ~ N_3(x_i'b (1,1,1), Sigma_Y) with unit variances and
/// 0.5 covariances, drawn as a shared factor plus independent parts.
[[nodiscard]] inline SimulatedResponse gen_response_II(const DataMatrix& x, Rng& noise, bool adjacent = false)
{
    if (x.p < 2) {
        throw ParameterError("scenario II needs p >= 2");
    }
    SimulatedResponse r;
    r.q = 3;
    r.active = adjacent ? std::vector<std::size_t>{0, 1} : evenly_spaced_active(x.p, 2);
    r.beta = {1.0, 1.0};
    const auto eta = linear_predictor(x, r.active, r.beta);
    const double half = std::sqrt(0.5);
    r.y.resize(x.n * 3);
    for (std::size_t i = 0; i < x.n; ++i) {
        const double common = half * noise.normal();
        for (std::size_t k = 0; k < 3; ++k) {
            r.y[i * 3 + k] = eta[i] + common + half * noise.normal();
        }
    }
    return r;
}

enum class ModelIII { A, B };

inline constexpr std::array<double, 4> kAlphaIII = {2.0, 0.5, 3.0, 2.0};

/// a = 4 ln n / sqrt(n).
[[nodiscard]] inline double coefficient_floor(std::size_t n)
{
    const double nd = static_cast<double>(n);
    return 4.0 * std::log(nd) / std::sqrt(nd);
}

/// (-1)^U (a + |Z|).
[[nodiscard]] inline double signed_coefficient(double a, bool flip, double z) noexcept
{
    const double magnitude = a + std::fabs(z);
    return flip ? -magnitude : magnitude;
}

/// Scenario III. IIIa: Y = a1 b1 X1 + a2 b2 X2 + a3 b3 1(X12 < 0) + a4 b4 X22 + eps;
/// IIIb: Y = a1 b1 X1 X2 + a3 b2 1(X12 < 0) + a4 b3 X22 + eps; eps ~ N(0, 1).
/// Four coefficients are drawn per replicate in both models (IIIb uses three).
[[nodiscard]] inline SimulatedResponse gen_response_III(const DataMatrix& x, ModelIII model, Rng& coefficients,
                                                        Rng& noise)
{
    if (x.p < 22 || x.n < 3) {
        throw ParameterError("scenario III needs p >= 22 and n >= 3");
    }
    SimulatedResponse r;
    r.active = {0, 1, 11, 21};
    const double a = coefficient_floor(x.n);
    r.beta.resize(4);
    for (double& b : r.beta) {
        const bool flip = coefficients.bernoulli(0.4);
        b = signed_coefficient(a, flip, coefficients.normal());
    }
    const auto& al = kAlphaIII;
    const auto& b = r.beta;
    r.y.resize(x.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        const double indicator = x.x(i, 11) < 0.0 ? 1.0 : 0.0;
        double v = 0.0;
        if (model == ModelIII::A) {
            v = al[0] * b[0] * x.x(i, 0) + al[1] * b[1] * x.x(i, 1) + al[2] * b[2] * indicator
                + al[3] * b[3] * x.x(i, 21);
        } else {
            v = al[0] * b[0] * x.x(i, 0) * x.x(i, 1) + al[2] * b[1] * indicator + al[3] * b[2] * x.x(i, 21);
        }
        r.y[i] = v + noise.normal();
    }
    return r;
}

struct Dataset {
    DataMatrix data;
    std::vector<std::size_t> active;
    std::vector<double> beta;
};

/// Size and parameter checks that do not depend on the replicate.
inline void validate(const ScenarioConfig& cfg)
{
    const std::size_t min_p = cfg.scenario == Scenario::IIIa || cfg.scenario == Scenario::IIIb ? 22
                              : is_multivariate(cfg.scenario)                                   ? 2
                                                                                                : 4;
    if (cfg.p < min_p) {
        throw ParameterError("scenario " + std::string(to_string(cfg.scenario)) + " needs p >= "
                             + std::to_string(min_p) + ", got " + std::to_string(cfg.p));
    }
    if (cfg.n < 3) {
        throw ParameterError("simulated data sets need n >= 3, got " + std::to_string(cfg.n));
    }
    if (!(std::fabs(cfg.rho) < 1.0)) {
        throw ParameterError("AR(1) correlation must satisfy |rho| < 1, got " + std::to_string(cfg.rho));
    }
}

/// One replicate of a scenario, a pure function of the config.
[[nodiscard]] inline Dataset generate(const ScenarioConfig& cfg)
{
    validate(cfg);
    auto xs = make_rng(cfg, Stream::Predictors);
    auto noise = make_rng(cfg, Stream::Noise);

    const bool pareto = cfg.scenario == Scenario::Ib || cfg.scenario == Scenario::IIb;
    DataMatrix x = pareto ? gen_pareto(cfg.n, cfg.p, xs) : gen_ar1_mvt(cfg.n, cfg.p, cfg.rho, 3.0, xs);

    SimulatedResponse r;
    switch (cfg.scenario) {
    case Scenario::Ia:
    case Scenario::Ib: r = gen_response_I(x, noise); break;
    case Scenario::IIa:
    case Scenario::IIb: r = gen_response_II(x, noise, cfg.adjacent_ii); break;
    case Scenario::IIIa:
    case Scenario::IIIb: {
        auto coef = make_rng(cfg, Stream::Coefficients);
        r = gen_response_III(x, cfg.scenario == Scenario::IIIa ? ModelIII::A : ModelIII::B, coef, noise);
        break;
    }
    }

    Dataset ds;
    ds.data = DataMatrix(cfg.n, cfg.p, r.q);
    ds.data.predictors = std::move(x.predictors);
    ds.data.response = std::move(r.y);
    ds.active = std::move(r.active);
    ds.beta = std::move(r.beta);
    return ds;
}

} // namespace rdcscreen
