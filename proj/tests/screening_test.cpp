#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rdcscreen/dcor.hpp"
#include "rdcscreen/random.hpp"
#include "rdcscreen/screening.hpp"

using namespace rdcscreen;

namespace {

DataMatrix heavy_data(Rng& rng, std::size_t n, std::size_t p, std::size_t q = 1)
{
    DataMatrix m(n, p, q);
    for (double& v : m.predictors) {
        v = rng.student_t(3.0);
    }
    for (double& v : m.response) {
        v = rng.student_t(3.0);
    }
    return m;
}

constexpr Method kAll[] = {Method::RDC, Method::DC, Method::PearsonSIS};

} // namespace

TEST(ModelSize, FloorOfNOverLogN)
{
    EXPECT_EQ(default_model_size(100), 21u);
    EXPECT_EQ(default_model_size(116), 24u);
    EXPECT_EQ(default_model_size(200, 2), 75u);
    EXPECT_EQ(default_model_size(200, 3), 113u);
    EXPECT_THROW((void)default_model_size(2), ParameterError);
    EXPECT_THROW((void)default_model_size(100, 0), ParameterError);
}

TEST(ScreeningT, LogOfP)
{
    EXPECT_DOUBLE_EQ(screening_t(1.0, 2000), std::log(2000.0));
    EXPECT_DOUBLE_EQ(screening_t(0.5, 100), 0.5 * std::log(100.0));
    EXPECT_THROW((void)screening_t(0.0, 10), ParameterError);
    EXPECT_THROW((void)screening_t(1.0, 1), ParameterError);
}

TEST(Methods, NamesRoundTrip)
{
    for (Method m : kAll) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_EQ(parse_method("sis"), Method::PearsonSIS);
    EXPECT_THROW((void)parse_method("lasso"), ParameterError);
}

TEST(Ranking, TiesBreakByIndex)
{
    const std::vector<double> u = {0.5, 0.9, 0.5, 0.0, 0.9};
    EXPECT_EQ(rank_by_utility(u), (std::vector<std::size_t>{1, 4, 0, 2, 3}));
}

TEST(Screen, PerfectFeatureRanksFirst)
{
    Rng rng(3);
    auto data = heavy_data(rng, 60, 20);
    for (std::size_t i = 0; i < data.n; ++i) {
        data.y(i, 0) = data.x(i, 0);
    }
    for (Method m : kAll) {
        const auto res = screen(data, m, screening_t(1.0, data.p), 5);
        EXPECT_EQ(res.ranking.front(), 0u) << to_string(m);
        EXPECT_EQ(res.retained.size(), 5u);
        EXPECT_DOUBLE_EQ(res.utilities[0], 1.0);
        EXPECT_EQ(res.ranks()[0], 1u);
    }
}

TEST(Screen, UtilitiesAreSquaredDependence)
{
    Rng rng(4);
    const auto data = heavy_data(rng, 40, 8);
    const double t = screening_t(1.0, data.p);
    const auto rdc = screen(data, Method::RDC, t, 3);
    const auto dc = screen(data, Method::DC, t, 3);
    for (std::size_t j = 0; j < data.p; ++j) {
        const auto tuned = tuned_robust_dcor(data.feature(j), data.response_view(), t);
        EXPECT_EQ(rdc.utilities[j], tuned.dcor2);
        EXPECT_EQ(rdc.taus[j], tuned.tau_x);
        EXPECT_EQ(rdc.tau_y, tuned.tau_y);
        EXPECT_EQ(dc.utilities[j], sample_dcor(data.feature(j), data.response_view()).dcor2);
    }
    EXPECT_FALSE(dc.tau_y.has_value());
}

TEST(Screen, ConstantResponseIsAnError)
{
    Rng rng(5);
    auto data = heavy_data(rng, 30, 4);
    std::fill(data.response.begin(), data.response.end(), 2.5);
    for (Method m : kAll) {
        EXPECT_THROW((void)screen(data, m, 1.0, 2), DataError) << to_string(m);
    }
}

TEST(Screen, ConstantFeatureGetsZeroAndFlag)
{
    Rng rng(6);
    auto data = heavy_data(rng, 30, 5);
    std::fill(data.column(2).begin(), data.column(2).end(), -1.0);
    for (Method m : kAll) {
        const auto res = screen(data, m, screening_t(1.0, data.p), 5);
        EXPECT_TRUE(res.degenerate[2]);
        EXPECT_EQ(res.utilities[2], 0.0);
        EXPECT_EQ(std::count(res.degenerate.begin(), res.degenerate.end(), true), 1);
        if (m == Method::RDC) {
            EXPECT_FALSE(res.taus[2].has_value());
        }
    }
}

TEST(Screen, ParameterChecks)
{
    Rng rng(7);
    const auto multi = heavy_data(rng, 30, 4, 2);
    EXPECT_THROW((void)screen(multi, Method::PearsonSIS, 1.0, 2), ParameterError);
    EXPECT_NO_THROW((void)screen(multi, Method::RDC, 1.0, 2));
    EXPECT_THROW((void)screen(multi, Method::DC, 1.0, 0), ParameterError);
    EXPECT_THROW((void)screen(multi, Method::DC, 1.0, 5), ParameterError);
    auto bad = heavy_data(rng, 30, 4);
    bad.x(3, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW((void)screen(bad, Method::DC, 1.0, 2), DataError);
}

TEST(Screen, InvariantUnderPositiveScalingAndShift)
{
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const auto data = heavy_data(rng, 50, 30);
        auto scaled = data;
        for (std::size_t j = 0; j < data.p; ++j) {
            const double c = std::exp(2.0 * rng.normal());
            for (double& v : scaled.column(j)) {
                v *= c;
            }
        }
        for (double& v : scaled.response) {
            v *= 7.0;
        }
        // Shifting by a power of two keeps grid values exact.
        auto shifted = data;
        for (double& v : shifted.predictors) {
            v = std::ldexp(std::round(std::ldexp(v, 20)), -20);
        }
        auto shifted2 = shifted;
        for (double& v : shifted2.predictors) {
            v += 16.0;
        }
        const double t = screening_t(1.0, data.p);
        const auto base = screen(data, Method::RDC, t, 10);
        const auto sc = screen(scaled, Method::RDC, t, 10);
        for (std::size_t j = 0; j < data.p; ++j) {
            EXPECT_LE(std::fabs(base.utilities[j] - sc.utilities[j]), 1e-12);
        }
        EXPECT_EQ(base.ranking, sc.ranking);
        const auto s1 = screen(shifted, Method::RDC, t, 10);
        const auto s2 = screen(shifted2, Method::RDC, t, 10);
        EXPECT_EQ(s1.utilities, s2.utilities);
    }
}

TEST(Screen, WorkerCountDoesNotChangeResults)
{
    Rng rng(9);
    const auto data = heavy_data(rng, 40, 64, 2);
    for (Method m : {Method::RDC, Method::DC}) {
        const auto one = screen(data, m, 2.0, 10, 1);
        for (std::size_t w : {2u, 3u, 8u}) {
            const auto many = screen(data, m, 2.0, 10, w);
            EXPECT_EQ(one.utilities, many.utilities);
            EXPECT_EQ(one.ranking, many.ranking);
        }
    }
}

TEST(Screen, PearsonAndDcAgreeOnGaussianLinearSignal)
{
    // Y = 0.5 X1 + noise with otherwise independent Gaussian features.
    Rng rng(10);
    int agree = 0;
    for (int draw = 0; draw < 50; ++draw) {
        DataMatrix data(500, 10, 1);
        for (double& v : data.predictors) {
            v = rng.normal();
        }
        for (std::size_t i = 0; i < data.n; ++i) {
            data.y(i, 0) = 0.5 * data.x(i, 0) + rng.normal();
        }
        const auto dc = screen(data, Method::DC, 1.0, 1);
        const auto sis = screen(data, Method::PearsonSIS, 1.0, 1);
        agree += dc.ranking.front() == sis.ranking.front() ? 1 : 0;
    }
    EXPECT_GE(agree, 45);
}
