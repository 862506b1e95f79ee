#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdcscreen/error.hpp"
#include "rdcscreen/exact_sum.hpp"

namespace rdcscreen {

/// Non-owning view of n samples of a dim-dimensional variable, stored
/// row-major (sample i occupies values[i*dim, (i+1)*dim)).
struct SampleView {
    std::span<const double> values;
    std::size_t n = 0;
    std::size_t dim = 1;

    SampleView() = default;
    SampleView(std::span<const double> v, std::size_t samples, std::size_t dimension)
        : values(v), n(samples), dim(dimension)
    {
        if (dim == 0) {
            throw SizeError("variable dimension must be at least 1");
        }
        if (values.size() != n * dim) {
            throw SizeError("sample buffer holds " + std::to_string(values.size()) + " values, expected "
                            + std::to_string(n) + " x " + std::to_string(dim));
        }
    }

    static SampleView scalar(std::span<const double> v) { return {v, v.size(), 1}; }

    [[nodiscard]] double operator()(std::size_t i, std::size_t c) const { return values[i * dim + c]; }
};

/// The N = n(n-1)/2 distances |x_k - x_l| (or Euclidean norms), k < l,
/// in row-major upper-triangle order.
struct PairwiseDiffs {
    std::vector<double> values;
    std::size_t n = 0;
    std::size_t dim = 1;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// ψ_τ applied to a nonnegative distance: min(u, τ).
[[nodiscard]] inline double truncate(double u, double tau)
{
    if (!(tau > 0.0)) {
        throw ParameterError("truncation level must be positive, got " + std::to_string(tau));
    }
    return std::min(u, tau);
}

/// Full symmetric n x n distance matrix with zero diagonal, optionally
/// truncated elementwise at a level tau.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t k, std::size_t l) const noexcept { return entries_[k * n_ + l]; }
    [[nodiscard]] std::span<const double> row(std::size_t k) const noexcept
    {
        return {entries_.data() + k * n_, n_};
    }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
    [[nodiscard]] const std::optional<double>& tau() const noexcept { return tau_; }

    [[nodiscard]] double max_distance() const noexcept
    {
        return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
    }

    /// Copy with every entry replaced by min(entry, tau).
    [[nodiscard]] DistanceMatrix truncated(double tau) const
    {
        (void)truncate(0.0, tau);
        DistanceMatrix out;
        out.n_ = n_;
        out.tau_ = tau_ ? std::min(*tau_, tau) : tau;
        out.entries_.resize(entries_.size());
        std::transform(entries_.begin(), entries_.end(), out.entries_.begin(),
                       [tau](double u) { return std::min(u, tau); });
        return out;
    }

    [[nodiscard]] PairwiseDiffs upper_triangle(std::size_t dim = 1) const
    {
        PairwiseDiffs z;
        z.n = n_;
        z.dim = dim;
        z.values.reserve(n_ * (n_ - 1) / 2);
        for (std::size_t k = 0; k < n_; ++k) {
            for (std::size_t l = k + 1; l < n_; ++l) {
                z.values.push_back(entries_[k * n_ + l]);
            }
        }
        return z;
    }

private:
    friend DistanceMatrix pairwise_distances(const SampleView& x);

    std::size_t n_ = 0;
    std::vector<double> entries_;
    std::optional<double> tau_;
};

inline void require_finite(const SampleView& x)
{
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t c = 0; c < x.dim; ++c) {
            if (!std::isfinite(x(i, c))) {
                throw DataError("non-finite value at row " + std::to_string(i) + ", column "
                                + std::to_string(c));
            }
        }
    }
}

/// Exact Euclidean distances between all sample pairs (|x_k - x_l| for dim 1).
[[nodiscard]] inline DistanceMatrix pairwise_distances(const SampleView& x)
{
    if (x.n < 2) {
        throw SizeError("at least 2 samples are required, got " + std::to_string(x.n));
    }
    require_finite(x);

    const std::size_t n = x.n;
    DistanceMatrix m;
    m.n_ = n;
    m.entries_.assign(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
            double dist = 0.0;
            if (x.dim == 1) {
                dist = std::fabs(x(k, 0) - x(l, 0));
            } else {
                double sq = 0.0;
                for (std::size_t c = 0; c < x.dim; ++c) {
                    const double diff = x(k, c) - x(l, c);
                    sq += diff * diff;
                }
                dist = std::sqrt(sq);
            }
            m.entries_[k * n + l] = dist;
            m.entries_[l * n + k] = dist;
        }
    }
    return m;
}

[[nodiscard]] inline PairwiseDiffs pairwise_diffs(const SampleView& x)
{
    return pairwise_distances(x).upper_triangle(x.dim);
}

/// Row sums and grand total of a distance matrix. Both are exact sums
/// rounded once, so they do not depend on the sample order.
struct MarginalSums {
    std::vector<double> row_sums;
    double total = 0.0;
};

[[nodiscard]] inline MarginalSums marginal_sums(const DistanceMatrix& a)
{
    const std::size_t n = a.size();
    MarginalSums out;
    out.row_sums.resize(n);
    ExactSum upper;
    for (std::size_t k = 0; k < n; ++k) {
        const auto row = a.row(k);
        ExactSum acc;
        for (std::size_t l = 0; l < n; ++l) {
            acc.add(row[l]);
        }
        out.row_sums[k] = acc.value();
        for (std::size_t l = k + 1; l < n; ++l) {
            upper.add(row[l]);
        }
    }
    out.total = 2.0 * upper.value();
    return out;
}

struct SStatistics {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    /// S1 + S2 - 2 S3, before any clamping.
    [[nodiscard]] double dcov2() const noexcept { return s1 + s2 - 2.0 * s3; }
};

/// S-statistics from precomputed marginal sums. S3 uses the row-sum
/// identity (1/n^3) sum_l (sum_k a_kl)(sum_m b_ml), which is O(n^2).
[[nodiscard]] inline SStatistics s_statistics(const DistanceMatrix& a, const MarginalSums& sa,
                                              const DistanceMatrix& b, const MarginalSums& sb)
{
    const std::size_t n = a.size();
    if (b.size() != n || sa.row_sums.size() != n || sb.row_sums.size() != n) {
        throw SizeError("distance matrices disagree on sample count (" + std::to_string(n) + " vs "
                        + std::to_string(b.size()) + ")");
    }
    const double nn = static_cast<double>(n) * static_cast<double>(n);

    ExactSum cross;
    for (std::size_t k = 0; k < n; ++k) {
        const auto ra = a.row(k);
        const auto rb = b.row(k);
        for (std::size_t l = k + 1; l < n; ++l) {
            cross.add(ra[l] * rb[l]);
        }
    }
    ExactSum rows;
    for (std::size_t l = 0; l < n; ++l) {
        rows.add(sa.row_sums[l] * sb.row_sums[l]);
    }

    SStatistics s;
    s.s1 = 2.0 * cross.value() / nn;
    s.s2 = (sa.total / nn) * (sb.total / nn);
    s.s3 = rows.value() / (nn * static_cast<double>(n));
    return s;
}

[[nodiscard]] inline SStatistics s_statistics(const DistanceMatrix& a, const DistanceMatrix& b)
{
    if (a.size() != b.size()) {
        throw SizeError("distance matrices disagree on sample count (" + std::to_string(a.size()) + " vs "
                        + std::to_string(b.size()) + ")");
    }
    return s_statistics(a, marginal_sums(a), b, marginal_sums(b));
}

} // namespace rdcscreen
