#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdcscreen/distance.hpp"
#include "rdcscreen/error.hpp"

namespace rdcscreen {

enum class TauStatus { Solved, ClampedLow, Degenerate };

[[nodiscard]] inline std::string_view to_string(TauStatus s) noexcept
{
    switch (s) {
    case TauStatus::Solved: return "solved";
    case TauStatus::ClampedLow: return "clamped_low";
    case TauStatus::Degenerate: return "degenerate";
    }
    return "unknown";
}

/// Robustification level for one variable. tau is 0 when Degenerate.
struct TauResult {
    double tau = 0.0;
    TauStatus status = TauStatus::Degenerate;
    double residual = 0.0; ///< |f(tau) - t/n|

    [[nodiscard]] bool has_tau() const noexcept { return status != TauStatus::Degenerate; }
};

inline constexpr double kTauTolerance = 1e-10;

/// f(tau) = (1/N) sum_i min(Z_i^4, tau^4) / tau^4.
[[nodiscard]] inline double tau_objective(std::span<const double> z, double tau)
{
    if (!(tau > 0.0)) {
        throw ParameterError("tau must be positive, got " + std::to_string(tau));
    }
    if (z.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : z) {
        const double r = std::min(v, tau) / tau;
        const double r2 = r * r;
        acc += r2 * r2;
    }
    return acc / static_cast<double>(z.size());
}

[[nodiscard]] inline double tau_objective(const PairwiseDiffs& z, double tau) { return tau_objective(z.values, tau); }

/// Solves f(tau) = t/n exactly, piece by piece over the sorted differences.
///
/// Between consecutive order statistics Z_(k) <= tau < Z_(k+1) the
/// objective is S_k / (N tau^4) + (N - k) / N with S_k the sum of the k
/// smallest Z^4, so each piece has a closed-form root. The first piece whose
/// root does not pass its right endpoint holds the solution, because every
/// piece overestimates f to its right.
///
/// When t/n is at or above the fraction of nonzero differences no positive
/// tau solves the equation; the smallest positive difference is returned
/// with status ClampedLow. All-zero differences give Degenerate.
[[nodiscard]] inline TauResult solve_tau(std::span<const double> z, std::size_t n, double t)
{
    if (!(t > 0.0)) {
        throw ParameterError("t must be positive, got " + std::to_string(t));
    }
    if (n == 0) {
        throw ParameterError("sample count must be positive");
    }
    if (z.empty()) {
        throw SizeError("no pairwise differences to tune from");
    }
    for (double v : z) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DataError("pairwise differences must be finite and nonnegative");
        }
    }

    const double target = t / static_cast<double>(n);
    std::vector<double> sorted(z.begin(), z.end());
    std::sort(sorted.begin(), sorted.end());

    const std::size_t count = sorted.size();
    const auto first_positive =
        static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin());

    TauResult out;
    if (first_positive == count) {
        out.status = TauStatus::Degenerate;
        out.residual = target;
        return out;
    }

    const double big_n = static_cast<double>(count);
    const double ceiling = static_cast<double>(count - first_positive) / big_n;
    if (target >= ceiling) {
        out.tau = sorted[first_positive];
        out.status = TauStatus::ClampedLow;
        out.residual = std::fabs(tau_objective(sorted, out.tau) - target);
        return out;
    }

    double fourth_powers = 0.0;
    for (std::size_t k = first_positive + 1; k <= count; ++k) {
        const double zk = sorted[k - 1];
        const double zk2 = zk * zk;
        fourth_powers += zk2 * zk2;

        const double denom = big_n * target - static_cast<double>(count - k);
        if (!(denom > 0.0)) {
            continue;
        }
        const double upper = k < count ? sorted[k] : std::numeric_limits<double>::infinity();
        const double root = std::sqrt(std::sqrt(fourth_powers / denom));
        if (root <= upper) {
            out.tau = std::clamp(root, zk, upper);
            break;
        }
    }
    out.status = TauStatus::Solved;
    out.residual = std::fabs(tau_objective(sorted, out.tau) - target);
    return out;
}

[[nodiscard]] inline TauResult solve_tau(const PairwiseDiffs& z, double t) { return solve_tau(z.values, z.n, t); }

} // namespace rdcscreen
