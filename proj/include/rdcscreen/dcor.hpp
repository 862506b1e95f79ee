#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "rdcscreen/distance.hpp"
#include "rdcscreen/error.hpp"
#include "rdcscreen/tau_solver.hpp"

namespace rdcscreen {

struct DependenceEstimate {
    double dcov2 = 0.0; ///< squared (robust) distance covariance, clamped at 0
    double dcor = 0.0;
    double dcor2 = 0.0; ///< the screening utility
    std::optional<double> tau_x;
    std::optional<double> tau_y;
    bool degenerate = false; ///< a marginal dcov is zero
    bool clamped = false;    ///< the cross dcov2 came out negative and was set to 0
};

/// One variable's distances (already truncated if needed) with the pieces
/// that do not depend on the other variable.
struct PreparedVariable {
    DistanceMatrix dist;
    MarginalSums sums;
    double self_dcov2 = 0.0;
};

[[nodiscard]] inline PreparedVariable prepare_variable(DistanceMatrix dist)
{
    PreparedVariable v;
    v.sums = marginal_sums(dist);
    v.dist = std::move(dist);
    v.self_dcov2 = std::max(0.0, s_statistics(v.dist, v.sums, v.dist, v.sums).dcov2());
    return v;
}

/// Assemble dcov2 / dcor from two prepared variables. Symmetric in its
/// arguments bit for bit.
[[nodiscard]] inline DependenceEstimate combine(const PreparedVariable& x, const PreparedVariable& y)
{
    DependenceEstimate est;
    double cross = s_statistics(x.dist, x.sums, y.dist, y.sums).dcov2();
    if (cross < 0.0) {
        est.clamped = true;
        cross = 0.0;
    }
    est.dcov2 = cross;
    if (!(x.self_dcov2 > 0.0) || !(y.self_dcov2 > 0.0)) {
        est.degenerate = true;
        return est;
    }
    est.dcor2 = std::min(1.0, cross / std::sqrt(x.self_dcov2 * y.self_dcov2));
    est.dcor = std::sqrt(est.dcor2);
    return est;
}

inline void require_same_n(const SampleView& x, const SampleView& y)
{
    if (x.n != y.n) {
        throw SizeError("variables have different sample counts (" + std::to_string(x.n) + " vs "
                        + std::to_string(y.n) + ")");
    }
}

/// Plain V-statistic distance correlation.
[[nodiscard]] inline DependenceEstimate sample_dcor(const SampleView& x, const SampleView& y)
{
    require_same_n(x, y);
    return combine(prepare_variable(pairwise_distances(x)), prepare_variable(pairwise_distances(y)));
}

/// Distance correlation on distances truncated at tau_x (for x) and tau_y
/// (for y). The marginal terms truncate both copies at the same level.
[[nodiscard]] inline DependenceEstimate robust_dcor(const SampleView& x, const SampleView& y, double tau_x,
                                                    double tau_y)
{
    require_same_n(x, y);
    if (!(tau_x > 0.0) || !(tau_y > 0.0)) {
        throw ParameterError("truncation levels must be positive");
    }
    auto est = combine(prepare_variable(pairwise_distances(x).truncated(tau_x)),
                       prepare_variable(pairwise_distances(y).truncated(tau_y)));
    est.tau_x = tau_x;
    est.tau_y = tau_y;
    return est;
}

/// A variable whose truncation level has been tuned from its own
/// pairwise differences. `prepared` is empty when the solve is degenerate.
struct TunedVariable {
    TauResult tau;
    std::optional<PreparedVariable> prepared;
};

[[nodiscard]] inline TunedVariable tune_variable(const SampleView& x, double t)
{
    auto dist = pairwise_distances(x);
    TunedVariable out;
    out.tau = solve_tau(dist.upper_triangle(x.dim).values, x.n, t);
    if (out.tau.has_tau()) {
        out.prepared = prepare_variable(dist.truncated(out.tau.tau));
    }
    return out;
}

[[nodiscard]] inline DependenceEstimate combine(const TunedVariable& x, const TunedVariable& y)
{
    DependenceEstimate est;
    if (x.prepared && y.prepared) {
        est = combine(*x.prepared, *y.prepared);
    } else {
        est.degenerate = true;
    }
    if (x.tau.has_tau()) {
        est.tau_x = x.tau.tau;
    }
    if (y.tau.has_tau()) {
        est.tau_y = y.tau.tau;
    }
    return est;
}

/// Robust distance correlation with both levels solved from the data for
/// the given t (typically C log p).
[[nodiscard]] inline DependenceEstimate tuned_robust_dcor(const SampleView& x, const SampleView& y, double t)
{
    require_same_n(x, y);
    if (!(t > 0.0)) {
        throw ParameterError("t must be positive, got " + std::to_string(t));
    }
    return combine(tune_variable(x, t), tune_variable(y, t));
}

} // namespace rdcscreen
