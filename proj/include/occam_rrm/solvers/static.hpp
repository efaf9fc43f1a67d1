#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/envs/channel.hpp"

namespace occam_rrm {

struct PowerAllocation {
    std::vector<double> powers;
    double water_level = 0.0;
};

/// Capacity-maximizing split of `total_power` over parallel channels.
///
/// The water level is bracketed by bisection until the budget is met to
/// 1e-10; the active set found this way then fixes the level exactly, so
/// Σp = P and p_i + noise/g_i = level hold to rounding. Channels with zero
/// gain get no power.
inline PowerAllocation water_fill(std::span<const double> gains, double noise, double total_power) {
    require(total_power > 0.0, "water_fill: total_power must be positive");
    require(noise > 0.0, "water_fill: noise must be positive");
    require(!gains.empty(), "water_fill: no channels");
    double floor_min = std::numeric_limits<double>::infinity();
    for (double g : gains) {
        require(g >= 0.0 && std::isfinite(g), "water_fill: gains must be finite and nonnegative");
        if (g > 0.0) floor_min = std::min(floor_min, noise / g);
    }
    require(std::isfinite(floor_min), "water_fill: every channel has zero gain");

    auto filled = [&](double level) {
        double s = 0.0;
        for (double g : gains)
            if (g > 0.0) s += std::max(0.0, level - noise / g);
        return s;
    };
    double lo = floor_min, hi = floor_min + total_power;
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = filled(mid);
        if (std::abs(s - total_power) <= 1e-10) {
            lo = hi = mid;
            break;
        }
        (s < total_power ? lo : hi) = mid;
    }
    double level = 0.5 * (lo + hi);

    // Exact level on the active set.
    double floors = 0.0;
    std::size_t active = 0;
    for (double g : gains)
        if (g > 0.0 && noise / g < level) {
            floors += noise / g;
            ++active;
        }
    if (active == 0) {
        floors = floor_min;
        active = 1;
    }
    level = (total_power + floors) / static_cast<double>(active);

    PowerAllocation out;
    out.water_level = level;
    out.powers.reserve(gains.size());
    for (double g : gains) out.powers.push_back(g > 0.0 ? std::max(0.0, level - noise / g) : 0.0);
    return out;
}

/// Σ_i log2(1 + p_i g_i / noise).
inline double parallel_rate(std::span<const double> powers, std::span<const double> gains, double noise) {
    require(powers.size() == gains.size(), "parallel_rate: size mismatch");
    double r = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) r += std::log2(1.0 + powers[i] * gains[i] / noise);
    return r;
}

/// Linear precoder, one column per user.
struct Precoder {
    CMatrix matrix;
    double power_budget = 1.0;
};

/// Regularized zero-forcing (MMSE) precoder W ∝ Hᴴ(HHᴴ + (K·noise/P)·I)⁻¹,
/// scaled so ‖W‖_F² = P.
inline Precoder mmse_precoder(const ChannelMatrix& h, double power_budget) {
    require(power_budget > 0.0, "mmse_precoder: power_budget must be positive");
    require(h.entries.size() > 0 && h.entries.norm() > 0.0, "mmse_precoder: channel matrix is zero");
    const auto& H = h.entries;
    const Eigen::Index k = H.rows();
    double loading = static_cast<double>(k) * h.noise_power / power_budget;
    CMatrix gram = H * H.adjoint() + loading * CMatrix::Identity(k, k);
    Eigen::FullPivLU<CMatrix> lu(gram);
    if (!lu.isInvertible()) throw NumericalError("mmse_precoder: regularized Gram matrix is singular");
    CMatrix w = H.adjoint() * lu.inverse();
    double norm2 = w.squaredNorm();
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw NumericalError("mmse_precoder: degenerate precoder");
    w *= std::sqrt(power_budget / norm2);
    return {std::move(w), power_budget};
}

/// Σ_u log2(1 + SINR_u) with SINR_u = |h_u w_u|² / (Σ_{v≠u} |h_u w_v|² + noise),
/// where h_u is row u of H.
inline double sum_rate(const ChannelMatrix& h, const Precoder& w) {
    const auto& H = h.entries;
    const auto& W = w.matrix;
    if (W.rows() != H.cols() || W.cols() != H.rows())
        throw PreconditionError("sum_rate: precoder must be n_tx x n_users (" + std::to_string(H.cols()) + "x" +
                                std::to_string(H.rows()) + "), got " + std::to_string(W.rows()) + "x" +
                                std::to_string(W.cols()));
    CMatrix g = H * W; // g(u, v) = h_u · w_v
    double total = 0.0;
    for (Eigen::Index u = 0; u < H.rows(); ++u) {
        double signal = std::norm(g(u, u));
        double interference = 0.0;
        for (Eigen::Index v = 0; v < H.rows(); ++v)
            if (v != u) interference += std::norm(g(u, v));
        total += std::log2(1.0 + signal / (interference + h.noise_power));
    }
    return total;
}

} // namespace occam_rrm
