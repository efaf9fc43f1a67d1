#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/rng.hpp"

namespace occam_rrm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Downlink channel: one row per receiving user, one column per transmit
/// antenna. Noise power is linear.
struct ChannelMatrix {
    CMatrix entries;
    double noise_power = 1.0;

    ChannelMatrix(CMatrix h, double noise) : entries(std::move(h)), noise_power(noise) {
        require(noise_power > 0.0, "ChannelMatrix: noise_power must be positive");
        require(entries.allFinite(), "ChannelMatrix: entries must be finite");
    }

    [[nodiscard]] Eigen::Index n_users() const { return entries.rows(); }
    [[nodiscard]] Eigen::Index n_tx() const { return entries.cols(); }

    /// I.i.d. CN(0,1) entries.
    static ChannelMatrix rayleigh(Eigen::Index n_users, Eigen::Index n_tx, double noise, Rng& rng) {
        std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
        CMatrix h(n_users, n_tx);
        for (Eigen::Index i = 0; i < n_users; ++i)
            for (Eigen::Index j = 0; j < n_tx; ++j) h(i, j) = {n01(rng), n01(rng)};
        return {std::move(h), noise};
    }
};

} // namespace occam_rrm
