#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

struct BeamformingConfig {
    std::size_t n_beams = 64;
    double ue_speed = 1.0;
    double spatial_corr = 4.0;   ///< squared-exponential length scale, in beam-index units
    double temporal_corr = 0.9;  ///< AR(1) coefficient of the field at unit UE speed
    double measure_cost = 0.0;   ///< dB-equivalent penalty per measured beam
    double mean_rsrp_db = -80.0;
    double field_std_db = 6.0;
    double meas_noise_std_db = 0.0;

    /// AR(1) coefficient actually applied: 1 − ρ grows linearly with speed,
    /// speed 0 freezes the field.
    [[nodiscard]] double effective_ar() const {
        return std::clamp(1.0 - (1.0 - temporal_corr) * ue_speed, 0.0, 1.0);
    }
};

/// RSRP of every beam over time, [n_beams × n_steps] in dB.
struct RsrpField {
    Eigen::MatrixXd values;
    std::vector<std::size_t> optimal_beam;

    explicit RsrpField(Eigen::MatrixXd v) : values(std::move(v)) {
        optimal_beam.resize(static_cast<std::size_t>(values.cols()));
        for (Eigen::Index t = 0; t < values.cols(); ++t) optimal_beam[static_cast<std::size_t>(t)] = argmax_column(t);
    }

    [[nodiscard]] std::size_t argmax_column(Eigen::Index t) const {
        Eigen::Index best = 0;
        for (Eigen::Index b = 1; b < values.rows(); ++b)
            if (values(b, t) > values(best, t)) best = b;
        return static_cast<std::size_t>(best);
    }
};

struct BeamMeasurement {
    std::size_t beam = 0;
    double rsrp_db = 0.0;
};

struct BeamObservation {
    std::size_t t = 0; ///< step the measurements belong to
    std::vector<BeamMeasurement> measured;
};

inline std::ostream& operator<<(std::ostream& os, const BeamObservation& o) {
    for (std::size_t i = 0; i < o.measured.size(); ++i)
        os << (i ? "|" : "") << o.measured[i].beam << ':' << format_double(o.measured[i].rsrp_db);
    return os;
}

/// Chooses the served beam once this step's measurements are in.
using ServeRule = std::function<std::size_t(std::span<const BeamMeasurement>)>;

struct BeamAction {
    std::vector<std::size_t> measure;
    ServeRule serve;
};

inline ServeRule serve_fixed(std::size_t beam) {
    return [beam](std::span<const BeamMeasurement>) { return beam; };
}

/// Serves the strongest measured beam (lowest index on ties).
inline std::size_t best_measured(std::span<const BeamMeasurement> m) {
    if (m.empty()) throw InvalidAction("no measured beam to serve");
    std::size_t best = 0;
    for (std::size_t i = 1; i < m.size(); ++i)
        if (m[i].rsrp_db > m[best].rsrp_db || (m[i].rsrp_db == m[best].rsrp_db && m[i].beam < m[best].beam)) best = i;
    return m[best].beam;
}

namespace detail {

/// Symmetric square root of the squared-exponential covariance over beam
/// indices; robust to the numerical rank deficiency of smooth kernels.
inline Eigen::MatrixXd beam_field_factor(std::size_t n, double length_scale, double variance) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double d = static_cast<double>(i) - static_cast<double>(j);
            double v = length_scale > 0.0 ? std::exp(-d * d / (2.0 * length_scale * length_scale)) : (i == j ? 1.0 : 0.0);
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = variance * v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace detail

/// Analog beam selection with a hidden RSRP field. The field is Gaussian
/// across beams (squared-exponential correlation) and AR(1) in time; only
/// measured beams are observed, and each measurement costs `measure_cost`.
class BeamformingEnv {
public:
    using observation_type = BeamObservation;
    using action_type = BeamAction;

    explicit BeamformingEnv(BeamformingConfig cfg) : cfg_(cfg) {
        require(cfg_.n_beams >= 2, "beamforming: n_beams must be at least 2");
        require(cfg_.temporal_corr >= 0.0 && cfg_.temporal_corr < 1.0, "beamforming: temporal_corr must lie in [0,1)");
        require(cfg_.ue_speed >= 0.0, "beamforming: ue_speed must be nonnegative");
        require(cfg_.spatial_corr >= 0.0, "beamforming: spatial_corr must be nonnegative");
        require(cfg_.field_std_db > 0.0, "beamforming: field_std_db must be positive");
        require(cfg_.meas_noise_std_db >= 0.0, "beamforming: negative measurement noise");
        factor_ = detail::beam_field_factor(cfg_.n_beams, cfg_.spatial_corr, cfg_.field_std_db * cfg_.field_std_db);
    }

    [[nodiscard]] std::string_view name() const { return "beamforming"; }
    [[nodiscard]] const BeamformingConfig& config() const { return cfg_; }
    [[nodiscard]] std::size_t n_beams() const { return cfg_.n_beams; }

    [[nodiscard]] std::string describe(const action_type& a) const { return "m=" + join(a.measure); }

    observation_type reset(std::uint64_t seed) {
        Rng root(seed);
        field_stream_ = root.split("field");
        noise_stream_ = root.split("measurement");
        t_ = 0;
        field_ = factor_ * innovation(0);
        return {0, {}};
    }

    StepOutcome<observation_type> step(const action_type& a) {
        if (!a.serve) throw InvalidAction("empty serve decision");
        std::vector<bool> seen(cfg_.n_beams, false);
        BeamObservation obs{t_, {}};
        auto gen = noise_stream_.at(t_);
        std::normal_distribution<double> n01(0.0, 1.0);
        for (std::size_t b : a.measure) {
            if (b >= cfg_.n_beams) throw InvalidAction("measured beam " + std::to_string(b) + " out of range");
            if (seen[b]) throw InvalidAction("beam " + std::to_string(b) + " measured twice");
            seen[b] = true;
            double noise = cfg_.meas_noise_std_db > 0.0 ? cfg_.meas_noise_std_db * n01(gen) : 0.0;
            obs.measured.push_back({b, rsrp(b) + noise});
        }
        std::size_t served = a.serve(obs.measured);
        if (served >= cfg_.n_beams) throw InvalidAction("served beam " + std::to_string(served) + " out of range");

        std::size_t optimal = optimal_beam();
        double reward = rsrp(served) - cfg_.measure_cost * static_cast<double>(a.measure.size());
        Diagnostics d{{"selected_beam", static_cast<double>(served)},
                      {"optimal_beam", static_cast<double>(optimal)},
                      {"rsrp_served", rsrp(served)},
                      {"rsrp_optimal", rsrp(optimal)},
                      {"n_measured", static_cast<double>(a.measure.size())}};
        advance();
        return {std::move(obs), reward, false, std::move(d)};
    }

    [[nodiscard]] double rsrp(std::size_t beam) const { return cfg_.mean_rsrp_db + field_(static_cast<Eigen::Index>(beam)); }

    /// Current column of the field in dB.
    [[nodiscard]] Eigen::VectorXd hidden_state() const { return field_.array() + cfg_.mean_rsrp_db; }

    [[nodiscard]] std::size_t optimal_beam() const {
        Eigen::Index best = 0;
        for (Eigen::Index b = 1; b < field_.size(); ++b)
            if (field_(b) > field_(best)) best = b;
        return static_cast<std::size_t>(best);
    }

    /// Field the environment would produce over `n_steps` for this seed;
    /// independent of actions.
    [[nodiscard]] RsrpField record_field(std::uint64_t seed, std::size_t n_steps) const {
        BeamformingEnv copy(*this);
        copy.reset(seed);
        Eigen::MatrixXd v(static_cast<Eigen::Index>(cfg_.n_beams), static_cast<Eigen::Index>(n_steps));
        for (std::size_t t = 0; t < n_steps; ++t) {
            v.col(static_cast<Eigen::Index>(t)) = copy.hidden_state();
            copy.advance();
        }
        return RsrpField(std::move(v));
    }

private:
    Eigen::VectorXd innovation(std::size_t t) const {
        auto gen = field_stream_.at(t);
        std::normal_distribution<double> n01(0.0, 1.0);
        Eigen::VectorXd z(static_cast<Eigen::Index>(cfg_.n_beams));
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = n01(gen);
        return z;
    }

    void advance() {
        ++t_;
        double rho = cfg_.effective_ar();
        if (rho < 1.0) field_ = rho * field_ + std::sqrt(1.0 - rho * rho) * (factor_ * innovation(t_));
    }

    BeamformingConfig cfg_;
    Eigen::MatrixXd factor_;
    Rng field_stream_, noise_stream_;
    std::size_t t_ = 0;
    Eigen::VectorXd field_;
};

} // namespace occam_rrm
