#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

/// Logistic link curve: BLER(sinr) = 1 / (1 + exp(slope · (sinr − s50))).
struct BlerCurve {
    double s50_db = 0.0;
    double slope = 1.0;

    [[nodiscard]] double operator()(double sinr_db) const { return 1.0 / (1.0 + std::exp(slope * (sinr_db - s50_db))); }

    /// SINR at which the curve crosses `bler`.
    [[nodiscard]] double sinr_for(double bler) const { return s50_db + std::log(1.0 / bler - 1.0) / slope; }
};

struct LinkAdaptConfig {
    std::vector<double> rates; ///< bits/step per MCS, strictly increasing
    std::vector<BlerCurve> bler_curves;
    double sinr_mean_db = 10.0;
    double ar_coeff = 0.95;
    double innovation_std_db = 1.0;
    double report_noise_std_db = 1.0;
    double report_bias_db = 0.0; ///< systematic error of the SINR reports

    /// Eight MCS levels, 3 dB apart, BLER midpoints from 1 dB to 22 dB.
    static LinkAdaptConfig standard(std::size_t n_mcs = 8) {
        LinkAdaptConfig c;
        for (std::size_t m = 0; m < n_mcs; ++m) {
            c.rates.push_back(0.5 + 0.75 * static_cast<double>(m));
            c.bler_curves.push_back({1.0 + 3.0 * static_cast<double>(m), 1.5});
        }
        return c;
    }
};

struct LinkObservation {
    double sinr_report_db = 0.0;
    std::optional<bool> ack; ///< outcome of the previous transmission
};

inline std::ostream& operator<<(std::ostream& os, const LinkObservation& o) {
    os << format_double(o.sinr_report_db);
    if (o.ack) os << (*o.ack ? ";ack" : ";nack");
    return os;
}

/// Single-user link adaptation. The SINR follows an AR(1) process in dB
/// that ignores the chosen MCS; each step transmits one block with the
/// chosen MCS, acknowledged with probability 1 − BLER(mcs, sinr).
class LinkAdaptEnv {
public:
    using observation_type = LinkObservation;
    using action_type = std::size_t;

    explicit LinkAdaptEnv(LinkAdaptConfig cfg) : cfg_(std::move(cfg)) {
        require(!cfg_.rates.empty(), "link_adapt: at least one MCS");
        require(cfg_.bler_curves.size() == cfg_.rates.size(), "link_adapt: one BLER curve per MCS");
        for (std::size_t m = 1; m < cfg_.rates.size(); ++m)
            require(cfg_.rates[m] > cfg_.rates[m - 1], "link_adapt: rates must be strictly increasing in MCS");
        for (const auto& c : cfg_.bler_curves) require(c.slope > 0.0, "link_adapt: BLER curves must decrease in SINR");
        require(cfg_.rates.front() >= 0.0, "link_adapt: rates must be nonnegative");
        require(cfg_.ar_coeff >= 0.0 && cfg_.ar_coeff < 1.0, "link_adapt: AR coefficient must lie in [0,1)");
        require(cfg_.innovation_std_db >= 0.0 && cfg_.report_noise_std_db >= 0.0, "link_adapt: negative std");
    }

    [[nodiscard]] std::string_view name() const { return "link_adapt"; }
    [[nodiscard]] std::string describe(action_type a) const { return std::to_string(a); }
    [[nodiscard]] const LinkAdaptConfig& config() const { return cfg_; }
    [[nodiscard]] std::size_t n_mcs() const { return cfg_.rates.size(); }

    [[nodiscard]] double bler(std::size_t mcs, double sinr_db) const { return cfg_.bler_curves.at(mcs)(sinr_db); }

    observation_type reset(std::uint64_t seed) {
        Rng root(seed);
        sinr_stream_ = root.split("sinr");
        ack_stream_ = root.split("ack");
        report_stream_ = root.split("report");
        t_ = 0;
        double stationary_std = cfg_.innovation_std_db / std::sqrt(1.0 - cfg_.ar_coeff * cfg_.ar_coeff);
        sinr_db_ = cfg_.sinr_mean_db + stationary_std * normal(sinr_stream_, 0);
        return {report(), std::nullopt};
    }

    StepOutcome<observation_type> step(action_type mcs) {
        if (mcs >= cfg_.rates.size())
            throw InvalidAction("MCS " + std::to_string(mcs) + " out of range [0," + std::to_string(cfg_.rates.size()) + ")");
        double p_err = bler(mcs, sinr_db_);
        auto gen = ack_stream_.at(t_);
        bool ack = gen.uniform() < 1.0 - p_err;
        double reward = ack ? cfg_.rates[mcs] : 0.0;
        Diagnostics d{{"sinr_db", sinr_db_}, {"bler", p_err}, {"ack", ack ? 1.0 : 0.0}};

        ++t_;
        sinr_db_ = cfg_.sinr_mean_db + cfg_.ar_coeff * (sinr_db_ - cfg_.sinr_mean_db) +
                   cfg_.innovation_std_db * normal(sinr_stream_, t_);
        return {{report(), ack}, reward, false, std::move(d)};
    }

    /// True SINR of the upcoming transmission.
    [[nodiscard]] double hidden_state() const { return sinr_db_; }

private:
    static double normal(const Rng& stream, std::size_t t) {
        auto gen = stream.at(t);
        return std::normal_distribution<double>(0.0, 1.0)(gen);
    }

    double report() const { return sinr_db_ + cfg_.report_bias_db + cfg_.report_noise_std_db * normal(report_stream_, t_); }

    LinkAdaptConfig cfg_;
    Rng sinr_stream_, ack_stream_, report_stream_;
    std::size_t t_ = 0;
    double sinr_db_ = 0.0;
};

} // namespace occam_rrm
