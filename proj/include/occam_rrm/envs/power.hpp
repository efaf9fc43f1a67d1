#pragma once

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

struct PowerConfig {
    std::vector<double> mean_gains;  ///< one entry per channel
    bool rayleigh = true;            ///< exponential power gains around the mean; false = static gains
    std::size_t coherence_steps = 1; ///< gains are redrawn every coherence interval
    double total_power = 1.0;
    double noise = 1.0;
};

struct PowerObservation {
    std::vector<double> gains;
};

inline std::ostream& operator<<(std::ostream& os, const PowerObservation& o) { return os << join(o.gains); }

struct PowerAction {
    std::vector<double> powers;
};

/// Power allocation over independent point-to-point channels under a total
/// power budget. Block fading, gains observed before acting.
class PowerEnv {
public:
    using observation_type = PowerObservation;
    using action_type = PowerAction;

    explicit PowerEnv(PowerConfig cfg) : cfg_(std::move(cfg)) {
        require(!cfg_.mean_gains.empty(), "power: at least one channel");
        require(cfg_.total_power > 0.0, "power: total_power must be positive");
        require(cfg_.noise > 0.0, "power: noise must be positive");
        require(cfg_.coherence_steps >= 1, "power: coherence_steps must be at least 1");
        for (double g : cfg_.mean_gains) require(g >= 0.0, "power: gains must be nonnegative");
    }

    [[nodiscard]] std::string_view name() const { return "power"; }
    [[nodiscard]] std::string describe(const action_type& a) const { return join(a.powers); }
    [[nodiscard]] const PowerConfig& config() const { return cfg_; }

    observation_type reset(std::uint64_t seed) {
        gain_stream_ = Rng(seed).split("gains");
        t_ = 0;
        draw_gains();
        return {gains_};
    }

    /// Σ_i log2(1 + p_i g_i / noise).
    [[nodiscard]] static double rate(std::span<const double> powers, std::span<const double> gains, double noise) {
        double r = 0.0;
        for (std::size_t i = 0; i < powers.size(); ++i) r += std::log2(1.0 + powers[i] * gains[i] / noise);
        return r;
    }

    StepOutcome<observation_type> step(const action_type& a) {
        if (a.powers.size() != gains_.size())
            throw InvalidAction("power vector has " + std::to_string(a.powers.size()) + " entries, expected " +
                                std::to_string(gains_.size()));
        double sum = 0.0;
        for (double p : a.powers) {
            if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidAction("powers must be finite and nonnegative");
            sum += p;
        }
        if (sum > cfg_.total_power * (1.0 + 1e-9))
            throw InvalidAction("total power " + format_double(sum) + " exceeds budget " + format_double(cfg_.total_power));
        double reward = rate(a.powers, gains_, cfg_.noise);
        Diagnostics d{{"total_power", sum}};
        ++t_;
        draw_gains();
        return {{gains_}, reward, false, std::move(d)};
    }

    [[nodiscard]] const std::vector<double>& hidden_state() const { return gains_; }

private:
    void draw_gains() {
        if (t_ % cfg_.coherence_steps != 0 && !gains_.empty()) return;
        gains_ = cfg_.mean_gains;
        if (!cfg_.rayleigh) return;
        auto gen = gain_stream_.at(t_ / cfg_.coherence_steps);
        std::exponential_distribution<double> exp1(1.0);
        for (double& g : gains_) g *= exp1(gen);
    }

    PowerConfig cfg_;
    Rng gain_stream_;
    std::size_t t_ = 0;
    std::vector<double> gains_;
};

} // namespace occam_rrm
