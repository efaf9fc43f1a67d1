#pragma once

#include <random>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

struct SingleStateConfig {
    std::vector<double> means;
    std::vector<double> stds; ///< empty = deterministic rewards
};

struct SingleStateObservation {
    std::size_t t = 0;
};

/// Stationary bandit: one state, Gaussian reward per action.
class SingleStateEnv {
public:
    using observation_type = SingleStateObservation;
    using action_type = std::size_t;

    explicit SingleStateEnv(SingleStateConfig cfg) : cfg_(std::move(cfg)) {
        require(!cfg_.means.empty(), "single_state: at least one action");
        require(cfg_.stds.empty() || cfg_.stds.size() == cfg_.means.size(), "single_state: stds size mismatch");
        for (double s : cfg_.stds) require(s >= 0.0, "single_state: negative std");
    }

    [[nodiscard]] std::string_view name() const { return "single_state"; }
    [[nodiscard]] std::string describe(action_type a) const { return std::to_string(a); }

    observation_type reset(std::uint64_t seed) {
        noise_ = Rng(seed).split("reward");
        t_ = 0;
        return {0};
    }

    StepOutcome<observation_type> step(action_type a) {
        if (a >= cfg_.means.size()) throw InvalidAction("action " + std::to_string(a) + " out of range");
        double r = cfg_.means[a];
        if (!cfg_.stds.empty() && cfg_.stds[a] > 0.0) {
            auto gen = noise_.at(t_);
            r += std::normal_distribution<double>(0.0, cfg_.stds[a])(gen);
        }
        ++t_;
        return {{t_}, r, false, {}};
    }

    [[nodiscard]] std::size_t n_states() const { return 1; }
    [[nodiscard]] std::size_t n_actions() const { return cfg_.means.size(); }
    [[nodiscard]] std::size_t state_index() const { return 0; }
    [[nodiscard]] action_type action_from_index(std::size_t i) const { return i; }

    [[nodiscard]] TabularMdp true_mdp(double discount) const {
        auto m = TabularMdp::zeros(1, cfg_.means.size(), discount);
        for (std::size_t a = 0; a < cfg_.means.size(); ++a) {
            m.set_p(0, a, 0, 1.0);
            m.set_r(0, a, cfg_.means[a]);
        }
        m.validate();
        return m;
    }

private:
    SingleStateConfig cfg_;
    Rng noise_;
    std::size_t t_ = 0;
};

} // namespace occam_rrm
