#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

inline constexpr double kThroughputFloor = 1e-6;

struct SchedulingConfig {
    std::vector<double> mean_efficiency;   ///< bits/step when served, per user
    bool rayleigh = true;                  ///< exponential fading around the mean
    std::vector<double> arrival_rates;     ///< bits/step per user; empty = full buffer
    std::vector<double> weights;           ///< traffic-priority weights in the utility; empty = all 1
    double ewma_alpha = 0.05;
    double epsilon = kThroughputFloor;
};

/// Per-user buffers. Full-buffer users carry an infinite backlog.
struct QueueState {
    std::vector<double> backlogs;
    std::vector<double> arrivals_rate;
};

struct SchedulingObservation {
    std::vector<double> efficiency; ///< spectral efficiency of the upcoming slot
    std::vector<double> backlogs;
    std::vector<double> avg_throughput;
};

inline std::ostream& operator<<(std::ostream& os, const SchedulingObservation& o) { return os << join(o.efficiency); }

/// Single-subcarrier downlink scheduling. The served user drains its queue
/// at its current efficiency; the reward is the increment of the weighted
/// sum of log EWMA throughputs.
class SchedulingEnv {
public:
    using observation_type = SchedulingObservation;
    using action_type = std::size_t;

    explicit SchedulingEnv(SchedulingConfig cfg) : cfg_(std::move(cfg)) {
        n_ = cfg_.mean_efficiency.size();
        require(n_ >= 2, "scheduling: at least two users");
        require(cfg_.ewma_alpha > 0.0 && cfg_.ewma_alpha <= 1.0, "scheduling: ewma_alpha must lie in (0,1]");
        require(cfg_.arrival_rates.empty() || cfg_.arrival_rates.size() == n_, "scheduling: arrival_rates size mismatch");
        require(cfg_.weights.empty() || cfg_.weights.size() == n_, "scheduling: weights size mismatch");
        require(cfg_.epsilon > 0.0, "scheduling: epsilon must be positive");
        for (double e : cfg_.mean_efficiency) require(e > 0.0, "scheduling: efficiencies must be positive");
        for (double a : cfg_.arrival_rates) require(a >= 0.0, "scheduling: arrival rates must be nonnegative");
        if (cfg_.weights.empty()) cfg_.weights.assign(n_, 1.0);
    }

    [[nodiscard]] std::string_view name() const { return "scheduling"; }
    [[nodiscard]] std::string describe(action_type a) const { return std::to_string(a); }
    [[nodiscard]] const SchedulingConfig& config() const { return cfg_; }
    [[nodiscard]] std::size_t n_users() const { return n_; }

    observation_type reset(std::uint64_t seed) {
        fading_ = Rng(seed).split("fading");
        t_ = 0;
        queues_.arrivals_rate = cfg_.arrival_rates.empty() ? std::vector<double>(n_, 0.0) : cfg_.arrival_rates;
        queues_.backlogs.assign(n_, full_buffer() ? std::numeric_limits<double>::infinity() : 0.0);
        if (!full_buffer())
            for (std::size_t u = 0; u < n_; ++u) queues_.backlogs[u] = queues_.arrivals_rate[u];
        avg_.assign(n_, cfg_.epsilon);
        draw_efficiency();
        return observe();
    }

    StepOutcome<observation_type> step(action_type user) {
        if (user >= n_) throw InvalidAction("user " + std::to_string(user) + " out of range");
        double before = utility();
        Diagnostics d;
        for (std::size_t u = 0; u < n_; ++u) {
            double achieved = 0.0;
            if (u == user) {
                achieved = std::min(queues_.backlogs[u], eff_[u]);
                queues_.backlogs[u] -= achieved;
            }
            avg_[u] = std::max((1.0 - cfg_.ewma_alpha) * avg_[u] + cfg_.ewma_alpha * achieved, cfg_.epsilon);
            d[throughput_key(u)] = achieved;
        }
        double reward = utility() - before;
        ++t_;
        if (!full_buffer())
            for (std::size_t u = 0; u < n_; ++u) queues_.backlogs[u] += queues_.arrivals_rate[u];
        draw_efficiency();
        return {observe(), reward, false, std::move(d)};
    }

    [[nodiscard]] const QueueState& queues() const { return queues_; }
    [[nodiscard]] const std::vector<double>& avg_throughput() const { return avg_; }

    /// Backlogs followed by EWMA throughputs.
    [[nodiscard]] std::vector<double> hidden_state() const {
        std::vector<double> s = queues_.backlogs;
        s.insert(s.end(), avg_.begin(), avg_.end());
        return s;
    }

private:
    [[nodiscard]] bool full_buffer() const { return cfg_.arrival_rates.empty(); }

    [[nodiscard]] double utility() const {
        double u = 0.0;
        for (std::size_t i = 0; i < n_; ++i) u += cfg_.weights[i] * std::log(avg_[i] + cfg_.epsilon);
        return u;
    }

    void draw_efficiency() {
        eff_ = cfg_.mean_efficiency;
        if (!cfg_.rayleigh) return;
        auto gen = fading_.at(t_);
        std::exponential_distribution<double> exp1(1.0);
        for (double& e : eff_) e *= exp1(gen);
    }

    [[nodiscard]] observation_type observe() const { return {eff_, queues_.backlogs, avg_}; }

    SchedulingConfig cfg_;
    std::size_t n_ = 0;
    Rng fading_;
    std::size_t t_ = 0;
    QueueState queues_;
    std::vector<double> eff_;
    std::vector<double> avg_;
};

} // namespace occam_rrm
