#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

struct EnergyConfig {
    std::vector<double> capacity;  ///< traffic units served per step, per resource
    std::vector<double> power;     ///< draw per step while active or warming up
    std::size_t activation_delay = 0;
    std::size_t n_users = 1;
    std::vector<double> trace;         ///< arrivals per step to user 0; holds its last value past the end
    std::vector<double> poisson_rates; ///< per-user Poisson arrivals, used when `trace` is empty
    double qos_threshold = 0.0;        ///< total backlog tolerated before a QoS violation
    double qos_weight = 10.0;          ///< λ in −energy − λ·violation
};

/// Resource status: -1 off, 0 serving, k > 0 warming up with k steps left.
struct EnergyCore {
    std::vector<int> status;
    std::vector<double> queues;

    auto operator<=>(const EnergyCore&) const = default;
};

struct EnergyAction {
    std::uint32_t active_mask = 0; ///< bit r set = resource r requested on
};

struct EnergyObservation {
    std::size_t t = 0;
    std::vector<double> arrivals; ///< traffic arriving this step, per user
    std::vector<double> queues;   ///< backlog carried in, per user
    std::vector<int> status;

    [[nodiscard]] double load() const { return std::accumulate(arrivals.begin(), arrivals.end(), 0.0); }
};

inline std::ostream& operator<<(std::ostream& os, const EnergyObservation& o) { return os << format_double(o.load()); }

struct EnergyStep {
    EnergyCore next;
    double reward = 0.0;
    double energy = 0.0;
    bool violation = false;
    std::vector<double> service;
};

/// Hardware sleep modes with activation inertia. A resource switched on
/// draws power immediately but serves only after `activation_delay` steps;
/// unserved traffic stays queued.
class EnergyEnv {
public:
    using observation_type = EnergyObservation;
    using action_type = EnergyAction;

    explicit EnergyEnv(EnergyConfig cfg) : cfg_(std::move(cfg)) {
        require(!cfg_.capacity.empty() && cfg_.capacity.size() <= 16, "energy: between 1 and 16 resources");
        require(cfg_.power.size() == cfg_.capacity.size(), "energy: one power draw per resource");
        require(cfg_.n_users >= 1, "energy: at least one user");
        require(cfg_.trace.empty() || cfg_.n_users >= 1, "energy: trace needs a user");
        require(!cfg_.trace.empty() || cfg_.poisson_rates.size() == cfg_.n_users,
                "energy: give a traffic trace or one Poisson rate per user");
        for (double c : cfg_.capacity) require(c >= 0.0, "energy: negative capacity");
        for (double p : cfg_.power) require(p >= 0.0, "energy: negative power");
        for (double v : cfg_.trace) require(v >= 0.0, "energy: negative traffic");
        for (double v : cfg_.poisson_rates) require(v >= 0.0, "energy: negative arrival rate");
        require(cfg_.qos_threshold >= 0.0, "energy: negative qos_threshold");
    }

    [[nodiscard]] std::string_view name() const { return "energy"; }
    [[nodiscard]] const EnergyConfig& config() const { return cfg_; }
    [[nodiscard]] std::size_t n_resources() const { return cfg_.capacity.size(); }
    [[nodiscard]] std::uint32_t n_masks() const { return 1u << n_resources(); }

    [[nodiscard]] std::string describe(const action_type& a) const {
        std::string s;
        for (std::size_t r = 0; r < n_resources(); ++r) s += (a.active_mask >> r) & 1u ? '1' : '0';
        return s;
    }

    observation_type reset(std::uint64_t seed) {
        traffic_ = Rng(seed).split("traffic");
        t_ = 0;
        core_.status.assign(n_resources(), -1);
        core_.queues.assign(cfg_.n_users, 0.0);
        arrivals_ = arrivals_at(0);
        return observe();
    }

    /// Arrivals of step `t`; random access, so a perfect predictor can read
    /// the future of the seeded process.
    [[nodiscard]] std::vector<double> arrivals_at(std::size_t t) const {
        std::vector<double> a(cfg_.n_users, 0.0);
        if (!cfg_.trace.empty()) {
            a[0] = cfg_.trace[std::min(t, cfg_.trace.size() - 1)];
            return a;
        }
        auto gen = traffic_.at(t);
        for (std::size_t u = 0; u < cfg_.n_users; ++u)
            if (cfg_.poisson_rates[u] > 0.0)
                a[u] = static_cast<double>(std::poisson_distribution<long>(cfg_.poisson_rates[u])(gen));
        return a;
    }

    /// One step of the dynamics from `core` under `mask` with the given
    /// arrivals. Pure; shared by the simulator and model-based planners.
    [[nodiscard]] EnergyStep advance(const EnergyCore& core, std::uint32_t mask, std::span<const double> arrivals) const {
        EnergyStep out;
        out.next = core;
        auto& st = out.next.status;
        double cap = 0.0;
        for (std::size_t r = 0; r < st.size(); ++r) {
            bool want = (mask >> r) & 1u;
            if (!want) {
                st[r] = -1;
            } else if (st[r] < 0) {
                st[r] = static_cast<int>(cfg_.activation_delay);
            }
            if (st[r] >= 0) out.energy += cfg_.power[r];
            if (st[r] == 0) cap += cfg_.capacity[r];
        }
        // Serve the longest queues first.
        std::vector<double> total(core.queues.size());
        for (std::size_t u = 0; u < total.size(); ++u) total[u] = core.queues[u] + arrivals[u];
        std::vector<std::size_t> order(total.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] > total[b]; });
        out.service.assign(total.size(), 0.0);
        for (std::size_t u : order) {
            double s = std::min(cap, total[u]);
            out.service[u] = s;
            cap -= s;
        }
        double backlog = 0.0;
        for (std::size_t u = 0; u < total.size(); ++u) {
            out.next.queues[u] = total[u] - out.service[u];
            backlog += out.next.queues[u];
        }
        out.violation = backlog > cfg_.qos_threshold + 1e-12;
        out.reward = -out.energy - (out.violation ? cfg_.qos_weight : 0.0);
        for (int& s : st)
            if (s > 0) --s;
        return out;
    }

    StepOutcome<observation_type> step(const action_type& a) {
        if (a.active_mask >= n_masks()) throw InvalidAction("resource mask " + std::to_string(a.active_mask) + " out of range");
        auto res = advance(core_, a.active_mask, arrivals_);
        core_ = std::move(res.next);
        double backlog = std::accumulate(core_.queues.begin(), core_.queues.end(), 0.0);
        double serving = 0;
        for (int s : core_.status) serving += s == 0 ? 1.0 : 0.0;
        Diagnostics d{{"energy", res.energy},
                      {"violation", res.violation ? 1.0 : 0.0},
                      {"backlog", backlog},
                      {"load", std::accumulate(arrivals_.begin(), arrivals_.end(), 0.0)},
                      {"n_serving_next", serving}};
        ++t_;
        arrivals_ = arrivals_at(t_);
        return {observe(), res.reward, false, std::move(d)};
    }

    [[nodiscard]] const EnergyCore& core() const { return core_; }

private:
    [[nodiscard]] observation_type observe() const { return {t_, arrivals_, core_.queues, core_.status}; }

    EnergyConfig cfg_;
    Rng traffic_;
    std::size_t t_ = 0;
    EnergyCore core_;
    std::vector<double> arrivals_;
};

} // namespace occam_rrm
