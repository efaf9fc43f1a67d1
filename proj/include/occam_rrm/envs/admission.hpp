#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"
#include "occam_rrm/envs/tabular.hpp"

namespace occam_rrm {

/// Request class; index 0 is the highest priority.
struct AdmissionClass {
    double arrival_rate = 1.0;
    double mean_holding = 1.0; ///< exponential holding time, time units
    double demand = 1.0;
    double reward = 1.0;
    double reject_penalty = 0.0;
};

struct AdmissionConfig {
    double capacity = 10.0;
    std::vector<AdmissionClass> classes;
    double delay_penalty = 0.0;   ///< paid per step a request is kept waiting
    double qos_margin = 1.0;      ///< QoS penalty applies while used > qos_margin · capacity
    double qos_penalty = 0.0;
};

struct PendingRequest {
    std::size_t priority = 0;
    double demand = 0.0;
};

struct AdmissionState {
    double capacity = 0.0;
    double used = 0.0;
    std::optional<PendingRequest> pending_request;
};

struct AdmissionObservation {
    AdmissionState state;
    std::vector<int> occupancy; ///< admitted requests in service, per class
};

inline std::ostream& operator<<(std::ostream& os, const AdmissionObservation& o) {
    os << join(o.occupancy) << ';';
    if (o.state.pending_request) os << o.state.pending_request->priority;
    return os;
}

enum class AdmissionDecision : std::size_t { accept = 0, reject = 1, delay = 2 };

/// Model state: occupancy per class plus the class of the waiting request
/// (-1 when none). Ordered so it can key the enumerated MDP.
struct AdmissionCore {
    std::vector<int> occupancy;
    int pending = -1;

    auto operator<=>(const AdmissionCore&) const = default;
};

/// Admission control as a uniformized continuous-time birth-death process.
/// Each step first applies the decision on the waiting request (if any) and
/// then draws one event: an arrival of class k with probability λ_k/Λ, a
/// departure of class k with probability n_k/(h_k Λ), or nothing. Λ is the
/// largest total event rate, so the step kernel is exact for exponential
/// holding times. An arrival while a request is already waiting is blocked
/// and pays its class reject penalty.
class AdmissionEnv {
public:
    using observation_type = AdmissionObservation;
    using action_type = AdmissionDecision;

    explicit AdmissionEnv(AdmissionConfig cfg) : cfg_(std::move(cfg)) {
        require(cfg_.capacity > 0.0, "admission: capacity must be positive");
        require(!cfg_.classes.empty(), "admission: at least one request class");
        require(cfg_.qos_margin > 0.0, "admission: qos_margin must be positive");
        for (const auto& c : cfg_.classes) {
            require(c.arrival_rate >= 0.0, "admission: negative arrival rate");
            require(c.mean_holding > 0.0, "admission: mean_holding must be positive");
            require(c.demand > 0.0, "admission: demand must be positive");
            max_count_.push_back(static_cast<int>(std::floor(cfg_.capacity / c.demand + 1e-12)));
        }
        uniform_rate_ = 0.0;
        for (std::size_t k = 0; k < cfg_.classes.size(); ++k)
            uniform_rate_ += cfg_.classes[k].arrival_rate + max_count_[k] / cfg_.classes[k].mean_holding;
    }

    [[nodiscard]] std::string_view name() const { return "admission"; }
    [[nodiscard]] const AdmissionConfig& config() const { return cfg_; }
    [[nodiscard]] std::size_t n_classes() const { return cfg_.classes.size(); }
    /// Λ, the uniformization rate; one step lasts 1/Λ time units.
    [[nodiscard]] double uniform_rate() const { return uniform_rate_; }

    [[nodiscard]] std::string describe(action_type a) const {
        switch (a) {
        case AdmissionDecision::accept: return "accept";
        case AdmissionDecision::reject: return "reject";
        case AdmissionDecision::delay: break;
        }
        return "delay";
    }

    observation_type reset(std::uint64_t seed) {
        events_ = Rng(seed).split("events");
        t_ = 0;
        core_ = initial();
        return observe();
    }

    [[nodiscard]] double used(const AdmissionCore& c) const {
        double u = 0.0;
        for (std::size_t k = 0; k < c.occupancy.size(); ++k) u += c.occupancy[k] * cfg_.classes[k].demand;
        return u;
    }

    [[nodiscard]] bool fits(const AdmissionCore& c) const {
        return c.pending >= 0 && used(c) + cfg_.classes[static_cast<std::size_t>(c.pending)].demand <= cfg_.capacity + 1e-9;
    }

    [[nodiscard]] AdmissionState state() const { return state_of(core_); }

    StepOutcome<observation_type> step(action_type a) {
        if (a == AdmissionDecision::accept && core_.pending >= 0 && !fits(core_))
            throw InvalidAction("accept of class " + std::to_string(core_.pending) + " request exceeds free capacity");
        auto [after, reward, qos] = decide(core_, a);
        Diagnostics d{{"accepted", 0.0}, {"rejected", 0.0}, {"blocked", 0.0}, {"arrival_class", -1.0}, {"departure", 0.0}};
        if (core_.pending >= 0) {
            if (a == AdmissionDecision::accept) d["accepted"] = 1.0;
            if (a == AdmissionDecision::reject) d["rejected"] = 1.0;
        }
        d["qos_violation"] = qos ? 1.0 : 0.0;

        double u = events_.at(t_).uniform() * uniform_rate_;
        const auto branches = events(after);
        core_ = after;
        double acc = 0.0;
        for (const auto& ev : branches) {
            acc += ev.rate;
            if (u < acc) {
                reward += ev.reward;
                core_ = ev.next;
                if (ev.arrival >= 0) {
                    d["arrival_class"] = ev.arrival;
                    if (after.pending >= 0) d["blocked"] = 1.0;
                }
                if (ev.departure) d["departure"] = 1.0;
                break;
            }
        }
        d["used"] = used(core_);
        ++t_;
        return {observe(), reward, false, std::move(d)};
    }

    // Enumerable interface: state index of the current model state, actions
    // by decision index. Accepting a request that does not fit is an error
    // in the simulator; in the tabular model it acts as a rejection.
    [[nodiscard]] std::size_t n_actions() const { return 3; }
    [[nodiscard]] action_type action_from_index(std::size_t i) const {
        require(i < 3, "admission: action index out of range");
        return static_cast<action_type>(i);
    }
    [[nodiscard]] bool action_valid(std::size_t i) const {
        return i != 0 || core_.pending < 0 || fits(core_);
    }
    [[nodiscard]] std::size_t n_states() const { return enumerated().states.size(); }
    [[nodiscard]] std::size_t state_index() const { return enumerated().index.at(core_); }
    [[nodiscard]] const AdmissionCore& core() const { return core_; }
    [[nodiscard]] const std::vector<AdmissionCore>& model_states() const { return enumerated().states; }

    [[nodiscard]] TabularMdp true_mdp(double discount) const { return enumerate(discount).mdp; }

private:
    struct Event {
        double rate;
        AdmissionCore next;
        double reward;
        int arrival;
        bool departure;
    };

    [[nodiscard]] AdmissionCore initial() const { return {std::vector<int>(cfg_.classes.size(), 0), -1}; }

    [[nodiscard]] AdmissionState state_of(const AdmissionCore& c) const {
        AdmissionState s{cfg_.capacity, used(c), std::nullopt};
        if (c.pending >= 0)
            s.pending_request = PendingRequest{static_cast<std::size_t>(c.pending), cfg_.classes[static_cast<std::size_t>(c.pending)].demand};
        return s;
    }

    struct Decided {
        AdmissionCore core;
        double reward;
        bool qos;
    };

    /// Applies the decision on the waiting request; infeasible accepts act
    /// as rejections.
    [[nodiscard]] Decided decide(AdmissionCore c, action_type a) const {
        double reward = 0.0;
        if (c.pending >= 0) {
            const auto& cls = cfg_.classes[static_cast<std::size_t>(c.pending)];
            if (a == AdmissionDecision::accept && fits(c)) {
                ++c.occupancy[static_cast<std::size_t>(c.pending)];
                reward += cls.reward;
                c.pending = -1;
            } else if (a == AdmissionDecision::delay) {
                reward -= cfg_.delay_penalty;
            } else {
                reward -= cls.reject_penalty;
                c.pending = -1;
            }
        }
        bool qos = used(c) > cfg_.qos_margin * cfg_.capacity + 1e-9;
        if (qos) reward -= cfg_.qos_penalty;
        return {std::move(c), reward, qos};
    }

    /// Event branches with their rates, in a fixed order: arrivals by class,
    /// departures by class, then the self-loop.
    [[nodiscard]] std::vector<Event> events(const AdmissionCore& c) const {
        std::vector<Event> out;
        double total = 0.0;
        for (std::size_t k = 0; k < cfg_.classes.size(); ++k) {
            double rate = cfg_.classes[k].arrival_rate;
            if (rate <= 0.0) continue;
            AdmissionCore n = c;
            double r = 0.0;
            if (c.pending < 0) {
                n.pending = static_cast<int>(k);
            } else {
                r = -cfg_.classes[k].reject_penalty;
            }
            out.push_back({rate, std::move(n), r, static_cast<int>(k), false});
            total += rate;
        }
        for (std::size_t k = 0; k < cfg_.classes.size(); ++k) {
            if (c.occupancy[k] == 0) continue;
            double rate = c.occupancy[k] / cfg_.classes[k].mean_holding;
            AdmissionCore n = c;
            --n.occupancy[k];
            out.push_back({rate, std::move(n), 0.0, -1, false});
            out.back().departure = true;
            total += rate;
        }
        out.push_back({std::max(0.0, uniform_rate_ - total), c, 0.0, -1, false});
        return out;
    }

    [[nodiscard]] EnumeratedMdp<AdmissionCore> enumerate(double discount) const {
        auto kernel = [&](const AdmissionCore& c, std::size_t a) {
            auto [after, reward, qos] = decide(c, static_cast<action_type>(a));
            std::vector<Branch<AdmissionCore>> br;
            if (uniform_rate_ <= 0.0) {
                br.push_back({1.0, after, reward});
                return br;
            }
            for (auto& ev : events(after)) br.push_back({ev.rate / uniform_rate_, std::move(ev.next), reward + ev.reward});
            return br;
        };
        return enumerate_mdp(initial(), 3, kernel, discount);
    }

    const EnumeratedMdp<AdmissionCore>& enumerated() const {
        if (!index_) index_ = enumerate(0.0);
        return *index_;
    }

    [[nodiscard]] observation_type observe() const { return {state_of(core_), core_.occupancy}; }

    AdmissionConfig cfg_;
    std::vector<int> max_count_;
    double uniform_rate_ = 0.0;
    Rng events_;
    std::size_t t_ = 0;
    AdmissionCore core_;
    mutable std::optional<EnumeratedMdp<AdmissionCore>> index_;
};

} // namespace occam_rrm
