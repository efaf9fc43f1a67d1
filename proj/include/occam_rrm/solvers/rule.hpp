#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/envs/admission.hpp"
#include "occam_rrm/envs/handover.hpp"
#include "occam_rrm/envs/scheduling.hpp"

namespace occam_rrm {

struct PfState {
    std::vector<double> avg_throughput;
    double ewma_alpha = 0.05;
    double epsilon = kThroughputFloor;

    static PfState initial(std::size_t n_users, double alpha, double epsilon = kThroughputFloor) {
        return {std::vector<double>(n_users, epsilon), alpha, epsilon};
    }
};

/// argmax_u eff[u] / avg[u], lowest index on ties.
inline std::size_t pf_select(std::span<const double> spectral_eff, const PfState& s) {
    require(!spectral_eff.empty(), "pf_select: no users");
    require(spectral_eff.size() == s.avg_throughput.size(), "pf_select: one average per user");
    std::size_t best = 0;
    double best_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < spectral_eff.size(); ++u) {
        double ratio = spectral_eff[u] / std::max(s.avg_throughput[u], s.epsilon);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = u;
        }
    }
    return best;
}

inline PfState pf_update(PfState s, std::size_t served, double achieved) {
    require(served < s.avg_throughput.size(), "pf_update: served user out of range");
    require(achieved >= 0.0, "pf_update: negative throughput");
    for (std::size_t u = 0; u < s.avg_throughput.size(); ++u) {
        double r = u == served ? achieved : 0.0;
        s.avg_throughput[u] = std::max((1.0 - s.ewma_alpha) * s.avg_throughput[u] + s.ewma_alpha * r, s.epsilon);
    }
    return s;
}

struct DppState {
    std::vector<double> queues;
    double v_weight = 0.0;
};

struct DppOption {
    std::vector<double> service;
    double penalty = 0.0;
};

/// argmin over options of V·penalty − Σ_u Q_u·service_u (lowest index on
/// ties). Arrivals do not depend on the action and drop out of the score.
inline std::size_t dpp_action(const DppState& s, std::span<const DppOption> options) {
    require(!options.empty(), "dpp_action: no options");
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < options.size(); ++i) {
        require(options[i].service.size() == s.queues.size(), "dpp_action: service vector size mismatch");
        double score = s.v_weight * options[i].penalty;
        for (std::size_t u = 0; u < s.queues.size(); ++u) score -= s.queues[u] * options[i].service[u];
        if (score < best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

/// Trunk reservation: accept iff the capacity left after admitting the
/// request is at least the class threshold. Thresholds are indexed by
/// priority rank (0 = highest) and may not decrease with rank.
inline AdmissionDecision trunk_admit(const AdmissionState& state, std::span<const double> thresholds) {
    for (std::size_t k = 1; k < thresholds.size(); ++k)
        if (thresholds[k] < thresholds[k - 1])
            throw ConfigError("/thresholds/" + std::to_string(k),
                              "trunk reservation thresholds must not favor lower-priority classes");
    require(state.pending_request.has_value(), "trunk_admit: no pending request");
    const auto& req = *state.pending_request;
    require(req.priority < thresholds.size(), "trunk_admit: no threshold for priority " + std::to_string(req.priority));
    double left = state.capacity - state.used - req.demand;
    return left >= thresholds[req.priority] - 1e-12 && left >= -1e-12 ? AdmissionDecision::accept
                                                                       : AdmissionDecision::reject;
}

struct MroParams {
    double hysteresis = 0.0;
    std::size_t time_to_trigger = 1;
};

/// Hands over to the strongest neighbor among those whose exceedance count
/// surpasses the time-to-trigger (strictly); stays otherwise.
inline HandoverAction mro_policy(const MroObservation& obs, const MroParams& p) {
    require(p.time_to_trigger >= 1, "mro_policy: time_to_trigger must be at least 1");
    std::optional<std::size_t> best;
    double best_rsrp = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < obs.neighbors.size(); ++i) {
        if (obs.exceed_count[i] > p.time_to_trigger && obs.rsrp_neighbors[i] > best_rsrp) {
            best_rsrp = obs.rsrp_neighbors[i];
            best = obs.neighbors[i];
        }
    }
    return best ? HandoverAction::to(*best) : HandoverAction::stay();
}

struct EsThresholds {
    double lower = 0.2;
    double upper = 0.8;

    void validate() const {
        require(0.0 <= lower && lower < upper && upper <= 1.0, "EsThresholds: need 0 <= lower < upper <= 1");
    }
};

/// Utilization of `k` active resources under `demand`; zero resources are
/// fully utilized by any positive demand.
inline double es_utilization(double demand, double capacity_per_resource, std::size_t k) {
    if (demand <= 0.0) return 0.0;
    if (k == 0) return std::numeric_limits<double>::infinity();
    return demand / (static_cast<double>(k) * capacity_per_resource);
}

/// Number of resources to keep active: the smallest k whose projected
/// utilization lies in [lower, upper]; failing that the smallest k with
/// utilization ≤ upper; failing that all of them.
inline std::size_t es_policy(double demand, double capacity_per_resource, const EsThresholds& t, std::size_t n_resources) {
    t.validate();
    require(capacity_per_resource > 0.0, "es_policy: capacity must be positive");
    for (std::size_t k = 0; k <= n_resources; ++k) {
        double u = es_utilization(demand, capacity_per_resource, k);
        if (u >= t.lower && u <= t.upper) return k;
    }
    for (std::size_t k = 0; k <= n_resources; ++k)
        if (es_utilization(demand, capacity_per_resource, k) <= t.upper) return k;
    return n_resources;
}

} // namespace occam_rrm
