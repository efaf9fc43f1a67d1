#pragma once

// Decision rules wired to concrete environments: each is a callable on the
// observation history suitable for run_episode.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "occam_rrm/envs/admission.hpp"
#include "occam_rrm/envs/energy.hpp"
#include "occam_rrm/envs/handover.hpp"
#include "occam_rrm/envs/link_adapt.hpp"
#include "occam_rrm/envs/power.hpp"
#include "occam_rrm/envs/scheduling.hpp"
#include "occam_rrm/envs/single_state.hpp"
#include "occam_rrm/solvers/bandit.hpp"
#include "occam_rrm/solvers/plan.hpp"
#include "occam_rrm/solvers/rule.hpp"
#include "occam_rrm/solvers/static.hpp"

namespace occam_rrm {

template <class Action>
struct ConstantPolicy {
    Action action;

    template <class Obs>
    Action operator()(std::span<const Obs>) const {
        return action;
    }
};

// Link adaptation.

/// ILLA lookup corrected by an OLLA offset driven by the ACK feedback.
class IllaOllaPolicy {
public:
    IllaOllaPolicy(const LinkAdaptConfig& cfg, double target_bler, double step_up)
        : thresholds_(illa_thresholds(cfg, target_bler)), olla_(OllaState::make(step_up, target_bler)) {}

    std::size_t operator()(std::span<const LinkObservation> history) {
        const auto& obs = history.back();
        if (obs.ack) olla_ = olla_step(olla_, *obs.ack);
        return illa_select(obs.sinr_report_db, olla_.offset, thresholds_);
    }

    [[nodiscard]] const OllaState& olla() const { return olla_; }

private:
    std::vector<double> thresholds_;
    OllaState olla_;
};

/// Thompson sampling over MCS with a Beta posterior on each MCS's success
/// probability; score = rate · sampled success probability.
class ThompsonLinkPolicy {
public:
    explicit ThompsonLinkPolicy(const LinkAdaptConfig& cfg) : rates_(cfg.rates), posts_(cfg.rates.size()) {}

    std::size_t operator()(std::span<const LinkObservation> history, Rng& rng) {
        const auto& obs = history.back();
        if (obs.ack && last_ < posts_.size()) posts_[last_] = beta_update(posts_[last_], *obs.ack);
        last_ = thompson_select(posts_, rates_, rng);
        return last_;
    }

    [[nodiscard]] const std::vector<BetaPosterior>& posteriors() const { return posts_; }

private:
    std::vector<double> rates_;
    std::vector<BetaPosterior> posts_;
    std::size_t last_ = std::numeric_limits<std::size_t>::max();
};

// Power control.

struct WaterFillingPolicy {
    double noise;
    double total_power;

    PowerAction operator()(std::span<const PowerObservation> history) const {
        const auto& g = history.back().gains;
        if (std::all_of(g.begin(), g.end(), [](double x) { return x <= 0.0; })) return {std::vector<double>(g.size(), 0.0)};
        return {water_fill(g, noise, total_power).powers};
    }
};

struct UniformPowerPolicy {
    double total_power;

    PowerAction operator()(std::span<const PowerObservation> history) const {
        auto n = history.back().gains.size();
        return {std::vector<double>(n, total_power / static_cast<double>(n))};
    }
};

// Scheduling.

/// Proportional fair with its own EWMA bookkeeping of served throughput.
class PfPolicy {
public:
    PfPolicy(std::size_t n_users, double alpha, double epsilon = kThroughputFloor)
        : state_(PfState::initial(n_users, alpha, epsilon)) {}

    std::size_t operator()(std::span<const SchedulingObservation> history) {
        if (history.size() >= 2) {
            const auto& prev = history[history.size() - 2];
            state_ = pf_update(state_, last_, std::min(prev.backlogs[last_], prev.efficiency[last_]));
        }
        last_ = pf_select(history.back().efficiency, state_);
        return last_;
    }

    [[nodiscard]] const PfState& state() const { return state_; }

private:
    PfState state_;
    std::size_t last_ = 0;
};

struct RoundRobinPolicy {
    std::size_t n_users;

    std::size_t operator()(std::span<const SchedulingObservation> history) const { return (history.size() - 1) % n_users; }
};

struct MaxRatePolicy {
    std::size_t operator()(std::span<const SchedulingObservation> history) const {
        const auto& e = history.back().efficiency;
        return static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
    }
};

// Energy saving.

inline EnergyCore observed_core(const EnergyObservation& o) { return {o.status, o.queues}; }

/// Drift-plus-penalty over all activation masks: service from the one-step
/// dynamics, energy as the penalty.
struct DppEnergyPolicy {
    const EnergyEnv* env;
    double v_weight = 0.0;

    EnergyAction operator()(std::span<const EnergyObservation> history) const {
        const auto& o = history.back();
        auto core = observed_core(o);
        std::vector<DppOption> options;
        for (std::uint32_t m = 0; m < env->n_masks(); ++m) {
            auto res = env->advance(core, m, o.arrivals);
            options.push_back({res.service, res.energy});
        }
        return {static_cast<std::uint32_t>(dpp_action({o.queues, v_weight}, options))};
    }
};

/// Utilization-threshold rule over the first k resources. While the
/// current active count keeps utilization inside [lower, upper] it is kept;
/// otherwise `es_policy` picks a new count.
struct EsThresholdPolicy {
    const EnergyEnv* env;
    EsThresholds thresholds;

    EnergyAction operator()(std::span<const EnergyObservation> history) const {
        const auto& o = history.back();
        const auto& cap = env->config().capacity;
        double per = std::accumulate(cap.begin(), cap.end(), 0.0) / static_cast<double>(cap.size());
        double demand = o.load() + std::accumulate(o.queues.begin(), o.queues.end(), 0.0);
        std::size_t current = 0;
        for (int s : o.status) current += s >= 0 ? 1 : 0;
        double u = es_utilization(demand, per, current);
        std::size_t k = current > 0 && u >= thresholds.lower && u <= thresholds.upper
                            ? current
                            : es_policy(demand, per, thresholds, env->n_resources());
        return {k >= 32 ? ~0u : (1u << k) - 1u};
    }
};

enum class PredictorKind { oracle, persistence };

/// Traffic forecast of length k starting at the current step.
struct TrafficPredictor {
    const EnergyEnv* env;
    PredictorKind kind = PredictorKind::oracle;

    [[nodiscard]] std::vector<std::vector<double>> forecast(const EnergyObservation& o, std::size_t k) const {
        std::vector<std::vector<double>> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) out.push_back(kind == PredictorKind::oracle ? env->arrivals_at(o.t + i) : o.arrivals);
        return out;
    }
};

/// Receding-horizon control of the energy environment on the predicted
/// traffic trajectory; horizon 1 is the myopic greedy rule.
struct EnergyMpcPolicy {
    const EnergyEnv* env;
    std::size_t horizon = 5;
    TrafficPredictor predictor;

    EnergyAction operator()(std::span<const EnergyObservation> history) const {
        const auto& o = history.back();
        auto traffic = predictor.forecast(o, horizon);
        DeterministicModel<EnergyCore> model;
        model.n_actions = env->n_masks();
        model.step = [&](const EnergyCore& c, std::size_t a, std::size_t k) {
            auto r = env->advance(c, static_cast<std::uint32_t>(a), traffic[k]);
            return std::pair{std::move(r.next), r.reward};
        };
        auto plan = mpc_plan(model, observed_core(o), horizon);
        return {static_cast<std::uint32_t>(plan.actions.front())};
    }
};

// Handover.

/// MRO expert policy: A3-style exceedance counting with its own hysteresis
/// on the measured RSRP, handover once the count surpasses TTT.
class MroController {
public:
    explicit MroController(MroParams p) : p_(p) {}

    HandoverAction operator()(std::span<const HandoverObservation> history) {
        const auto& o = history.back();
        auto report = update_exceed_counts(counts_, o.rsrp, o.serving, p_.hysteresis);
        return mro_policy(report, p_);
    }

private:
    MroParams p_;
    std::vector<std::size_t> counts_;
};

/// Always camps on the strongest measured cell.
struct GreedyRsrpPolicy {
    HandoverAction operator()(std::span<const HandoverObservation> history) const {
        const auto& o = history.back();
        auto best = static_cast<std::size_t>(std::max_element(o.rsrp.begin(), o.rsrp.end()) - o.rsrp.begin());
        return best == o.serving ? HandoverAction::stay() : HandoverAction::to(best);
    }
};

// Admission control.

struct AcceptAllPolicy {
    AdmissionDecision operator()(std::span<const AdmissionObservation> history) const {
        const auto& s = history.back().state;
        if (!s.pending_request) return AdmissionDecision::reject;
        return s.used + s.pending_request->demand <= s.capacity + 1e-9 ? AdmissionDecision::accept : AdmissionDecision::reject;
    }
};

struct TrunkReservationPolicy {
    std::vector<double> thresholds;

    AdmissionDecision operator()(std::span<const AdmissionObservation> history) const {
        const auto& s = history.back().state;
        if (!s.pending_request) return AdmissionDecision::reject;
        return trunk_admit(s, thresholds);
    }
};

// Tabular policies on fully observed enumerable environments.

/// Acts greedily on Q-values computed from a value function of the true
/// model, restricted to admissible actions when the environment says so.
template <EnumerableEnvironment Env>
struct ModelGreedyPolicy {
    const Env* env;
    TabularMdp mdp;
    std::vector<double> values;

    typename Env::action_type operator()(std::span<const typename Env::observation_type>) const {
        std::size_t s = env->state_index();
        std::size_t best = mdp.n_actions();
        double best_q = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            if constexpr (requires { env->action_valid(a); })
                if (!env->action_valid(a)) continue;
            double q = q_value(mdp, values, s, a);
            if (best == mdp.n_actions() || q > best_q + 1e-9) {
                best_q = q;
                best = a;
            }
        }
        return env->action_from_index(best == mdp.n_actions() ? 0 : best);
    }
};

/// Greedy on a learned Q table.
template <EnumerableEnvironment Env>
struct QGreedyPolicy {
    const Env* env;
    QTable table;

    typename Env::action_type operator()(std::span<const typename Env::observation_type>) const {
        std::size_t s = env->state_index();
        std::size_t best = table.n_actions;
        for (std::size_t a = 0; a < table.n_actions; ++a) {
            if constexpr (requires { env->action_valid(a); })
                if (!env->action_valid(a)) continue;
            if (best == table.n_actions || table.at(s, a) > table.at(s, best)) best = a;
        }
        return env->action_from_index(best == table.n_actions ? 0 : best);
    }
};

/// Receding-horizon planning on the true tabular model.
template <EnumerableEnvironment Env>
struct TabularMpcPolicy {
    const Env* env;
    TabularMdp mdp;
    std::size_t horizon;

    typename Env::action_type operator()(std::span<const typename Env::observation_type>) const {
        std::size_t a = mpc_plan(mdp, env->state_index(), horizon);
        if constexpr (requires { env->action_valid(a); })
            if (!env->action_valid(a)) {
                for (std::size_t b = 0; b < mdp.n_actions(); ++b)
                    if (env->action_valid(b)) return env->action_from_index(b);
            }
        return env->action_from_index(a);
    }
};

} // namespace occam_rrm
