#pragma once

#include <functional>
#include <string>
#include <vector>

#include "occam_rrm/advisor.hpp"
#include "occam_rrm/core/json_io.hpp"
#include "occam_rrm/envs/config.hpp"
#include "occam_rrm/envs/tabular.hpp"
#include "occam_rrm/solvers/beam_tracker.hpp"
#include "occam_rrm/solvers/plan.hpp"
#include "occam_rrm/solvers/policies.hpp"

namespace occam_rrm {

/// Runs one episode of a configured solver on the given environment
/// instance. Precomputation (value functions, Q tables) happens when the
/// runner is built, so a runner may be shared by concurrent callers as long
/// as each passes its own environment.
using EpisodeRunner = std::function<EpisodeLog(AnyEnv& env, std::size_t horizon, std::uint64_t seed)>;

namespace detail {

/// Traits of the use case an environment stands for, used to explain why a
/// solver does not apply.
inline ProblemTraits env_traits(const AnyEnv& env) {
    return std::visit(
        [](const auto& e) -> ProblemTraits {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, PowerEnv>) return usecase_traits("PC", "known-channel");
            else if constexpr (std::is_same_v<E, LinkAdaptEnv>) return usecase_traits("LA");
            else if constexpr (std::is_same_v<E, BeamformingEnv>) return usecase_traits("BF", "analog-hidden-channel");
            else if constexpr (std::is_same_v<E, SchedulingEnv>) return usecase_traits("SC");
            else if constexpr (std::is_same_v<E, EnergyEnv>) return usecase_traits("ES", "thresholds");
            else if constexpr (std::is_same_v<E, HandoverEnv>) {
                auto t = usecase_traits("HO", "mro");
                t.model_known = t.tractable_mdp = e.tractable();
                return t;
            } else if constexpr (std::is_same_v<E, AdmissionEnv>) return usecase_traits("AC", "small-known");
            else return ProblemTraits{false, true, true, true, false, false, false};
        },
        env);
}

inline std::string advisor_reasoning(const AnyEnv& env) {
    auto r = advise(env_traits(env));
    std::string s;
    for (const auto& [q, a] : r.path) s += (s.empty() ? "" : "; ") + q + " " + (a ? "yes" : "no");
    return s + " => " + std::string(to_string(r.technique)) + " (" + r.solver_hint + ")";
}

inline std::string_view env_name(const AnyEnv& env) {
    return std::visit([](const auto& e) { return e.name(); }, env);
}

[[noreturn]] inline void incompatible(const AnyEnv& env, const std::string& path, const std::string& type,
                                      const std::string& why) {
    throw ConfigError(path + "/type", "solver '" + type + "' cannot run on environment '" + std::string(env_name(env)) +
                                          "': " + why + ". Advisor: " + advisor_reasoning(env));
}

template <class Env, class MakePolicy>
EpisodeRunner typed_runner(MakePolicy make) {
    return [make](AnyEnv& any, std::size_t horizon, std::uint64_t seed) {
        auto& env = std::get<Env>(any);
        auto policy = make(env);
        return run_episode(env, policy, horizon, seed);
    };
}

inline QLearningConfig q_learning_config(const JsonObject& o, double discount) {
    QLearningConfig c;
    c.discount = discount;
    c.episodes = o.get_or("episodes", c.episodes);
    c.steps_per_episode = o.get_or("steps", c.steps_per_episode);
    c.alpha.initial = o.get_or("alpha", c.alpha.initial);
    c.alpha.tau = o.get_or("alpha_tau", c.alpha.tau);
    c.epsilon.initial = o.get_or("epsilon", c.epsilon.initial);
    c.epsilon.tau = o.get_or("epsilon_tau", c.epsilon.tau);
    c.initial_q = o.get_or("initial_q", c.initial_q);
    return c;
}

template <class Env>
TabularMdp true_model(const Env& proto, const AnyEnv& any, const JsonObject& o, const std::string& type, double discount) {
    try {
        return env_true_mdp(proto, discount);
    } catch (const NotTractable& e) {
        incompatible(any, o.path(), type, e.what());
    }
}

/// Solvers that only need a tabular model or table: exact-dp, q-learning and
/// tabular mpc.
template <class Env>
EpisodeRunner tabular_solver(const Env& proto, const AnyEnv& any, const JsonObject& o, const std::string& type,
                             double discount) {
    if constexpr (EnumerableEnvironment<Env> && requires { proto.true_mdp(discount); }) {
        if (type == "exact-dp") {
            o.only({"name", "type", "method", "tolerance"});
            auto method = o.get_or<std::string>("method", "value_iteration");
            TabularMdp mdp = true_model(proto, any, o, type, discount);
            ValueTable vt;
            if (method == "value_iteration") vt = value_iteration(mdp, o.get_or("tolerance", 1e-9));
            else if (method == "policy_iteration") vt = policy_iteration(mdp);
            else throw ConfigError(o.path_of("method"), "unknown method '" + method + "' (known: value_iteration, policy_iteration)");
            return typed_runner<Env>([mdp, values = vt.values](Env& env) { return ModelGreedyPolicy<Env>{&env, mdp, values}; });
        }
        if (type == "q-learning") {
            o.only({"name", "type", "episodes", "steps", "alpha", "alpha_tau", "epsilon", "epsilon_tau", "initial_q",
                    "train_seed"});
            if constexpr (requires { proto.tractable(); })
                if (!proto.tractable()) incompatible(any, o.path(), type, "state space is not enumerable");
            Env train = proto;
            auto table = q_learning(train, q_learning_config(o, discount), o.get_or<std::uint64_t>("train_seed", 0));
            return typed_runner<Env>([table](Env& env) { return QGreedyPolicy<Env>{&env, table}; });
        }
        if (type == "mpc") {
            o.only({"name", "type", "horizon"});
            TabularMdp mdp = true_model(proto, any, o, type, discount);
            auto h = o.get_or<std::size_t>("horizon", 5);
            return typed_runner<Env>([mdp, h](Env& env) { return TabularMpcPolicy<Env>{&env, mdp, h}; });
        }
    }
    if (type == "exact-dp" || type == "q-learning")
        incompatible(any, o.path(), type, "continuous or unbounded state space, MDP not tractable");
    return {};
}

inline std::string known_list(const std::vector<std::string>& names) { return join(names, ", "); }

} // namespace detail

/// Solver types accepted on an environment.
inline std::vector<std::string> known_solver_types(std::string_view env) {
    if (env == "single_state") return {"constant", "exact-dp", "q-learning", "mpc"};
    if (env == "link_adapt") return {"illa_olla", "thompson", "constant"};
    if (env == "power") return {"water_filling", "uniform"};
    if (env == "beamforming") return {"bo_tracker", "knn", "full_measurement"};
    if (env == "scheduling") return {"pf", "round_robin", "max_rate"};
    if (env == "energy") return {"dpp", "es_thresholds", "mpc", "constant"};
    if (env == "handover") return {"mro", "greedy_rsrp", "exact-dp", "q-learning", "mpc"};
    if (env == "admission") return {"accept_all", "trunk_reservation", "exact-dp", "q-learning", "mpc"};
    return {};
}

/// Builds the runner for solver config `j` (an element of `solvers`) on
/// the prototype environment.
inline EpisodeRunner make_solver(const AnyEnv& proto, const Json& j, const std::string& path, double discount) {
    JsonObject o(j, path);
    const auto type = o.get<std::string>("type");
    auto unknown = [&]() -> EpisodeRunner {
        auto env = std::string(detail::env_name(proto));
        if (type == "exact-dp" || type == "q-learning" || type == "mpc")
            detail::incompatible(proto, path, type, "continuous or unbounded state space, MDP not tractable");
        throw ConfigError(o.path_of("type"), "unknown solver '" + type + "' for environment '" + env +
                                                 "' (known: " + detail::known_list(known_solver_types(env)) + ")");
    };
    try {
        return std::visit(
            [&](const auto& env) -> EpisodeRunner {
                using E = std::decay_t<decltype(env)>;
                if (auto r = detail::tabular_solver(env, proto, o, type, discount)) return r;
                if constexpr (std::is_same_v<E, SingleStateEnv>) {
                    if (type == "constant") {
                        o.only({"name", "type", "action"});
                        return detail::typed_runner<E>([a = o.get<std::size_t>("action")](E&) { return ConstantPolicy<std::size_t>{a}; });
                    }
                } else if constexpr (std::is_same_v<E, LinkAdaptEnv>) {
                    if (type == "illa_olla") {
                        o.only({"name", "type", "target_bler", "step_up"});
                        double target = o.get_or("target_bler", 0.1), up = o.get_or("step_up", 0.5);
                        return detail::typed_runner<E>([=](E& e) { return IllaOllaPolicy(e.config(), target, up); });
                    }
                    if (type == "thompson") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E& e) { return ThompsonLinkPolicy(e.config()); });
                    }
                    if (type == "constant") {
                        o.only({"name", "type", "mcs"});
                        return detail::typed_runner<E>([a = o.get<std::size_t>("mcs")](E&) { return ConstantPolicy<std::size_t>{a}; });
                    }
                } else if constexpr (std::is_same_v<E, PowerEnv>) {
                    if (type == "water_filling") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E& e) { return WaterFillingPolicy{e.config().noise, e.config().total_power}; });
                    }
                    if (type == "uniform") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E& e) { return UniformPowerPolicy{e.config().total_power}; });
                    }
                } else if constexpr (std::is_same_v<E, BeamformingEnv>) {
                    if (type == "bo_tracker") {
                        o.only({"name", "type", "budget_per_step", "kappa", "window", "length_scale_beam",
                                "length_scale_time", "signal_var", "prior_mean", "obs_noise_std"});
                        BoTrackerConfig c;
                        c.budget = o.get_or("budget_per_step", c.budget);
                        c.kappa = o.get_or("kappa", c.kappa);
                        c.window = o.get_or("window", c.window);
                        c.length_scale_beam = o.get_or("length_scale_beam", c.length_scale_beam);
                        c.length_scale_time = o.get_or("length_scale_time", c.length_scale_time);
                        c.signal_var = o.get_or("signal_var", c.signal_var);
                        if (o.has("prior_mean")) c.prior_mean = o.get<double>("prior_mean");
                        c.obs_noise_std = o.get_or("obs_noise_std", c.obs_noise_std);
                        return detail::typed_runner<E>([c](E& e) { return BoBeamTracker(e, c); });
                    }
                    if (type == "knn") {
                        o.only({"name", "type", "budget_per_step", "k", "history_episodes", "history_steps", "history_seed"});
                        KnnConfig c;
                        c.budget = o.get_or("budget_per_step", c.budget);
                        c.k = o.get_or("k", c.k);
                        c.history_episodes = o.get_or("history_episodes", c.history_episodes);
                        c.history_steps = o.get_or("history_steps", c.history_steps);
                        c.history_seed = o.get_or("history_seed", c.history_seed);
                        auto trained = std::make_shared<const KnnBeamPredictor>(env, c);
                        return detail::typed_runner<E>([trained](E&) { return KnnBeamPredictor(*trained); });
                    }
                    if (type == "full_measurement") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E& e) { return FullMeasurementPolicy{e.n_beams()}; });
                    }
                } else if constexpr (std::is_same_v<E, SchedulingEnv>) {
                    if (type == "pf") {
                        o.only({"name", "type", "ewma_alpha"});
                        auto alpha = o.get_or("ewma_alpha", env.config().ewma_alpha);
                        return detail::typed_runner<E>([alpha](E& e) {
                            return PfPolicy(e.config().mean_efficiency.size(), alpha, e.config().epsilon);
                        });
                    }
                    if (type == "round_robin") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E& e) { return RoundRobinPolicy{e.config().mean_efficiency.size()}; });
                    }
                    if (type == "max_rate") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E&) { return MaxRatePolicy{}; });
                    }
                } else if constexpr (std::is_same_v<E, EnergyEnv>) {
                    if (type == "dpp") {
                        o.only({"name", "type", "v_weight"});
                        double v = o.get_or("v_weight", 0.0);
                        return detail::typed_runner<E>([v](E& e) { return DppEnergyPolicy{&e, v}; });
                    }
                    if (type == "es_thresholds") {
                        o.only({"name", "type", "lower", "upper"});
                        EsThresholds t{o.get_or("lower", 0.2), o.get_or("upper", 0.8)};
                        try {
                            t.validate();
                        } catch (const PreconditionError& e) {
                            throw ConfigError(o.path_of("lower"), e.what());
                        }
                        return detail::typed_runner<E>([t](E& e) { return EsThresholdPolicy{&e, t}; });
                    }
                    if (type == "mpc") {
                        o.only({"name", "type", "horizon", "predictor"});
                        auto h = o.get_or<std::size_t>("horizon", 5);
                        auto pred = o.get_or<std::string>("predictor", "oracle");
                        PredictorKind k;
                        if (pred == "oracle") k = PredictorKind::oracle;
                        else if (pred == "persistence") k = PredictorKind::persistence;
                        else throw ConfigError(o.path_of("predictor"), "unknown predictor '" + pred + "' (known: oracle, persistence)");
                        if (h < 1) throw ConfigError(o.path_of("horizon"), "horizon must be at least 1");
                        return detail::typed_runner<E>([h, k](E& e) { return EnergyMpcPolicy{&e, h, TrafficPredictor{&e, k}}; });
                    }
                    if (type == "constant") {
                        o.only({"name", "type", "mask"});
                        auto m = o.get<std::uint32_t>("mask");
                        if (m >= env.n_masks()) throw ConfigError(o.path_of("mask"), "mask out of range");
                        return detail::typed_runner<E>([m](E&) { return ConstantPolicy<EnergyAction>{{m}}; });
                    }
                } else if constexpr (std::is_same_v<E, HandoverEnv>) {
                    if (type == "mro") {
                        o.only({"name", "type", "hysteresis_db", "time_to_trigger"});
                        MroParams p{o.get_or("hysteresis_db", 2.0), static_cast<std::size_t>(o.get_or<std::size_t>("time_to_trigger", 1))};
                        if (p.time_to_trigger < 1) throw ConfigError(o.path_of("time_to_trigger"), "time_to_trigger must be at least 1");
                        return detail::typed_runner<E>([p](E&) { return MroController(p); });
                    }
                    if (type == "greedy_rsrp") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E&) { return GreedyRsrpPolicy{}; });
                    }
                } else if constexpr (std::is_same_v<E, AdmissionEnv>) {
                    if (type == "accept_all") {
                        o.only({"name", "type"});
                        return detail::typed_runner<E>([](E&) { return AcceptAllPolicy{}; });
                    }
                    if (type == "trunk_reservation") {
                        o.only({"name", "type", "thresholds"});
                        auto thr = o.get<std::vector<double>>("thresholds");
                        if (thr.size() != env.config().classes.size())
                            throw ConfigError(o.path_of("thresholds"), "one threshold per class");
                        for (std::size_t k = 1; k < thr.size(); ++k)
                            if (thr[k] < thr[k - 1])
                                throw ConfigError(o.path_of("thresholds") + "/" + std::to_string(k),
                                                  "thresholds must not decrease with priority rank");
                        return detail::typed_runner<E>([thr](E&) { return TrunkReservationPolicy{thr}; });
                    }
                }
                return unknown();
            },
            proto);
    } catch (const PreconditionError& e) {
        throw ConfigError(path, e.what());
    }
}

} // namespace occam_rrm
