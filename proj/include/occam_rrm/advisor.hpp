#pragma once

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/format.hpp"
#include "occam_rrm/core/json_io.hpp"

namespace occam_rrm {

struct ProblemTraits {
    bool endogenous_state = false;
    bool model_known = false;
    bool analytically_solvable = false;
    bool tractable_mdp = false;
    bool historical_data = false;
    bool expert_policy_available = false;
    bool state_predictable = false;

    auto operator<=>(const ProblemTraits&) const = default;
};

enum class Technique {
    static_optimization,
    supervised_learning,
    bandits,
    exact_dp,
    stochastic_rule,
    offline_rl,
    policy_tuning,
    mpc,
    rl,
};

inline constexpr std::array kAllTechniques = {
    Technique::static_optimization, Technique::supervised_learning, Technique::bandits,
    Technique::exact_dp,            Technique::stochastic_rule,     Technique::offline_rl,
    Technique::policy_tuning,       Technique::mpc,                 Technique::rl,
};

inline std::string_view to_string(Technique t) {
    switch (t) {
    case Technique::static_optimization: return "static-optimization";
    case Technique::supervised_learning: return "supervised-learning";
    case Technique::bandits: return "bandits";
    case Technique::exact_dp: return "exact-dp";
    case Technique::stochastic_rule: return "stochastic-rule";
    case Technique::offline_rl: return "offline-rl";
    case Technique::policy_tuning: return "policy-tuning";
    case Technique::mpc: return "mpc";
    case Technique::rl: return "rl";
    }
    return "?";
}

/// Where the technique lives in this library.
inline std::string_view solver_hint(Technique t) {
    switch (t) {
    case Technique::static_optimization: return "solvers-static: water_fill, mmse_precoder";
    case Technique::supervised_learning: return "solvers-bandit: KnnBeamPredictor";
    case Technique::bandits: return "solvers-bandit: thompson_select, illa_select/olla_step, BoBeamTracker";
    case Technique::exact_dp: return "solvers-plan: value_iteration, policy_iteration";
    case Technique::stochastic_rule: return "solvers-rule: pf_select, dpp_action, trunk_admit";
    case Technique::offline_rl: return "none: offline RL is not implemented";
    case Technique::policy_tuning: return "tuning: nelder_mead, bo_tune, fd_ascent";
    case Technique::mpc: return "solvers-plan: mpc_plan";
    case Technique::rl: return "solvers-plan: q_learning";
    }
    return "";
}

struct Recommendation {
    Technique technique = Technique::rl;
    std::vector<std::pair<std::string, bool>> path; ///< (question, answer) in traversal order
    std::string solver_hint;
};

/// Walks the technique-selection tree. The short-term branch asks about
/// the model, closed-form solvability and historical data; the long-term
/// branch tries options from most to least structure assumed.
inline Recommendation advise(const ProblemTraits& t) {
    Recommendation r;
    auto ask = [&](std::string q, bool a) {
        r.path.emplace_back(std::move(q), a);
        return a;
    };
    auto done = [&](Technique tech) {
        r.technique = tech;
        r.solver_hint = std::string(solver_hint(tech));
        return r;
    };
    if (!ask("Do actions influence the state evolution (long-term planning)?", t.endogenous_state)) {
        if (ask("Is the reward model known?", t.model_known)) {
            if (ask("Can the problem be solved analytically?", t.analytically_solvable)) return done(Technique::static_optimization);
            return done(Technique::bandits);
        }
        if (ask("Is historical data available?", t.historical_data)) return done(Technique::supervised_learning);
        return done(Technique::bandits);
    }
    if (ask("Is the MDP model known?", t.model_known) && ask("Is the MDP tractable?", t.tractable_mdp))
        return done(Technique::exact_dp);
    if (ask("Does an ad-hoc stochastic optimization rule solve it?", t.analytically_solvable))
        return done(Technique::stochastic_rule);
    if (ask("Is there historical data but no interaction with the live system?", t.historical_data))
        return done(Technique::offline_rl);
    if (ask("Is a trusted expert-designed policy available?", t.expert_policy_available))
        return done(Technique::policy_tuning);
    if (ask("Can the state trajectory be predicted?", t.state_predictable)) return done(Technique::mpc);
    return done(Technique::rl);
}

inline Json to_json(const ProblemTraits& t) {
    return {{"endogenous_state", t.endogenous_state},
            {"model_known", t.model_known},
            {"analytically_solvable", t.analytically_solvable},
            {"tractable_mdp", t.tractable_mdp},
            {"historical_data", t.historical_data},
            {"expert_policy_available", t.expert_policy_available},
            {"state_predictable", t.state_predictable}};
}

/// Missing keys default to false; unknown keys are rejected.
inline ProblemTraits traits_from_json(const Json& j, const std::string& path = "") {
    JsonObject o(j, path);
    o.only({"endogenous_state", "model_known", "analytically_solvable", "tractable_mdp", "historical_data",
            "expert_policy_available", "state_predictable"});
    ProblemTraits t;
    t.endogenous_state = o.get_or<bool>("endogenous_state", false);
    t.model_known = o.get_or<bool>("model_known", false);
    t.analytically_solvable = o.get_or<bool>("analytically_solvable", false);
    t.tractable_mdp = o.get_or<bool>("tractable_mdp", false);
    t.historical_data = o.get_or<bool>("historical_data", false);
    t.expert_policy_available = o.get_or<bool>("expert_policy_available", false);
    t.state_predictable = o.get_or<bool>("state_predictable", false);
    return t;
}

inline Json to_json(const Recommendation& r) {
    Json path = Json::array();
    for (const auto& [q, a] : r.path) path.push_back({{"question", q}, {"answer", a}});
    return {{"technique", to_string(r.technique)}, {"path", path}, {"solver_hint", r.solver_hint}};
}

/// Indented question/answer listing followed by the verdict.
inline void print_path(std::ostream& os, const Recommendation& r) {
    std::string indent;
    for (const auto& [q, a] : r.path) {
        os << indent << q << ' ' << (a ? "yes" : "no") << '\n';
        indent += "  ";
    }
    os << indent << "-> " << to_string(r.technique) << " (" << r.solver_hint << ")\n";
}

struct UseCaseVariant {
    std::string_view use_case;
    std::string_view variant;
    ProblemTraits traits;
    Technique expected;
    bool prose_backed; ///< false when the row is interpolated from the tree rather than stated in the text
    std::string_view note;
};

/// Trait vectors of the use cases and their variants. The first variant of
/// each use case is its default.
inline const std::vector<UseCaseVariant>& usecase_table() {
    // Field order: endogenous, model_known, solvable, tractable, history, expert, predictable.
    static const std::vector<UseCaseVariant> table = {
        {"SC", "default", {true, false, true, false, false, false, false}, Technique::stochastic_rule, true,
         "proportional fair rule; no transition model needed"},
        {"SC", "delay-constrained", {true, false, false, false, false, false, false}, Technique::rl, true,
         "per-user delay constraints break the PF rule"},
        {"AC", "priority-classes", {true, false, true, false, false, false, false}, Technique::stochastic_rule, true,
         "trunk reservation is optimal for prioritized requests"},
        {"AC", "small-known", {true, true, true, true, false, false, false}, Technique::exact_dp, false,
         "small enumerable admission model with known rates"},
        {"AC", "diverse-requirements", {true, false, false, false, false, false, false}, Technique::rl, true,
         "delay, CPU and bandwidth requirements defeat analysis"},
        {"HO", "mro", {true, false, false, false, false, true, false}, Technique::policy_tuning, true,
         "hysteresis and time-to-trigger policy"},
        {"ES", "thresholds", {true, false, false, false, false, true, false}, Technique::policy_tuning, true,
         "utilization thresholds as policy parameters"},
        {"ES", "complex-multilayer", {true, false, false, false, false, false, false}, Technique::rl, true,
         "many layers and sites, no trusted expert policy"},
        {"ES", "dpp-queues", {true, false, true, false, false, false, false}, Technique::stochastic_rule, true,
         "drift-plus-penalty keeps queues stable"},
        {"ES", "cpu-accelerator", {false, false, false, false, false, false, false}, Technique::bandits, true,
         "contextual bandit picks the hardware per task"},
        {"ES", "predictable-traffic", {true, false, false, false, false, false, true}, Technique::mpc, false,
         "forecastable load, no expert policy"},
        {"PC", "known-channel", {false, true, true, false, false, false, false}, Technique::static_optimization, true,
         "water-filling from the KKT conditions"},
        {"PC", "bo-parameters", {false, false, false, false, false, false, false}, Technique::bandits, true,
         "uplink parameters tuned by Bayesian optimization"},
        {"PC", "incremental-power", {true, false, false, false, false, false, false}, Technique::rl, true,
         "small power increments create action inertia"},
        {"BF", "digital-known-channel", {false, true, true, false, false, false, false}, Technique::static_optimization,
         true, "MMSE precoding"},
        {"BF", "analog-hidden-channel", {false, false, false, false, false, false, false}, Technique::bandits, true,
         "beams measured online, RSRP smooth in beam and time"},
        {"BF", "analog-with-history", {false, false, false, false, true, false, false}, Technique::supervised_learning,
         true, "predictor trained on past RSRP traces"},
        {"LA", "default", {false, false, false, false, false, false, false}, Technique::bandits, true,
         "ILLA/OLLA or Thompson sampling on ACK/NACK"},
    };
    return table;
}

inline std::vector<std::string> known_use_cases() {
    std::vector<std::string> out;
    for (const auto& row : usecase_table())
        if (std::find(out.begin(), out.end(), row.use_case) == out.end()) out.emplace_back(row.use_case);
    return out;
}

inline std::vector<std::string> known_variants(std::string_view use_case) {
    std::vector<std::string> out;
    for (const auto& row : usecase_table())
        if (row.use_case == use_case) out.emplace_back(row.variant);
    return out;
}

/// Traits of (use case, variant); "default" names the first variant listed.
inline ProblemTraits usecase_traits(std::string_view use_case, std::string_view variant = "default") {
    auto variants = known_variants(use_case);
    if (variants.empty())
        throw PreconditionError("unknown use case '" + std::string(use_case) + "' (known: " + join(known_use_cases(), ", ") + ")");
    for (const auto& row : usecase_table())
        if (row.use_case == use_case && row.variant == variant) return row.traits;
    if (variant == "default")
        for (const auto& row : usecase_table())
            if (row.use_case == use_case) return row.traits;
    throw PreconditionError("unknown variant '" + std::string(variant) + "' for " + std::string(use_case) +
                            " (known: " + join(variants, ", ") + ")");
}

} // namespace occam_rrm
