#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

struct ValueTable {
    std::vector<double> values;
    std::vector<std::size_t> policy;
    std::size_t iterations = 0;
};

/// Q(s,a) = r(s,a) + β Σ_s' P(s'|s,a) V(s').
inline double q_value(const TabularMdp& m, std::span<const double> v, std::size_t s, std::size_t a) {
    double q = m.r(s, a);
    auto row = m.row(s, a);
    double ev = 0.0;
    for (std::size_t n = 0; n < row.size(); ++n) ev += row[n] * v[n];
    return q + m.discount() * ev;
}

/// Greedy action per state; among actions within `tie_tol` of the best,
/// the lowest index.
inline std::vector<std::size_t> greedy_policy(const TabularMdp& m, std::span<const double> v, double tie_tol = 1e-9) {
    std::vector<std::size_t> pi(m.n_states(), 0);
    for (std::size_t s = 0; s < m.n_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> q(m.n_actions());
        for (std::size_t a = 0; a < m.n_actions(); ++a) best = std::max(best, q[a] = q_value(m, v, s, a));
        for (std::size_t a = 0; a < m.n_actions(); ++a)
            if (q[a] >= best - tie_tol) {
                pi[s] = a;
                break;
            }
    }
    return pi;
}

/// max_s |V(s) − max_a Q(s,a)|.
inline double bellman_residual(const TabularMdp& m, std::span<const double> v) {
    double res = 0.0;
    for (std::size_t s = 0; s < m.n_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m.n_actions(); ++a) best = std::max(best, q_value(m, v, s, a));
        res = std::max(res, std::abs(v[s] - best));
    }
    return res;
}

/// Exact value of a stationary deterministic policy: (I − βP_π)V = r_π.
inline std::vector<double> policy_evaluation(const TabularMdp& m, std::span<const std::size_t> policy) {
    require(policy.size() == m.n_states(), "policy_evaluation: one action per state");
    const auto n = static_cast<Eigen::Index>(m.n_states());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        auto act = policy[static_cast<std::size_t>(s)];
        require(act < m.n_actions(), "policy_evaluation: action out of range");
        b(s) = m.r(static_cast<std::size_t>(s), act);
        auto row = m.row(static_cast<std::size_t>(s), act);
        for (Eigen::Index t = 0; t < n; ++t) a(s, t) -= m.discount() * row[static_cast<std::size_t>(t)];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw NumericalError("policy_evaluation: singular evaluation system");
    Eigen::VectorXd v = lu.solve(b);
    return {v.data(), v.data() + v.size()};
}

/// Bellman optimality iteration until the sup-norm change drops below
/// tol·(1−β)/(2β), which bounds the greedy policy's suboptimality by tol.
inline ValueTable value_iteration(const TabularMdp& m, double tol = 1e-9, std::size_t max_iter = 1000000) {
    require(tol > 0.0, "value_iteration: tol must be positive");
    const double beta = m.discount();
    const double stop = beta > 0.0 ? tol * (1.0 - beta) / (2.0 * beta) : std::numeric_limits<double>::infinity();
    ValueTable out;
    std::vector<double> v(m.n_states(), 0.0), next(m.n_states());
    for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
        double delta = 0.0;
        for (std::size_t s = 0; s < m.n_states(); ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < m.n_actions(); ++a) best = std::max(best, q_value(m, v, s, a));
            next[s] = best;
            delta = std::max(delta, std::abs(best - v[s]));
        }
        v.swap(next);
        if (delta < stop) break;
    }
    out.policy = greedy_policy(m, v);
    out.values = std::move(v);
    return out;
}

/// Howard policy iteration from the all-zeros policy. An action changes
/// only on a strict improvement, so ties cannot cycle; `iterations` counts
/// improvement passes.
inline ValueTable policy_iteration(const TabularMdp& m, std::size_t max_iter = 10000) {
    std::vector<std::size_t> pi(m.n_states(), 0);
    ValueTable out;
    std::vector<double> v;
    for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
        v = policy_evaluation(m, pi);
        bool changed = false;
        for (std::size_t s = 0; s < m.n_states(); ++s) {
            double cur = q_value(m, v, s, pi[s]);
            std::size_t best_a = pi[s];
            double best = cur;
            for (std::size_t a = 0; a < m.n_actions(); ++a) {
                double q = q_value(m, v, s, a);
                if (q > best + 1e-12 * std::max(1.0, std::abs(best))) {
                    best = q;
                    best_a = a;
                }
            }
            if (best_a != pi[s]) {
                pi[s] = best_a;
                changed = true;
            }
        }
        if (!changed) break;
    }
    out.policy = greedy_policy(m, v);
    out.values = std::move(v);
    return out;
}

inline void write_csv(std::ostream& os, const ValueTable& t) {
    os << "state,action,value\n";
    for (std::size_t s = 0; s < t.values.size(); ++s) os << s << ',' << t.policy[s] << ',' << format_double(t.values[s]) << '\n';
}

struct QTable {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> q;
    std::vector<std::size_t> visits;
    std::vector<char> valid; ///< action admissible in the state, as seen during learning

    QTable(std::size_t ns, std::size_t na, double init = 0.0)
        : n_states(ns), n_actions(na), q(ns * na, init), visits(ns * na, 0), valid(ns * na, 1) {}

    [[nodiscard]] double at(std::size_t s, std::size_t a) const { return q[s * n_actions + a]; }
    double& at(std::size_t s, std::size_t a) { return q[s * n_actions + a]; }

    /// Best admissible action, lowest index on ties.
    [[nodiscard]] std::size_t greedy(std::size_t s) const {
        std::size_t best = n_actions;
        for (std::size_t a = 0; a < n_actions; ++a)
            if (valid[s * n_actions + a] && (best == n_actions || at(s, a) > at(s, best))) best = a;
        return best == n_actions ? 0 : best;
    }

    [[nodiscard]] double max(std::size_t s) const { return at(s, greedy(s)); }
};

inline void write_csv(std::ostream& os, const QTable& t) {
    os << "state,action,value\n";
    for (std::size_t s = 0; s < t.n_states; ++s)
        for (std::size_t a = 0; a < t.n_actions; ++a) os << s << ',' << a << ',' << format_double(t.at(s, a)) << '\n';
}

/// Harmonic decay x_t = x0 / (1 + t/τ).
struct Schedule {
    double initial = 0.5;
    double tau = 1e4;

    [[nodiscard]] double operator()(std::size_t t) const { return initial / (1.0 + static_cast<double>(t) / tau); }
};

struct QLearningConfig {
    std::size_t episodes = 1;
    std::size_t steps_per_episode = 200000;
    Schedule alpha{0.5, 1e4};
    Schedule epsilon{0.2, 1e4};
    double discount = kDefaultDiscount;
    double initial_q = 0.0;
};

/// One-step Q-learning with ε-greedy exploration. Episode i resets the
/// environment with derive_seed(seed, i); exploration draws use a stream
/// of their own. Environments exposing `action_valid(i)` are only offered
/// admissible actions.
template <EnumerableEnvironment Env>
QTable q_learning(Env& env, const QLearningConfig& cfg, std::uint64_t seed) {
    require(cfg.episodes >= 1 && cfg.steps_per_episode >= 1, "q_learning: need at least one step");
    require(cfg.discount >= 0.0 && cfg.discount < 1.0, "q_learning: discount must lie in [0,1)");
    env.reset(derive_seed(seed, 0));
    QTable table(env.n_states(), env.n_actions(), cfg.initial_q);
    Rng explore = Rng(seed).split("exploration");
    auto admissible = [&](std::size_t a) {
        if constexpr (requires { env.action_valid(a); }) return env.action_valid(a);
        else return true;
    };
    auto mark = [&](std::size_t s) {
        for (std::size_t a = 0; a < table.n_actions; ++a) table.valid[s * table.n_actions + a] = admissible(a) ? 1 : 0;
    };
    std::size_t t = 0;
    for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
        env.reset(derive_seed(seed, ep));
        std::size_t s = env.state_index();
        mark(s);
        for (std::size_t k = 0; k < cfg.steps_per_episode; ++k, ++t) {
            std::size_t a;
            if (explore.uniform() < cfg.epsilon(t)) {
                std::vector<std::size_t> options;
                for (std::size_t i = 0; i < table.n_actions; ++i)
                    if (table.valid[s * table.n_actions + i]) options.push_back(i);
                a = options[static_cast<std::size_t>(explore.uniform() * static_cast<double>(options.size()))];
            } else {
                a = table.greedy(s);
            }
            auto out = env.step(env.action_from_index(a));
            std::size_t s2 = env.state_index();
            mark(s2);
            double target = out.reward + (out.done ? 0.0 : cfg.discount * table.max(s2));
            double& q = table.at(s, a);
            q += cfg.alpha(t) * (target - q);
            ++table.visits[s * table.n_actions + a];
            s = s2;
            if (out.done) break;
        }
    }
    return table;
}

/// Node budget shared by the MPC planners.
inline constexpr double kDefaultMpcBudget = 5e7;

/// Receding-horizon step on a tabular model: backward induction over H
/// stages with zero terminal value (or the given one), first action of
/// the optimal plan (lowest index on ties).
inline std::size_t mpc_plan(const TabularMdp& m, std::size_t state, std::size_t horizon,
                            std::span<const double> terminal = {}, double node_budget = kDefaultMpcBudget) {
    require(horizon >= 1, "mpc_plan: horizon must be at least 1");
    require(state < m.n_states(), "mpc_plan: state out of range");
    require(terminal.empty() || terminal.size() == m.n_states(), "mpc_plan: terminal value size mismatch");
    double cost = static_cast<double>(horizon) * static_cast<double>(m.n_states()) * static_cast<double>(m.n_actions()) *
                  static_cast<double>(m.n_states());
    if (cost > node_budget)
        throw PreconditionError("mpc_plan: horizon " + std::to_string(horizon) + " exceeds the node budget; use a smaller horizon");
    std::vector<double> v = terminal.empty() ? std::vector<double>(m.n_states(), 0.0)
                                             : std::vector<double>(terminal.begin(), terminal.end());
    std::vector<double> next(m.n_states());
    for (std::size_t stage = 1; stage < horizon; ++stage) {
        for (std::size_t s = 0; s < m.n_states(); ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < m.n_actions(); ++a) best = std::max(best, q_value(m, v, s, a));
            next[s] = best;
        }
        v.swap(next);
    }
    std::size_t best_a = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m.n_actions(); ++a) {
        double q = q_value(m, v, state, a);
        if (q > best) {
            best = q;
            best_a = a;
        }
    }
    return best_a;
}

/// Deterministic prediction model for MPC: `step(state, action, k)` gives
/// the predicted successor and reward k steps into the lookahead.
template <class State>
struct DeterministicModel {
    std::size_t n_actions = 0;
    std::function<std::pair<State, double>(const State&, std::size_t action, std::size_t k)> step;
    double discount = 1.0;
};

struct MpcPlan {
    std::vector<std::size_t> actions;
    double value = -std::numeric_limits<double>::infinity();
};

/// Exhaustive finite-horizon search over a deterministic model. The first
/// action is applied and the search repeated next step (certainty
/// equivalence). Throws when A^H exceeds the node budget.
template <class State>
MpcPlan mpc_plan(const DeterministicModel<State>& model, const State& state, std::size_t horizon,
                 double node_budget = kDefaultMpcBudget) {
    require(horizon >= 1, "mpc_plan: horizon must be at least 1");
    require(model.n_actions >= 1, "mpc_plan: model has no actions");
    double nodes = std::pow(static_cast<double>(model.n_actions), static_cast<double>(horizon));
    if (nodes > node_budget)
        throw PreconditionError("mpc_plan: " + format_double(nodes) + " search nodes exceed the budget of " +
                                format_double(node_budget) + "; use a smaller horizon");
    MpcPlan best;
    std::vector<std::size_t> path(horizon);
    std::function<void(const State&, std::size_t, double, double)> dfs = [&](const State& s, std::size_t k, double acc,
                                                                             double weight) {
        if (k == horizon) {
            if (acc > best.value) {
                best.value = acc;
                best.actions = path;
            }
            return;
        }
        for (std::size_t a = 0; a < model.n_actions; ++a) {
            auto [next, r] = model.step(s, a, k);
            path[k] = a;
            dfs(next, k + 1, acc + weight * r, weight * model.discount);
        }
    };
    dfs(state, 0, 0.0, 1.0);
    return best;
}

} // namespace occam_rrm
