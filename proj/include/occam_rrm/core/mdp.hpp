#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/format.hpp"
#include "occam_rrm/core/rng.hpp"

namespace occam_rrm {

inline constexpr double kDefaultDiscount = 0.99;
inline constexpr std::size_t kDefaultHorizon = 1000;

/// Explicit finite MDP: transition tensor [s][a][s'], reward table [s][a].
class TabularMdp {
public:
    TabularMdp(std::size_t n_states, std::size_t n_actions, std::vector<double> transition,
               std::vector<double> reward, double discount)
        : n_states_(n_states), n_actions_(n_actions), transition_(std::move(transition)),
          reward_(std::move(reward)), discount_(discount) {
        validate();
    }

    /// All-zero model to be filled through `set_*`; call `validate()` after.
    static TabularMdp zeros(std::size_t n_states, std::size_t n_actions, double discount) {
        TabularMdp m;
        m.n_states_ = n_states;
        m.n_actions_ = n_actions;
        m.transition_.assign(n_states * n_actions * n_states, 0.0);
        m.reward_.assign(n_states * n_actions, 0.0);
        m.discount_ = discount;
        return m;
    }

    [[nodiscard]] std::size_t n_states() const noexcept { return n_states_; }
    [[nodiscard]] std::size_t n_actions() const noexcept { return n_actions_; }
    [[nodiscard]] double discount() const noexcept { return discount_; }

    [[nodiscard]] double p(std::size_t s, std::size_t a, std::size_t next) const {
        return transition_[(s * n_actions_ + a) * n_states_ + next];
    }
    [[nodiscard]] double r(std::size_t s, std::size_t a) const { return reward_[s * n_actions_ + a]; }

    [[nodiscard]] std::span<const double> row(std::size_t s, std::size_t a) const {
        return {transition_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }

    void set_p(std::size_t s, std::size_t a, std::size_t next, double v) {
        transition_[(s * n_actions_ + a) * n_states_ + next] = v;
    }
    void add_p(std::size_t s, std::size_t a, std::size_t next, double v) {
        transition_[(s * n_actions_ + a) * n_states_ + next] += v;
    }
    void set_r(std::size_t s, std::size_t a, double v) { reward_[s * n_actions_ + a] = v; }

    /// Throws PreconditionError unless every row is a probability vector
    /// (within 1e-9), rewards are finite and 0 <= discount < 1.
    void validate() const {
        require(n_states_ > 0 && n_actions_ > 0, "TabularMdp: n_states and n_actions must be positive");
        require(transition_.size() == n_states_ * n_actions_ * n_states_, "TabularMdp: transition tensor has wrong size");
        require(reward_.size() == n_states_ * n_actions_, "TabularMdp: reward table has wrong size");
        require(discount_ >= 0.0 && discount_ < 1.0, "TabularMdp: discount must lie in [0,1)");
        for (std::size_t s = 0; s < n_states_; ++s) {
            for (std::size_t a = 0; a < n_actions_; ++a) {
                double sum = 0.0;
                for (double v : row(s, a)) {
                    require(v >= 0.0 && std::isfinite(v), "TabularMdp: negative or non-finite probability at state " +
                                                              std::to_string(s) + ", action " + std::to_string(a));
                    sum += v;
                }
                require(std::abs(sum - 1.0) <= 1e-9, "TabularMdp: row (" + std::to_string(s) + "," + std::to_string(a) +
                                                         ") sums to " + format_double(sum));
                require(std::isfinite(r(s, a)), "TabularMdp: non-finite reward");
            }
        }
    }

private:
    TabularMdp() = default;

    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> transition_;
    std::vector<double> reward_;
    double discount_ = kDefaultDiscount;
};

/// Named real-valued diagnostics attached to a step (hidden-state values,
/// event counters, per-user throughput). Ordered so CSV columns are sorted.
using Diagnostics = std::map<std::string, double>;

template <class Obs>
struct StepOutcome {
    Obs observation;
    double reward = 0.0;
    bool done = false;
    Diagnostics diagnostics;
};

/// Simulation contract shared by every environment.
///
/// `reset(seed)` rebuilds all internal randomness from the seed and returns
/// the first observation; `step(action)` advances one decision epoch and
/// throws InvalidAction for actions outside the action space.
/// `describe(action)` gives the compact text form used in episode logs.
template <class E>
concept Environment = requires(E& env, const E& cenv, const typename E::action_type& action, std::uint64_t seed) {
    typename E::observation_type;
    typename E::action_type;
    { env.reset(seed) } -> std::same_as<typename E::observation_type>;
    { env.step(action) } -> std::same_as<StepOutcome<typename E::observation_type>>;
    { cenv.name() } -> std::convertible_to<std::string_view>;
    { cenv.describe(action) } -> std::convertible_to<std::string>;
};

/// Environment whose true state and actions are finite and indexed, so
/// tabular learners can run on it.
template <class E>
concept EnumerableEnvironment = Environment<E> && requires(const E& cenv, std::size_t i) {
    { cenv.n_states() } -> std::convertible_to<std::size_t>;
    { cenv.n_actions() } -> std::convertible_to<std::size_t>;
    { cenv.state_index() } -> std::convertible_to<std::size_t>;
    { cenv.action_from_index(i) } -> std::same_as<typename E::action_type>;
};

struct StepRecord {
    std::string observation;
    std::string action;
    double reward = 0.0;
    Diagnostics diagnostics;
};

struct EpisodeLog {
    std::vector<StepRecord> steps;
    std::uint64_t seed = 0;
    std::string env_name;

    [[nodiscard]] std::vector<double> rewards() const {
        std::vector<double> out;
        out.reserve(steps.size());
        for (const auto& s : steps) out.push_back(s.reward);
        return out;
    }

    /// Values of one diagnostic key across steps; throws naming the key if
    /// any step lacks it.
    [[nodiscard]] std::vector<double> diagnostic(const std::string& key) const {
        std::vector<double> out;
        out.reserve(steps.size());
        for (std::size_t t = 0; t < steps.size(); ++t) {
            auto it = steps[t].diagnostics.find(key);
            if (it == steps[t].diagnostics.end())
                throw PreconditionError("missing diagnostic '" + key + "' at step " + std::to_string(t));
            out.push_back(it->second);
        }
        return out;
    }
};

/// Policy failed or produced an action the environment rejected.
class EpisodeError : public std::runtime_error {
public:
    EpisodeError(std::size_t step, std::string action, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ", action '" + action + "': " + what),
          step_(step), action_(std::move(action)) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] const std::string& action() const noexcept { return action_; }

private:
    std::size_t step_;
    std::string action_;
};

namespace detail {

template <class T>
std::string describe_observation(const T& obs) {
    if constexpr (requires(std::ostream& os) { os << obs; }) {
        std::ostringstream os;
        os << obs;
        return os.str();
    } else {
        return {};
    }
}

} // namespace detail

/// Runs the agent/environment loop for `horizon` steps (fewer if the
/// environment signals `done`).
///
/// The policy is called with the observation history so far (always
/// nonempty: the reset observation comes first) and, if it accepts one, a
/// random stream split from the episode seed.
template <Environment Env, class Policy>
EpisodeLog run_episode(Env& env, Policy&& policy, std::size_t horizon, std::uint64_t seed) {
    using Obs = typename Env::observation_type;
    require(horizon >= 1, "run_episode: horizon must be at least 1");

    EpisodeLog log;
    log.seed = seed;
    log.env_name = std::string(env.name());
    log.steps.reserve(horizon);

    Rng policy_rng = Rng(seed).split("policy");
    std::vector<Obs> history;
    history.reserve(horizon + 1);
    history.push_back(env.reset(seed));

    for (std::size_t t = 0; t < horizon; ++t) {
        std::span<const Obs> view(history);
        auto action = [&] {
            if constexpr (std::invocable<Policy&, std::span<const Obs>, Rng&>) {
                return policy(view, policy_rng);
            } else {
                return policy(view);
            }
        }();
        StepOutcome<Obs> out;
        try {
            out = env.step(action);
        } catch (const InvalidAction& e) {
            throw EpisodeError(t, env.describe(action), e.what());
        }
        if (!std::isfinite(out.reward))
            throw EpisodeError(t, env.describe(action), "environment produced a non-finite reward");
        log.steps.push_back({detail::describe_observation(out.observation), env.describe(action), out.reward,
                             std::move(out.diagnostics)});
        history.push_back(std::move(out.observation));
        if (out.done) break;
    }
    return log;
}

/// Σ_t discount^t · rewards[t].
inline double discounted_return(std::span<const double> rewards, double discount) {
    require(discount >= 0.0 && discount < 1.0, "discounted_return: discount must lie in [0,1)");
    double total = 0.0;
    double weight = 1.0;
    for (double r : rewards) {
        total += weight * r;
        weight *= discount;
    }
    return total;
}

struct MetricsRecord {
    double mean_reward = 0.0;
    double discounted_return = 0.0;
    std::optional<double> sum_log_throughput;
    std::optional<double> accuracy;
    std::optional<double> mean_abs_beam_error;
};

/// Which aggregates `metrics_summary` must produce. Each profile beyond
/// `reward` requires the matching diagnostics in every step.
enum class MetricProfile {
    reward,     ///< mean reward and discounted return only
    throughput, ///< plus Σ_u log(mean per-user throughput), keys `user<u>_throughput`
    beam,       ///< plus accuracy / beam error, keys `selected_beam`, `optimal_beam`
};

inline MetricProfile parse_metric_profile(std::string_view s) {
    if (s == "reward") return MetricProfile::reward;
    if (s == "throughput") return MetricProfile::throughput;
    if (s == "beam") return MetricProfile::beam;
    throw PreconditionError("unknown metrics profile '" + std::string(s) + "' (known: reward, throughput, beam)");
}

inline std::string_view to_string(MetricProfile p) {
    switch (p) {
    case MetricProfile::throughput: return "throughput";
    case MetricProfile::beam: return "beam";
    case MetricProfile::reward: break;
    }
    return "reward";
}

inline std::string throughput_key(std::size_t user) { return "user" + std::to_string(user) + "_throughput"; }

/// Aggregates over a batch of episodes. Step-level means pool all steps of
/// all logs; the discounted return is averaged per episode.
inline MetricsRecord metrics_summary(std::span<const EpisodeLog> logs, MetricProfile profile,
                                     double discount = kDefaultDiscount) {
    require(!logs.empty(), "metrics_summary: no episode logs");
    MetricsRecord m;
    double reward_sum = 0.0;
    std::size_t n_steps = 0;
    double ret_sum = 0.0;
    for (const auto& log : logs) {
        auto rewards = log.rewards();
        for (double r : rewards) reward_sum += r;
        n_steps += rewards.size();
        ret_sum += discounted_return(rewards, discount);
    }
    require(n_steps > 0, "metrics_summary: episode logs are empty");
    m.mean_reward = reward_sum / static_cast<double>(n_steps);
    m.discounted_return = ret_sum / static_cast<double>(logs.size());

    if (profile == MetricProfile::throughput) {
        std::size_t n_users = 0;
        while (logs.front().steps.front().diagnostics.contains(throughput_key(n_users))) ++n_users;
        if (n_users == 0) throw PreconditionError("metrics_summary: missing diagnostic '" + throughput_key(0) + "'");
        double total = 0.0;
        for (std::size_t u = 0; u < n_users; ++u) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto& log : logs) {
                for (double v : log.diagnostic(throughput_key(u))) sum += v;
                count += log.steps.size();
            }
            total += std::log(sum / static_cast<double>(count));
        }
        m.sum_log_throughput = total;
    } else if (profile == MetricProfile::beam) {
        std::size_t hits = 0;
        std::size_t count = 0;
        double err = 0.0;
        for (const auto& log : logs) {
            auto sel = log.diagnostic("selected_beam");
            auto opt = log.diagnostic("optimal_beam");
            for (std::size_t t = 0; t < sel.size(); ++t) {
                hits += sel[t] == opt[t] ? 1 : 0;
                err += std::abs(sel[t] - opt[t]);
            }
            count += sel.size();
        }
        m.accuracy = static_cast<double>(hits) / static_cast<double>(count);
        m.mean_abs_beam_error = err / static_cast<double>(count);
    }
    return m;
}

/// CSV with columns `t, action, reward, <diagnostic keys sorted>`. Keys
/// absent from a step leave an empty cell.
inline void write_csv(std::ostream& os, const EpisodeLog& log) {
    std::set<std::string> keys;
    for (const auto& s : log.steps)
        for (const auto& [k, v] : s.diagnostics) keys.insert(k);
    os << "t,action,reward";
    for (const auto& k : keys) os << ',' << k;
    os << '\n';
    for (std::size_t t = 0; t < log.steps.size(); ++t) {
        const auto& s = log.steps[t];
        os << t << ',' << s.action << ',' << format_double(s.reward);
        for (const auto& k : keys) {
            os << ',';
            if (auto it = s.diagnostics.find(k); it != s.diagnostics.end()) os << format_double(it->second);
        }
        os << '\n';
    }
}

inline std::string to_csv(const EpisodeLog& log) {
    std::ostringstream os;
    write_csv(os, log);
    return os.str();
}

} // namespace occam_rrm
