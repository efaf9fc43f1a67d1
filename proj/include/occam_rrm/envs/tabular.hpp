#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/mdp.hpp"

namespace occam_rrm {

/// One branch of a probabilistic transition kernel.
template <class State>
struct Branch {
    double prob = 0.0;
    State next{};
    double reward = 0.0;
};

/// Reachable part of a finite MDP given as a kernel, with the index map
/// from model states to rows of the tabular model.
template <class State>
struct EnumeratedMdp {
    TabularMdp mdp;
    std::vector<State> states;
    std::map<State, std::size_t> index;
};

/// Breadth-first enumeration of every state reachable from `initial`.
/// `kernel(state, action)` returns the branches of one (state, action)
/// pair; their probabilities must sum to 1. Rewards are averaged into the
/// expected-reward table.
template <class State, class Kernel>
EnumeratedMdp<State> enumerate_mdp(const State& initial, std::size_t n_actions, Kernel&& kernel,
                                   double discount, std::size_t max_states = 20000) {
    std::vector<State> states{initial};
    std::map<State, std::size_t> index{{initial, 0}};
    struct Entry {
        std::size_t s, a, next;
        double prob, reward;
    };
    std::vector<Entry> entries;
    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        std::size_t s = frontier.front();
        frontier.pop_front();
        for (std::size_t a = 0; a < n_actions; ++a) {
            State from = states[s];
            for (const auto& br : kernel(from, a)) {
                if (br.prob <= 0.0) continue;
                auto [it, inserted] = index.try_emplace(br.next, states.size());
                if (inserted) {
                    if (states.size() >= max_states)
                        throw NotTractable("state space exceeds " + std::to_string(max_states) + " states");
                    states.push_back(br.next);
                    frontier.push_back(it->second);
                }
                entries.push_back({s, a, it->second, br.prob, br.reward});
            }
        }
    }
    auto mdp = TabularMdp::zeros(states.size(), n_actions, discount);
    std::vector<double> expected(states.size() * n_actions, 0.0);
    for (const auto& e : entries) {
        mdp.add_p(e.s, e.a, e.next, e.prob);
        expected[e.s * n_actions + e.a] += e.prob * e.reward;
    }
    for (std::size_t s = 0; s < states.size(); ++s)
        for (std::size_t a = 0; a < n_actions; ++a) mdp.set_r(s, a, expected[s * n_actions + a]);
    mdp.validate();
    return {std::move(mdp), std::move(states), std::move(index)};
}

/// Exact tabular model of an environment instance. Environments with a
/// finite state space provide `true_mdp(discount)`; every other one is
/// rejected as not tractable.
template <Environment E>
TabularMdp env_true_mdp(const E& env, double discount = kDefaultDiscount) {
    if constexpr (requires { env.true_mdp(discount); }) {
        return env.true_mdp(discount);
    } else {
        throw NotTractable(std::string(env.name()) +
                           ": continuous or unbounded state space, MDP not tractable "
                           "(use a learning or expert-policy solver instead)");
    }
}

} // namespace occam_rrm
