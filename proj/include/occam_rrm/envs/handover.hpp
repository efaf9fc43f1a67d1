#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "occam_rrm/core/mdp.hpp"
#include "occam_rrm/envs/tabular.hpp"

namespace occam_rrm {

/// Straight-line UE trajectory past a row of cells, log-distance path loss
/// and AR(1) shadowing per cell.
struct MobilityModel {
    std::size_t n_steps = 200;
    double cell_spacing_m = 500.0;
    double cell_offset_m = 50.0;     ///< perpendicular distance from the route to the sites
    double start_m = 0.0;
    double speed_m_per_step = 2.5;
    double rsrp_at_100m_db = -70.0;
    double pathloss_exponent = 3.5;
    double shadowing_std_db = 0.0;
    double shadowing_corr = 0.95;
};

struct HandoverConfig {
    std::size_t n_cells = 2;
    std::vector<std::vector<double>> trace; ///< true RSRP [step][cell] in dB; empty = mobility model
    MobilityModel mobility;
    double noise_std_db = 0.0;              ///< measurement noise on observed RSRP
    std::size_t ho_interruption = 0;        ///< steps until a handover completes
    double rlf_threshold_db = -100.0;
    double hysteresis_db = 2.0;             ///< offset applied when counting neighbor exceedances
    std::size_t pingpong_window = 10;
};

/// Measurement report in the form consumed by MRO policies. exceed_count[i]
/// is the number of consecutive measurements in which neighbor i, minus
/// hysteresis, was above the serving cell.
struct MroObservation {
    double rsrp_serving = 0.0;
    std::vector<std::size_t> neighbors;
    std::vector<double> rsrp_neighbors;
    std::vector<std::size_t> exceed_count;
};

/// Advances per-cell exceedance counters by one measurement and returns
/// the report relative to `serving`. A counter grows while the cell, minus
/// hysteresis, is above the serving cell and resets otherwise.
inline MroObservation update_exceed_counts(std::vector<std::size_t>& counts, std::span<const double> rsrp,
                                           std::size_t serving, double hysteresis_db) {
    counts.resize(rsrp.size(), 0);
    MroObservation o;
    o.rsrp_serving = rsrp[serving];
    for (std::size_t c = 0; c < rsrp.size(); ++c) {
        if (c == serving) {
            counts[c] = 0;
            continue;
        }
        counts[c] = rsrp[c] - hysteresis_db > rsrp[serving] ? counts[c] + 1 : 0;
        o.neighbors.push_back(c);
        o.rsrp_neighbors.push_back(rsrp[c]);
        o.exceed_count.push_back(counts[c]);
    }
    return o;
}

struct HandoverObservation {
    std::size_t t = 0;
    std::size_t serving = 0;
    std::vector<double> rsrp; ///< measured RSRP per cell
    MroObservation mro;
    std::size_t interruption_left = 0;
};

inline std::ostream& operator<<(std::ostream& os, const HandoverObservation& o) {
    return os << o.serving << ';' << join(o.rsrp);
}

struct HandoverAction {
    std::optional<std::size_t> target; ///< empty = stay

    static HandoverAction stay() { return {}; }
    static HandoverAction to(std::size_t cell) { return {cell}; }
};

/// Hidden state of the handover process; reward-relevant history only.
struct HandoverCore {
    std::size_t t = 0;
    std::size_t serving = 0;
    std::size_t interruption_left = 0;
    int last_from = -1;       ///< cell left by the last handover
    std::size_t since_ho = 0; ///< steps since the last handover, capped at window + 1
    bool pp_armed = false;    ///< last handover can still be undone as a ping-pong
    bool rlf = false;         ///< inside a radio-link-failure episode already counted

    auto operator<=>(const HandoverCore&) const = default;
};

struct HandoverEvents {
    int pingpong = 0;
    int too_early = 0;
    int too_late = 0;
    bool ignored = false;

    [[nodiscard]] int total() const { return pingpong + too_early + too_late; }
};

/// Handover decisions for one UE. Penalizes ping-pongs (return to the cell
/// just left within the window), too-late handovers (serving below the RLF
/// threshold while a neighbor is above it) and too-early ones (target below
/// the threshold when the handover completes). Commands issued while a
/// handover is still completing are ignored.
class HandoverEnv {
public:
    using observation_type = HandoverObservation;
    using action_type = HandoverAction;

    explicit HandoverEnv(HandoverConfig cfg) : cfg_(std::move(cfg)) {
        require(cfg_.n_cells >= 2, "handover: at least two cells");
        require(cfg_.noise_std_db >= 0.0, "handover: negative noise_std_db");
        require(cfg_.hysteresis_db >= 0.0, "handover: negative hysteresis");
        if (!cfg_.trace.empty()) {
            for (const auto& row : cfg_.trace)
                require(row.size() == cfg_.n_cells, "handover: trace rows must have one value per cell");
        } else {
            require(cfg_.mobility.n_steps >= 1, "handover: mobility n_steps must be positive");
            require(cfg_.mobility.shadowing_corr >= 0.0 && cfg_.mobility.shadowing_corr < 1.0,
                    "handover: shadowing_corr must lie in [0,1)");
        }
        // A deterministic trajectory is known before the first reset.
        if (tractable()) reset(0);
    }

    [[nodiscard]] std::string_view name() const { return "handover"; }
    [[nodiscard]] const HandoverConfig& config() const { return cfg_; }
    [[nodiscard]] std::size_t n_cells() const { return cfg_.n_cells; }

    [[nodiscard]] std::string describe(const action_type& a) const {
        return a.target ? "ho" + std::to_string(*a.target) : "stay";
    }

    /// RSRP trajectory is deterministic, so the hidden process is finite.
    [[nodiscard]] bool tractable() const { return !cfg_.trace.empty() || cfg_.mobility.shadowing_std_db == 0.0; }

    observation_type reset(std::uint64_t seed) {
        Rng root(seed);
        noise_ = root.split("measurement");
        rsrp_ = cfg_.trace.empty() ? mobility_trace(root.split("shadowing")) : cfg_.trace;
        core_ = HandoverCore{};
        core_.serving = argmax(rsrp_.front());
        exceed_.assign(cfg_.n_cells, 0);
        index_.reset();
        return observe();
    }

    [[nodiscard]] std::size_t n_steps() const { return rsrp_.size(); }
    [[nodiscard]] const std::vector<std::vector<double>>& rsrp_trace() const { return rsrp_; }
    [[nodiscard]] const HandoverCore& core() const { return core_; }

    /// Pure transition of the hidden process; throws for a handover to the
    /// serving cell.
    [[nodiscard]] std::pair<HandoverCore, HandoverEvents> advance(HandoverCore c, std::optional<std::size_t> target) const {
        HandoverEvents ev;
        const auto& row = rsrp_[c.t];
        bool executed = false;
        if (target) {
            if (*target >= cfg_.n_cells) throw InvalidAction("target cell " + std::to_string(*target) + " out of range");
            if (*target == c.serving) throw InvalidAction("handover to the serving cell " + std::to_string(*target));
            if (c.interruption_left > 0) {
                ev.ignored = true;
            } else {
                executed = true;
                if (c.pp_armed && static_cast<int>(*target) == c.last_from && c.since_ho <= cfg_.pingpong_window) {
                    ev.pingpong = 1;
                    c.pp_armed = false;
                } else {
                    c.pp_armed = true;
                }
                c.last_from = static_cast<int>(c.serving);
                c.serving = *target;
                c.since_ho = 0;
                c.interruption_left = cfg_.ho_interruption;
                c.rlf = false;
                if (c.interruption_left == 0 && row[c.serving] < cfg_.rlf_threshold_db) {
                    ev.too_early = 1;
                    c.rlf = true;
                }
            }
        }
        if (!executed && c.interruption_left > 0) {
            if (--c.interruption_left == 0 && row[c.serving] < cfg_.rlf_threshold_db) {
                ev.too_early = 1;
                c.rlf = true;
            }
        }
        if (c.interruption_left == 0) {
            bool serving_low = row[c.serving] < cfg_.rlf_threshold_db;
            bool neighbor_ok = false;
            for (std::size_t k = 0; k < cfg_.n_cells; ++k)
                if (k != c.serving && row[k] >= cfg_.rlf_threshold_db) neighbor_ok = true;
            if (serving_low && neighbor_ok && !c.rlf) {
                ev.too_late = 1;
                c.rlf = true;
            } else if (!serving_low) {
                c.rlf = false;
            }
        }
        if (c.last_from >= 0 && !executed) c.since_ho = std::min(c.since_ho + 1, cfg_.pingpong_window + 1);
        if (executed) c.since_ho = 1;
        ++c.t;
        return {c, ev};
    }

    StepOutcome<observation_type> step(const action_type& a) {
        if (core_.t >= rsrp_.size()) throw InvalidAction("episode already finished");
        std::size_t serving_before = core_.serving;
        auto [next, ev] = advance(core_, a.target);
        core_ = next;
        Diagnostics d{{"pingpong", double(ev.pingpong)},
                      {"too_early", double(ev.too_early)},
                      {"too_late", double(ev.too_late)},
                      {"handover", core_.serving != serving_before ? 1.0 : 0.0},
                      {"serving", double(core_.serving)},
                      {"ignored_command", ev.ignored ? 1.0 : 0.0}};
        bool done = core_.t >= rsrp_.size();
        return {done ? last_observation() : observe(), -static_cast<double>(ev.total()), done, std::move(d)};
    }

    // Relative action encoding for tabular solvers: 0 = stay, k = the k-th
    // cell other than the serving one, in index order.
    [[nodiscard]] std::size_t n_actions() const { return cfg_.n_cells; }
    [[nodiscard]] action_type action_from_index(std::size_t i) const { return action_for(core_, i); }

    [[nodiscard]] std::size_t n_states() const { return enumerated().states.size(); }
    [[nodiscard]] std::size_t state_index() const { return enumerated().index.at(core_); }

    [[nodiscard]] TabularMdp true_mdp(double discount) const { return enumerate(discount).mdp; }

private:
    [[nodiscard]] action_type action_for(const HandoverCore& c, std::size_t i) const {
        if (i == 0) return HandoverAction::stay();
        std::size_t k = i - 1;
        std::size_t target = k < c.serving ? k : k + 1;
        return HandoverAction::to(target);
    }

    [[nodiscard]] EnumeratedMdp<HandoverCore> enumerate(double discount) const {
        if (!tractable()) throw NotTractable("handover: random shadowing makes the RSRP process non-enumerable");
        HandoverCore init{};
        init.serving = argmax(rsrp_.front());
        auto kernel = [&](const HandoverCore& c, std::size_t a) {
            if (c.t >= rsrp_.size()) return std::vector<Branch<HandoverCore>>{{1.0, c, 0.0}};
            auto [next, ev] = advance(c, action_for(c, a).target);
            return std::vector<Branch<HandoverCore>>{{1.0, next, -static_cast<double>(ev.total())}};
        };
        return enumerate_mdp(init, n_actions(), kernel, discount);
    }

    const EnumeratedMdp<HandoverCore>& enumerated() const {
        if (!index_) index_ = enumerate(0.0);
        return *index_;
    }

    static std::size_t argmax(const std::vector<double>& v) {
        return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    }

    std::vector<std::vector<double>> mobility_trace(Rng shadow) const {
        const auto& m = cfg_.mobility;
        std::vector<std::vector<double>> tr(m.n_steps, std::vector<double>(cfg_.n_cells));
        std::vector<double> sh(cfg_.n_cells, 0.0);
        std::normal_distribution<double> n01(0.0, 1.0);
        for (std::size_t t = 0; t < m.n_steps; ++t) {
            auto gen = shadow.at(t);
            double x = m.start_m + m.speed_m_per_step * static_cast<double>(t);
            for (std::size_t c = 0; c < cfg_.n_cells; ++c) {
                double z = m.shadowing_std_db > 0.0 ? n01(gen) : 0.0;
                sh[c] = t == 0 ? m.shadowing_std_db * z
                               : m.shadowing_corr * sh[c] + m.shadowing_std_db * std::sqrt(1.0 - m.shadowing_corr * m.shadowing_corr) * z;
                double dx = x - m.cell_spacing_m * static_cast<double>(c);
                double d = std::max(1.0, std::hypot(dx, m.cell_offset_m));
                tr[t][c] = m.rsrp_at_100m_db - 10.0 * m.pathloss_exponent * std::log10(d / 100.0) + sh[c];
            }
        }
        return tr;
    }

    observation_type observe() {
        HandoverObservation o;
        o.t = core_.t;
        o.serving = core_.serving;
        o.interruption_left = core_.interruption_left;
        auto gen = noise_.at(core_.t);
        std::normal_distribution<double> n01(0.0, 1.0);
        o.rsrp = rsrp_[core_.t];
        if (cfg_.noise_std_db > 0.0)
            for (double& v : o.rsrp) v += cfg_.noise_std_db * n01(gen);
        o.mro = update_exceed_counts(exceed_, o.rsrp, core_.serving, cfg_.hysteresis_db);
        last_ = o;
        return o;
    }

    observation_type last_observation() const {
        auto o = last_;
        o.t = core_.t;
        o.serving = core_.serving;
        return o;
    }

    HandoverConfig cfg_;
    Rng noise_;
    std::vector<std::vector<double>> rsrp_;
    HandoverCore core_;
    std::vector<std::size_t> exceed_;
    HandoverObservation last_;
    mutable std::optional<EnumeratedMdp<HandoverCore>> index_;
};

} // namespace occam_rrm
