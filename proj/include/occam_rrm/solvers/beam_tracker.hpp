#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "occam_rrm/core/mdp.hpp"
#include "occam_rrm/envs/beamforming.hpp"
#include "occam_rrm/solvers/gp.hpp"

namespace occam_rrm {

/// Unset (zero) kernel parameters are derived from the environment
/// config: the beam length scale from its spatial correlation, the time
/// length scale so that the kernel matches the field's lag-one
/// correlation, the signal variance and prior mean from the field.
struct BoTrackerConfig {
    std::size_t budget = 4;
    double kappa = 2.0;
    std::size_t window = 64;
    double length_scale_beam = 0.0;
    double length_scale_time = 0.0;
    double signal_var = 0.0;
    std::optional<double> prior_mean;
    double obs_noise_std = 0.1;
};

/// SE time length scale whose lag-one correlation equals the AR coefficient.
inline double matched_time_length_scale(double ar) {
    if (ar >= 1.0) return 1e6;
    if (ar <= 1e-6) return 0.2;
    return 1.0 / std::sqrt(-2.0 * std::log(ar));
}

/// Beam tracker with a spatio-temporal GP over (beam, time). Each step
/// measures the `budget` beams of highest UCB at the current time, then
/// serves the best beam by measured RSRP where available and by posterior
/// mean elsewhere.
class BoBeamTracker {
public:
    BoBeamTracker(const BeamformingEnv& env, BoTrackerConfig cfg) : cfg_(cfg), n_beams_(env.n_beams()) {
        require(cfg_.budget >= 1, "bo_beam_tracker: budget_per_step must be at least 1");
        require(cfg_.window >= 1, "bo_beam_tracker: window must be at least 1");
        const auto& e = env.config();
        gp_.kernel.length_scales = {cfg_.length_scale_beam > 0.0 ? cfg_.length_scale_beam : std::max(e.spatial_corr, 0.5),
                                    cfg_.length_scale_time > 0.0 ? cfg_.length_scale_time
                                                                 : matched_time_length_scale(e.effective_ar())};
        gp_.kernel.signal_var = cfg_.signal_var > 0.0 ? cfg_.signal_var : e.field_std_db * e.field_std_db;
        gp_.prior_mean = cfg_.prior_mean.value_or(e.mean_rsrp_db);
    }

    BeamAction operator()(std::span<const BeamObservation> history) {
        now_ = static_cast<double>(history.size() - 1);
        gp_.points.assign(window_.begin(), window_.end());
        GpPosterior post(gp_);
        std::vector<std::pair<double, std::size_t>> scored;
        for (std::size_t b = 0; b < n_beams_; ++b) {
            auto p = post.predict(std::vector<double>{static_cast<double>(b), now_});
            scored.emplace_back(-(p.mean + cfg_.kappa * std::sqrt(p.variance)), b);
        }
        std::stable_sort(scored.begin(), scored.end());
        BeamAction a;
        for (std::size_t i = 0; i < std::min(cfg_.budget, n_beams_); ++i) a.measure.push_back(scored[i].second);
        std::sort(a.measure.begin(), a.measure.end());
        a.serve = [this](std::span<const BeamMeasurement> m) { return serve(m); };
        return a;
    }

    [[nodiscard]] const GpSurrogate& surrogate() const { return gp_; }

private:
    std::size_t serve(std::span<const BeamMeasurement> measured) {
        for (const auto& m : measured) {
            window_.push_back({{static_cast<double>(m.beam), now_}, m.rsrp_db, cfg_.obs_noise_std});
            if (window_.size() > cfg_.window) window_.pop_front();
        }
        gp_.points.assign(window_.begin(), window_.end());
        GpPosterior post(gp_);
        // A fresh measurement beats the smoothed estimate for its own beam.
        std::vector<double> score(n_beams_, std::numeric_limits<double>::quiet_NaN());
        for (const auto& m : measured) score[m.beam] = m.rsrp_db;
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < n_beams_; ++b) {
            double v = std::isnan(score[b]) ? post.predict(std::vector<double>{static_cast<double>(b), now_}).mean : score[b];
            if (v > best_score) {
                best_score = v;
                best = b;
            }
        }
        return best;
    }

    BoTrackerConfig cfg_;
    std::size_t n_beams_;
    GpSurrogate gp_;
    std::deque<GpPoint> window_;
    double now_ = 0.0;
};

inline EpisodeLog bo_beam_tracker(BeamformingEnv& env, const BoTrackerConfig& cfg, std::size_t horizon, std::uint64_t seed) {
    BoBeamTracker tracker(env, cfg);
    return run_episode(env, tracker, horizon, seed);
}

struct KnnConfig {
    std::size_t budget = 4;
    std::size_t k = 5;
    std::size_t history_episodes = 5;
    std::size_t history_steps = 200;
    std::uint64_t history_seed = 0x5eed;
};

/// Supervised baseline: k-nearest-neighbor regression of the next optimal
/// beam on the last two, trained on full-information traces recorded from
/// the same environment under separate seeds. At run time the features are
/// the last two served beams; the most-voted beams are measured and the
/// strongest measured one is served.
class KnnBeamPredictor {
public:
    KnnBeamPredictor(const BeamformingEnv& env, KnnConfig cfg) : cfg_(cfg), n_beams_(env.n_beams()) {
        require(cfg_.budget >= 1 && cfg_.k >= 1, "knn predictor: budget and k must be positive");
        for (std::size_t e = 0; e < cfg_.history_episodes; ++e) {
            auto field = env.record_field(derive_seed(cfg_.history_seed, e), cfg_.history_steps);
            const auto& opt = field.optimal_beam;
            for (std::size_t t = 2; t < opt.size(); ++t) samples_.push_back({opt[t - 2], opt[t - 1], opt[t]});
        }
        require(!samples_.empty(), "knn predictor: history too short to form training samples");
    }

    BeamAction operator()(std::span<const BeamObservation>) {
        BeamAction a;
        const std::size_t budget = std::min(cfg_.budget, n_beams_);
        if (served_.size() < 2) {
            for (std::size_t i = 0; i < budget; ++i)
                a.measure.push_back(std::min(n_beams_ - 1, (2 * i + 1) * n_beams_ / (2 * budget)));
        } else {
            a.measure = predict(served_[served_.size() - 2], served_.back(), budget);
        }
        std::sort(a.measure.begin(), a.measure.end());
        a.measure.erase(std::unique(a.measure.begin(), a.measure.end()), a.measure.end());
        a.serve = [this](std::span<const BeamMeasurement> m) {
            std::size_t b = best_measured(m);
            served_.push_back(b);
            return b;
        };
        return a;
    }

    /// Beams ranked by neighbor votes (ties → lower beam), padded around
    /// the top vote when fewer than `budget` beams received votes.
    [[nodiscard]] std::vector<std::size_t> predict(std::size_t b2, std::size_t b1, std::size_t budget) const {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            double d0 = static_cast<double>(samples_[i][0]) - static_cast<double>(b2);
            double d1 = static_cast<double>(samples_[i][1]) - static_cast<double>(b1);
            dist.emplace_back(d0 * d0 + d1 * d1, i);
        }
        std::size_t k = std::min(cfg_.k, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::vector<std::size_t> votes(n_beams_, 0);
        for (std::size_t i = 0; i < k; ++i) ++votes[samples_[dist[i].second][2]];
        std::vector<std::size_t> order(n_beams_);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return votes[x] > votes[y]; });
        std::vector<std::size_t> out;
        for (std::size_t b : order)
            if (votes[b] > 0 && out.size() < budget) out.push_back(b);
        const std::size_t top = out.front();
        for (std::size_t r = 1; out.size() < budget && r < n_beams_; ++r) {
            for (long c : {static_cast<long>(top) - static_cast<long>(r), static_cast<long>(top) + static_cast<long>(r)}) {
                if (c < 0 || c >= static_cast<long>(n_beams_) || out.size() >= budget) continue;
                if (std::find(out.begin(), out.end(), static_cast<std::size_t>(c)) == out.end())
                    out.push_back(static_cast<std::size_t>(c));
            }
        }
        return out;
    }

private:
    KnnConfig cfg_;
    std::size_t n_beams_;
    std::vector<std::array<std::size_t, 3>> samples_;
    std::vector<std::size_t> served_;
};

/// Measures every beam and serves the strongest.
struct FullMeasurementPolicy {
    std::size_t n_beams;

    BeamAction operator()(std::span<const BeamObservation>) const {
        BeamAction a;
        a.measure.resize(n_beams);
        std::iota(a.measure.begin(), a.measure.end(), std::size_t{0});
        a.serve = best_measured;
        return a;
    }
};

} // namespace occam_rrm
