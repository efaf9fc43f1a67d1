#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/rng.hpp"
#include "occam_rrm/envs/link_adapt.hpp"

namespace occam_rrm {

struct BetaPosterior {
    double alpha = 1.0;
    double beta = 1.0;

    [[nodiscard]] double mean() const { return alpha / (alpha + beta); }
};

inline BetaPosterior beta_update(BetaPosterior p, bool success) {
    (success ? p.alpha : p.beta) += 1.0;
    return p;
}

/// Beta draw as X/(X+Y) with X ~ Gamma(α), Y ~ Gamma(β).
inline double sample_beta(const BetaPosterior& p, Rng& rng) {
    require(p.alpha > 0.0 && p.beta > 0.0, "BetaPosterior: alpha and beta must be positive");
    double x = std::gamma_distribution<double>(p.alpha, 1.0)(rng);
    double y = std::gamma_distribution<double>(p.beta, 1.0)(rng);
    return x + y > 0.0 ? x / (x + y) : p.mean();
}

/// Thompson sampling: argmax_a values[a]·θ_a with θ_a ~ Beta(α_a, β_a).
inline std::size_t thompson_select(std::span<const BetaPosterior> posteriors, std::span<const double> values, Rng& rng) {
    require(!posteriors.empty(), "thompson_select: no arms");
    require(values.size() == posteriors.size(), "thompson_select: one value per arm");
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < posteriors.size(); ++a) {
        require(values[a] >= 0.0, "thompson_select: values must be nonnegative");
        double score = values[a] * sample_beta(posteriors[a], rng);
        if (score > best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

/// Outer-loop link adaptation offset. The step ratio is fixed so that the
/// offset has zero drift exactly when the NACK rate equals the target:
/// (1 − t)·step_up = t·step_down.
struct OllaState {
    double offset = 0.0;
    double step_up = 0.01;
    double step_down = 0.01 * 0.9 / 0.1;
    double target_bler = 0.1;

    static OllaState make(double step_up, double target_bler, double offset = 0.0) {
        require(step_up > 0.0, "OllaState: step_up must be positive");
        require(target_bler > 0.0 && target_bler < 1.0, "OllaState: target_bler must lie in (0,1)");
        return {offset, step_up, step_up * (1.0 - target_bler) / target_bler, target_bler};
    }
};

inline OllaState olla_step(OllaState s, bool ack) {
    s.offset += ack ? s.step_up : -s.step_down;
    return s;
}

/// Highest MCS whose threshold is ≤ sinr + offset (inclusive); MCS 0 when
/// none qualifies.
inline std::size_t illa_select(double sinr_report_db, double offset_db, std::span<const double> thresholds) {
    require(!thresholds.empty(), "illa_select: empty lookup table");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        require(thresholds[i] > thresholds[i - 1], "illa_select: thresholds must be strictly increasing");
    double eff = sinr_report_db + offset_db;
    std::size_t mcs = 0;
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        if (thresholds[i] <= eff) mcs = i;
    return mcs;
}

/// ILLA lookup table: SINR at which each MCS reaches the target BLER.
inline std::vector<double> illa_thresholds(const LinkAdaptConfig& cfg, double target_bler) {
    std::vector<double> out;
    for (const auto& c : cfg.bler_curves) out.push_back(c.sinr_for(target_bler));
    return out;
}

/// Gaussian posterior over the weights of a linear model y = xᵀw + noise.
struct LinearGaussianPosterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double noise_var = 1.0;

    static LinearGaussianPosterior prior(Eigen::Index dim, double prior_var, double noise_var) {
        return {Eigen::VectorXd::Zero(dim), prior_var * Eigen::MatrixXd::Identity(dim, dim), noise_var};
    }

    /// Point mass at `w`.
    static LinearGaussianPosterior point(Eigen::VectorXd w) {
        auto d = w.size();
        return {std::move(w), Eigen::MatrixXd::Zero(d, d), 1.0};
    }

    void update(const Eigen::VectorXd& x, double y) {
        Eigen::VectorXd cx = cov * x;
        double s = x.dot(cx) + noise_var;
        Eigen::VectorXd gain = cx / s;
        mean += gain * (y - x.dot(mean));
        cov -= gain * cx.transpose();
        cov = 0.5 * (cov + cov.transpose());
    }

    [[nodiscard]] Eigen::VectorXd sample(Rng& rng) const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        Eigen::VectorXd sd = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        std::normal_distribution<double> n01(0.0, 1.0);
        Eigen::VectorXd z(mean.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = n01(rng);
        return mean + es.eigenvectors() * sd.asDiagonal() * z;
    }
};

/// Per-arm beliefs of the compute-placement bandit: delay and energy as
/// linear functions of the task context.
struct EsArmPosterior {
    LinearGaussianPosterior delay;
    LinearGaussianPosterior energy;
};

/// Contextual Thompson step for CPU-vs-accelerator placement: sample delay
/// and energy per arm, keep the arms meeting the delay constraint and take
/// the least energy among them; if none qualifies, the least delay.
inline std::size_t cmab_es_select(const Eigen::VectorXd& context, std::span<const EsArmPosterior> arms,
                                  double delay_constraint, Rng& rng) {
    require(arms.size() >= 2, "cmab_es_select: at least two arms");
    std::size_t best_feasible = arms.size(), best_delay = 0;
    double min_energy = std::numeric_limits<double>::infinity();
    double min_delay = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < arms.size(); ++a) {
        double d = context.dot(arms[a].delay.sample(rng));
        double e = context.dot(arms[a].energy.sample(rng));
        if (d <= delay_constraint && e < min_energy) {
            min_energy = e;
            best_feasible = a;
        }
        if (d < min_delay) {
            min_delay = d;
            best_delay = a;
        }
    }
    return best_feasible < arms.size() ? best_feasible : best_delay;
}

} // namespace occam_rrm
