#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/json_io.hpp"

namespace occam_rrm {

/// Squared-exponential kernel with one length scale per input dimension.
struct SeKernel {
    std::vector<double> length_scales{1.0};
    double signal_var = 1.0;

    [[nodiscard]] std::size_t dim() const { return length_scales.size(); }

    [[nodiscard]] double operator()(std::span<const double> a, std::span<const double> b) const {
        double d2 = 0.0;
        for (std::size_t i = 0; i < length_scales.size(); ++i) {
            double d = (a[i] - b[i]) / length_scales[i];
            d2 += d * d;
        }
        return signal_var * std::exp(-0.5 * d2);
    }
};

struct GpPoint {
    std::vector<double> x;
    double y = 0.0;
    double noise_std = 0.0;
};

/// Gaussian-process belief over an unknown function: prior plus data.
struct GpSurrogate {
    SeKernel kernel;
    double prior_mean = 0.0;
    std::vector<GpPoint> points;

    void add(std::vector<double> x, double y, double noise_std = 0.0) {
        require(x.size() == kernel.dim(), "GpSurrogate: input dimension mismatch");
        require(noise_std >= 0.0, "GpSurrogate: negative noise_std");
        points.push_back({std::move(x), y, noise_std});
    }
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Fitted posterior of a surrogate. Holds the Cholesky factor of the
/// noisy Gram matrix; if it is not positive definite a 1e-8 jitter is
/// added once before giving up.
class GpPosterior {
public:
    explicit GpPosterior(const GpSurrogate& s) : s_(s) {
        require(s.kernel.signal_var > 0.0, "GpSurrogate: signal_var must be positive");
        for (double l : s.kernel.length_scales) require(l > 0.0, "GpSurrogate: length scales must be positive");
        const auto n = static_cast<Eigen::Index>(s.points.size());
        if (n == 0) return;
        Eigen::MatrixXd k(n, n);
        Eigen::VectorXd resid(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& pi = s.points[static_cast<std::size_t>(i)];
            require(pi.x.size() == s.kernel.dim(), "GpSurrogate: input dimension mismatch");
            resid(i) = pi.y - s.prior_mean;
            for (Eigen::Index j = 0; j <= i; ++j) {
                k(i, j) = k(j, i) = s.kernel(pi.x, s.points[static_cast<std::size_t>(j)].x);
            }
            k(i, i) += pi.noise_std * pi.noise_std;
        }
        llt_.compute(k);
        if (llt_.info() != Eigen::Success) {
            k.diagonal().array() += 1e-8;
            llt_.compute(k);
            if (llt_.info() != Eigen::Success)
                throw NumericalError("gp_posterior: Gram matrix is numerically singular even with 1e-8 jitter");
        }
        alpha_ = llt_.solve(resid);
    }

    [[nodiscard]] GpPrediction predict(std::span<const double> x) const {
        require(x.size() == s_.kernel.dim(), "gp_posterior: query dimension mismatch");
        if (s_.points.empty()) return {s_.prior_mean, s_.kernel.signal_var};
        const auto n = static_cast<Eigen::Index>(s_.points.size());
        Eigen::VectorXd kx(n);
        for (Eigen::Index i = 0; i < n; ++i) kx(i) = s_.kernel(x, s_.points[static_cast<std::size_t>(i)].x);
        double mean = s_.prior_mean + kx.dot(alpha_);
        Eigen::VectorXd v = llt_.matrixL().solve(kx);
        double var = std::max(0.0, s_.kernel(x, x) - v.squaredNorm());
        return {mean, var};
    }

private:
    GpSurrogate s_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;
};

inline GpPrediction gp_posterior(const GpSurrogate& s, std::span<const double> query) {
    return GpPosterior(s).predict(query);
}

/// Index of argmax mean + κ·√variance (first on ties).
inline std::size_t ucb_acquire_index(const GpSurrogate& s, std::span<const std::vector<double>> candidates, double kappa) {
    require(!candidates.empty(), "ucb_acquire: no candidates");
    require(kappa >= 0.0, "ucb_acquire: kappa must be nonnegative");
    GpPosterior post(s);
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto p = post.predict(candidates[i]);
        double score = p.mean + kappa * std::sqrt(p.variance);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

inline std::vector<double> ucb_acquire(const GpSurrogate& s, std::span<const std::vector<double>> candidates, double kappa) {
    return candidates[ucb_acquire_index(s, candidates, kappa)];
}

inline Json to_json(const GpSurrogate& s) {
    Json pts = Json::array();
    for (const auto& p : s.points) pts.push_back({{"x", p.x}, {"y", p.y}, {"noise_std", p.noise_std}});
    return {{"kernel", {{"type", "squared-exponential"}, {"length_scales", s.kernel.length_scales}, {"signal_var", s.kernel.signal_var}}},
            {"prior_mean", s.prior_mean},
            {"points", pts}};
}

inline GpSurrogate gp_from_json(const Json& j) {
    JsonObject o(j, "");
    o.only({"kernel", "prior_mean", "points"});
    GpSurrogate s;
    auto k = o.object("kernel");
    k.only({"type", "length_scales", "signal_var"});
    if (k.get_or<std::string>("type", "squared-exponential") != "squared-exponential")
        throw ConfigError(k.path_of("type"), "only the squared-exponential kernel is supported");
    s.kernel.length_scales = k.get<std::vector<double>>("length_scales");
    s.kernel.signal_var = k.get<double>("signal_var");
    s.prior_mean = o.get_or("prior_mean", 0.0);
    const auto& pts = o.raw("points");
    if (!pts.is_array()) throw ConfigError("/points", "expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        JsonObject p(pts[i], "/points/" + std::to_string(i));
        p.only({"x", "y", "noise_std"});
        s.points.push_back({p.get<std::vector<double>>("x"), p.get<double>("y"), p.get_or("noise_std", 0.0)});
    }
    return s;
}

} // namespace occam_rrm
