#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "occam_rrm/core/json_io.hpp"
#include "occam_rrm/core/mdp.hpp"
#include "occam_rrm/envs/config.hpp"
#include "occam_rrm/solvers/gp.hpp"
#include "occam_rrm/solvers/policies.hpp"

namespace occam_rrm {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    [[nodiscard]] std::size_t dim() const { return lower.size(); }

    void validate() const {
        require(!lower.empty() && lower.size() == upper.size(), "Bounds: need matching nonempty lower/upper");
        for (std::size_t i = 0; i < lower.size(); ++i) require(lower[i] <= upper[i], "Bounds: lower > upper");
    }

    [[nodiscard]] std::vector<double> project(std::vector<double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
        return x;
    }

    [[nodiscard]] bool contains(const std::vector<double>& x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        return x.size() == lower.size();
    }
};

struct ObjectiveValue {
    double value = 0.0;
    double std_error = 0.0;
};

/// Black-box objective to maximize.
using Objective = std::function<ObjectiveValue(const std::vector<double>&)>;

inline Objective scalar_objective(std::function<double(const std::vector<double>&)> f) {
    return [f = std::move(f)](const std::vector<double>& x) { return ObjectiveValue{f(x), 0.0}; };
}

struct Evaluation {
    std::vector<double> theta;
    double value = 0.0;
    double std_error = 0.0;
};

struct TuneResult {
    std::vector<double> best_theta;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<Evaluation> evaluations;
    bool truncated = false;      ///< stopped by the evaluation budget, not by convergence
    std::size_t objective_calls = 0;
    std::string notes;           ///< parameter handling, e.g. integer rounding

    void record(const std::vector<double>& theta, const ObjectiveValue& v) {
        evaluations.push_back({theta, v.value, v.std_error});
        if (v.value > best_value) {
            best_value = v.value;
            best_theta = theta;
        }
    }
};

inline void write_csv(std::ostream& os, const TuneResult& r) {
    std::size_t d = r.best_theta.size();
    os << "eval";
    for (std::size_t i = 0; i < d; ++i) os << ",theta" << i;
    os << ",value,std_error\n";
    for (std::size_t k = 0; k < r.evaluations.size(); ++k) {
        const auto& e = r.evaluations[k];
        os << k;
        for (double x : e.theta) os << ',' << format_double(x);
        os << ',' << format_double(e.value) << ',' << format_double(e.std_error) << '\n';
    }
}

inline Json to_json(const TuneResult& r) {
    return {{"best_theta", r.best_theta},     {"best_value", r.best_value},
            {"n_evaluations", r.evaluations.size()}, {"objective_calls", r.objective_calls},
            {"truncated", r.truncated},       {"notes", r.notes}};
}

/// Bounded Nelder–Mead maximization with reflection, expansion,
/// contraction and shrink coefficients (1, 2, 0.5, 0.5). Trial points are
/// projected onto the box. Stops when every vertex is within `tol` of the
/// best one or the budget is spent (then `truncated` is set).
inline TuneResult nelder_mead(const Objective& f, std::vector<double> theta0, const Bounds& bounds,
                              std::size_t max_evals = 500, double tol = 1e-6) {
    bounds.validate();
    require(theta0.size() == bounds.dim(), "nelder_mead: theta0 dimension mismatch");
    require(bounds.contains(theta0), "nelder_mead: theta0 outside bounds");
    require(max_evals >= 1, "nelder_mead: max_evals must be positive");
    const std::size_t n = theta0.size();
    TuneResult res;
    struct Vertex {
        std::vector<double> x;
        double f;
    };
    auto eval = [&](std::vector<double> x) {
        x = bounds.project(std::move(x));
        auto v = f(x);
        ++res.objective_calls;
        res.record(x, v);
        return Vertex{std::move(x), v.value};
    };
    auto budget_left = [&] { return res.objective_calls < max_evals; };

    std::vector<Vertex> simplex{eval(theta0)};
    for (std::size_t i = 0; i < n && budget_left(); ++i) {
        auto x = theta0;
        double h = 0.1 * (bounds.upper[i] - bounds.lower[i]);
        if (h == 0.0) h = 0.1;
        x[i] = x[i] + h <= bounds.upper[i] ? x[i] + h : x[i] - h;
        simplex.push_back(eval(x));
    }
    if (simplex.size() < n + 1) {
        res.truncated = true;
        return res;
    }
    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f > b.f; };
    auto affine = [&](const std::vector<double>& c, const std::vector<double>& w, double coef) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + coef * (c[i] - w[i]);
        return x;
    };
    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        double diameter = 0.0;
        for (std::size_t v = 1; v <= n; ++v)
            for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
        if (diameter < tol) break;
        if (!budget_left()) {
            res.truncated = true;
            break;
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) c[i] += simplex[v].x[i] / static_cast<double>(n);
        const auto& worst = simplex[n];
        auto r = eval(affine(c, worst.x, 1.0));
        if (r.f > simplex[0].f && budget_left()) {
            auto e = eval(affine(c, worst.x, 2.0));
            simplex[n] = e.f > r.f ? e : r;
        } else if (r.f > simplex[n - 1].f) {
            simplex[n] = r;
        } else if (budget_left()) {
            bool outside = r.f > worst.f;
            auto k = eval(affine(c, worst.x, outside ? 0.5 : -0.5));
            if (k.f > (outside ? r.f : worst.f)) {
                simplex[n] = k;
            } else {
                for (std::size_t v = 1; v <= n && budget_left(); ++v) {
                    std::vector<double> x(n);
                    for (std::size_t i = 0; i < n; ++i) x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
                    simplex[v] = eval(x);
                }
            }
        }
    }
    return res;
}

namespace detail {

inline double radical_inverse(std::size_t index, unsigned base, const std::vector<unsigned>& perm) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += perm[index % base] * f;
        index /= base;
        f *= inv;
    }
    return r;
}

} // namespace detail

/// Halton points in [0,1)^d with a random digit permutation per base
/// (digit 0 kept fixed so points stay inside the cube), skipping index 0.
inline std::vector<std::vector<double>> scrambled_halton(std::size_t n, std::size_t dim, std::uint64_t seed) {
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    require(dim >= 1 && dim <= std::size(primes), "scrambled_halton: dimension must lie in [1,12]");
    Rng rng = Rng(seed).split("halton");
    std::vector<std::vector<unsigned>> perms(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        unsigned b = primes[d];
        perms[d].resize(b);
        std::iota(perms[d].begin(), perms[d].end(), 0u);
        for (unsigned i = b - 1; i > 1; --i) std::swap(perms[d][i], perms[d][1 + rng() % i]);
    }
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) pts[i][d] = detail::radical_inverse(i + 1, primes[d], perms[d]);
    return pts;
}

struct BoTuneConfig {
    double length_scale = 0.2; ///< in units of the normalized [0,1] box
    double signal_var = 1.0;
    double noise_std = 1e-3;   ///< on standardized objective values
    double kappa = 2.0;
    std::size_t lattice_points = 0; ///< per dimension; 0 = automatic (1001 in 1-D, ~2000 total otherwise)
};

/// Bayesian optimization: a scrambled Halton design covering a quarter of
/// the budget (at least two points), then UCB over a regular lattice on a
/// GP fitted to standardized values. Lattice points already evaluated are
/// skipped. Deterministic given the seed.
inline TuneResult bo_tune(const Objective& f, const Bounds& bounds, std::size_t budget, const BoTuneConfig& cfg = {},
                          std::uint64_t seed = 0) {
    bounds.validate();
    require(budget >= 2, "bo_tune: budget must be at least 2");
    const std::size_t d = bounds.dim();
    TuneResult res;
    auto to_theta = [&](const std::vector<double>& u) {
        std::vector<double> x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = bounds.lower[i] + u[i] * (bounds.upper[i] - bounds.lower[i]);
        return x;
    };
    std::vector<std::vector<double>> us;
    std::vector<double> ys;
    auto eval = [&](const std::vector<double>& u) {
        auto theta = to_theta(u);
        auto v = f(theta);
        ++res.objective_calls;
        res.record(theta, v);
        us.push_back(u);
        ys.push_back(v.value);
    };
    std::size_t n0 = std::min(budget, std::max<std::size_t>(2, (budget + 3) / 4));
    for (const auto& u : scrambled_halton(n0, d, seed)) eval(u);

    std::size_t g = cfg.lattice_points;
    if (g == 0) g = d == 1 ? 1001 : std::max<std::size_t>(3, static_cast<std::size_t>(std::pow(2000.0, 1.0 / static_cast<double>(d))));
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= g;
    std::vector<std::vector<double>> lattice(total, std::vector<double>(d));
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (std::size_t i = 0; i < d; ++i) {
            lattice[k][i] = static_cast<double>(rem % g) / static_cast<double>(g - 1);
            rem /= g;
        }
    }
    std::vector<char> used(total, 0);

    while (res.objective_calls < budget) {
        double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
        double var = 0.0;
        for (double y : ys) var += (y - mean) * (y - mean);
        double sd = std::sqrt(var / static_cast<double>(ys.size()));
        if (!(sd > 1e-12)) sd = 1.0;
        GpSurrogate gp;
        gp.kernel.length_scales.assign(d, cfg.length_scale);
        gp.kernel.signal_var = cfg.signal_var;
        for (std::size_t i = 0; i < us.size(); ++i) gp.add(us[i], (ys[i] - mean) / sd, cfg.noise_std);
        GpPosterior post(gp);
        std::size_t best = total;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < total; ++k) {
            if (used[k]) continue;
            auto p = post.predict(lattice[k]);
            double score = p.mean + cfg.kappa * std::sqrt(p.variance);
            if (score > best_score) {
                best_score = score;
                best = k;
            }
        }
        if (best == total) break; // lattice exhausted
        used[best] = 1;
        eval(lattice[best]);
    }
    return res;
}

/// Uniform random search baseline with the same budget conventions.
inline TuneResult random_search(const Objective& f, const Bounds& bounds, std::size_t budget, std::uint64_t seed = 0) {
    bounds.validate();
    TuneResult res;
    Rng rng = Rng(seed).split("random_search");
    for (std::size_t k = 0; k < budget; ++k) {
        std::vector<double> x(bounds.dim());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = bounds.lower[i] + rng.uniform() * (bounds.upper[i] - bounds.lower[i]);
        ++res.objective_calls;
        res.record(x, f(x));
    }
    return res;
}

/// Central-difference gradient; near a bound the probe is clipped and the
/// actual spacing used.
inline std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& theta, double delta,
                                       const Bounds& bounds, std::size_t* calls = nullptr) {
    require(delta > 0.0, "fd_gradient: fd_delta must be positive");
    std::vector<double> g(theta.size(), 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        auto plus = theta, minus = theta;
        plus[i] += delta;
        minus[i] -= delta;
        plus = bounds.project(plus);
        minus = bounds.project(minus);
        double h = plus[i] - minus[i];
        if (h <= 0.0) continue;
        g[i] = (f(plus).value - f(minus).value) / h;
        if (calls) *calls += 2;
    }
    return g;
}

/// Projected gradient ascent on finite-difference gradients. Only the
/// iterates are recorded as evaluations; probe calls are counted in
/// `objective_calls`.
inline TuneResult fd_ascent(const Objective& f, std::vector<double> theta0, const Bounds& bounds, double step,
                            double fd_delta, std::size_t iters) {
    bounds.validate();
    require(fd_delta > 0.0, "fd_ascent: fd_delta must be positive");
    require(step >= 0.0, "fd_ascent: step must be nonnegative");
    require(bounds.contains(theta0), "fd_ascent: theta0 outside bounds");
    TuneResult res;
    auto theta = std::move(theta0);
    for (std::size_t k = 0; k <= iters; ++k) {
        res.record(theta, f(theta));
        ++res.objective_calls;
        if (k == iters) break;
        auto g = fd_gradient(f, theta, fd_delta, bounds, &res.objective_calls);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += step * g[i];
        theta = bounds.project(theta);
    }
    return res;
}

// Expert-policy families on the simulated environments.

enum class PolicyFamily { mro, es_thresholds, olla_steps, custom };

inline PolicyFamily parse_policy_family(std::string_view s) {
    if (s == "mro") return PolicyFamily::mro;
    if (s == "es_thresholds") return PolicyFamily::es_thresholds;
    if (s == "olla_steps") return PolicyFamily::olla_steps;
    if (s == "custom") return PolicyFamily::custom;
    throw PreconditionError("unknown policy family '" + std::string(s) + "' (known: mro, es_thresholds, olla_steps, custom)");
}

/// Runs one episode of a custom family on a fresh copy of the environment.
using CustomEpisode = std::function<EpisodeLog(AnyEnv& env, const std::vector<double>& theta, std::size_t horizon, std::uint64_t seed)>;

/// Parameterized expert policy.
///   mro:           θ = (hysteresis dB, time-to-trigger steps) on a handover env
///   es_thresholds: θ = (lower, upper) utilization thresholds on an energy env
///   olla_steps:    θ = (step_up dB[, target BLER]) of ILLA/OLLA on a link env
struct ParamPolicy {
    PolicyFamily family = PolicyFamily::custom;
    std::vector<double> theta;
    Bounds bounds;
    CustomEpisode custom;

    void validate() const {
        if (!bounds.lower.empty()) {
            require(bounds.dim() == theta.size(), "ParamPolicy: bounds dimension mismatch");
            require(bounds.contains(theta), "ParamPolicy: theta outside bounds");
        }
    }
};

/// How a family maps real parameters onto its policy; recorded in
/// TuneResult notes.
inline std::string family_notes(PolicyFamily f) {
    switch (f) {
    case PolicyFamily::mro: return "time_to_trigger rounded to the nearest integer, at least 1";
    case PolicyFamily::es_thresholds: return "thresholds clamped to [0,1]; lower forced below upper by 1e-6";
    case PolicyFamily::olla_steps: return "target BLER defaults to 0.1 when theta has one entry";
    case PolicyFamily::custom: break;
    }
    return "";
}

inline std::size_t rounded_ttt(double x) { return static_cast<std::size_t>(std::max(1.0, std::round(x))); }

namespace detail {

inline EpisodeLog run_param_episode(AnyEnv& env, const ParamPolicy& p, std::size_t horizon, std::uint64_t seed) {
    const auto& th = p.theta;
    switch (p.family) {
    case PolicyFamily::mro: {
        auto* e = std::get_if<HandoverEnv>(&env);
        if (!e) throw ConfigError("/env/env", "policy family 'mro' needs a handover environment");
        require(th.size() == 2, "mro family: theta = (hysteresis, time_to_trigger)");
        MroController ctl({std::max(0.0, th[0]), rounded_ttt(th[1])});
        return run_episode(*e, ctl, horizon, seed);
    }
    case PolicyFamily::es_thresholds: {
        auto* e = std::get_if<EnergyEnv>(&env);
        if (!e) throw ConfigError("/env/env", "policy family 'es_thresholds' needs an energy environment");
        require(th.size() == 2, "es_thresholds family: theta = (lower, upper)");
        double hi = std::clamp(th[1], 1e-6, 1.0);
        double lo = std::clamp(th[0], 0.0, hi - 1e-6);
        EsThresholdPolicy pol{e, {lo, hi}};
        return run_episode(*e, pol, horizon, seed);
    }
    case PolicyFamily::olla_steps: {
        auto* e = std::get_if<LinkAdaptEnv>(&env);
        if (!e) throw ConfigError("/env/env", "policy family 'olla_steps' needs a link_adapt environment");
        require(th.size() == 1 || th.size() == 2, "olla_steps family: theta = (step_up[, target_bler])");
        IllaOllaPolicy pol(e->config(), th.size() == 2 ? th[1] : 0.1, std::max(th[0], 1e-9));
        return run_episode(*e, pol, horizon, seed);
    }
    case PolicyFamily::custom:
        require(static_cast<bool>(p.custom), "custom family: no episode function given");
        return p.custom(env, th, horizon, seed);
    }
    throw PreconditionError("unknown policy family");
}

} // namespace detail

/// Mean discounted return over `n_episodes` and its standard error. Episode
/// i uses derive_seed(seed, i) whatever theta is, so evaluations at
/// different parameters share their random numbers.
inline ObjectiveValue evaluate_policy(const Json& env_cfg, const ParamPolicy& policy, std::size_t n_episodes,
                                      std::size_t horizon, std::uint64_t seed, double discount = kDefaultDiscount,
                                      const std::filesystem::path& base_dir = ".") {
    require(n_episodes >= 1, "evaluate_policy: n_episodes must be at least 1");
    policy.validate();
    AnyEnv env = make_env(env_cfg, "/env", base_dir);
    std::vector<double> returns;
    for (std::size_t i = 0; i < n_episodes; ++i) {
        auto log = detail::run_param_episode(env, policy, horizon, derive_seed(seed, i));
        returns.push_back(discounted_return(log.rewards(), discount));
    }
    double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(n_episodes);
    if (n_episodes == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    return {mean, std::sqrt(ss / static_cast<double>(n_episodes - 1) / static_cast<double>(n_episodes))};
}

/// Objective θ ↦ evaluate_policy(...) for a tuner.
inline Objective policy_objective(Json env_cfg, ParamPolicy proto, std::size_t n_episodes, std::size_t horizon,
                                  std::uint64_t seed, double discount = kDefaultDiscount) {
    return [=](const std::vector<double>& theta) {
        ParamPolicy p = proto;
        p.theta = theta;
        p.bounds = {};
        return evaluate_policy(env_cfg, p, n_episodes, horizon, seed, discount);
    };
}

} // namespace occam_rrm
