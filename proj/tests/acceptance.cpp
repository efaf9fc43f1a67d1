// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "occam_rrm/occam_rrm.hpp"

namespace fs = std::filesystem;
using namespace occam_rrm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("occam_rrm_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// 1. Water-filling against a simplex lattice.

/// Best objective over the lattice {p = P·k/m : Σk = m} with the largest
/// m giving at most `max_points` points.
double simplex_grid_best(const std::vector<double>& g, double noise, double power, std::size_t max_points,
                         std::size_t* resolution) {
    const std::size_t n = g.size();
    auto count = [n](std::size_t m) {
        double c = 1.0; // C(m + n - 1, n - 1)
        for (std::size_t i = 1; i < n; ++i) c = c * static_cast<double>(m + i) / static_cast<double>(i);
        return c;
    };
    // A single channel has one lattice point at any resolution.
    std::size_t m = n == 1 ? 10000 : 1;
    while (n > 1 && count(m + 1) <= static_cast<double>(max_points)) ++m;
    *resolution = m;
    double best = -1.0;
    std::vector<std::size_t> k(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == n) {
            k[i] = left;
            double r = 0.0;
            for (std::size_t j = 0; j < n; ++j) r += std::log2(1.0 + power * static_cast<double>(k[j]) / static_cast<double>(m) * g[j] / noise);
            best = std::max(best, r);
            return;
        }
        for (std::size_t v = 0; v <= left; ++v) {
            k[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, m);
    return best;
}

Outcome criterion_water_filling() {
    auto t0 = Clock::now();
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> ug(0.05, 3.0);
    std::uniform_int_distribution<int> un(1, 8);
    std::uniform_real_distribution<double> up(0.2, 10.0);
    double worst_gap = 0.0;
    double worst_fine_gap = 0.0;
    std::size_t kkt_fail = 0, beaten = 0, fine_fail = 0;
    for (int inst = 0; inst < 100; ++inst) {
        std::vector<double> g(static_cast<std::size_t>(un(gen)));
        for (double& x : g) x = ug(gen);
        const double noise = 1.0, power = up(gen);
        auto wf = water_fill(g, noise, power);
        double obj = parallel_rate(wf.powers, g, noise);
        double sum = std::accumulate(wf.powers.begin(), wf.powers.end(), 0.0);
        if (std::abs(sum - power) > 1e-9) ++kkt_fail;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (wf.powers[i] < 0.0) ++kkt_fail;
            if (wf.powers[i] > 0.0 && std::abs(wf.powers[i] + noise / g[i] - wf.water_level) > 1e-9) ++kkt_fail;
            if (wf.powers[i] == 0.0 && noise / g[i] < wf.water_level - 1e-9) ++kkt_fail;
        }
        std::size_t m = 0;
        double grid = simplex_grid_best(g, noise, power, 10000, &m);
        if (grid > obj + 1e-9) ++beaten;
        worst_gap = std::max(worst_gap, obj - grid);
        // Lattices of spacing ≤ 1% resolve the optimum to better than 1e-3.
        if (m >= 100) {
            worst_fine_gap = std::max(worst_fine_gap, obj - grid);
            if (obj - grid > 1e-3) ++fine_fail;
        }
    }
    double secs = seconds_since(t0);
    bool pass = kkt_fail == 0 && beaten == 0 && fine_fail == 0 && secs < 5.0;
    return {pass, "KKT violations " + std::to_string(kkt_fail) + ", grid beats water-filling " + std::to_string(beaten) +
                      "x, max gap on fine lattices " + fmt(worst_fine_gap) + " (all lattices " + fmt(worst_gap) + "), " +
                      fmt(secs, 3) + " s"};
}

// 2. MMSE against random precoders.

Outcome criterion_mmse() {
    auto t0 = Clock::now();
    const double power = 10.0, noise = 1.0; // 10 dB transmit SNR
    Rng rng(77);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::size_t losses = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::size_t random_wins = 0;
    for (int inst = 0; inst < 100; ++inst) {
        auto h = ChannelMatrix::rayleigh(2, 2, noise, rng);
        auto w = mmse_precoder(h, power);
        double ref = sum_rate(h, w);
        double best_random = 0.0;
        for (int k = 0; k < 10000; ++k) {
            // Full power: scaling a precoder up never lowers any SINR.
            CMatrix m(2, 2);
            for (Eigen::Index i = 0; i < 4; ++i) m(i) = {n01(rng), n01(rng)};
            m *= std::sqrt(power) / m.norm();
            double r = sum_rate(h, {m, power});
            random_wins += r > ref ? 1 : 0;
            best_random = std::max(best_random, r);
        }
        if (best_random > ref) ++losses;
        worst_margin = std::min(worst_margin, ref - best_random);
    }
    double secs = seconds_since(t0);
    return {losses == 0 && secs < 30.0, "instances where a random precoder wins: " + std::to_string(losses) +
                                            ", random precoders above MMSE " + fmt(100.0 * static_cast<double>(random_wins) / 1e6, 3) +
                                            "% of 1e6, smallest MMSE margin " + fmt(worst_margin) + " bit/s/Hz, " + fmt(secs, 3) + " s"};
}

// 3. Exact planners.

TabularMdp random_mdp(std::size_t ns, std::size_t na, double beta, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto m = TabularMdp::zeros(ns, na, beta);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t a = 0; a < na; ++a) {
            double total = 0.0;
            std::vector<double> row(ns);
            for (double& x : row) total += x = u(gen) < 0.5 ? u(gen) : 0.0;
            if (total == 0.0) {
                row[s] = 1.0;
                total = 1.0;
            }
            for (std::size_t t = 0; t < ns; ++t) m.set_p(s, a, t, row[t] / total);
            m.set_r(s, a, 2.0 * u(gen) - 1.0);
        }
    // Renormalize against rounding.
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t a = 0; a < na; ++a) {
            double total = 0.0;
            for (double x : m.row(s, a)) total += x;
            for (std::size_t t = 0; t < ns; ++t) m.set_p(s, a, t, m.p(s, a, t) / total);
        }
    m.validate();
    return m;
}

Outcome criterion_planners() {
    auto t0 = Clock::now();
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> us(1, 8), ua(2, 4);
    std::size_t disagree = 0;
    for (int inst = 0; inst < 100; ++inst) {
        auto m = random_mdp(static_cast<std::size_t>(us(gen)), static_cast<std::size_t>(ua(gen)), 0.9, gen);
        if (value_iteration(m, 1e-10).policy != policy_iteration(m).policy) ++disagree;
    }
    std::size_t enum_fail = 0;
    std::uniform_int_distribution<int> us6(2, 6);
    for (int inst = 0; inst < 20; ++inst) {
        auto ns = static_cast<std::size_t>(us6(gen));
        auto m = random_mdp(ns, 3, 0.9, gen);
        auto vi = value_iteration(m, 1e-10);
        // Exhaustive oracle: the best policy maximizes every state's value.
        std::vector<std::size_t> pi(ns, 0), best_pi;
        std::vector<double> best_v(ns, -std::numeric_limits<double>::infinity());
        std::size_t total = 1;
        for (std::size_t s = 0; s < ns; ++s) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            for (std::size_t s = 0; s < ns; ++s) {
                pi[s] = c % 3;
                c /= 3;
            }
            auto v = policy_evaluation(m, pi);
            double sv = std::accumulate(v.begin(), v.end(), 0.0);
            if (sv > std::accumulate(best_v.begin(), best_v.end(), 0.0) + 1e-12) {
                best_v = v;
                best_pi = pi;
            }
        }
        auto vi_v = policy_evaluation(m, vi.policy);
        for (std::size_t s = 0; s < ns; ++s)
            if (vi_v[s] < best_v[s] - 1e-9) {
                ++enum_fail;
                break;
            }
        if (vi.policy != best_pi) {
            // Accept only exact value ties between distinct optimal policies.
            for (std::size_t s = 0; s < ns; ++s)
                if (std::abs(vi_v[s] - best_v[s]) > 1e-9) {
                    ++enum_fail;
                    break;
                }
        }
    }
    double secs = seconds_since(t0);
    return {disagree == 0 && enum_fail == 0 && secs < 60.0,
            "VI/PI policy disagreements " + std::to_string(disagree) + "/100, enumeration mismatches " +
                std::to_string(enum_fail) + "/20, " + fmt(secs, 3) + " s"};
}

// 4. Q-learning against value iteration.

AdmissionConfig small_admission() {
    AdmissionConfig c;
    c.capacity = 3.0;
    c.classes = {{1.0, 1.0, 1.0, 4.0, 0.0}, {2.0, 1.0, 1.0, 1.0, 0.0}};
    return c;
}

Outcome criterion_q_learning() {
    auto t0 = Clock::now();
    AdmissionEnv env(small_admission());
    const double beta = 0.9;
    auto mdp = env_true_mdp(env, beta);
    auto vi = value_iteration(mdp, 1e-10);
    QLearningConfig qc;
    qc.discount = beta;
    qc.steps_per_episode = 200000;
    // Optimism at r_max / (1 - discount) pushes exploration into rare full states.
    qc.initial_q = 4.0 / (1.0 - beta);
    auto q = q_learning(env, qc, 7);
    const auto& states = env.model_states();
    std::size_t match = 0;
    for (std::size_t s = 0; s < states.size(); ++s) {
        // Accept is inadmissible when the waiting request does not fit.
        const auto& core = states[s];
        std::vector<std::size_t> acts;
        for (std::size_t a = 0; a < 3; ++a)
            if (a != 0 || core.pending < 0 || env.fits(core)) acts.push_back(a);
        double best = -std::numeric_limits<double>::infinity();
        for (auto a : acts) best = std::max(best, q_value(mdp, vi.values, s, a));
        std::size_t qa = q.greedy(s);
        // Any action tied for the optimum (within 1e-6) counts as a match.
        if (q_value(mdp, vi.values, s, qa) >= best - 1e-6) ++match;
    }
    double frac = static_cast<double>(match) / static_cast<double>(states.size());
    double secs = seconds_since(t0);
    return {frac >= 0.95 && secs < 60.0, std::to_string(match) + "/" + std::to_string(states.size()) +
                                             " states agree with value iteration (" + fmt(100 * frac, 3) + "%), " +
                                             fmt(secs, 3) + " s"};
}

// 5. MPC.

EnergyConfig spike_config() {
    EnergyConfig c;
    c.capacity = {5.0};
    c.power = {1.0};
    c.activation_delay = 2;
    c.trace = {0, 0, 0, 0, 0, 5, 5, 5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    c.qos_threshold = 0.0;
    c.qos_weight = 10.0;
    return c;
}

double total_reward(const EpisodeLog& log) {
    double s = 0.0;
    for (double r : log.rewards()) s += r;
    return s;
}

Outcome criterion_mpc() {
    EnergyEnv env(spike_config());
    EnergyMpcPolicy mpc{&env, 5, {&env, PredictorKind::oracle}};
    EnergyMpcPolicy greedy{&env, 1, {&env, PredictorKind::oracle}};
    double r_mpc = total_reward(run_episode(env, mpc, 20, 0));
    double r_greedy = total_reward(run_episode(env, greedy, 20, 0));

    // Deterministic 4-state chain, 2 actions, episode of 6 steps.
    const std::size_t T = 6;
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t next[4][2];
    double rew[4][2];
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t a = 0; a < 2; ++a) {
            next[s][a] = (s + 1 + a * 2) % 4;
            rew[s][a] = u(gen);
        }
    using S = std::pair<std::size_t, std::size_t>; // (state, time)
    DeterministicModel<S> model;
    model.n_actions = 2;
    model.step = [&](const S& st, std::size_t a, std::size_t) {
        if (st.second >= T) return std::pair{st, 0.0};
        return std::pair{S{next[st.first][a], st.second + 1}, rew[st.first][a]};
    };
    double optimum = -std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < (1u << T); ++code) {
        std::size_t s = 0;
        double total = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            std::size_t a = (code >> t) & 1u;
            total += rew[s][a];
            s = next[s][a];
        }
        optimum = std::max(optimum, total);
    }
    bool chain_ok = true;
    std::string chain_detail;
    for (std::size_t H : {T, T + 3}) {
        S st{0, 0};
        double total = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            auto plan = mpc_plan(model, st, H);
            auto [n, r] = model.step(st, plan.actions.front(), 0);
            total += r;
            st = n;
        }
        chain_ok = chain_ok && std::abs(total - optimum) < 1e-12;
        chain_detail += " H=" + std::to_string(H) + ":" + fmt(total, 6);
    }
    return {r_mpc > r_greedy && chain_ok, "spike trace total reward MPC(H=5) " + fmt(r_mpc) + " vs greedy(H=1) " +
                                              fmt(r_greedy) + "; chain optimum " + fmt(optimum, 6) + ", receding" +
                                              chain_detail};
}

// 6. ILLA/OLLA.

Outcome criterion_olla() {
    auto cfg = LinkAdaptConfig::standard();
    cfg.sinr_mean_db = 12.0;
    cfg.ar_coeff = 0.0;
    cfg.innovation_std_db = 0.0;
    cfg.report_noise_std_db = 1.0;
    cfg.report_bias_db = 2.0;
    const double target = 0.1;
    LinkAdaptEnv env(cfg);
    IllaOllaPolicy pol(cfg, target, 0.01);
    auto log = run_episode(env, pol, 100000, 3);
    auto acks = log.diagnostic("ack");
    double bler = 1.0 - std::accumulate(acks.begin(), acks.end(), 0.0) / static_cast<double>(acks.size());
    return {std::abs(bler - target) <= 0.03, "empirical BLER " + fmt(bler) + " against target " + fmt(target) +
                                                 " over 1e5 steps, final offset " + fmt(pol.olla().offset) + " dB"};
}

// 7. Thompson sampling link adaptation.

Outcome criterion_thompson() {
    auto cfg = LinkAdaptConfig::standard();
    const std::size_t steps = 50000;
    double worst = std::numeric_limits<double>::infinity();
    std::string detail;
    for (std::uint64_t seed : {1, 2, 3}) {
        LinkAdaptEnv env(cfg);
        ThompsonLinkPolicy ts(cfg);
        auto rt = run_episode(env, ts, steps, seed).rewards();
        double ts_mean = std::accumulate(rt.begin(), rt.end(), 0.0) / static_cast<double>(rt.size());
        double oracle = 0.0;
        std::size_t best_mcs = 0;
        for (std::size_t m = 0; m < cfg.rates.size(); ++m) {
            auto r = run_episode(env, ConstantPolicy<std::size_t>{m}, steps, seed).rewards();
            double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
            if (mean > oracle) {
                oracle = mean;
                best_mcs = m;
            }
        }
        double ratio = ts_mean / oracle;
        worst = std::min(worst, ratio);
        detail += " seed " + std::to_string(seed) + ": " + fmt(ts_mean) + "/" + fmt(oracle) + " (MCS " +
                  std::to_string(best_mcs) + ");";
    }
    return {worst >= 0.97, "Thompson / best fixed MCS throughput, worst ratio " + fmt(worst) + ";" + detail};
}

// 8. PF against round robin.

Outcome criterion_pf() {
    SchedulingConfig cfg;
    cfg.mean_efficiency = {4.0, 2.0, 1.0, 0.5};
    cfg.ewma_alpha = 0.01;
    std::size_t wins = 0;
    double margin = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SchedulingEnv env(cfg);
        PfPolicy pf(4, cfg.ewma_alpha);
        std::vector<EpisodeLog> a{run_episode(env, pf, 2000, seed)};
        std::vector<EpisodeLog> b{run_episode(env, RoundRobinPolicy{4}, 2000, seed)};
        double spf = *metrics_summary(a, MetricProfile::throughput).sum_log_throughput;
        double srr = *metrics_summary(b, MetricProfile::throughput).sum_log_throughput;
        if (spf > srr) ++wins;
        margin += (spf - srr) / 100.0;
    }
    return {wins >= 95, "PF sum-log throughput above round robin on " + std::to_string(wins) +
                            "/100 seeds, mean margin " + fmt(margin)};
}

// 9. Drift-plus-penalty stability.

Outcome criterion_dpp() {
    EnergyConfig cfg;
    cfg.capacity = {2.0, 2.0, 2.0};
    cfg.power = {1.0, 1.0, 1.0};
    cfg.poisson_rates = {2.4, 2.4}; // 4.8 of 6 units: 80% load
    cfg.n_users = 2;
    cfg.qos_threshold = 1e12;
    cfg.qos_weight = 0.0;
    const std::size_t steps = 100000;
    const double bound = 50.0;
    auto tail_mean = [&](const EpisodeLog& log) {
        auto b = log.diagnostic("backlog");
        return std::accumulate(b.begin() + static_cast<std::ptrdiff_t>(steps / 2), b.end(), 0.0) /
               static_cast<double>(steps - steps / 2);
    };
    bool ok = true;
    std::string detail = "bound " + fmt(bound) + ";";
    for (std::uint64_t seed : {1, 2}) {
        EnergyEnv env(cfg);
        double dpp = tail_mean(run_episode(env, DppEnergyPolicy{&env, 0.0}, steps, seed));
        double greedy = tail_mean(run_episode(env, EnergyMpcPolicy{&env, 1, {&env, PredictorKind::oracle}}, steps, seed));
        ok = ok && dpp < bound && greedy > bound;
        detail += " seed " + std::to_string(seed) + ": DPP " + fmt(dpp) + ", min-energy greedy " + fmt(greedy) + ";";
    }
    return {ok, detail};
}

// 10. Trunk reservation with thresholds tuned by a sweep.

Outcome criterion_trunk() {
    Json tune_cfg = Json::parse(R"({
      "name": "trunk-acceptance",
      "env": {"env": "admission", "capacity": 10,
              "classes": [{"arrival_rate": 3.0, "mean_holding": 1.0, "reward": 10.0},
                          {"arrival_rate": 12.0, "mean_holding": 1.0, "reward": 1.0}]},
      "solvers": [{"name": "trunk", "type": "trunk_reservation", "thresholds": [0, 0]}],
      "horizon": 2000,
      "n_episodes": 1,
      "seeds": {"base": 1000, "count": 5}
    })");
    std::vector<Json> values;
    for (int k = 0; k <= 9; ++k) values.push_back(k);
    auto dir = scratch_dir("trunk");
    auto sw = sweep(tune_cfg, {{"/solvers/0/thresholds/1", values}}, dir / "sweep");
    double best = -std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (const auto& row : sw.summary["rows"]) {
        double m = row["metrics"]["mean_reward"].get<double>();
        if (m > best) {
            best = m;
            best_k = row["values"][0].get<int>();
        }
    }
    Json eval_cfg = tune_cfg;
    eval_cfg["seeds"] = {{"base", 1}, {"count", 20}};
    eval_cfg["solvers"] = Json::array({{{"name", "accept_all"}, {"type", "accept_all"}},
                                       {{"name", "trunk"}, {"type", "trunk_reservation"}, {"thresholds", {0, best_k}}}});
    auto rep = run_experiment(parse_experiment(eval_cfg), dir / "eval");
    double acc = rep.summary["solvers"]["accept_all"]["metrics"]["mean_reward"].get<double>();
    double trunk = rep.summary["solvers"]["trunk"]["metrics"]["mean_reward"].get<double>();
    double gain = trunk / acc - 1.0;
    fs::remove_all(dir);
    return {gain >= 0.05, "tuned low-priority threshold " + std::to_string(best_k) + " (tuning seeds 1000-1004); on seeds 1-20 trunk " +
                              fmt(trunk) + " vs accept-all " + fmt(acc) + " per step, gain " + fmt(100 * gain, 3) + "%"};
}

// 11. Beam tracking across speeds.

Outcome criterion_beam() {
    const std::vector<double> speeds{0.5, 1.0, 2.0};
    const std::vector<std::uint64_t> seeds{11, 12, 13, 14, 15, 16, 17, 18};
    const std::size_t horizon = 200;
    std::vector<double> bo_acc, knn_acc;
    double full_min = 1.0;
    for (double v : speeds) {
        BeamformingConfig cfg;
        cfg.n_beams = 64;
        cfg.ue_speed = v;
        cfg.spatial_corr = 4.0;
        cfg.temporal_corr = 0.95;
        BeamformingEnv env(cfg);
        std::vector<EpisodeLog> bo, knn, full;
        BoTrackerConfig bc;
        bc.budget = 4;
        KnnConfig kc;
        kc.budget = 4;
        KnnBeamPredictor trained(env, kc);
        for (auto s : seeds) {
            bo.push_back(bo_beam_tracker(env, bc, horizon, s));
            KnnBeamPredictor k = trained;
            knn.push_back(run_episode(env, k, horizon, s));
            full.push_back(run_episode(env, FullMeasurementPolicy{64}, horizon, s));
        }
        bo_acc.push_back(*metrics_summary(bo, MetricProfile::beam).accuracy);
        knn_acc.push_back(*metrics_summary(knn, MetricProfile::beam).accuracy);
        full_min = std::min(full_min, *metrics_summary(full, MetricProfile::beam).accuracy);
    }
    bool monotone = bo_acc[0] >= bo_acc[1] && bo_acc[1] >= bo_acc[2];
    bool beats = bo_acc[2] > knn_acc[2];
    std::string detail = "BO accuracy at speeds 0.5/1/2: " + fmt(bo_acc[0]) + "/" + fmt(bo_acc[1]) + "/" + fmt(bo_acc[2]) +
                         "; kNN " + fmt(knn_acc[0]) + "/" + fmt(knn_acc[1]) + "/" + fmt(knn_acc[2]) +
                         "; full measurement min " + fmt(full_min, 17);
    return {monotone && beats && full_min == 1.0, detail};
}

// 12. Advisor golden table.

Outcome criterion_advisor() {
    struct Row {
        const char* uc;
        const char* variant;
        std::vector<Technique> allowed;
    };
    const std::vector<Row> rows = {
        {"PC", "known-channel", {Technique::static_optimization}},
        {"BF", "digital-known-channel", {Technique::static_optimization}},
        {"LA", "default", {Technique::bandits}},
        {"BF", "analog-hidden-channel", {Technique::bandits, Technique::supervised_learning}},
        {"BF", "analog-with-history", {Technique::bandits, Technique::supervised_learning}},
        {"SC", "default", {Technique::stochastic_rule, Technique::rl}},
        {"SC", "delay-constrained", {Technique::stochastic_rule, Technique::rl}},
        {"AC", "priority-classes", {Technique::exact_dp, Technique::stochastic_rule, Technique::rl}},
        {"AC", "diverse-requirements", {Technique::exact_dp, Technique::stochastic_rule, Technique::rl}},
        {"HO", "mro", {Technique::policy_tuning}},
        {"ES", "complex-multilayer", {Technique::rl}},
        {"ES", "thresholds", {Technique::policy_tuning}},
    };
    std::size_t bad = 0;
    std::string detail;
    for (const auto& r : rows) {
        auto t = advise(usecase_traits(r.uc, r.variant)).technique;
        if (std::find(r.allowed.begin(), r.allowed.end(), t) == r.allowed.end()) {
            ++bad;
            detail += std::string(" ") + r.uc + "/" + r.variant + "->" + std::string(to_string(t));
        }
    }
    std::size_t table_bad = 0, backed = 0;
    for (const auto& row : usecase_table()) {
        if (!row.prose_backed) continue;
        ++backed;
        if (advise(row.traits).technique != row.expected) ++table_bad;
    }
    return {bad == 0 && table_bad == 0, std::to_string(rows.size() - bad) + "/" + std::to_string(rows.size()) +
                                            " required rows and " + std::to_string(backed - table_bad) + "/" +
                                            std::to_string(backed) + " prose-backed table rows reproduced" + detail};
}

// 13. Determinism of every output file.

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[fs::relative(e.path(), root).generic_string()] = ss.str();
    }
    return out;
}

Outcome criterion_determinism() {
    const fs::path configs = fs::path(OCCAM_RRM_SOURCE_DIR) / "configs";
    auto dir = scratch_dir("determinism");
    std::size_t files = 0, diffs = 0;
    std::string detail;
    for (const char* name : {"beam_tracking.json", "link_adaptation.json", "handover_trace.json", "energy_spike_mpc.json",
                             "admission_small.json", "scheduling_pf.json"}) {
        auto cfg = load_experiment(configs / name);
        auto a = dir / (std::string(name) + ".a"), b = dir / (std::string(name) + ".b");
        run_experiment(cfg, a, 1);
        run_experiment(cfg, b, 3); // parallel cells must not change any byte
        auto ta = read_tree(a), tb = read_tree(b);
        files += ta.size();
        if (ta != tb) {
            ++diffs;
            detail += std::string(" ") + name;
        }
    }
    // Sweep outputs as well.
    Json base = Json::parse(std::ifstream(configs / "handover_mro.json"));
    base["horizon"] = 100;
    std::vector<Json> hyst{0.0, 2.0, 4.0};
    sweep(base, {{"/solvers/0/hysteresis_db", hyst}}, dir / "sweep.a", 1, configs);
    sweep(base, {{"/solvers/0/hysteresis_db", hyst}}, dir / "sweep.b", 2, configs);
    auto sa = read_tree(dir / "sweep.a"), sb = read_tree(dir / "sweep.b");
    files += sa.size();
    if (sa != sb) {
        ++diffs;
        detail += " sweep";
    }
    fs::remove_all(dir);
    return {diffs == 0 && files > 0, std::to_string(files) + " files compared across reruns (serial vs parallel), " +
                                         std::to_string(diffs) + " differing runs" + detail};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"water-filling matches simplex grid search, KKT holds", criterion_water_filling},
        {"MMSE beats 10^4 random precoders on 100 channels", criterion_mmse},
        {"value/policy iteration agree and match policy enumeration", criterion_planners},
        {"Q-learning greedy policy matches value iteration", criterion_q_learning},
        {"MPC beats greedy on the spike trace and is optimal on the chain", criterion_mpc},
        {"ILLA/OLLA drives BLER to target", criterion_olla},
        {"Thompson link adaptation reaches 97% of the best fixed MCS", criterion_thompson},
        {"PF beats round robin on sum-log throughput", criterion_pf},
        {"DPP keeps queues bounded where min-energy does not", criterion_dpp},
        {"tuned trunk reservation beats accept-all by 5%", criterion_trunk},
        {"beam tracking accuracy falls with speed, BO beats kNN", criterion_beam},
        {"advisor reproduces the technique map", criterion_advisor},
        {"reruns are byte-identical", criterion_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << (i + 1) << ": " << criteria[i].first << " -- " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
