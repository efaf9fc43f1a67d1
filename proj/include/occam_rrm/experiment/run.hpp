#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "occam_rrm/core/json_io.hpp"
#include "occam_rrm/core/mdp.hpp"
#include "occam_rrm/envs/config.hpp"
#include "occam_rrm/experiment/schema.hpp"
#include "occam_rrm/experiment/schemas.hpp"
#include "occam_rrm/experiment/solvers.hpp"
#include "occam_rrm/version.hpp"

namespace occam_rrm {

struct SolverSpec {
    std::string name;
    Json config;
};

struct ExperimentConfig {
    std::string name = "experiment";
    Json env;
    std::vector<SolverSpec> solvers;
    std::size_t horizon = 0;
    std::size_t n_episodes = 1;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path outputs = "results";
    MetricProfile metrics = MetricProfile::reward;
    double discount = kDefaultDiscount;
    bool record_field = true;              ///< beamforming: store the RSRP field of the first seed
    std::filesystem::path base_dir = "."; ///< for relative paths inside the env config
};

inline const SchemaValidator& experiment_validator() {
    static const SchemaValidator v(Json::parse(schemas::experiment));
    return v;
}

/// Validates against the experiment schema, then applies the semantic
/// checks the schema cannot express (unique solver names).
inline ExperimentConfig parse_experiment(const Json& j, const std::filesystem::path& base_dir = ".") {
    experiment_validator().validate(j);
    JsonObject o(j, "");
    ExperimentConfig c;
    c.base_dir = base_dir;
    c.name = o.get_or<std::string>("name", c.name);
    c.env = o.raw("env");
    c.horizon = o.get<std::size_t>("horizon");
    c.n_episodes = o.get_or<std::size_t>("n_episodes", 1);
    c.outputs = o.get_or<std::string>("outputs", "results");
    c.metrics = parse_metric_profile(o.get_or<std::string>("metrics", "reward"));
    c.discount = o.get_or("discount", kDefaultDiscount);
    c.record_field = o.get_or("record_field", true);
    const auto& seeds = o.raw("seeds");
    if (seeds.is_array()) {
        for (const auto& s : seeds) c.seeds.push_back(s.get<std::uint64_t>());
    } else {
        auto base = seeds.at("base").get<std::uint64_t>();
        auto count = seeds.at("count").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(base + i);
    }
    const auto& solvers = o.raw("solvers");
    for (std::size_t i = 0; i < solvers.size(); ++i) {
        auto name = solvers[i].at("name").get<std::string>();
        for (const auto& s : c.solvers)
            if (s.name == name) throw ConfigError("/solvers/" + std::to_string(i) + "/name", "duplicate solver name '" + name + "'");
        if (name.empty() || name.find_first_of("/\\ ") != std::string::npos)
            throw ConfigError("/solvers/" + std::to_string(i) + "/name", "solver names must be nonempty without spaces or slashes");
        c.solvers.push_back({name, solvers[i]});
    }
    return c;
}

inline ExperimentConfig load_experiment(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), "cannot open config");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(file.string(), e.what());
    }
    return parse_experiment(j, file.parent_path().empty() ? "." : file.parent_path());
}

/// `--jobs` default: OCCAM_RRM_JOBS if set to a positive integer, else 1.
inline std::size_t default_jobs() {
    if (const char* v = std::getenv("OCCAM_RRM_JOBS")) {
        char* end = nullptr;
        long n = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return 1;
}

/// Runs `task(i)` for i in [0, n) on up to `jobs` threads. The first
/// exception (lowest index) is rethrown after all workers finish.
template <class Task>
void parallel_for(std::size_t n, std::size_t jobs, Task&& task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline Json to_json(const MetricsRecord& m) {
    Json j = {{"mean_reward", m.mean_reward}, {"discounted_return", m.discounted_return}};
    if (m.sum_log_throughput) j["sum_log_throughput"] = *m.sum_log_throughput;
    if (m.accuracy) j["accuracy"] = *m.accuracy;
    if (m.mean_abs_beam_error) j["mean_abs_beam_error"] = *m.mean_abs_beam_error;
    return j;
}

inline std::string episode_file_name(const std::string& solver, std::uint64_t seed, std::size_t episode) {
    return solver + "_seed" + std::to_string(seed) + "_ep" + std::to_string(episode) + ".csv";
}

inline void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
}

/// Stable on-disk form: sorted keys, two-space indent, trailing newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

struct ExperimentReport {
    Json summary;
    std::filesystem::path summary_file;
    std::vector<std::filesystem::path> episode_files;
};

/// Runs every (solver, seed) cell: `n_episodes` episodes with seeds
/// derive_seed(seed, i). Writes episodes/<solver>_seed<s>_ep<i>.csv and
/// summary.json under `out_dir` (the config's `outputs` when empty).
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, std::filesystem::path out_dir = {}, std::size_t jobs = 1) {
    require(!cfg.solvers.empty(), "run_experiment: at least one solver");
    require(!cfg.seeds.empty(), "run_experiment: at least one seed");
    if (out_dir.empty()) out_dir = cfg.outputs;
    const AnyEnv proto = make_env(cfg.env, "/env", cfg.base_dir);

    std::vector<EpisodeRunner> runners;
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i)
        runners.push_back(make_solver(proto, cfg.solvers[i].config, "/solvers/" + std::to_string(i), cfg.discount));

    const std::size_t n_seeds = cfg.seeds.size();
    std::vector<std::vector<EpisodeLog>> cells(cfg.solvers.size() * n_seeds);
    parallel_for(cells.size(), jobs, [&](std::size_t c) {
        std::size_t s = c / n_seeds, k = c % n_seeds;
        AnyEnv env = proto;
        for (std::size_t e = 0; e < cfg.n_episodes; ++e) {
            try {
                cells[c].push_back(runners[s](env, cfg.horizon, derive_seed(cfg.seeds[k], e)));
            } catch (const EpisodeError& err) {
                throw std::runtime_error("solver '" + cfg.solvers[s].name + "', seed " + std::to_string(cfg.seeds[k]) +
                                         ", episode " + std::to_string(e) + ": " + err.what());
            }
        }
    });

    ExperimentReport report;
    std::filesystem::create_directories(out_dir / "episodes");
    Json solvers = Json::object();
    for (std::size_t s = 0; s < cfg.solvers.size(); ++s) {
        const auto& spec = cfg.solvers[s];
        std::vector<EpisodeLog> all;
        Json per_seed = Json::array();
        Json files = Json::array();
        for (std::size_t k = 0; k < n_seeds; ++k) {
            const auto& logs = cells[s * n_seeds + k];
            for (std::size_t e = 0; e < logs.size(); ++e) {
                auto name = episode_file_name(spec.name, cfg.seeds[k], e);
                write_text(out_dir / "episodes" / name, to_csv(logs[e]));
                report.episode_files.push_back(out_dir / "episodes" / name);
                files.push_back("episodes/" + name);
            }
            per_seed.push_back({{"seed", cfg.seeds[k]}, {"metrics", to_json(metrics_summary(logs, cfg.metrics, cfg.discount))}});
            all.insert(all.end(), logs.begin(), logs.end());
        }
        std::size_t len = 0;
        for (const auto& l : all) len = std::max(len, l.steps.size());
        std::vector<double> curve(len, 0.0);
        std::vector<std::size_t> counts(len, 0);
        for (const auto& l : all)
            for (std::size_t t = 0; t < l.steps.size(); ++t) {
                curve[t] += l.steps[t].reward;
                ++counts[t];
            }
        for (std::size_t t = 0; t < len; ++t) curve[t] /= static_cast<double>(counts[t]);
        solvers[spec.name] = {{"config", spec.config},
                              {"metrics", to_json(metrics_summary(all, cfg.metrics, cfg.discount))},
                              {"per_seed", per_seed},
                              {"reward_curve", curve},
                              {"episode_files", files}};
    }

    Json series = Json::object();
    if (const auto* bf = std::get_if<BeamformingEnv>(&proto); bf && cfg.record_field) {
        auto seed = derive_seed(cfg.seeds.front(), 0);
        auto field = bf->record_field(seed, cfg.horizon);
        Json values = Json::array();
        for (Eigen::Index b = 0; b < field.values.rows(); ++b) {
            std::vector<double> row(static_cast<std::size_t>(field.values.cols()));
            for (Eigen::Index t = 0; t < field.values.cols(); ++t) row[static_cast<std::size_t>(t)] = field.values(b, t);
            values.push_back(row);
        }
        series["rsrp_field"] = {{"n_beams", bf->n_beams()},
                                {"n_steps", cfg.horizon},
                                {"seed", seed},
                                {"values", values},
                                {"optimal_beam", field.optimal_beam}};
    }

    report.summary = {{"name", cfg.name},
                      {"version", std::string(kVersion)},
                      {"env", cfg.env},
                      {"horizon", cfg.horizon},
                      {"n_episodes", cfg.n_episodes},
                      {"seeds", cfg.seeds},
                      {"metrics_profile", to_string(cfg.metrics)},
                      {"discount", cfg.discount},
                      {"solvers", solvers},
                      {"series", series}};
    report.summary_file = out_dir / "summary.json";
    write_text(report.summary_file, dump_json(report.summary));
    return report;
}

// Sweeps.

struct SweepParameter {
    std::string pointer; ///< JSON pointer into the experiment config
    std::vector<Json> values;
};

struct SweepReport {
    Json summary;
    std::filesystem::path csv_file;
    std::filesystem::path summary_file;
    std::size_t n_rows = 0;
};

/// Sets `pointer` in `cfg` to `value`. The parent must resolve to an
/// object (the key may be absent and then takes the swept value) or an
/// array with the index in range.
inline void set_pointer(Json& cfg, const std::string& pointer, const Json& value) {
    Json::json_pointer ptr;
    try {
        ptr = Json::json_pointer(pointer);
    } catch (const Json::exception& e) {
        throw ConfigError(pointer, std::string("invalid parameter path: ") + e.what());
    }
    if (ptr.empty()) throw ConfigError(pointer, "parameter path must name a field");
    auto parent = ptr.parent_pointer();
    if (!cfg.contains(parent)) throw ConfigError(pointer, "parameter path does not resolve in the config");
    Json& p = cfg[parent];
    const auto& key = ptr.back();
    if (p.is_object()) {
        p[key] = value;
    } else if (p.is_array()) {
        std::size_t idx = 0;
        try {
            idx = std::stoul(key);
        } catch (const std::exception&) {
            throw ConfigError(pointer, "array index expected");
        }
        if (idx >= p.size()) throw ConfigError(pointer, "array index out of range");
        p[idx] = value;
    } else {
        throw ConfigError(pointer, "parameter path does not resolve in the config");
    }
}

/// Runs the experiment at every point of the Cartesian grid of parameter
/// values (first parameter slowest). Writes point_<k>/... per point, plus
/// sweep.csv (one row per point and solver) and sweep_summary.json.
inline SweepReport sweep(const Json& base_cfg, const std::vector<SweepParameter>& params, const std::filesystem::path& out_dir,
                         std::size_t jobs = 1, const std::filesystem::path& base_dir = ".") {
    require(!params.empty(), "sweep: at least one parameter");
    std::size_t n_points = 1;
    for (const auto& p : params) {
        if (p.values.empty()) throw ConfigError(p.pointer, "sweep values list is empty");
        n_points *= p.values.size();
    }
    // Resolve all paths up front so a bad path fails before any run.
    for (const auto& p : params) {
        Json probe = base_cfg;
        set_pointer(probe, p.pointer, p.values.front());
    }
    std::filesystem::create_directories(out_dir);
    SweepReport rep;
    Json rows = Json::array();
    std::string csv = "point";
    for (const auto& p : params) csv += "," + p.pointer;
    csv += ",solver,mean_reward,discounted_return,sum_log_throughput,accuracy,mean_abs_beam_error\n";
    auto cell = [](const Json& m, const char* key) { return m.contains(key) ? format_double(m.at(key).get<double>()) : std::string(); };
    auto csv_value = [](const Json& v) {
        auto s = v.is_number() ? format_double(v.get<double>()) : v.dump();
        if (s.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        }
        return s;
    };
    std::string name = "sweep";
    for (std::size_t k = 0; k < n_points; ++k) {
        Json cfg = base_cfg;
        std::vector<Json> point;
        std::size_t rem = k;
        std::vector<std::size_t> idx(params.size());
        for (std::size_t i = params.size(); i-- > 0;) {
            idx[i] = rem % params[i].values.size();
            rem /= params[i].values.size();
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            point.push_back(params[i].values[idx[i]]);
            set_pointer(cfg, params[i].pointer, point.back());
        }
        auto exp = parse_experiment(cfg, base_dir);
        name = exp.name;
        auto dir = "point_" + std::to_string(k);
        auto run = run_experiment(exp, out_dir / dir, jobs);
        for (const auto& s : exp.solvers) {
            const auto& m = run.summary["solvers"][s.name]["metrics"];
            rows.push_back({{"point", k}, {"values", point}, {"solver", s.name}, {"metrics", m}, {"run_dir", dir}});
            csv += std::to_string(k);
            for (const auto& v : point) csv += "," + csv_value(v);
            csv += "," + s.name + "," + cell(m, "mean_reward") + "," + cell(m, "discounted_return") + "," +
                   cell(m, "sum_log_throughput") + "," + cell(m, "accuracy") + "," + cell(m, "mean_abs_beam_error") + "\n";
            ++rep.n_rows;
        }
    }
    Json names = Json::array();
    for (const auto& p : params) names.push_back(p.pointer);
    rep.summary = {{"name", name}, {"version", std::string(kVersion)}, {"parameters", names}, {"rows", rows}};
    rep.csv_file = out_dir / "sweep.csv";
    rep.summary_file = out_dir / "sweep_summary.json";
    write_text(rep.csv_file, csv);
    write_text(rep.summary_file, dump_json(rep.summary));
    return rep;
}

} // namespace occam_rrm
