// Command-line front end: run, sweep, advise, plot.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occam_rrm/occam_rrm.hpp"

namespace fs = std::filesystem;
using namespace occam_rrm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool quiet = false;
    std::size_t jobs = default_jobs();
};

Json read_json_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError(p.string(), "cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(p.string(), e.what());
    }
}

/// --seed replaces the seed list by the same number of consecutive seeds
/// starting at the given one.
void apply_seed(Json& cfg, const Globals& g) {
    if (!g.seed || !cfg.contains("seeds")) return;
    std::size_t n = cfg["seeds"].is_array() ? cfg["seeds"].size() : cfg["seeds"].value("count", std::size_t{1});
    cfg["seeds"] = {{"base", *g.seed}, {"count", std::max<std::size_t>(n, 1)}};
}

fs::path resolve_out(const Globals& g, const Json& cfg, const fs::path& base) {
    if (!g.out_dir.empty()) return g.out_dir;
    fs::path p = cfg.value("outputs", std::string("results"));
    return p.is_relative() ? base / p : p;
}

int cmd_run(const std::string& file, const Globals& g) {
    Json cfg = read_json_file(file);
    apply_seed(cfg, g);
    fs::path base = fs::path(file).parent_path();
    if (base.empty()) base = ".";
    auto exp = parse_experiment(cfg, base);
    auto out = resolve_out(g, cfg, base);
    auto rep = run_experiment(exp, out, g.jobs);
    if (!g.quiet) {
        std::cout << "wrote " << rep.episode_files.size() << " episode files and " << rep.summary_file.string() << "\n";
        for (const auto& [name, s] : rep.summary["solvers"].items()) {
            std::cout << "  " << name << ":";
            for (const auto& [k, v] : s["metrics"].items()) std::cout << ' ' << k << '=' << format_double(v.get<double>());
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_sweep(const std::string& file, const std::vector<std::string>& params, const std::vector<std::string>& values,
              const Globals& g) {
    if (params.size() != values.size()) throw ConfigError("--values", "give one --values list per --param");
    Json cfg = read_json_file(file);
    apply_seed(cfg, g);
    fs::path base = fs::path(file).parent_path();
    if (base.empty()) base = ".";
    std::vector<SweepParameter> sp;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Json v;
        try {
            v = Json::parse(values[i]);
        } catch (const Json::parse_error& e) {
            throw ConfigError("--values", std::string("not JSON: ") + e.what());
        }
        if (!v.is_array()) throw ConfigError("--values", "expected a JSON array of values");
        sp.push_back({params[i], v.get<std::vector<Json>>()});
    }
    auto rep = sweep(cfg, sp, resolve_out(g, cfg, base), g.jobs, base);
    if (!g.quiet) std::cout << "wrote " << rep.n_rows << " rows to " << rep.csv_file.string() << "\n";
    return 0;
}

int cmd_advise(const std::string& traits, const std::string& use_case, const std::string& variant, bool json_only,
               const Globals& g) {
    ProblemTraits t;
    if (!traits.empty()) {
        Json j;
        if (fs::exists(traits)) {
            j = read_json_file(traits);
        } else {
            try {
                j = Json::parse(traits);
            } catch (const Json::parse_error& e) {
                throw ConfigError("--traits", std::string("neither a file nor JSON: ") + e.what());
            }
        }
        t = traits_from_json(j, "--traits");
    } else if (!use_case.empty()) {
        try {
            t = usecase_traits(use_case, variant.empty() ? "default" : variant);
        } catch (const PreconditionError& e) {
            throw ConfigError("--use-case", e.what());
        }
    } else {
        throw ConfigError("advise", "give --traits or --use-case");
    }
    auto r = advise(t);
    if (!json_only && !g.quiet) print_path(std::cout, r);
    Json out = to_json(r);
    out["traits"] = to_json(t);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_plot(const std::string& summary, const std::string& kind, const std::string& output, const Globals& g) {
    PlotKind k;
    try {
        k = parse_plot_kind(kind);
    } catch (const PreconditionError& e) {
        throw ConfigError("--kind", e.what());
    }
    fs::path out = output;
    if (out.empty()) out = (g.out_dir.empty() ? fs::path(summary).parent_path() : fs::path(g.out_dir)) / (kind + ".svg");
    try {
        emit_plot(summary, k, out);
    } catch (const MissingSeries& e) {
        throw ConfigError(summary, e.what());
    }
    if (!g.quiet) std::cout << "wrote " << out.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"occam_rrm: RRM decision-problem testbed"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Base seed (replaces the config's seed list)");
    app.add_option("--out-dir", g.out_dir, "Output directory (overrides the config)");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");
    app.add_option("--jobs", g.jobs, "Parallel (solver, seed) cells; default from OCCAM_RRM_JOBS")->check(CLI::PositiveNumber);

    std::string config;
    auto* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config, "Experiment JSON")->required();
    run->fallthrough();

    std::vector<std::string> params, values;
    auto* sw = app.add_subcommand("sweep", "Run a config over a grid of parameter values");
    sw->add_option("config", config, "Experiment JSON")->required();
    sw->add_option("--param", params, "JSON pointer into the config (repeatable)")->required()->allow_extra_args(false);
    // One token per occurrence; CLI11 would otherwise split "[a,b]" itself.
    sw->add_option("--values", values, "JSON array of values for the matching --param")->required()->allow_extra_args(false);
    sw->fallthrough();

    std::string traits, use_case, variant;
    bool json_only = false;
    auto* adv = app.add_subcommand("advise", "Recommend a solution technique");
    auto* tr = adv->add_option("--traits", traits, "Traits as JSON text or a JSON file");
    auto* uc = adv->add_option("--use-case", use_case, "SC, AC, HO, ES, PC, BF or LA");
    adv->add_option("--variant", variant, "Use-case variant")->needs(uc);
    adv->add_flag("--json", json_only, "Print only the JSON recommendation");
    tr->excludes(uc);
    adv->fallthrough();

    std::string summary, kind, output;
    auto* plot = app.add_subcommand("plot", "Render an SVG from a summary JSON");
    plot->add_option("summary", summary, "summary.json or sweep_summary.json")->required();
    plot->add_option("--kind", kind, "rsrp-heatmap, accuracy-vs-speed or reward-curve")->required();
    plot->add_option("-o,--output", output, "SVG file (default <out-dir>/<kind>.svg)");
    plot->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config, g);
        if (*sw) return cmd_sweep(config, params, values, g);
        if (*adv) return cmd_advise(traits, use_case, variant, json_only, g);
        if (*plot) return cmd_plot(summary, kind, output, g);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
