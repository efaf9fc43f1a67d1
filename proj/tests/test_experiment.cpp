// End-to-end runs through the command-line binary plus the experiment library.

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "occam_rrm/occam_rrm.hpp"

namespace fs = std::filesystem;
using namespace occam_rrm;

namespace {

const fs::path kRoot = OCCAM_RRM_SOURCE_DIR;

struct Result {
    int code;
    std::string out;
};

/// Runs the CLI with stderr folded into stdout.
Result cli(const std::string& args) {
    std::string cmd = std::string("\"") + OCCAM_RRM_CLI + "\" --quiet " + args + " 2>&1";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / ("occam_rrm_exp_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Json read(const fs::path& p) { return Json::parse(slurp(p)); }

fs::path write_cfg(const fs::path& dir, const Json& cfg) {
    auto f = dir / "cfg.json";
    std::ofstream(f) << cfg.dump(2);
    return f;
}

Json small_energy() {
    auto j = read(kRoot / "configs/energy_thresholds.json");
    j["horizon"] = 60;
    j["n_episodes"] = 1;
    j["seeds"] = {{"base", 4}, {"count", 3}};
    return j;
}

Json small_beam() {
    auto j = read(kRoot / "configs/beam_tracking.json");
    j["env"]["n_beams"] = 16;
    j["horizon"] = 30;
    j["seeds"] = {1};
    return j;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

} // namespace

TEST(Cli, RunWritesOneCsvPerSolverSeedEpisode) {
    auto d = scratch("run");
    auto cfg = write_cfg(d, small_energy());
    auto r = cli("--out-dir " + q(d / "out") + " run " + q(cfg));
    ASSERT_EQ(r.code, 0) << r.out;
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(d / "out/episodes")) n += e.path().extension() == ".csv";
    EXPECT_EQ(n, 6u);
    auto s = read(d / "out/summary.json");
    EXPECT_EQ(s["solvers"].size(), 2u);
    EXPECT_TRUE(fs::exists(d / "out/episodes/es_seed5_ep0.csv"));
}

TEST(Cli, RerunsAreByteIdenticalAcrossJobCounts) {
    auto d = scratch("rerun");
    auto cfg = write_cfg(d, small_energy());
    ASSERT_EQ(cli("--jobs 1 --out-dir " + q(d / "a") + " run " + q(cfg)).code, 0);
    ASSERT_EQ(cli("--jobs 3 --out-dir " + q(d / "b") + " run " + q(cfg)).code, 0);
    EXPECT_EQ(slurp(d / "a/summary.json"), slurp(d / "b/summary.json"));
    for (const auto& e : fs::directory_iterator(d / "a/episodes"))
        EXPECT_EQ(slurp(e.path()), slurp(d / "b/episodes" / e.path().filename())) << e.path().filename();
}

TEST(Cli, SchemaViolationNamesThePath) {
    auto d = scratch("schema");
    auto j = small_energy();
    j["horizon"] = -5;
    auto r = cli("run " + q(write_cfg(d, j)));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("/horizon"), std::string::npos) << r.out;
}

TEST(Cli, MismatchedSolverPointsAtTheAdvisor) {
    auto d = scratch("mismatch");
    auto j = small_beam();
    j["solvers"] = Json::array({{{"name", "vi"}, {"type", "exact-dp"}}});
    auto r = cli("run " + q(write_cfg(d, j)));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("Advisor"), std::string::npos) << r.out;
}

TEST(Cli, MissingConfigFileIsConfigError) {
    EXPECT_EQ(cli("run /nonexistent/cfg.json").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Experiment, SummaryMatchesSchemaAndEmbeddedCopiesMatchFiles) {
    EXPECT_EQ(Json::parse(schemas::experiment), read(kRoot / "schemas/experiment.schema.json"));
    EXPECT_EQ(Json::parse(schemas::summary), read(kRoot / "schemas/summary.schema.json"));
    EXPECT_EQ(Json::parse(schemas::sweep_summary), read(kRoot / "schemas/sweep_summary.schema.json"));
    auto d = scratch("summary");
    auto rep = run_experiment(parse_experiment(small_beam(), kRoot / "configs"), d);
    SchemaValidator v(Json::parse(schemas::summary));
    auto bad = v.violations(rep.summary);
    EXPECT_TRUE(bad.empty()) << (bad.empty() ? "" : bad.front().path + ": " + bad.front().message);
    EXPECT_EQ(read(rep.summary_file), rep.summary);
}

TEST(Experiment, ShippedConfigsValidate) {
    for (const auto& e : fs::directory_iterator(kRoot / "configs")) {
        if (e.path().extension() != ".json") continue;
        EXPECT_NO_THROW(parse_experiment(read(e.path()), kRoot / "configs")) << e.path().filename();
    }
}

TEST(Cli, SweepHasOneRowPerPointAndSolver) {
    auto d = scratch("sweep");
    auto j = small_energy();
    j["seeds"] = {1};
    auto r = cli("--out-dir " + q(d / "out") + " sweep " + q(write_cfg(d, j)) +
                 " --param /env/activation_delay --values \"[0,2,4,6]\"");
    ASSERT_EQ(r.code, 0) << r.out;
    auto s = read(d / "out/sweep_summary.json");
    EXPECT_EQ(s["rows"].size(), 8u);
    SchemaValidator v(Json::parse(schemas::sweep_summary));
    EXPECT_TRUE(v.violations(s).empty());
    std::istringstream csv(slurp(d / "out/sweep.csv"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(csv, line)) ++lines;
    EXPECT_EQ(lines, 9u);
}

TEST(Cli, SweepRejectsEmptyValueListAndBadPointer) {
    auto d = scratch("sweep_bad");
    auto cfg = write_cfg(d, small_energy());
    auto r = cli("--out-dir " + q(d / "o") + " sweep " + q(cfg) + " --param /env/activation_delay --values \"[]\"");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("empty"), std::string::npos) << r.out;
    r = cli("--out-dir " + q(d / "o") + " sweep " + q(cfg) + " --param /nope/deeper --values \"[1]\"");
    EXPECT_EQ(r.code, 2);
}

TEST(Experiment, EnergyThresholdGridHasInteriorOptimum) {
    // Sleeping eagerly pays the wake-up delay in backlog; never sleeping burns power.
    auto base = read(kRoot / "configs/energy_threshold_grid.json");
    const std::vector<double> lowers{0.0, 0.2, 0.4, 0.6, 0.8}, uppers{0.5, 0.7, 0.8, 0.9, 1.0};
    double best = -INFINITY, best_lo = NAN, best_up = NAN;
    for (double lo : lowers) {
        auto j = base;
        j["solvers"][0]["lower"] = lo;
        std::vector<Json> ups;
        for (double u : uppers)
            if (u > lo) ups.push_back(u);
        auto rep = sweep(j, {{"/solvers/0/upper", ups}}, scratch("es_grid"), 1, kRoot / "configs");
        for (const auto& row : rep.summary["rows"]) {
            double v = row["metrics"]["mean_reward"].get<double>();
            if (v > best) best = v, best_lo = lo, best_up = row["values"][0].get<double>();
        }
    }
    EXPECT_GT(best_lo, lowers.front());
    EXPECT_LT(best_lo, lowers.back());
    EXPECT_GT(best_up, uppers.front());
    EXPECT_LT(best_up, uppers.back());
}

TEST(Cli, HeatmapHasOneCellPerBeamAndStep) {
    auto d = scratch("heat");
    auto j = small_beam();
    ASSERT_EQ(cli("--out-dir " + q(d / "out") + " run " + q(write_cfg(d, j))).code, 0);
    ASSERT_EQ(cli("plot " + q(d / "out/summary.json") + " --kind rsrp-heatmap -o " + q(d / "h.svg")).code, 0);
    auto svg = slurp(d / "h.svg");
    std::size_t cells = 0;
    for (auto pos = svg.find("class=\"cell\""); pos != std::string::npos; pos = svg.find("class=\"cell\"", pos + 1)) ++cells;
    EXPECT_EQ(cells, 16u * 30u);
    EXPECT_EQ(svg.rfind("</svg>"), svg.size() - 7);
}

TEST(Cli, PlotWithoutSeriesFails) {
    auto d = scratch("noseries");
    ASSERT_EQ(cli("--out-dir " + q(d / "out") + " run " + q(write_cfg(d, small_energy()))).code, 0);
    auto r = cli("plot " + q(d / "out/summary.json") + " --kind rsrp-heatmap -o " + q(d / "h.svg"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("rsrp_field"), std::string::npos) << r.out;
    EXPECT_FALSE(fs::exists(d / "h.svg"));
    EXPECT_EQ(cli("plot " + q(d / "out/summary.json") + " --kind pie").code, 2);
}

TEST(Cli, AccuracyVersusSpeedHasThreePointsPerSolver) {
    auto d = scratch("speed");
    auto j = small_beam();
    j["record_field"] = false;
    ASSERT_EQ(cli("--out-dir " + q(d / "out") + " sweep " + q(write_cfg(d, j)) +
                  " --param /env/ue_speed --values \"[0.5,1,2]\"")
                  .code,
              0);
    ASSERT_EQ(cli("plot " + q(d / "out/sweep_summary.json") + " --kind accuracy-vs-speed -o " + q(d / "a.svg")).code, 0);
    auto svg = slurp(d / "a.svg");
    std::size_t markers = 0;
    for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++markers;
    EXPECT_EQ(markers, 3u * j["solvers"].size());
}

TEST(Cli, AdviseByUseCaseAndByTraits) {
    auto r = cli("advise --use-case LA --json");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(Json::parse(r.out)["technique"], "bandits");
    r = cli("advise --use-case ES --variant complex-multilayer --json");
    EXPECT_EQ(Json::parse(r.out)["technique"], "rl");
    r = cli("advise --json --traits '{\"endogenous_state\":true,\"model_known\":true,\"tractable_mdp\":true}'");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(Json::parse(r.out)["technique"], "exact-dp");
    EXPECT_EQ(cli("advise --use-case HO --variant nope").code, 2);
    EXPECT_EQ(cli("advise --traits '{\"oops\":1}'").code, 2);
}
