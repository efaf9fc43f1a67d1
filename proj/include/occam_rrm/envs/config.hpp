#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "occam_rrm/core/json_io.hpp"
#include "occam_rrm/envs/admission.hpp"
#include "occam_rrm/envs/beamforming.hpp"
#include "occam_rrm/envs/energy.hpp"
#include "occam_rrm/envs/handover.hpp"
#include "occam_rrm/envs/link_adapt.hpp"
#include "occam_rrm/envs/power.hpp"
#include "occam_rrm/envs/scheduling.hpp"
#include "occam_rrm/envs/single_state.hpp"

namespace occam_rrm {

using AnyEnv = std::variant<SingleStateEnv, LinkAdaptEnv, PowerEnv, BeamformingEnv, SchedulingEnv, EnergyEnv,
                            HandoverEnv, AdmissionEnv>;

/// Per-cell RSRP trace from CSV with header `t,cell_0,...,cell_{n-1}`.
/// Rows must be in step order starting at 0.
inline std::vector<std::vector<double>> load_rsrp_csv(std::istream& in, const std::string& source = "trace") {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(source, "empty RSRP trace");
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            cells.push_back(cell);
        }
        return cells;
    };
    auto header = split(line);
    if (header.size() < 3 || header[0] != "t") throw ConfigError(source, "header must be t,cell_0,...");
    for (std::size_t c = 1; c < header.size(); ++c)
        if (header[c] != "cell_" + std::to_string(c - 1))
            throw ConfigError(source, "column " + std::to_string(c) + " must be named cell_" + std::to_string(c - 1));
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (cells.size() != header.size())
            throw ConfigError(source, "line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " columns");
        try {
            if (std::stoul(cells[0]) != rows.size())
                throw ConfigError(source, "line " + std::to_string(lineno) + ": steps must be consecutive from 0");
            std::vector<double> row;
            for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(std::stod(cells[c]));
            rows.push_back(std::move(row));
        } catch (const std::logic_error&) {
            throw ConfigError(source, "line " + std::to_string(lineno) + ": not a number");
        }
    }
    if (rows.empty()) throw ConfigError(source, "RSRP trace has no rows");
    return rows;
}

inline std::vector<std::vector<double>> load_rsrp_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), "cannot open RSRP trace");
    return load_rsrp_csv(in, file.string());
}

namespace detail {

template <class Env, class Cfg>
AnyEnv build_env(const Cfg& cfg, const std::string& path) {
    try {
        return AnyEnv(std::in_place_type<Env>, cfg);
    } catch (const PreconditionError& e) {
        throw ConfigError(path, e.what());
    }
}

inline SingleStateConfig single_state_config(const JsonObject& o) {
    o.only({"env", "means", "stds"});
    return {o.get<std::vector<double>>("means"), o.get_or<std::vector<double>>("stds", {})};
}

inline LinkAdaptConfig link_adapt_config(const JsonObject& o) {
    o.only({"env", "n_mcs", "rates", "bler_curves", "sinr_mean_db", "ar_coeff", "innovation_std_db",
            "report_noise_std_db", "report_bias_db"});
    auto c = LinkAdaptConfig::standard(o.get_or<std::size_t>("n_mcs", 8));
    if (o.has("rates")) c.rates = o.get<std::vector<double>>("rates");
    if (o.has("bler_curves")) {
        c.bler_curves.clear();
        const auto& arr = o.raw("bler_curves");
        if (!arr.is_array()) throw ConfigError(o.path_of("bler_curves"), "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            JsonObject b(arr[i], o.path_of("bler_curves") + "/" + std::to_string(i));
            b.only({"s50_db", "slope"});
            c.bler_curves.push_back({b.get<double>("s50_db"), b.get<double>("slope")});
        }
    }
    c.sinr_mean_db = o.get_or("sinr_mean_db", c.sinr_mean_db);
    c.ar_coeff = o.get_or("ar_coeff", c.ar_coeff);
    c.innovation_std_db = o.get_or("innovation_std_db", c.innovation_std_db);
    c.report_noise_std_db = o.get_or("report_noise_std_db", c.report_noise_std_db);
    c.report_bias_db = o.get_or("report_bias_db", c.report_bias_db);
    return c;
}

inline PowerConfig power_config(const JsonObject& o) {
    o.only({"env", "mean_gains", "rayleigh", "coherence_steps", "total_power", "noise"});
    PowerConfig c;
    c.mean_gains = o.get<std::vector<double>>("mean_gains");
    c.rayleigh = o.get_or("rayleigh", c.rayleigh);
    c.coherence_steps = o.get_or("coherence_steps", c.coherence_steps);
    c.total_power = o.get_or("total_power", c.total_power);
    c.noise = o.get_or("noise", c.noise);
    return c;
}

inline BeamformingConfig beamforming_config(const JsonObject& o) {
    o.only({"env", "n_beams", "ue_speed", "spatial_corr", "temporal_corr", "measure_cost", "mean_rsrp_db",
            "field_std_db", "meas_noise_std_db"});
    BeamformingConfig c;
    c.n_beams = o.get_or("n_beams", c.n_beams);
    c.ue_speed = o.get_or("ue_speed", c.ue_speed);
    c.spatial_corr = o.get_or("spatial_corr", c.spatial_corr);
    c.temporal_corr = o.get_or("temporal_corr", c.temporal_corr);
    c.measure_cost = o.get_or("measure_cost", c.measure_cost);
    c.mean_rsrp_db = o.get_or("mean_rsrp_db", c.mean_rsrp_db);
    c.field_std_db = o.get_or("field_std_db", c.field_std_db);
    c.meas_noise_std_db = o.get_or("meas_noise_std_db", c.meas_noise_std_db);
    return c;
}

inline SchedulingConfig scheduling_config(const JsonObject& o) {
    o.only({"env", "mean_efficiency", "rayleigh", "arrival_rates", "weights", "ewma_alpha", "epsilon"});
    SchedulingConfig c;
    c.mean_efficiency = o.get<std::vector<double>>("mean_efficiency");
    c.rayleigh = o.get_or("rayleigh", c.rayleigh);
    c.arrival_rates = o.get_or<std::vector<double>>("arrival_rates", {});
    c.weights = o.get_or<std::vector<double>>("weights", {});
    c.ewma_alpha = o.get_or("ewma_alpha", c.ewma_alpha);
    c.epsilon = o.get_or("epsilon", c.epsilon);
    return c;
}

inline EnergyConfig energy_config(const JsonObject& o) {
    o.only({"env", "capacity", "power", "activation_delay", "n_users", "trace", "poisson_rates", "qos_threshold",
            "qos_weight"});
    EnergyConfig c;
    c.capacity = o.get<std::vector<double>>("capacity");
    c.power = o.get<std::vector<double>>("power");
    c.activation_delay = o.get_or("activation_delay", c.activation_delay);
    c.trace = o.get_or<std::vector<double>>("trace", {});
    c.poisson_rates = o.get_or<std::vector<double>>("poisson_rates", {});
    c.n_users = o.get_or("n_users", c.trace.empty() && !c.poisson_rates.empty() ? c.poisson_rates.size() : c.n_users);
    c.qos_threshold = o.get_or("qos_threshold", c.qos_threshold);
    c.qos_weight = o.get_or("qos_weight", c.qos_weight);
    return c;
}

inline HandoverConfig handover_config(const JsonObject& o, const std::filesystem::path& base_dir) {
    o.only({"env", "n_cells", "trace", "trace_csv", "mobility", "noise_std_db", "ho_interruption", "rlf_threshold_db",
            "hysteresis_db", "pingpong_window"});
    HandoverConfig c;
    if (o.has("trace") && o.has("trace_csv")) throw ConfigError(o.path_of("trace_csv"), "give either trace or trace_csv");
    if (o.has("trace")) c.trace = o.get<std::vector<std::vector<double>>>("trace");
    if (o.has("trace_csv")) {
        std::filesystem::path p = o.get<std::string>("trace_csv");
        if (p.is_relative()) p = base_dir / p;
        try {
            c.trace = load_rsrp_csv(p);
        } catch (const ConfigError& e) {
            throw ConfigError(o.path_of("trace_csv"), e.what());
        }
    }
    c.n_cells = o.get_or("n_cells", c.trace.empty() ? c.n_cells : c.trace.front().size());
    if (o.has("mobility")) {
        auto m = o.object("mobility");
        m.only({"n_steps", "cell_spacing_m", "cell_offset_m", "start_m", "speed_m_per_step", "rsrp_at_100m_db",
                "pathloss_exponent", "shadowing_std_db", "shadowing_corr"});
        auto& mm = c.mobility;
        mm.n_steps = m.get_or("n_steps", mm.n_steps);
        mm.cell_spacing_m = m.get_or("cell_spacing_m", mm.cell_spacing_m);
        mm.cell_offset_m = m.get_or("cell_offset_m", mm.cell_offset_m);
        mm.start_m = m.get_or("start_m", mm.start_m);
        mm.speed_m_per_step = m.get_or("speed_m_per_step", mm.speed_m_per_step);
        mm.rsrp_at_100m_db = m.get_or("rsrp_at_100m_db", mm.rsrp_at_100m_db);
        mm.pathloss_exponent = m.get_or("pathloss_exponent", mm.pathloss_exponent);
        mm.shadowing_std_db = m.get_or("shadowing_std_db", mm.shadowing_std_db);
        mm.shadowing_corr = m.get_or("shadowing_corr", mm.shadowing_corr);
    }
    c.noise_std_db = o.get_or("noise_std_db", c.noise_std_db);
    c.ho_interruption = o.get_or("ho_interruption", c.ho_interruption);
    c.rlf_threshold_db = o.get_or("rlf_threshold_db", c.rlf_threshold_db);
    c.hysteresis_db = o.get_or("hysteresis_db", c.hysteresis_db);
    c.pingpong_window = o.get_or("pingpong_window", c.pingpong_window);
    return c;
}

inline AdmissionConfig admission_config(const JsonObject& o) {
    o.only({"env", "capacity", "classes", "delay_penalty", "qos_margin", "qos_penalty"});
    AdmissionConfig c;
    c.capacity = o.get<double>("capacity");
    const auto& arr = o.raw("classes");
    if (!arr.is_array()) throw ConfigError(o.path_of("classes"), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        JsonObject k(arr[i], o.path_of("classes") + "/" + std::to_string(i));
        k.only({"arrival_rate", "mean_holding", "demand", "reward", "reject_penalty"});
        AdmissionClass cls;
        cls.arrival_rate = k.get<double>("arrival_rate");
        cls.mean_holding = k.get_or("mean_holding", cls.mean_holding);
        cls.demand = k.get_or("demand", cls.demand);
        cls.reward = k.get_or("reward", cls.reward);
        cls.reject_penalty = k.get_or("reject_penalty", cls.reject_penalty);
        c.classes.push_back(cls);
    }
    c.delay_penalty = o.get_or("delay_penalty", c.delay_penalty);
    c.qos_margin = o.get_or("qos_margin", c.qos_margin);
    c.qos_penalty = o.get_or("qos_penalty", c.qos_penalty);
    return c;
}

} // namespace detail

inline const std::vector<std::string>& known_env_names() {
    static const std::vector<std::string> names{"single_state", "link_adapt", "power",     "beamforming",
                                                "scheduling",   "energy",     "handover", "admission"};
    return names;
}

/// Builds an environment from its JSON config; the `"env"` field selects
/// the kind. Relative trace paths resolve against `base_dir`.
inline AnyEnv make_env(const Json& j, const std::string& path = "/env", const std::filesystem::path& base_dir = ".") {
    JsonObject o(j, path);
    auto kind = o.get<std::string>("env");
    if (kind == "single_state") return detail::build_env<SingleStateEnv>(detail::single_state_config(o), path);
    if (kind == "link_adapt") return detail::build_env<LinkAdaptEnv>(detail::link_adapt_config(o), path);
    if (kind == "power") return detail::build_env<PowerEnv>(detail::power_config(o), path);
    if (kind == "beamforming") return detail::build_env<BeamformingEnv>(detail::beamforming_config(o), path);
    if (kind == "scheduling") return detail::build_env<SchedulingEnv>(detail::scheduling_config(o), path);
    if (kind == "energy") return detail::build_env<EnergyEnv>(detail::energy_config(o), path);
    if (kind == "handover") return detail::build_env<HandoverEnv>(detail::handover_config(o, base_dir), path);
    if (kind == "admission") return detail::build_env<AdmissionEnv>(detail::admission_config(o), path);
    std::string known;
    for (const auto& n : known_env_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError(o.path_of("env"), "unknown environment '" + kind + "' (known: " + known + ")");
}

} // namespace occam_rrm
