#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/json_io.hpp"

namespace occam_rrm {

enum class PlotKind { rsrp_heatmap, accuracy_vs_speed, reward_curve };

inline PlotKind parse_plot_kind(std::string_view s) {
    if (s == "rsrp-heatmap") return PlotKind::rsrp_heatmap;
    if (s == "accuracy-vs-speed") return PlotKind::accuracy_vs_speed;
    if (s == "reward-curve") return PlotKind::reward_curve;
    throw PreconditionError("unknown plot kind '" + std::string(s) + "' (known: rsrp-heatmap, accuracy-vs-speed, reward-curve)");
}

/// The summary lacks a series the plot needs.
class MissingSeries : public PreconditionError {
public:
    explicit MissingSeries(const std::string& series, const std::string& why = "missing")
        : PreconditionError("series '" + series + "' is " + why), series_(series) {}

    [[nodiscard]] const std::string& series() const noexcept { return series_; }

private:
    std::string series_;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Piecewise-linear dark-blue → teal → yellow colour map on [0,1].
inline std::string colour(double u) {
    static constexpr std::array<std::array<double, 3>, 4> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {253, 231, 37}}};
    u = std::clamp(std::isfinite(u) ? u : 0.0, 0.0, 1.0) * 3.0;
    std::size_t i = std::min<std::size_t>(2, static_cast<std::size_t>(u));
    double f = u - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

inline constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                     "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Frame {
    double width = 640, height = 400, left = 60, right = 150, top = 40, bottom = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    [[nodiscard]] double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    [[nodiscard]] double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline std::string header(double w, double h, const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\" viewBox=\"0 0 " +
           fmt(w) + " " + fmt(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"" +
           fmt(w / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) + "</text>\n";
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string s = "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    s += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.height - f.bottom) + "\" x2=\"" + fmt(f.width - f.right) + "\" y2=\"" +
         fmt(f.height - f.bottom) + "\"/>\n";
    s += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.top) + "\" x2=\"" + fmt(f.left) + "\" y2=\"" + fmt(f.height - f.bottom) + "\"/>\n</g>\n";
    for (int i = 0; i <= 4; ++i) {
        double x = f.x0 + (f.x1 - f.x0) * i / 4.0, y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        s += "<text x=\"" + fmt(f.px(x)) + "\" y=\"" + fmt(f.height - f.bottom + 16) + "\" text-anchor=\"middle\">" + fmt(x) + "</text>\n";
        s += "<text x=\"" + fmt(f.left - 6) + "\" y=\"" + fmt(f.py(y) + 4) + "\" text-anchor=\"end\">" + fmt(y) + "</text>\n";
    }
    s += "<text x=\"" + fmt((f.left + f.width - f.right) / 2) + "\" y=\"" + fmt(f.height - 12) + "\" text-anchor=\"middle\">" +
         xml_escape(xlabel) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt((f.top + f.height - f.bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt((f.top + f.height - f.bottom) / 2) + ")\">" + xml_escape(ylabel) + "</text>\n";
    return s;
}

struct Line {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline std::string line_plot(std::vector<Line> lines, const std::string& title, const std::string& xlabel,
                             const std::string& ylabel, bool markers) {
    Frame f;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& l : lines)
        for (auto [x, y] : l.points) {
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    double pad = 0.05 * (ymax - ymin);
    f.x0 = xmin, f.x1 = xmax, f.y0 = ymin - pad, f.y1 = ymax + pad;
    std::string s = header(f.width, f.height, title) + axes(f, xlabel, ylabel);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const char* c = kPalette[i % kPalette.size()];
        std::string pts;
        for (auto [x, y] : lines[i].points) pts += (pts.empty() ? "" : " ") + fmt(f.px(x)) + "," + fmt(f.py(y));
        s += "<polyline class=\"series\" data-label=\"" + xml_escape(lines[i].label) + "\" fill=\"none\" stroke=\"" + c +
             "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        if (markers)
            for (auto [x, y] : lines[i].points)
                s += "<circle cx=\"" + fmt(f.px(x)) + "\" cy=\"" + fmt(f.py(y)) + "\" r=\"3\" fill=\"" + c + "\"/>\n";
        double ly = f.top + 16.0 * static_cast<double>(i);
        s += "<rect x=\"" + fmt(f.width - f.right + 10) + "\" y=\"" + fmt(ly) + "\" width=\"12\" height=\"4\" fill=\"" + c + "\"/>\n";
        s += "<text x=\"" + fmt(f.width - f.right + 26) + "\" y=\"" + fmt(ly + 6) + "\">" + xml_escape(lines[i].label) + "</text>\n";
    }
    return s + "</svg>\n";
}

inline std::string rsrp_heatmap(const Json& summary) {
    if (!summary.contains("series") || !summary["series"].contains("rsrp_field")) throw MissingSeries("rsrp_field");
    const auto& f = summary["series"]["rsrp_field"];
    if (!f.contains("values") || !f["values"].is_array() || f["values"].empty() || f["values"][0].empty())
        throw MissingSeries("rsrp_field", "empty");
    const auto& v = f["values"];
    const std::size_t n_beams = v.size(), n_steps = v[0].size();
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& row : v) {
        if (row.size() != n_steps) throw MissingSeries("rsrp_field", "ragged");
        for (const auto& x : row) lo = std::min(lo, x.get<double>()), hi = std::max(hi, x.get<double>());
    }
    const double cw = std::max(1.0, 600.0 / static_cast<double>(n_steps)), ch = std::max(1.0, 320.0 / static_cast<double>(n_beams));
    const double left = 60, top = 40, w = left + cw * static_cast<double>(n_steps) + 100, h = top + ch * static_cast<double>(n_beams) + 50;
    std::string s = header(w, h, "RSRP across beams and time");
    s += "<g class=\"heatmap\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t b = 0; b < n_beams; ++b)
        for (std::size_t t = 0; t < n_steps; ++t) {
            double u = hi > lo ? (v[b][t].get<double>() - lo) / (hi - lo) : 0.5;
            s += "<rect class=\"cell\" x=\"" + fmt(left + cw * static_cast<double>(t)) + "\" y=\"" +
                 fmt(top + ch * static_cast<double>(n_beams - 1 - b)) + "\" width=\"" + fmt(cw) + "\" height=\"" + fmt(ch) +
                 "\" fill=\"" + colour(u) + "\"/>\n";
        }
    s += "</g>\n";
    if (f.contains("optimal_beam") && f["optimal_beam"].size() == n_steps) {
        std::string pts;
        for (std::size_t t = 0; t < n_steps; ++t) {
            double b = f["optimal_beam"][t].get<double>();
            pts += (pts.empty() ? "" : " ") + fmt(left + cw * (static_cast<double>(t) + 0.5)) + "," +
                   fmt(top + ch * (static_cast<double>(n_beams) - 0.5 - b));
        }
        s += "<polyline class=\"optimal\" fill=\"none\" stroke=\"white\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
    }
    double bottom = top + ch * static_cast<double>(n_beams);
    s += "<text x=\"" + fmt(left + cw * static_cast<double>(n_steps) / 2) + "\" y=\"" + fmt(bottom + 30) +
         "\" text-anchor=\"middle\">time step</text>\n";
    s += "<text x=\"20\" y=\"" + fmt((top + bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt((top + bottom) / 2) + ")\">beam</text>\n";
    double lx = left + cw * static_cast<double>(n_steps) + 20;
    for (int i = 0; i < 10; ++i)
        s += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(top + 20.0 * (9 - i)) + "\" width=\"14\" height=\"20\" fill=\"" + colour(i / 9.0) + "\"/>\n";
    s += "<text x=\"" + fmt(lx + 18) + "\" y=\"" + fmt(top + 10) + "\">" + fmt(hi) + " dB</text>\n";
    s += "<text x=\"" + fmt(lx + 18) + "\" y=\"" + fmt(top + 200) + "\">" + fmt(lo) + " dB</text>\n";
    return s + "</svg>\n";
}

inline std::string reward_curve(const Json& summary) {
    if (!summary.contains("solvers") || !summary["solvers"].is_object() || summary["solvers"].empty())
        throw MissingSeries("reward_curve");
    std::vector<Line> lines;
    for (const auto& [name, s] : summary["solvers"].items()) {
        if (!s.contains("reward_curve")) throw MissingSeries("reward_curve", "missing for solver '" + name + "'");
        const auto& c = s["reward_curve"];
        if (c.empty()) throw MissingSeries("reward_curve", "empty for solver '" + name + "'");
        Line l{name, {}};
        double cum = 0.0;
        for (std::size_t t = 0; t < c.size(); ++t) {
            cum += c[t].get<double>();
            l.points.emplace_back(static_cast<double>(t + 1), cum / static_cast<double>(t + 1));
        }
        lines.push_back(std::move(l));
    }
    return line_plot(std::move(lines), "Running mean reward", "step", "mean reward", false);
}

/// From a sweep summary: one polyline per solver over the first swept
/// parameter, which must be numeric.
inline std::string accuracy_vs_speed(const Json& summary) {
    if (!summary.contains("rows") || !summary["rows"].is_array()) throw MissingSeries("rows");
    if (summary["rows"].empty()) throw MissingSeries("rows", "empty");
    std::map<std::string, std::vector<std::pair<double, double>>> by_solver;
    std::vector<std::string> order;
    for (const auto& r : summary["rows"]) {
        const auto& m = r.at("metrics");
        if (!m.contains("accuracy")) throw MissingSeries("accuracy", "missing for solver '" + r.at("solver").get<std::string>() + "'");
        const auto& x = r.at("values").at(0);
        if (!x.is_number()) throw MissingSeries("ue_speed", "not numeric");
        auto name = r.at("solver").get<std::string>();
        if (!by_solver.contains(name)) order.push_back(name);
        by_solver[name].emplace_back(x.get<double>(), m.at("accuracy").get<double>());
    }
    std::vector<Line> lines;
    for (const auto& name : order) {
        auto pts = by_solver[name];
        std::stable_sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.first < b.first; });
        lines.push_back({name, pts});
    }
    std::string xlabel = summary.contains("parameters") && !summary["parameters"].empty()
                             ? summary["parameters"][0].get<std::string>()
                             : std::string("ue_speed");
    return line_plot(std::move(lines), "Beam accuracy versus UE speed", xlabel, "accuracy", true);
}

} // namespace detail

/// SVG text of the requested plot.
inline std::string render_plot(const Json& summary, PlotKind kind) {
    switch (kind) {
    case PlotKind::rsrp_heatmap: return detail::rsrp_heatmap(summary);
    case PlotKind::accuracy_vs_speed: return detail::accuracy_vs_speed(summary);
    case PlotKind::reward_curve: return detail::reward_curve(summary);
    }
    throw PreconditionError("unknown plot kind");
}

/// Reads a summary JSON file and writes the plot as a self-contained SVG.
inline void emit_plot(const std::filesystem::path& summary_file, PlotKind kind, const std::filesystem::path& svg_file) {
    std::ifstream in(summary_file);
    if (!in) throw ConfigError(summary_file.string(), "cannot open summary");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(summary_file.string(), e.what());
    }
    auto svg = render_plot(j, kind);
    if (svg_file.has_parent_path()) std::filesystem::create_directories(svg_file.parent_path());
    std::ofstream out(svg_file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + svg_file.string());
    out << svg;
}

} // namespace occam_rrm
