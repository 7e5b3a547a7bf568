#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "genconvex/embed.hpp"
#include "genconvex/exhaustion.hpp"
#include "genconvex/grid.hpp"
#include "genconvex/hull.hpp"

namespace genconvex {

// Locale-independent float rendering at 17 significant digits, so identical
// inputs produce byte-identical artifacts.
inline std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string feature_matrix_csv(const FeatureMatrix& M) {
    std::ostringstream os;
    os << "basis";
    for (int c = 0; c < M.cols; ++c) os << ",p" << c;
    os << "\n";
    for (int r = 0; r < M.rows; ++r) {
        os << '"' << M.row_labels[static_cast<std::size_t>(r)] << '"';
        for (int c = 0; c < M.cols; ++c) os << "," << fmt_double(M.at(r, c));
        os << "\n";
    }
    return os.str();
}

inline std::string hull_csv(const Grid& g, const GridHull& H) {
    std::ostringstream os;
    os << "index";
    for (int d = 0; d < g.dim.flat_size(); ++d) os << ",c" << d;
    os << ",member,margin,gap\n";
    for (int i = 0; i < g.size(); ++i) {
        os << i;
        for (double c : g.points[static_cast<std::size_t>(i)].coords) os << "," << fmt_double(c);
        const auto& v = H.verdicts[static_cast<std::size_t>(i)];
        os << "," << (v.member ? 1 : 0) << "," << (g.is_margin(i) ? 1 : 0) << ","
           << fmt_double(v.gap) << "\n";
    }
    return os.str();
}

inline std::string values_csv(const Grid& g, const ExhaustionFunction& p) {
    std::ostringstream os;
    os << "index";
    for (int d = 0; d < g.dim.flat_size(); ++d) os << ",c" << d;
    os << ",component,margin,p\n";
    for (int i = 0; i < g.size(); ++i) {
        os << i;
        for (double c : g.points[static_cast<std::size_t>(i)].coords) os << "," << fmt_double(c);
        os << "," << g.component[static_cast<std::size_t>(i)] << "," << (g.is_margin(i) ? 1 : 0)
           << "," << fmt_double(p.eval_grid(g, i)) << "\n";
    }
    return os.str();
}

namespace io_detail {

struct SvgFrame {
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1, scale = 1;
    int width = 640, height = 640;

    static SvgFrame fit(const Grid& g) {
        SvgFrame f;
        f.x0 = 1e300;
        f.y0 = 1e300;
        f.x1 = -1e300;
        f.y1 = -1e300;
        for (const auto& xy : g.plot_xy) {
            f.x0 = std::min(f.x0, xy[0]);
            f.x1 = std::max(f.x1, xy[0]);
            f.y0 = std::min(f.y0, xy[1]);
            f.y1 = std::max(f.y1, xy[1]);
        }
        const double pad = 2.0 * g.cell;
        f.x0 -= pad;
        f.y0 -= pad;
        f.x1 += pad;
        f.y1 += pad;
        const double w = f.x1 - f.x0, h = f.y1 - f.y0;
        f.scale = 600.0 / std::max(w, h);
        f.width = static_cast<int>(w * f.scale) + 40;
        f.height = static_cast<int>(h * f.scale) + 40;
        return f;
    }
    double px(double x) const { return 20 + (x - x0) * scale; }
    double py(double y) const { return height - 20 - (y - y0) * scale; }
};

inline void svg_header(std::ostringstream& os, const SvgFrame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
       << f.height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void svg_dot(std::ostringstream& os, const SvgFrame& f, double x, double y, double r,
                    const std::string& fill, const std::string& stroke = "") {
    os << "<circle cx=\"" << fmt_double(f.px(x)) << "\" cy=\"" << fmt_double(f.py(y))
       << "\" r=\"" << fmt_double(r) << "\" fill=\"" << fill << "\"";
    if (!stroke.empty()) os << " stroke=\"" << stroke << "\" stroke-width=\"1.5\"";
    os << "/>\n";
}

}  // namespace io_detail

// Members filled, non-members faint, escapes ringed in red.
inline std::string hull_svg(const Grid& g, const GridHull& H) {
    using namespace io_detail;
    const SvgFrame f = SvgFrame::fit(g);
    std::ostringstream os;
    svg_header(os, f);
    const double r = std::max(1.5, g.cell * f.scale * 0.42);
    for (int i = 0; i < g.size(); ++i) {
        const auto& xy = g.plot_xy[static_cast<std::size_t>(i)];
        const bool member = H.verdicts[static_cast<std::size_t>(i)].member;
        const bool escape = member && g.is_margin(i);
        svg_dot(os, f, xy[0], xy[1], r, member ? "#1f77b4" : "#e8e8e8",
                escape ? "#d62728" : "");
    }
    os << "</svg>\n";
    return os.str();
}

// Integer level-bucket shading of an exhaustion function.
inline std::string contour_svg(const Grid& g, const ExhaustionFunction& p, int max_level = 6) {
    using namespace io_detail;
    const SvgFrame f = SvgFrame::fit(g);
    std::ostringstream os;
    svg_header(os, f);
    const double r = std::max(1.5, g.cell * f.scale * 0.42);
    static const char* palette[] = {"#08306b", "#2171b5", "#6baed6", "#c6dbef",
                                    "#fdd0a2", "#fd8d3c", "#d94801"};
    for (int i = 0; i < g.size(); ++i) {
        const auto& xy = g.plot_xy[static_cast<std::size_t>(i)];
        const double v = p.eval_grid(g, i);
        int bucket = static_cast<int>(std::floor(v));
        bucket = std::clamp(bucket, 0, std::min(max_level, 6));
        svg_dot(os, f, xy[0], xy[1], r, palette[bucket]);
    }
    os << "</svg>\n";
    return os.str();
}

inline nlohmann::json scaled_term_json(const FunctionFamily& F, const ScaledTerm& st) {
    nlohmann::json j;
    j["term"] = term_describe(F, st.term);
    j["magnitude"] = st.magnitude;
    j["scale"] = st.scale;
    j["offset"] = st.offset;
    j["sup_norm"] = st.sup_norm;
    return j;
}

inline nlohmann::json exhaustion_json(const ExhaustionFunction& p) {
    nlohmann::json j;
    j["combiner"] = p.combiner == Combiner::indexed_max ? "indexed_max" : "max";
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& part : p.parts) {
        nlohmann::json pj;
        pj["component"] = part.component;
        pj["offset"] = part.offset;
        nlohmann::json levels = nlohmann::json::array();
        for (const auto& lvl : part.levels) {
            nlohmann::json lj;
            lj["index"] = lvl.level_index;
            lj["floor_zero"] = lvl.floor_zero;
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& st : lvl.terms) terms.push_back(scaled_term_json(p.family, st));
            lj["terms"] = terms;
            levels.push_back(lj);
        }
        pj["levels"] = levels;
        parts.push_back(pj);
    }
    j["parts"] = parts;
    return j;
}

inline nlohmann::json polygons_json(const FunctionFamily& F, const PolygonExhaustion& polys) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& poly : polys.polygons) {
        nlohmann::json pj;
        pj["index"] = poly.index;
        pj["members"] = poly.members.size();
        pj["touches_margin"] = poly.touches_margin;
        nlohmann::json fns = nlohmann::json::array();
        for (const auto& f : poly.functions) {
            nlohmann::json fj = scaled_term_json(F, f.fn);
            fj["component"] = f.component;
            fj["threshold"] = 1.0;
            fns.push_back(fj);
        }
        pj["functions"] = fns;
        j.push_back(pj);
    }
    return j;
}

}  // namespace genconvex
