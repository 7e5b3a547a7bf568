#pragma once

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "genconvex/certify.hpp"
#include "genconvex/chain.hpp"
#include "genconvex/family.hpp"
#include "genconvex/grid.hpp"

namespace genconvex {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace scenario_detail {

inline void require_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed,
                         const std::set<std::string>& required) {
    if (!obj.is_object()) throw ScenarioError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ScenarioError(where + ": unknown key \"" + key + "\"");
    for (const auto& key : required)
        if (!obj.contains(key)) throw ScenarioError(where + ": missing key \"" + key + "\"");
}

template <class T>
T get(const json& obj, const std::string& where, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError(where + ": bad value for \"" + key + "\"");
    }
}

template <class T>
T need(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ScenarioError(where + ": missing key \"" + key + "\"");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError(where + ": bad value for \"" + key + "\"");
    }
}

}  // namespace scenario_detail

inline Grid load_grid(const json& j) {
    using namespace scenario_detail;
    const std::string kind = need<std::string>(j, "grid", "kind");
    const int res = get<int>(j, "grid", "resolution", 41);
    const int mc = get<int>(j, "grid", "margin_cells", 1);
    if (res < 8) throw ScenarioError("grid: resolution must be >= 8 cells per axis");
    if (mc < 1) throw ScenarioError("grid: margin_cells must be >= 1");
    if (kind == "rect") {
        require_keys(j, "grid", {"kind", "x0", "x1", "y0", "y1", "resolution", "margin_cells"},
                     {"kind"});
        return make_rect_grid(get<double>(j, "grid", "x0", -1.0), get<double>(j, "grid", "x1", 1.0),
                              get<double>(j, "grid", "y0", -1.0), get<double>(j, "grid", "y1", 1.0),
                              res, mc);
    }
    if (kind == "disc") {
        require_keys(j, "grid", {"kind", "radius", "resolution", "margin_cells"}, {"kind"});
        return make_disc_grid(get<double>(j, "grid", "radius", 1.0), res, mc);
    }
    if (kind == "annulus") {
        require_keys(j, "grid", {"kind", "r0", "r1", "resolution", "angles", "margin_cells"},
                     {"kind"});
        return make_annulus_grid(get<double>(j, "grid", "r0", 0.5),
                                 get<double>(j, "grid", "r1", 1.0), res,
                                 get<int>(j, "grid", "angles", 64), mc);
    }
    if (kind == "bidisc") {
        require_keys(j, "grid", {"kind", "resolution", "margin_cells"}, {"kind"});
        return make_bidisc_grid(res, mc);
    }
    if (kind == "hartogs") {
        require_keys(j, "grid", {"kind", "resolution", "margin_cells", "notch_z", "notch_w"},
                     {"kind"});
        return make_hartogs_grid(res, mc, get<double>(j, "grid", "notch_z", 0.8),
                                 get<double>(j, "grid", "notch_w", 0.5));
    }
    if (kind == "twodisc") {
        require_keys(j, "grid", {"kind", "centers", "radius", "resolution", "margin_cells"},
                     {"kind"});
        const auto centers = get<std::vector<double>>(j, "grid", "centers", {-2.0, 2.0});
        if (centers.size() != 2) throw ScenarioError("grid: centers must list two abscissae");
        return make_twodisc_grid(centers[0], centers[1], get<double>(j, "grid", "radius", 1.0),
                                 res, mc);
    }
    if (kind == "points") {
        require_keys(j, "grid",
                     {"kind", "points", "n_real", "n_complex", "margin", "component", "cell"},
                     {"kind", "points", "cell"});
        Dimension dim{get<int>(j, "grid", "n_real", 0), get<int>(j, "grid", "n_complex", 0)};
        std::vector<Point> pts;
        for (const auto& row : need<std::vector<std::vector<double>>>(j, "grid", "points"))
            pts.emplace_back(dim, row);
        std::vector<std::uint8_t> margin;
        for (int m : get<std::vector<int>>(j, "grid", "margin", {}))
            margin.push_back(static_cast<std::uint8_t>(m != 0));
        return make_points_grid(std::move(pts), std::move(margin),
                                get<std::vector<int>>(j, "grid", "component", {}),
                                need<double>(j, "grid", "cell"));
    }
    throw ScenarioError("grid: unknown kind \"" + kind + "\"");
}

inline FunctionFamily load_family(const json& j, int cone_directions) {
    using namespace scenario_detail;
    require_keys(j, "family",
                 {"kind", "n_real", "n_complex", "max_degree", "laurent", "cone_sample"},
                 {"kind"});
    const std::string kind = need<std::string>(j, "family", "kind");
    if (kind == "affine") {
        if (get<bool>(j, "family", "cone_sample", false))
            return direction_cone(cone_directions);
        return affine_family(get<int>(j, "family", "n_real", 2));
    }
    if (kind == "monomial") {
        return monomial_family(get<int>(j, "family", "n_complex", 1),
                               get<int>(j, "family", "max_degree", 4),
                               get<bool>(j, "family", "laurent", false));
    }
    throw ScenarioError("family: unknown kind \"" + kind + "\"");
}

inline CompactChain load_chain(const json& j, const Grid& grid) {
    using namespace scenario_detail;
    require_keys(j, "chain", {"kind", "radii", "pairs", "cells", "sets", "centers"}, {"kind"});
    const std::string kind = need<std::string>(j, "chain", "kind");
    CompactChain chain;
    if (kind == "radial") {
        chain = radial_chain(grid, need<std::vector<double>>(j, "chain", "radii"),
                             get<std::vector<double>>(j, "chain", "centers", {}));
    } else if (kind == "annuli") {
        std::vector<std::pair<double, double>> st;
        for (const auto& row : need<std::vector<std::vector<double>>>(j, "chain", "pairs")) {
            if (row.size() != 2) throw ScenarioError("chain: each pair needs [inner, outer]");
            st.emplace_back(row[0], row[1]);
        }
        chain = annuli_chain(grid, st);
    } else if (kind == "insets") {
        chain = hartogs_inset_chain(grid, need<std::vector<int>>(j, "chain", "cells"));
    } else if (kind == "explicit") {
        chain.sets = need<std::vector<std::vector<int>>>(j, "chain", "sets");
    } else {
        throw ScenarioError("chain: unknown kind \"" + kind + "\"");
    }
    validate_chain(grid, chain);
    return chain;
}

inline CertifyOptions load_options(const json& j) {
    using namespace scenario_detail;
    CertifyOptions o;
    if (j.is_null()) return o;
    require_keys(j, "options",
                 {"C", "tol", "max_degree_sweep", "k_cap", "cone_directions", "polygons",
                  "witness_steps"},
                 {});
    o.C_list = get<std::vector<double>>(j, "options", "C", {1.0});
    o.tol = get<double>(j, "options", "tol", 1e-9);
    o.max_degree_sweep = get<int>(j, "options", "max_degree_sweep", 16);
    o.k_cap = get<int>(j, "options", "k_cap", 512);
    o.cone_directions = get<int>(j, "options", "cone_directions", 32);
    o.polygon_cap = get<int>(j, "options", "polygons", 8);
    o.witness_steps = get<int>(j, "options", "witness_steps", 3);
    for (double c : o.C_list)
        if (c < 1.0) throw ScenarioError("options: every C must be >= 1");
    if (o.tol <= 0) throw ScenarioError("options: tol must be positive");
    return o;
}

inline DomainScenario load_scenario(const json& j) {
    using namespace scenario_detail;
    require_keys(j, "scenario", {"name", "grid", "chain", "family", "options", "expected"},
                 {"name", "grid", "chain", "family"});
    DomainScenario sc;
    sc.name = need<std::string>(j, "scenario", "name");
    sc.options = load_options(j.contains("options") ? j.at("options") : json());
    sc.grid = load_grid(j.at("grid"));
    sc.family = load_family(j.at("family"), sc.options.cone_directions);
    sc.chain = load_chain(j.at("chain"), sc.grid);
    sc.expected = get<std::string>(j, "scenario", "expected", "");
    if (sc.family.dim != sc.grid.dim)
        throw ScenarioError("scenario: family and grid dimensions disagree");
    return sc;
}

inline DomainScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ScenarioError("scenario file " + path + ": " + e.what());
    }
    return load_scenario(j);
}

// Bundled scenario generators, so runs need no hand-written geometry.
inline json builtin_scenario_json(const std::string& name) {
    json j;
    j["name"] = name;
    if (name == "disc") {
        j["grid"] = {{"kind", "disc"}, {"radius", 1.0}, {"resolution", 61}, {"margin_cells", 2}};
        j["chain"] = {{"kind", "radial"}, {"radii", {0.5, 0.75, 0.875, 0.9375}}};
        j["family"] = {{"kind", "monomial"}, {"n_complex", 1}, {"max_degree", 8},
                       {"laurent", false}};
        j["options"] = {{"C", {1.0, 10.0}}, {"tol", 1e-9}, {"max_degree_sweep", 16}};
        j["expected"] = "consistent-with-convex";
    } else if (name == "annulus") {
        j["grid"] = {{"kind", "annulus"}, {"r0", 0.5}, {"r1", 1.0}, {"resolution", 51},
                     {"angles", 64}, {"margin_cells", 2}};
        j["chain"] = {{"kind", "annuli"},
                      {"pairs", {{0.72, 0.78}, {0.66, 0.85}, {0.6, 0.93}, {0.55, 0.95}}}};
        j["family"] = {{"kind", "monomial"}, {"n_complex", 1}, {"max_degree", 8},
                       {"laurent", true}};
        j["options"] = {{"C", {1.0, 10.0}}, {"tol", 1e-9}, {"max_degree_sweep", 16}};
        j["expected"] = "consistent-with-convex";
    } else if (name == "polydisc") {
        j["grid"] = {{"kind", "bidisc"}, {"resolution", 41}, {"margin_cells", 2}};
        j["chain"] = {{"kind", "radial"}, {"radii", {0.5, 0.75, 0.875, 0.9375}}};
        j["family"] = {{"kind", "monomial"}, {"n_complex", 2}, {"max_degree", 4},
                       {"laurent", false}};
        j["options"] = {{"C", {1.0, 10.0}}, {"tol", 1e-9}, {"max_degree_sweep", 8}};
        j["expected"] = "consistent-with-convex";
    } else if (name == "hartogs") {
        j["grid"] = {{"kind", "hartogs"}, {"resolution", 41}, {"margin_cells", 1},
                     {"notch_z", 0.8}, {"notch_w", 0.5}};
        j["chain"] = {{"kind", "insets"}, {"cells", {4, 3, 2, 1}}};
        j["family"] = {{"kind", "monomial"}, {"n_complex", 2}, {"max_degree", 4},
                       {"laurent", false}};
        j["options"] = {{"C", {1.0, 10.0}}, {"tol", 1e-9}, {"max_degree_sweep", 8}};
        j["expected"] = "inconsistent";
    } else if (name == "twodisc") {
        j["grid"] = {{"kind", "twodisc"}, {"centers", {-2.0, 2.0}}, {"radius", 1.0},
                     {"resolution", 41}, {"margin_cells", 2}};
        j["chain"] = {{"kind", "radial"}, {"radii", {0.4, 0.55, 0.7, 0.85}},
                      {"centers", {-2.0, 2.0}}};
        j["family"] = {{"kind", "affine"}, {"n_real", 2}, {"cone_sample", true}};
        j["options"] = {{"C", {1.0}}, {"tol", 1e-9}, {"cone_directions", 32}};
        j["expected"] = "consistent-with-convex";
    } else {
        throw ScenarioError("unknown builtin scenario \"" + name +
                            "\" (have: disc, annulus, polydisc, hartogs, twodisc)");
    }
    return j;
}

inline DomainScenario builtin_scenario(const std::string& name) {
    // accepted aliases for the bundled fixtures
    std::string canonical = name;
    if (name == "bidisc") canonical = "polydisc";
    if (name == "two-disc") canonical = "twodisc";
    return load_scenario(builtin_scenario_json(canonical));
}

}  // namespace genconvex
