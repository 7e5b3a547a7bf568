#include <clocale>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "genconvex/certify.hpp"
#include "genconvex/io.hpp"
#include "genconvex/scenario.hpp"

namespace fs = std::filesystem;
using namespace genconvex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitEvidence = 2;  // escape flag / construction failure / inconsistency

DomainScenario resolve_scenario(const std::string& ref) {
    if (ref.rfind("builtin:", 0) == 0) return builtin_scenario(ref.substr(8));
    return load_scenario_file(ref);
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::stod(cur));
    return out;
}

double spec_param(const std::string& body, const std::string& key, double fallback) {
    // "r=0.75,n=64" style parameter lists
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t end = body.find(',', pos);
        if (end == std::string::npos) end = body.size();
        const std::string item = body.substr(pos, end - pos);
        const std::size_t eq = item.find('=');
        if (eq != std::string::npos && item.substr(0, eq) == key)
            return std::stod(item.substr(eq + 1));
        pos = end + 1;
    }
    return fallback;
}

// S-specs: chain:<i>, circle:r=..,n=.., torus:rz=..,rw=..,n=.., grid
std::vector<Point> resolve_set(const DomainScenario& sc, const std::string& spec) {
    if (spec.rfind("chain:", 0) == 0) {
        const int i = std::stoi(spec.substr(6));
        if (i < 1 || i > sc.chain.length())
            throw ScenarioError("set spec: chain index out of range");
        return chain_points(sc.grid, sc.chain, i - 1);
    }
    if (spec.rfind("circle:", 0) == 0) {
        const std::string body = spec.substr(7);
        return circle_samples(spec_param(body, "r", 0.75),
                              static_cast<int>(spec_param(body, "n", 64)));
    }
    if (spec.rfind("torus:", 0) == 0) {
        const std::string body = spec.substr(6);
        const int n = static_cast<int>(spec_param(body, "n", 16));
        return torus_samples(spec_param(body, "rz", 0.9), spec_param(body, "rw", 0.75), n, n);
    }
    if (spec == "grid") {
        std::vector<Point> pts;
        for (int i = 0; i < sc.grid.size(); ++i)
            if (!sc.grid.is_margin(i)) pts.push_back(sc.grid.points[static_cast<std::size_t>(i)]);
        return pts;
    }
    throw ScenarioError("unknown set spec \"" + spec + "\"");
}

Point resolve_point(const DomainScenario& sc, const std::string& spec) {
    if (spec.rfind("point:", 0) != 0)
        throw ScenarioError("query spec must look like point:c1,c2,...");
    std::vector<double> cs = parse_numbers(spec.substr(6));
    if (sc.grid.dim.n_complex > 0 && static_cast<int>(cs.size()) == sc.grid.dim.n_complex) {
        // shorthand: real parts only, imaginary parts zero
        cs.resize(static_cast<std::size_t>(sc.grid.dim.flat_size()), 0.0);
    }
    return Point(sc.grid.dim, cs);
}

json verdict_json(const Grid& g, int index, const HullVerdict& v) {
    json j;
    if (index >= 0) {
        j["index"] = index;
        j["point"] = certify_detail::point_json(g.points[static_cast<std::size_t>(index)]);
    }
    j["member"] = v.member;
    j["gap"] = v.gap;
    if (v.certificate) {
        json c;
        c["description"] = v.certificate->description;
        c["value_at_query"] = v.certificate->value_at_query;
        c["bound"] = v.certificate->bound;
        c["gap"] = v.certificate->gap;
        if (!v.certificate->coefficients.empty()) c["coefficients"] = v.certificate->coefficients;
        j["certificate"] = c;
    }
    return j;
}

HullMode default_mode(const FunctionFamily& F) {
    if (F.structure == FamilyStructure::cone_sample) return HullMode::cone;
    if (F.is_algebra()) return HullMode::modulus;
    return HullMode::linear;
}

int cmd_scenario(const std::string& name, const std::string& out) {
    const json j = builtin_scenario_json(name);
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        atomic_write(out, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_hull(const std::string& scenario_ref, const std::string& set_spec,
             const std::vector<std::string>& queries, const std::string& mode_str, double C,
             const std::string& out_dir) {
    DomainScenario sc = resolve_scenario(scenario_ref);
    const std::vector<Point> S = resolve_set(sc, set_spec);
    const HullMode mode = mode_str.empty() ? default_mode(sc.family)
                                           : hull_mode_from_string(mode_str);
    GridHull H = compute_hull(sc.family, S, sc.grid, C, mode, sc.options.tol);

    fs::create_directories(out_dir);
    atomic_write(fs::path(out_dir) / "hull.csv", hull_csv(sc.grid, H));
    atomic_write(fs::path(out_dir) / "hull.svg", hull_svg(sc.grid, H));
    atomic_write(fs::path(out_dir) / "features.csv", feature_matrix_csv(embed(sc.family, S)));

    json cert;
    cert["scenario"] = sc.name;
    cert["mode"] = to_string(mode);
    cert["C"] = C;
    cert["sample_count"] = H.sample_count;
    cert["escape"] = H.escape;
    json escapes = json::array();
    for (int idx : H.escape_indices)
        escapes.push_back(verdict_json(sc.grid, idx, H.verdicts[static_cast<std::size_t>(idx)]));
    cert["escapes"] = escapes;
    json nonmembers = json::array();
    int listed = 0;
    for (int i = 0; i < sc.grid.size() && listed < 200; ++i) {
        const auto& v = H.verdicts[static_cast<std::size_t>(i)];
        if (v.member) continue;
        nonmembers.push_back(verdict_json(sc.grid, i, v));
        ++listed;
    }
    cert["non_members"] = nonmembers;
    cert["non_members_truncated"] = listed == 200;
    json qresults = json::array();
    for (const std::string& q : queries) {
        const Point w = resolve_point(sc, q);
        HullVerdict v = membership(sc.family, S, w, mode, C, sc.options.tol);
        json qj = verdict_json(sc.grid, -1, v);
        qj["point"] = certify_detail::point_json(w);
        qresults.push_back(qj);
    }
    cert["queries"] = qresults;
    atomic_write(fs::path(out_dir) / "certificates.json", cert.dump(2) + "\n");

    if (H.escape) {
        std::cerr << "evidence: hull of " << set_spec << " reaches the margin layer at "
                  << H.escape_indices.size() << " grid points (non-compact hull)\n";
        return kExitEvidence;
    }
    return kExitOk;
}

int cmd_exhaust(const std::string& scenario_ref, std::string path, const std::string& out_dir) {
    DomainScenario sc = resolve_scenario(scenario_ref);
    if (path.empty()) {
        if (sc.family.structure == FamilyStructure::cone_sample)
            path = sc.grid.n_components > 1 ? "components" : "cone";
        else
            path = "symmetric";
    }
    fs::create_directories(out_dir);
    ExhaustionFunction p;
    json build_info;
    try {
        if (path == "symmetric") {
            SymmetricBuildInfo info;
            p = build_exhaustion_symmetric(sc.family, sc.grid, sc.chain, &info);
            build_info["path"] = "symmetric";
            build_info["levels"] = static_cast<int>(info.levels.size());
            build_info["max_on_K1"] = info.max_on_K1;
        } else if (path == "cone") {
            ConeBuildInfo info;
            p = build_exhaustion_cone(sc.family, sc.grid, sc.chain, &info);
            build_info["path"] = "cone";
        } else if (path == "components") {
            ConeBuildInfo info;
            p = build_exhaustion_components(sc.family, sc.grid, sc.chain, &info);
            build_info["path"] = "components";
        } else {
            throw ScenarioError("unknown path \"" + path +
                                "\" (have: symmetric, cone, components)");
        }
    } catch (const ExhaustionBuildError& e) {
        std::cerr << "evidence: exhaustion construction failed at level " << e.level;
        if (e.component >= 0) std::cerr << " (component " << e.component + 1 << ")";
        std::cerr << ": " << e.what() << "\n";
        if (e.witness_point) {
            std::cerr << "evidence: uncoverable point";
            for (double c : e.witness_point->coords) std::cerr << " " << fmt_double(c);
            std::cerr << "\n";
        }
        json fail;
        fail["error"] = e.what();
        fail["level"] = e.level;
        atomic_write(fs::path(out_dir) / "exhaustion.json", fail.dump(2) + "\n");
        return kExitEvidence;
    }

    json ej = exhaustion_json(p);
    ej["build"] = build_info;
    atomic_write(fs::path(out_dir) / "exhaustion.json", ej.dump(2) + "\n");
    atomic_write(fs::path(out_dir) / "values.csv", values_csv(sc.grid, p));
    atomic_write(fs::path(out_dir) / "contours.svg", contour_svg(sc.grid, p));

    int count = 0;
    for (int t = 1; t <= sc.options.polygon_cap; ++t) {
        bool touches = false, nonempty = false;
        for (int idx = 0; idx < sc.grid.size(); ++idx) {
            if (p.eval_grid(sc.grid, idx) <= t + sc.options.tol) {
                nonempty = true;
                if (sc.grid.is_margin(idx)) {
                    touches = true;
                    break;
                }
            }
        }
        if (touches) break;
        if (nonempty) count = t;
    }
    PolygonExhaustion polys = polygon_exhaustion(p, sc.grid, count, sc.options.tol);
    atomic_write(fs::path(out_dir) / "polygons.json",
                 polygons_json(sc.family, polys).dump(2) + "\n");
    return kExitOk;
}

int cmd_certify(const std::string& scenario_ref, const std::string& out_dir) {
    DomainScenario sc = resolve_scenario(scenario_ref);
    CertReport rep = cartan_thullen_report(sc);
    fs::create_directories(out_dir);
    atomic_write(fs::path(out_dir) / "report.json", rep.to_json().dump(2) + "\n");
    atomic_write(fs::path(out_dir) / "report.txt", rep.to_text());
    if (rep.classification != "consistent-with-convex") {
        std::cerr << "evidence: scenario " << sc.name
                  << " is inconsistent with hull compactness at this truncation\n";
        return kExitEvidence;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"generalized convex hulls, exhaustion functions and domain certification"};
    app.require_subcommand(1);

    std::string name = "disc", out, scenario_ref, set_spec = "chain:1", mode_str, path;
    std::vector<std::string> queries;
    double C = 1.0;

    auto* sc_cmd = app.add_subcommand("scenario", "emit a bundled scenario file");
    sc_cmd->add_option("name", name, "disc|annulus|polydisc|hartogs|twodisc")->required();
    sc_cmd->add_option("--out", out, "output file (stdout when omitted)");

    auto* hull_cmd = app.add_subcommand("hull", "compute a hull over the scenario grid");
    hull_cmd->add_option("scenario", scenario_ref, "scenario file or builtin:<name>")->required();
    hull_cmd->add_option("--set", set_spec, "sample set: chain:<i>|circle:r=..,n=..|torus:..|grid");
    hull_cmd->add_option("--query", queries, "extra query points, point:c1,c2,...");
    hull_cmd->add_option("--mode", mode_str, "cone|linear|C|modulus (family default)");
    hull_cmd->add_option("--C", C, "hull constant, >= 1");
    hull_cmd->add_option("--out", out, "output directory")->required();

    auto* ex_cmd = app.add_subcommand("exhaust", "build an exhaustion function");
    ex_cmd->add_option("scenario", scenario_ref, "scenario file or builtin:<name>")->required();
    ex_cmd->add_option("--path", path, "symmetric|cone|components (family default)");
    ex_cmd->add_option("--out", out, "output directory")->required();

    auto* ct_cmd = app.add_subcommand("certify", "run the full certification battery");
    ct_cmd->add_option("scenario", scenario_ref, "scenario file or builtin:<name>")->required();
    ct_cmd->add_option("--out", out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_cmd->parsed()) return cmd_scenario(name, out);
        if (hull_cmd->parsed()) return cmd_hull(scenario_ref, set_spec, queries, mode_str, C, out);
        if (ex_cmd->parsed()) return cmd_exhaust(scenario_ref, path, out);
        if (ct_cmd->parsed()) return cmd_certify(scenario_ref, out);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
