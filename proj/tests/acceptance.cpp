// Acceptance battery: one criterion per section, each timed against its
// budget and printing a single pass/fail line. Exit code = number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "genconvex/certify.hpp"
#include "genconvex/exhaustion.hpp"
#include "genconvex/hull.hpp"
#include "genconvex/oracle.hpp"
#include "genconvex/scenario.hpp"
#include "genconvex/witness.hpp"

using namespace genconvex;

namespace {

struct Checker {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

Point zpt(double re, double im = 0.0) {
    return Point::complex_point({std::complex<double>(re, im)});
}

double radius_of(const Point& p) { return std::hypot(p.coords[0], p.coords[1]); }

// ---------------------------------------------------------------------- 1
void affine_oracle_equivalence(Checker& c) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_int_distribution<int> size(3, 20);
    const FunctionFamily F = affine_family(2);
    const Grid grid = make_rect_grid(0, 1, 0, 1, 41, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = size(rng);
        std::vector<Point> S;
        std::vector<Point2> S2;
        for (int i = 0; i < n; ++i) {
            const double x = u(rng), y = u(rng);
            S.push_back(Point::real({x, y}));
            S2.push_back({x, y});
        }
        const HullPolygon oracle = classical_hull_oracle(S2);
        GridHull H = compute_hull(F, S, grid, 1.0, HullMode::linear, 1e-7);
        for (int i = 0; i < grid.size(); ++i) {
            const Point& p = grid.points[static_cast<std::size_t>(i)];
            const double d = oracle.outside_distance({p.x(0), p.x(1)});
            if (std::abs(d) <= 1e-7) continue;
            if (H.verdicts[static_cast<std::size_t>(i)].member != (d < 0)) {
                std::ostringstream os;
                os << "trial " << trial << ": disagreement at (" << p.x(0) << ", " << p.x(1)
                   << "), oracle distance " << d;
                c.failures.push_back(os.str());
                return;
            }
        }
    }
}

// ---------------------------------------------------------------------- 2
void hull_operator_laws(Checker& c) {
    std::mt19937_64 rng(7771);
    std::uniform_real_distribution<double> ur(0.05, 0.95);
    std::uniform_real_distribution<double> uc(-0.8, 0.8);
    const FunctionFamily A = affine_family(2);
    const FunctionFamily M = monomial_family(1, 4, false);
    const FunctionFamily D = direction_cone(16);
    auto rand_real = [&](int n) {
        std::vector<Point> S;
        for (int i = 0; i < n; ++i) S.push_back(Point::real({ur(rng), ur(rng)}));
        return S;
    };
    auto rand_complex = [&](int n) {
        std::vector<Point> S;
        for (int i = 0; i < n; ++i) S.push_back(zpt(uc(rng), uc(rng)));
        return S;
    };

    // extensiveness: every s in S is a member at C = 1, all modes
    for (int t = 0; t < 50; ++t) {
        if (t % 3 == 0) {
            auto S = rand_real(6);
            for (const Point& s : S)
                c.require(membership_linear(A, S, s, 1e-9).member, "extensiveness (linear)");
        } else if (t % 3 == 1) {
            auto S = rand_complex(6);
            for (const Point& s : S)
                c.require(membership_modulus(M, S, s, 1.0, 1e-9).member,
                          "extensiveness (modulus)");
        } else {
            auto S = rand_real(6);
            for (const Point& s : S)
                c.require(membership_cone_direct(D, S, s, 1.0, 1e-9).member,
                          "extensiveness (cone)");
        }
        if (!c.failures.empty()) return;
    }
    // monotonicity: S c T propagates membership
    for (int t = 0; t < 50; ++t) {
        if (t % 2 == 0) {
            auto S = rand_real(5);
            auto T = S;
            auto extra = rand_real(4);
            T.insert(T.end(), extra.begin(), extra.end());
            for (int q = 0; q < 6; ++q) {
                Point w = Point::real({ur(rng), ur(rng)});
                if (membership_linear(A, S, w, 1e-9).member)
                    c.require(membership_linear(A, T, w, 1e-9).member, "monotonicity (linear)");
            }
        } else {
            auto S = rand_complex(5);
            auto T = S;
            auto extra = rand_complex(4);
            T.insert(T.end(), extra.begin(), extra.end());
            for (int q = 0; q < 6; ++q) {
                Point w = zpt(uc(rng), uc(rng));
                if (membership_modulus(M, S, w, 1.0, 1e-9).member)
                    c.require(membership_modulus(M, T, w, 1.0, 1e-9).member,
                              "monotonicity (modulus)");
            }
        }
        if (!c.failures.empty()) return;
    }
    // C-nestedness
    const double Cs[] = {1.0, 2.0, 5.0, 10.0};
    for (int t = 0; t < 50; ++t) {
        const double C1 = Cs[t % 3];
        const double C2 = Cs[t % 3 + 1];
        if (t % 2 == 0) {
            auto S = rand_real(5);
            for (int q = 0; q < 5; ++q) {
                Point w = Point::real({2 * ur(rng) - 0.5, 2 * ur(rng) - 0.5});
                if (membership_C(A, S, w, C1, 1e-9).member)
                    c.require(membership_C(A, S, w, C2, 1e-9).member, "C-nestedness (LP)");
            }
        } else {
            auto S = rand_complex(5);
            for (int q = 0; q < 5; ++q) {
                Point w = zpt(1.5 * uc(rng), 1.5 * uc(rng));
                if (membership_modulus(M, S, w, C1, 1e-9).member)
                    c.require(membership_modulus(M, S, w, C2, 1e-9).member,
                              "C-nestedness (modulus)");
            }
        }
        if (!c.failures.empty()) return;
    }
    // grid idempotence
    const Grid rg = make_rect_grid(0, 1, 0, 1, 13, 1);
    const Grid dg = make_disc_grid(1.0, 15, 1);
    std::uniform_int_distribution<int> rpick(0, rg.size() - 1);
    std::uniform_int_distribution<int> dpick(0, dg.size() - 1);
    for (int t = 0; t < 50; ++t) {
        const bool lp = t % 2 == 0;
        const Grid& g = lp ? rg : dg;
        const FunctionFamily& F = lp ? A : M;
        std::vector<Point> S;
        for (int i = 0; i < 8; ++i)
            S.push_back(g.points[static_cast<std::size_t>(lp ? rpick(rng) : dpick(rng))]);
        const HullMode mode = lp ? HullMode::linear : HullMode::modulus;
        GridHull H1 = compute_hull(F, S, g, 1.0, mode, 1e-9);
        const auto M1 = H1.member_indices();
        if (M1.empty()) continue;
        GridHull H2 = compute_hull(F, gather_points(g, M1), g, 1.0, mode, 1e-9);
        c.require(H2.member_indices() == M1, "grid idempotence");
        if (!c.failures.empty()) return;
    }
}

// ---------------------------------------------------------------------- 3
void disc_positive_control(Checker& c) {
    const DomainScenario sc = builtin_scenario("disc");
    const auto S = circle_samples(0.75, 64);
    GridHull H = compute_hull(sc.family, S, sc.grid, 1.0, HullMode::modulus, 1e-9);
    c.require(!H.escape, "escape flag fired on the disc control");
    double max_sample_r = 0;
    for (const Point& s : S) max_sample_r = std::max(max_sample_r, radius_of(s));
    for (int i = 0; i < sc.grid.size(); ++i) {
        const double r = radius_of(sc.grid.points[static_cast<std::size_t>(i)]);
        const bool member = H.verdicts[static_cast<std::size_t>(i)].member;
        if (r <= 0.75 && !member) c.require(false, "interior disc point excluded");
        if (member && r > 0.75 + sc.grid.cell_diag)
            c.require(false, "member beyond one cell of the circle");
        // independent per-monomial max-modulus oracle on radii
        if (std::abs(r - 0.75) > 1e-6) {
            bool oracle = true;
            for (int k = 1; k <= 8; ++k)
                if (std::pow(r, k) > std::pow(max_sample_r, k) + 1e-9) oracle = false;
            if (oracle != member) c.require(false, "modulus oracle disagrees");
        }
        if (!c.failures.empty()) return;
    }
}

// ---------------------------------------------------------------------- 4
void laurent_contrast(Checker& c) {
    const DomainScenario sc = builtin_scenario("annulus");
    const auto S = circle_samples(0.75, 64);
    const FunctionFamily F = monomial_family(1, 8, true);
    GridHull H = compute_hull(F, S, sc.grid, 1.0, HullMode::modulus, 1e-9);
    std::vector<int> expected;
    for (int i = 0; i < sc.grid.size(); ++i)
        if (std::abs(radius_of(sc.grid.points[static_cast<std::size_t>(i)]) - 0.75) < 1e-9)
            expected.push_back(i);
    c.require(!expected.empty(), "annulus grid misses the sampled circle");
    c.require(H.member_indices() == expected,
              "Laurent hull is not exactly the sampled circle's grid shell");
}

// ---------------------------------------------------------------------- 5
void hartogs_negative_control(Checker& c, const char* cli) {
    const DomainScenario sc = builtin_scenario("hartogs");
    const auto K = torus_samples(0.9, 0.75, 16, 16);
    // nearest grid point to (0.7, 0)
    const Point target(Dimension{0, 2}, {0.7, 0.0, 0.0, 0.0});
    int nearest = 0;
    double best = 1e300;
    for (int i = 0; i < sc.grid.size(); ++i) {
        const double d = distance(sc.grid.points[static_cast<std::size_t>(i)], target);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    const Point& w = sc.grid.points[static_cast<std::size_t>(nearest)];
    c.require(w.x(0) < 0.8 && w.x(2) == 0.0, "nearest grid point is not in the notch slice");
    c.require(sc.grid.is_margin(nearest), "notch probe point is not margin-flagged");
    c.require(membership_modulus(sc.family, K, w, 1.0, 1e-9).member,
              "(0.7, 0) is not a hull member");
    for (int j = 0; j <= 4; ++j)
        for (int k = 0; j + k <= 4; ++k)
            if (!(j == 0 && k == 0))
                c.require(std::pow(0.7, j) * std::pow(0.0, k) <=
                              std::pow(0.9, j) * std::pow(0.75, k) + 1e-12,
                          "monomial oracle violated");
    // cmd_hull exit code contract
    const std::string out = "/tmp/genconvex_acceptance_hartogs";
    const std::string cmd = std::string(cli) +
                            " hull builtin:hartogs --set torus:rz=0.9,rw=0.75,n=16"
                            " --query point:0.7,0 --out " +
                            out + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    c.require(WEXITSTATUS(raw) == 2, "cmd_hull did not exit 2 on the Hartogs escape");
}

// ---------------------------------------------------------------------- 6
void exhaustion_construction(Checker& c) {
    const Grid grid = make_disc_grid(1.0, 61, 2);
    const CompactChain chain = radial_chain(grid, {0.5, 0.75, 0.875, 0.9375});
    const FunctionFamily F = monomial_family(1, 6, false);
    SymmetricBuildInfo info;
    ExhaustionFunction p;
    try {
        p = build_exhaustion_symmetric(F, grid, chain, &info);
    } catch (const std::exception& e) {
        c.require(false, std::string("build failed: ") + e.what());
        return;
    }
    bool deg3 = false;
    for (int d : info.levels.at(0).degrees) deg3 = deg3 || d == 3;
    c.require(deg3, "level-1 selection lacks a degree-3 monomial");
    c.require(std::pow(0.875, 3) > 4 * std::pow(0.5, 3), "hand check 0.875^3 > 4*0.5^3");
    // pointwise level guarantees
    for (std::size_t L = 0; L < p.parts[0].levels.size(); ++L) {
        const auto& lvl = p.parts[0].levels[L];
        const int i = lvl.level_index;
        for (int idx : chain.at(i - 1))
            c.require(lvl.eval(F, grid.points[static_cast<std::size_t>(idx)]) <=
                          std::pow(0.5, i) + 1e-9,
                      "p_i exceeds 2^-i on K_i");
        for (int idx : index_difference(chain.at(i + 2), chain.at(i + 1)))
            c.require(lvl.eval(F, grid.points[static_cast<std::size_t>(idx)]) >=
                          std::pow(2.0, i) - 1e-9,
                      "p_i below 2^i on its shell");
    }
    for (int idx : chain.at(0))
        c.require(p.eval_grid(grid, idx) <= 0.5 + 1e-9, "p exceeds 1/2 on K_1");
}

// ---------------------------------------------------------------------- 7
void cone_path_properness(Checker& c) {
    const Grid grid = make_disc_grid(1.0, 61, 2);
    const FunctionFamily F = monomial_family(1, 6, false);
    for (const auto& radii : {std::vector<double>{0.5, 0.75, 0.875, 0.9375},
                              std::vector<double>{0.5, 0.625, 0.75, 0.875, 0.9375}}) {
        const CompactChain chain = radial_chain(grid, radii);
        ExhaustionFunction p;
        try {
            p = build_exhaustion_cone(F, grid, chain, nullptr);
        } catch (const std::exception& e) {
            c.require(false, std::string("cone build failed: ") + e.what());
            return;
        }
        const int N = chain.length();
        for (int i = 1; i + 3 <= N; ++i) {
            std::vector<bool> inside(static_cast<std::size_t>(grid.size()), false);
            for (int idx : chain.at(i + 1)) inside[static_cast<std::size_t>(idx)] = true;
            for (int idx = 0; idx < grid.size(); ++idx)
                if (!inside[static_cast<std::size_t>(idx)])
                    c.require(p.eval_grid(grid, idx) >= i - 1e-9, "p < i outside K_{i+2}");
        }
        PropernessReport rep = properness_check(p, chain, grid);
        c.require(rep.pass, "sublevel {p <= t} left K_{t+3} or touched the margin");
        if (!c.failures.empty()) return;
    }
}

// ---------------------------------------------------------------------- 8
struct BuiltExhaustion {
    std::string name;
    DomainScenario sc;
    ExhaustionFunction p;
};

std::vector<BuiltExhaustion> build_all_exhaustions() {
    std::vector<BuiltExhaustion> out;
    {
        BuiltExhaustion b{"disc-symmetric", builtin_scenario("disc"), {}};
        b.p = build_exhaustion_symmetric(b.sc.family, b.sc.grid, b.sc.chain, nullptr);
        out.push_back(std::move(b));
    }
    {
        BuiltExhaustion b{"disc-cone", builtin_scenario("disc"), {}};
        b.sc.chain = radial_chain(b.sc.grid, {0.5, 0.625, 0.75, 0.875, 0.9375});
        b.p = build_exhaustion_cone(b.sc.family, b.sc.grid, b.sc.chain, nullptr);
        out.push_back(std::move(b));
    }
    {
        BuiltExhaustion b{"annulus-symmetric", builtin_scenario("annulus"), {}};
        b.p = build_exhaustion_symmetric(b.sc.family, b.sc.grid, b.sc.chain, nullptr);
        out.push_back(std::move(b));
    }
    {
        BuiltExhaustion b{"polydisc-symmetric", builtin_scenario("polydisc"), {}};
        b.p = build_exhaustion_symmetric(b.sc.family, b.sc.grid, b.sc.chain, nullptr);
        out.push_back(std::move(b));
    }
    {
        BuiltExhaustion b{"twodisc-components", builtin_scenario("twodisc"), {}};
        b.p = build_exhaustion_components(b.sc.family, b.sc.grid, b.sc.chain, nullptr);
        out.push_back(std::move(b));
    }
    return out;
}

void sublevel_fconvexity(Checker& c) {
    for (auto& b : build_all_exhaustions()) {
        const Grid& g = b.sc.grid;
        for (int t = 1; t <= 3; ++t) {
            std::vector<int> sub;
            for (int idx = 0; idx < g.size(); ++idx)
                if (b.p.eval_grid(g, idx) <= t + 1e-9) sub.push_back(idx);
            if (sub.empty() || static_cast<int>(sub.size()) == g.size()) continue;
            std::vector<bool> inS(static_cast<std::size_t>(g.size()), false);
            for (int idx : sub) inS[static_cast<std::size_t>(idx)] = true;

            const HullMode mode = b.sc.family.structure == FamilyStructure::cone_sample
                                      ? HullMode::cone
                                      : HullMode::modulus;
            for (int comp = 0; comp < g.n_components; ++comp) {
                const auto sg = g.n_components > 1 ? certify_detail::component_subgrid(g, comp)
                                                   : certify_detail::SubGrid{g, {}};
                std::vector<Point> S;
                std::vector<int> sub_local;
                for (int idx : sub) {
                    if (g.n_components > 1 && g.component[static_cast<std::size_t>(idx)] != comp)
                        continue;
                    S.push_back(g.points[static_cast<std::size_t>(idx)]);
                    sub_local.push_back(idx);
                }
                if (S.empty()) continue;
                GridHull H = compute_hull(b.sc.family, S, sg.grid, 1.0, mode, 1e-9);
                for (int k = 0; k < sg.grid.size(); ++k) {
                    const int orig = g.n_components > 1 ? sg.orig[static_cast<std::size_t>(k)] : k;
                    const bool member = H.verdicts[static_cast<std::size_t>(k)].member;
                    if (inS[static_cast<std::size_t>(orig)]) {
                        if (!member)
                            c.require(false, b.name + ": sublevel point left its own hull");
                    } else if (member) {
                        double d = 1e300;
                        for (const Point& s : S)
                            d = std::min(d, distance(g.points[static_cast<std::size_t>(orig)], s));
                        if (d > g.cell_diag + 1e-9)
                            c.require(false, b.name + ": hull grew beyond one grid cell at t=" +
                                                 std::to_string(t));
                    }
                    if (!c.failures.empty()) return;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------- 9
void power_trick(Checker& c) {
    const auto S = circle_samples(0.75, 64);
    const PowerTrickReport rep =
        power_trick_refine(1, false, 1, S, zpt(0.9), {10.0}, 16, 1e-9);
    c.require(rep.member_at(10.0, 1), "C=10 should admit 0.9 at degree 1");
    for (int d = 13; d <= 16; ++d)
        c.require(!rep.member_at(10.0, d),
                  "C=10 should exclude 0.9 at degree " + std::to_string(d));
    c.require(std::ceil(std::log(10.0) / std::log(0.9 / 0.75)) == 13.0,
              "oracle: 10*0.75^k < 0.9^k first at k = 13");
    c.require(rep.flip_degree[1] >= 2 && rep.flip_degree[1] <= 13, "flip degree not recorded");
    c.require(rep.collapse_certified, "collapse not certified");
}

// ---------------------------------------------------------------------- 10
void witness_growth(Checker& c) {
    const FunctionFamily F = monomial_family(1, 8, false);
    std::vector<std::vector<Point>> sets;
    for (int j = 1; j <= 7; ++j) sets.push_back(circle_samples(1.0 - std::pow(0.5, j), 128));
    std::vector<Point> seq;
    for (int j = 1; j <= 6; ++j) seq.push_back(zpt(1.0 - std::pow(0.5, j + 1)));
    WitnessOptions opts;
    opts.k_cap = 4096;
    Witness w;
    try {
        w = witness_build(F, sets, seq, 6, opts);
    } catch (const std::exception& e) {
        c.require(false, std::string("witness build failed: ") + e.what());
        return;
    }
    for (const auto& t : w.terms) {
        c.require(t.sup_on_Kj <= std::pow(0.5, t.j) * (1 + 1e-9),
                  "sup|a_j|(K_j) exceeds 2^-j at j=" + std::to_string(t.j));
        c.require(t.value_at_wj > t.j + t.prior_sum_at_wj,
                  "growth inequality fails at j=" + std::to_string(t.j));
    }
    const DivergenceReport rep = divergence_check(w, sets.front());
    for (const auto& row : rep.rows)
        c.require(row.partial_sum >= row.j - std::pow(0.5, row.j) - 1e-9,
                  "partial sum below j - 2^-j at j=" + std::to_string(row.j));
    c.require(rep.max_on_base <= 1.0, "witness exceeds 1 on K_1");
}

// ---------------------------------------------------------------------- 11
void end_to_end_coherence(Checker& c) {
    const char* names[] = {"disc", "annulus", "polydisc", "twodisc", "hartogs"};
    for (const char* name : names) {
        const DomainScenario sc = builtin_scenario(name);
        const CertReport rep = cartan_thullen_report(sc);
        const CertReport rep2 = cartan_thullen_report(sc);
        c.require(rep.to_json().dump(2) == rep2.to_json().dump(2),
                  std::string(name) + ": report not byte-identical across runs");
        if (std::string(name) == "hartogs") {
            c.require(rep.classification == "inconsistent", "hartogs not flagged inconsistent");
            c.require(!rep.hull_compactness.pass && !rep.exhaustion_built.pass,
                      "hartogs: stages 1 and 2 did not fail together");
        } else {
            c.require(rep.classification == "consistent-with-convex",
                      std::string(name) + ": expected all stages to pass");
        }
        if (!c.failures.empty()) return;
    }
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : std::getenv("GENCONVEX_CLI");
#ifdef GENCONVEX_CLI_PATH
    if (!cli) cli = GENCONVEX_CLI_PATH;
#endif
    if (!cli) {
        std::fprintf(stderr, "error: path to the genconvex binary required (arg or env)\n");
        return 64;
    }

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<void(Checker&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "affine-oracle equivalence", 5, affine_oracle_equivalence},
        {2, "hull operator laws", 10, hull_operator_laws},
        {3, "disc positive control", 5, disc_positive_control},
        {4, "Laurent contrast", 5, laurent_contrast},
        {5, "Hartogs negative control", 10,
         [cli](Checker& c) { hartogs_negative_control(c, cli); }},
        {6, "exhaustion construction", 5, exhaustion_construction},
        {7, "cone-path properness", 5, cone_path_properness},
        {8, "sublevel F-convexity", 10, sublevel_fconvexity},
        {9, "power trick", 2, power_trick},
        {10, "witness growth", 5, witness_growth},
        {11, "end-to-end coherence", 60, end_to_end_coherence},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Checker ck;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(ck);
        } catch (const std::exception& e) {
            ck.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > cr.budget_s)
            ck.failures.push_back("runtime " + std::to_string(secs) + "s exceeds budget");
        const bool pass = ck.failures.empty();
        std::printf("[%2d] %-28s %s (%.2fs)\n", cr.id, cr.name, pass ? "PASS" : "FAIL", secs);
        if (!pass) {
            ++failed;
            for (const auto& f : ck.failures) std::printf("     - %s\n", f.c_str());
        }
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
