#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/chain.hpp"
#include "genconvex/family.hpp"
#include "genconvex/grid.hpp"

namespace genconvex {

// value(p) = scale * T(p) + offset, where T is a generator magnitude on the
// symmetric path and the signed cone value on the cone path.
struct ScaledTerm {
    Term term;
    double scale = 1.0;
    double offset = 0.0;
    bool magnitude = false;
    double sup_norm = 0.0;  // the sup over the level's reference set

    double value(const FunctionFamily& F, const Point& p) const {
        const double t = magnitude ? term_magnitude(F, term, p) : term_value(F, term, p);
        return scale * t + offset;
    }
};

struct LevelFunction {
    int level_index = 1;
    std::vector<ScaledTerm> terms;
    bool floor_zero = true;

    double eval(const FunctionFamily& F, const Point& p) const {
        double v = floor_zero ? 0.0 : -1e300;
        for (const auto& t : terms) v = std::max(v, t.value(F, p));
        return v;
    }
};

enum class Combiner { max_levels, indexed_max };

// p as a leveled finite max: p = max_i p_i or p = sup_i i * p_i, with
// per-component offsets for the glued construction on disconnected domains.
struct ExhaustionFunction {
    FunctionFamily family;
    Combiner combiner = Combiner::max_levels;

    struct Part {
        int component = -1;  // -1 matches every component
        double offset = 0.0;
        std::vector<LevelFunction> levels;
    };
    std::vector<Part> parts;

    double eval_part(const Part& part, const Point& p) const {
        if (part.levels.empty()) return part.offset;
        double v = -1e300;
        for (const auto& lvl : part.levels) {
            const double lv = lvl.eval(family, p);
            v = std::max(v, combiner == Combiner::indexed_max ? lvl.level_index * lv : lv);
        }
        return v + part.offset;
    }

    double eval(const Point& p, int component = 0) const {
        for (const auto& part : parts)
            if (part.component < 0 || part.component == component) return eval_part(part, p);
        throw std::invalid_argument("exhaustion: no part for component");
    }

    double eval_grid(const Grid& g, int i) const {
        return eval(g.points[static_cast<std::size_t>(i)],
                    g.component[static_cast<std::size_t>(i)]);
    }

    int total_levels() const {
        int n = 0;
        for (const auto& p : parts) n += static_cast<int>(p.levels.size());
        return n;
    }
};

struct ExhaustionBuildError : std::runtime_error {
    int level = 0;
    int component = -1;
    std::optional<Point> witness_point;
    double best_ratio = 0;

    ExhaustionBuildError(const std::string& msg, int lvl, int comp = -1)
        : std::runtime_error(msg), level(lvl), component(comp) {}
};

// ---------------------------------------------------------------------------
// Covering subfamilies (symmetric path).
// ---------------------------------------------------------------------------

struct CoverResult {
    bool ok = false;
    // selected generators with their K_inner sup-norms
    std::vector<std::pair<Term, double>> selected;
    std::optional<Point> uncoverable;
    int uncoverable_index = -1;  // position in the shell list
    double best_ratio = 0;       // best attained |f| / (threshold * sup) at that point
    std::string message;
};

// Greedy max-coverage subcover of the shell by the strict exceedance sets
// {|f| > threshold * sup|f|(K_inner)}; ties resolve to the lower generator
// index. Failure reports the first uncovered shell point and the best
// attained ratio, the discrete signal that the C-hull of K_inner reaches the
// shell at this truncation.
inline CoverResult select_covering_subfamily(const FunctionFamily& F,
                                             std::span<const Point> K_inner,
                                             std::span<const Point> shell, double threshold) {
    if (K_inner.empty()) throw std::invalid_argument("cover: empty inner compact");
    if (threshold <= 0) throw std::invalid_argument("cover: threshold must be positive");
    CoverResult res;
    if (shell.empty()) {
        res.ok = true;
        return res;
    }
    const std::vector<Term> terms = cover_terms(F);
    const std::size_t nt = terms.size();
    std::vector<double> sup(nt, 0.0);
    for (std::size_t t = 0; t < nt; ++t)
        for (const Point& p : K_inner)
            sup[t] = std::max(sup[t], term_magnitude(F, terms[t], p));

    std::vector<std::vector<bool>> exceed(nt, std::vector<bool>(shell.size(), false));
    for (std::size_t t = 0; t < nt; ++t) {
        if (sup[t] <= 0) continue;  // vanishes on K_inner: unusable as a level divisor
        for (std::size_t s = 0; s < shell.size(); ++s)
            exceed[t][s] = term_magnitude(F, terms[t], shell[s]) > threshold * sup[t];
    }

    std::vector<bool> covered(shell.size(), false);
    std::size_t remaining = shell.size();
    while (remaining > 0) {
        int best = -1;
        int best_count = 0;
        for (std::size_t t = 0; t < nt; ++t) {
            int count = 0;
            for (std::size_t s = 0; s < shell.size(); ++s)
                if (!covered[s] && exceed[t][s]) ++count;
            if (count > best_count) {
                best_count = count;
                best = static_cast<int>(t);
            }
        }
        if (best < 0) {
            for (std::size_t s = 0; s < shell.size(); ++s) {
                if (covered[s]) continue;
                res.uncoverable = shell[s];
                res.uncoverable_index = static_cast<int>(s);
                for (std::size_t t = 0; t < nt; ++t) {
                    if (sup[t] <= 0) continue;
                    res.best_ratio = std::max(
                        res.best_ratio, term_magnitude(F, terms[t], shell[s]) / (threshold * sup[t]));
                }
                break;
            }
            std::ostringstream os;
            os << "uncoverable shell point (best ratio " << res.best_ratio
               << " of the required > 1)";
            res.message = os.str();
            return res;
        }
        res.selected.emplace_back(terms[static_cast<std::size_t>(best)],
                                  sup[static_cast<std::size_t>(best)]);
        for (std::size_t s = 0; s < shell.size(); ++s)
            if (exceed[static_cast<std::size_t>(best)][s] && !covered[s]) {
                covered[s] = true;
                --remaining;
            }
    }
    res.ok = true;
    return res;
}

struct LevelCheck {
    double max_on_K = 0;     // must be <= 2^-i
    double min_on_shell = 0; // must be >= 2^i
    bool ok = true;
};

// p_i = max_l |a_l| / (2^i ||a_l||_{C(K_i)}) v 0.
inline LevelFunction build_level(const FunctionFamily& F, std::span<const Point> K_i,
                                 std::span<const Point> shell,
                                 const std::vector<std::pair<Term, double>>& selected, int i,
                                 LevelCheck* check = nullptr, double level_base = 2.0) {
    LevelFunction lvl;
    lvl.level_index = i;
    lvl.floor_zero = true;
    const double denom_scale = std::pow(level_base, i);
    for (const auto& [term, sup] : selected) {
        if (!(sup > 0))
            throw ExhaustionBuildError("level " + std::to_string(i) +
                                           ": zero sup-norm divisor for " + term_describe(F, term),
                                       i);
        ScaledTerm st;
        st.term = term;
        st.magnitude = true;
        st.sup_norm = sup;
        st.scale = 1.0 / (denom_scale * sup);
        lvl.terms.push_back(st);
    }
    if (check) {
        check->max_on_K = 0;
        for (const Point& p : K_i) check->max_on_K = std::max(check->max_on_K, lvl.eval(F, p));
        check->min_on_shell = shell.empty() ? 0.0 : 1e300;
        for (const Point& p : shell)
            check->min_on_shell = std::min(check->min_on_shell, lvl.eval(F, p));
        const double tol = 1e-9;
        check->ok = check->max_on_K <= std::pow(level_base, -i) + tol &&
                    (shell.empty() || check->min_on_shell >= denom_scale - tol);
    }
    return lvl;
}

struct SymmetricBuildInfo {
    struct Level {
        int index = 1;
        double threshold = 0;
        std::vector<std::string> selected;
        std::vector<int> degrees;
        LevelCheck check;
    };
    std::vector<Level> levels;
    double max_on_K1 = 0;  // must be <= 1/2
};

// The symmetric C-hull construction: one level per chain window
// (K_i, K_{i+2}, K_{i+3}), shells covered by generators exceeding
// threshold_base^i times their K_i sup, level functions scaled by
// level_base^i. Defaults keep the construction's 4^i / 2^i constants.
inline ExhaustionFunction build_exhaustion_symmetric(const FunctionFamily& F, const Grid& grid,
                                                     const CompactChain& chain,
                                                     SymmetricBuildInfo* info = nullptr,
                                                     double threshold_base = 4.0,
                                                     double level_base = 2.0) {
    if (F.structure == FamilyStructure::cone_sample)
        throw std::invalid_argument("symmetric path: needs a linear span or algebra family");
    if (!F.symmetric)
        throw std::invalid_argument("symmetric path: family must be symmetric");
    if (F.constants_only())
        throw std::invalid_argument("symmetric path: family of constants is degenerate");
    const int N = chain.length();
    if (N < 4)
        throw std::invalid_argument(
            "symmetric path: chain must have length >= 4 (levels use the windows K_i, K_i+2, "
            "K_i+3)");

    ExhaustionFunction p;
    p.family = F;
    p.combiner = Combiner::max_levels;
    ExhaustionFunction::Part part;
    for (int i = 1; i + 3 <= N; ++i) {
        const auto K_i = chain_points(grid, chain, i - 1);
        const auto shell_idx = index_difference(chain.at(i + 2), chain.at(i + 1));
        const auto shell = gather_points(grid, shell_idx);
        const double threshold = std::pow(threshold_base, i);
        CoverResult cover = select_covering_subfamily(F, K_i, shell, threshold);
        if (!cover.ok) {
            ExhaustionBuildError err("level " + std::to_string(i) + ": " + cover.message, i);
            err.witness_point = cover.uncoverable;
            err.best_ratio = cover.best_ratio;
            throw err;
        }
        LevelCheck check;
        LevelFunction lvl = build_level(F, K_i, shell, cover.selected, i, &check, level_base);
        if (!check.ok)
            throw ExhaustionBuildError("level " + std::to_string(i) +
                                           ": level guarantee failed on the grid",
                                       i);
        if (info) {
            SymmetricBuildInfo::Level L;
            L.index = i;
            L.threshold = threshold;
            for (const auto& [term, sup] : cover.selected) {
                L.selected.push_back(term_describe(F, term));
                L.degrees.push_back(term_degree(F, term));
            }
            L.check = check;
            info->levels.push_back(std::move(L));
        }
        part.levels.push_back(std::move(lvl));
    }
    p.parts.push_back(std::move(part));

    // K_1 c p_j^{-1}((-inf, 2^-j]) for every level j, so p <= 1/2 on K_1.
    double max1 = 0;
    for (int idx : chain.at(0))
        max1 = std::max(max1, p.eval_grid(grid, idx));
    if (info) info->max_on_K1 = max1;
    if (max1 > 1.0 / level_base + 1e-9)
        throw ExhaustionBuildError("symmetric path: p exceeds 1/2 on K_1", 1);
    return p;
}

// ---------------------------------------------------------------------------
// Cone path (maximum-principle normalization).
// ---------------------------------------------------------------------------

struct AnnulusBuildInfo {
    std::vector<std::string> selected;
    std::vector<double> sup1, sup2;
    int eligible = 0;
};

// The annulus function of a chain window K1 c int K2 c int K3 c K4:
// p = max_i (f_i - sup f_i(K1)) / (sup f_i(K2) - sup f_i(K1)) v 0 over a
// finite subcover of K4 \ int K3 by {f > sup f(K2)}. The maximum-principle
// gap sup f(K1) < sup f(K2) keeps the normalization well-posed.
inline LevelFunction build_annulus_function(const FunctionFamily& F, std::span<const Point> K1,
                                            std::span<const Point> K2, std::span<const Point> K3,
                                            std::span<const Point> K4,
                                            std::span<const Point> shell, int level_index = 1,
                                            AnnulusBuildInfo* info = nullptr,
                                            double mp_margin = 1e-9) {
    if (K1.empty() || K2.empty() || K3.empty() || K4.empty())
        throw std::invalid_argument("annulus function: empty chain set");
    if (F.constants_only())
        throw std::invalid_argument("annulus function: family of constants is degenerate");

    const std::vector<Term> terms = cover_terms(F);
    struct Candidate {
        Term term;
        double sup1, sup2;
    };
    std::vector<Candidate> eligible;
    std::string gap_offender;
    for (const Term& t : terms) {
        double s1 = -1e300, s2 = -1e300;
        for (const Point& p : K1) s1 = std::max(s1, term_value(F, t, p));
        for (const Point& p : K2) s2 = std::max(s2, term_value(F, t, p));
        if (s1 + mp_margin < s2) {
            eligible.push_back({t, s1, s2});
        } else if (gap_offender.empty()) {
            gap_offender = term_describe(F, t);
        }
    }
    if (eligible.empty())
        throw ExhaustionBuildError(
            "annulus function: no generator satisfies the maximum-principle gap (first offender " +
                gap_offender + "), normalization denominator would vanish",
            level_index);

    // Cover K4 \ int K3 by {f > sup f(K2)} over eligible generators.
    std::vector<bool> covered(shell.size(), false);
    std::size_t remaining = shell.size();
    std::vector<int> selected;
    while (remaining > 0) {
        int best = -1;
        int best_count = 0;
        for (std::size_t c = 0; c < eligible.size(); ++c) {
            int count = 0;
            for (std::size_t s = 0; s < shell.size(); ++s)
                if (!covered[s] && term_value(F, eligible[c].term, shell[s]) > eligible[c].sup2)
                    ++count;
            if (count > best_count) {
                best_count = count;
                best = static_cast<int>(c);
            }
        }
        if (best < 0) {
            for (std::size_t s = 0; s < shell.size(); ++s) {
                if (covered[s]) continue;
                ExhaustionBuildError err(
                    "annulus function: shell point not covered by {f > sup f(K2)}; the hull of "
                    "K2 reaches the shell",
                    level_index);
                err.witness_point = shell[s];
                throw err;
            }
        }
        selected.push_back(best);
        for (std::size_t s = 0; s < shell.size(); ++s)
            if (!covered[s] && term_value(F, eligible[static_cast<std::size_t>(best)].term,
                                          shell[s]) > eligible[static_cast<std::size_t>(best)].sup2) {
                covered[s] = true;
                --remaining;
            }
    }

    LevelFunction lvl;
    lvl.level_index = level_index;
    lvl.floor_zero = true;
    for (int c : selected) {
        const Candidate& cand = eligible[static_cast<std::size_t>(c)];
        ScaledTerm st;
        st.term = cand.term;
        st.magnitude = false;
        st.sup_norm = cand.sup2;
        st.scale = 1.0 / (cand.sup2 - cand.sup1);
        st.offset = -cand.sup1 / (cand.sup2 - cand.sup1);
        lvl.terms.push_back(st);
        if (info) {
            info->selected.push_back(term_describe(F, cand.term));
            info->sup1.push_back(cand.sup1);
            info->sup2.push_back(cand.sup2);
        }
    }
    if (info) info->eligible = static_cast<int>(eligible.size());

    // Sandwich checks: K1 in the zero set, K2 inside {p <= 1}, and the shell
    // strictly above 1 so K4 cap {p <= 1} c K3.
    const double tol = 1e-9;
    for (const Point& p : K1)
        if (lvl.eval(F, p) > tol)
            throw ExhaustionBuildError("annulus function: positive on K1", level_index);
    for (const Point& p : K2)
        if (lvl.eval(F, p) > 1.0 + tol)
            throw ExhaustionBuildError("annulus function: exceeds 1 on K2", level_index);
    for (const Point& p : shell)
        if (lvl.eval(F, p) <= 1.0 + tol)
            throw ExhaustionBuildError("annulus function: sandwich failed on the shell",
                                       level_index);
    return lvl;
}

struct ConeBuildInfo {
    std::vector<AnnulusBuildInfo> levels;
};

// p = sup{ i * p_i } over annulus functions of consecutive chain quadruples,
// proper via p >= i off K_{i+2}.
inline ExhaustionFunction build_exhaustion_cone(const FunctionFamily& F, const Grid& grid,
                                                const CompactChain& chain,
                                                ConeBuildInfo* info = nullptr,
                                                double mp_margin = 1e-9,
                                                const std::vector<int>* restrict_to = nullptr) {
    const int N = chain.length();
    if (N < 4)
        throw std::invalid_argument(
            "cone path: chain must have length >= 4 (each level consumes the quadruple K_i..K_i+3); "
            "extend the chain");
    ExhaustionFunction p;
    p.family = F;
    p.combiner = Combiner::indexed_max;
    ExhaustionFunction::Part part;
    for (int i = 1; i + 3 <= N; ++i) {
        const auto shell_idx = index_difference(chain.at(i + 2), chain.at(i + 1));
        AnnulusBuildInfo ainfo;
        LevelFunction lvl = build_annulus_function(
            F, chain_points(grid, chain, i - 1), chain_points(grid, chain, i),
            chain_points(grid, chain, i + 1), chain_points(grid, chain, i + 2),
            gather_points(grid, shell_idx), i, &ainfo, mp_margin);
        if (info) info->levels.push_back(std::move(ainfo));
        part.levels.push_back(std::move(lvl));
    }
    p.parts.push_back(std::move(part));

    // Properness lower bound: p >= i on grid \ K_{i+2}.
    const double tol = 1e-9;
    for (int i = 1; i + 3 <= N; ++i) {
        std::vector<bool> inside(static_cast<std::size_t>(grid.size()), false);
        for (int idx : chain.at(i + 1)) inside[static_cast<std::size_t>(idx)] = true;
        for (int idx = 0; idx < grid.size(); ++idx) {
            if (inside[static_cast<std::size_t>(idx)]) continue;
            if (restrict_to && !(*restrict_to)[static_cast<std::size_t>(idx)]) continue;
            if (p.eval_grid(grid, idx) < i - tol)
                throw ExhaustionBuildError(
                    "cone path: p < " + std::to_string(i) + " outside K_" + std::to_string(i + 2),
                    i);
        }
    }
    return p;
}

// Per-component construction glued as p = p_c + c on component c, realizing
// the local-cone corollary for disconnected domains.
inline ExhaustionFunction build_exhaustion_components(const FunctionFamily& F, const Grid& grid,
                                                      const CompactChain& chain,
                                                      ConeBuildInfo* info = nullptr,
                                                      double mp_margin = 1e-9) {
    if (grid.n_components < 2)
        throw std::invalid_argument("component path: grid has a single component");
    ExhaustionFunction glued;
    glued.family = F;
    glued.combiner = Combiner::indexed_max;
    for (int c = 0; c < grid.n_components; ++c) {
        CompactChain sub;
        for (const auto& set : chain.sets) {
            std::vector<int> s;
            for (int idx : set)
                if (grid.component[static_cast<std::size_t>(idx)] == c) s.push_back(idx);
            sub.sets.push_back(std::move(s));
        }
        std::vector<int> mask(static_cast<std::size_t>(grid.size()), 0);
        for (int idx = 0; idx < grid.size(); ++idx)
            mask[static_cast<std::size_t>(idx)] = grid.component[static_cast<std::size_t>(idx)] == c;
        try {
            ExhaustionFunction sub_p = build_exhaustion_cone(F, grid, sub, info, mp_margin, &mask);
            ExhaustionFunction::Part part = std::move(sub_p.parts.front());
            part.component = c;
            part.offset = c + 1;
            glued.parts.push_back(std::move(part));
        } catch (ExhaustionBuildError& e) {
            e.component = c;
            throw;
        }
    }
    return glued;
}

// ---------------------------------------------------------------------------
// F-polygon exhaustions P_t = p^{-1}([0, t]) in normalized threshold-1 form.
// ---------------------------------------------------------------------------

struct PolygonExhaustion {
    struct PolyFunction {
        int component = -1;
        ScaledTerm fn;  // membership constraint: fn.value <= 1
    };
    struct Polygon {
        int index = 1;
        std::vector<PolyFunction> functions;
        std::vector<int> members;
        bool empty = false;
        bool touches_margin = false;
    };
    std::vector<Polygon> polygons;
};

inline PolygonExhaustion polygon_exhaustion(const ExhaustionFunction& p, const Grid& grid,
                                            int count, double tol = 1e-9) {
    if (count < 0) throw std::invalid_argument("polygon_exhaustion: negative count");
    PolygonExhaustion out;
    for (int t = 1; t <= count; ++t) {
        PolygonExhaustion::Polygon poly;
        poly.index = t;
        for (const auto& part : p.parts) {
            for (const auto& lvl : part.levels) {
                const double mult =
                    p.combiner == Combiner::indexed_max ? lvl.level_index : 1.0;
                for (const auto& st : lvl.terms) {
                    PolygonExhaustion::PolyFunction f;
                    f.component = part.component;
                    f.fn = st;
                    f.fn.scale = mult * st.scale / t;
                    f.fn.offset = (mult * st.offset + part.offset) / t;
                    poly.functions.push_back(std::move(f));
                }
            }
            if (part.offset > 0) {
                // the glued offset's own constraint: offset/t <= 1
                PolygonExhaustion::PolyFunction f;
                f.component = part.component;
                f.fn.term = Term{Term::Kind::basis_element, 0};
                f.fn.scale = 0.0;
                f.fn.offset = part.offset / t;
                poly.functions.push_back(std::move(f));
            }
        }
        for (int idx = 0; idx < grid.size(); ++idx) {
            if (p.eval_grid(grid, idx) <= t + tol) {
                poly.members.push_back(idx);
                if (grid.is_margin(idx)) poly.touches_margin = true;
            }
        }
        poly.empty = poly.members.empty();
        out.polygons.push_back(std::move(poly));
    }

    // Nesting with a one-cell interior margin: no P_t member sits within a
    // cell of the complement of P_{t+1}.
    for (std::size_t k = 0; k + 1 < out.polygons.size(); ++k) {
        const auto& A = out.polygons[k];
        const auto& B = out.polygons[k + 1];
        std::vector<bool> inB(static_cast<std::size_t>(grid.size()), false);
        for (int idx : B.members) inB[static_cast<std::size_t>(idx)] = true;
        for (int a : A.members)
            if (!inB[static_cast<std::size_t>(a)])
                throw ExhaustionBuildError("polygon exhaustion: P_t not nested in P_t+1",
                                           static_cast<int>(k) + 1);
        const double need = grid.cell * (1.0 - 1e-9);
        for (int idx = 0; idx < grid.size(); ++idx) {
            if (inB[static_cast<std::size_t>(idx)]) continue;
            for (int a : A.members) {
                if (grid.component[static_cast<std::size_t>(a)] !=
                    grid.component[static_cast<std::size_t>(idx)])
                    continue;
                if (distance(grid.points[static_cast<std::size_t>(a)],
                             grid.points[static_cast<std::size_t>(idx)]) < need)
                    throw ExhaustionBuildError(
                        "polygon exhaustion: P_t touches the boundary of P_t+1",
                        static_cast<int>(k) + 1);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Properness diagnostics.
// ---------------------------------------------------------------------------

struct PropernessReport {
    struct Entry {
        int t = 0;
        bool checked = false;  // false = outside the representable range
        bool subset_ok = true; // {p <= t} c K_{t+3}
        bool margin_ok = true; // sublevel avoids the outer margin
        int violations = 0;
    };
    std::vector<Entry> entries;
    bool pass = true;
};

inline PropernessReport properness_check(const ExhaustionFunction& p, const CompactChain& chain,
                                         const Grid& grid, int t_max = -1, double tol = 1e-9) {
    PropernessReport rep;
    const int N = chain.length();
    if (t_max < 0) t_max = std::max(1, N - 3);
    for (int t = 1; t <= t_max; ++t) {
        PropernessReport::Entry e;
        e.t = t;
        if (t + 3 > N) {
            e.checked = false;  // skipped with notice: K_{t+3} is not representable
            rep.entries.push_back(e);
            continue;
        }
        e.checked = true;
        std::vector<bool> inK(static_cast<std::size_t>(grid.size()), false);
        for (int idx : chain.at(t + 2)) inK[static_cast<std::size_t>(idx)] = true;
        for (int idx = 0; idx < grid.size(); ++idx) {
            if (p.eval_grid(grid, idx) > t + tol) continue;
            if (grid.is_margin(idx)) {
                e.margin_ok = false;
                ++e.violations;
            }
            if (!inK[static_cast<std::size_t>(idx)]) {
                e.subset_ok = false;
                ++e.violations;
            }
        }
        rep.pass = rep.pass && e.subset_ok && e.margin_ok;
        rep.entries.push_back(e);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Convex post-composition xi(p) = max_j (alpha_j p + beta_j).
// ---------------------------------------------------------------------------

inline ExhaustionFunction convex_post_compose(const ExhaustionFunction& p,
                                              const std::vector<std::pair<double, double>>& pieces) {
    if (pieces.empty()) throw std::invalid_argument("post-compose: no affine pieces");
    for (const auto& [alpha, beta] : pieces)
        if (alpha < 0)
            throw std::invalid_argument("post-compose: negative slope piece rejected");
    ExhaustionFunction q;
    q.family = p.family;
    q.combiner = Combiner::max_levels;
    for (const auto& part : p.parts) {
        ExhaustionFunction::Part np;
        np.component = part.component;
        np.offset = 0.0;
        LevelFunction lvl;
        lvl.level_index = 1;
        lvl.floor_zero = false;
        for (const auto& [alpha, beta] : pieces) {
            for (const auto& src : part.levels) {
                const double mult =
                    p.combiner == Combiner::indexed_max ? src.level_index : 1.0;
                for (const auto& st : src.terms) {
                    ScaledTerm nt = st;
                    nt.scale = alpha * mult * st.scale;
                    nt.offset = alpha * (mult * st.offset + part.offset) + beta;
                    lvl.terms.push_back(nt);
                }
                if (src.floor_zero) {
                    // the floored branch contributes alpha*(0 + offset) + beta
                    ScaledTerm zero;
                    zero.term = Term{Term::Kind::basis_element, 0};
                    zero.scale = 0.0;
                    zero.offset = alpha * part.offset + beta;
                    lvl.terms.push_back(zero);
                }
            }
        }
        np.levels.push_back(std::move(lvl));
        q.parts.push_back(std::move(np));
    }
    return q;
}

}  // namespace genconvex
