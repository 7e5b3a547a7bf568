#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/embed.hpp"
#include "genconvex/family.hpp"
#include "genconvex/grid.hpp"
#include "genconvex/parallel.hpp"
#include "genconvex/simplex.hpp"

namespace genconvex {

enum class HullMode { cone, linear, with_constant, modulus };

inline std::string to_string(HullMode m) {
    switch (m) {
        case HullMode::cone: return "cone";
        case HullMode::linear: return "linear";
        case HullMode::with_constant: return "C";
        case HullMode::modulus: return "modulus";
    }
    return "?";
}

inline HullMode hull_mode_from_string(const std::string& s) {
    if (s == "cone") return HullMode::cone;
    if (s == "linear") return HullMode::linear;
    if (s == "C") return HullMode::with_constant;
    if (s == "modulus") return HullMode::modulus;
    throw std::invalid_argument("unknown hull mode: " + s);
}

// The separating function of a non-member verdict: either a single violating
// generator (cone/modulus routes) or an explicit linear combination of basis
// elements recovered from the LP's Farkas row.
struct SeparatingCertificate {
    std::string description;
    std::vector<double> coefficients;  // over the family basis; empty for single terms
    std::optional<Term> term;          // single violating term, when applicable
    double value_at_query = 0;
    double bound = 0;  // sup over S (scaled by C where applicable)
    double gap = 0;    // value_at_query - bound > 0
};

struct HullVerdict {
    bool member = false;
    double gap = 0;  // feasibility slack when member, certificate margin otherwise
    std::vector<double> coefficients;  // barycentric weights when member (LP routes)
    std::optional<SeparatingCertificate> certificate;
    int lp_iterations = 0;
};

namespace hull_detail {

inline void require_separating(const FunctionFamily& F) {
    if (F.constants_only())
        throw std::invalid_argument("hull: family of constants separates no points");
}

inline double combo_eval(const FunctionFamily& F, std::span<const double> c, const Point& p) {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0.0) s += c[i] * eval(F, static_cast<int>(i), p);
    return s;
}

inline std::string combo_describe(const FunctionFamily& F, std::span<const double> c) {
    std::ostringstream os;
    int shown = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(c[i]) < 1e-12) continue;
        if (shown) os << (c[i] >= 0 ? " + " : " - ");
        else if (c[i] < 0) os << "-";
        os << std::abs(c[i]) << "*(" << F.basis[i].describe() << ")";
        if (++shown == 6) {
            os << " + ...";
            break;
        }
    }
    if (!shown) os << "0";
    return os.str();
}

}  // namespace hull_detail

// Direct cone-sample membership: f(w) <= C * max f(S) + tol for every sample
// function f. The certificate is the first violating f.
inline HullVerdict membership_cone_direct(const FunctionFamily& F, std::span<const Point> S,
                                          const Point& w, double C, double tol) {
    hull_detail::require_separating(F);
    if (F.structure != FamilyStructure::cone_sample)
        throw std::invalid_argument("membership_cone_direct: family must be a cone sample");
    if (S.empty()) throw std::invalid_argument("membership_cone_direct: empty sample set");
    if (C < 1.0) throw std::invalid_argument("membership_cone_direct: C must be >= 1");
    HullVerdict v;
    v.member = true;
    double slack = 1e300;
    for (int i = 0; i < F.size(); ++i) {
        double sup = -1e300;
        for (const Point& s : S) sup = std::max(sup, eval(F, i, s));
        const double val = eval(F, i, w);
        const double bound = C * sup;
        if (val > bound + tol) {
            v.member = false;
            SeparatingCertificate cert;
            cert.description = F.basis[static_cast<std::size_t>(i)].describe();
            cert.term = Term{Term::Kind::basis_element, i};
            cert.value_at_query = val;
            cert.bound = bound;
            cert.gap = val - bound;
            v.gap = cert.gap;
            v.certificate = std::move(cert);
            return v;
        }
        slack = std::min(slack, bound + tol - val);
    }
    v.gap = slack;
    return v;
}

// Modulus membership for algebra families: |b(w)| <= C * max_S |b| + tol for
// every stored complex monomial b.
inline HullVerdict membership_modulus(const FunctionFamily& F, std::span<const Point> S,
                                      const Point& w, double C, double tol) {
    hull_detail::require_separating(F);
    if (!F.is_algebra())
        throw std::invalid_argument("membership_modulus: family must store a Re/Im pairing");
    if (S.empty()) throw std::invalid_argument("membership_modulus: empty sample set");
    if (C < 1.0) throw std::invalid_argument("membership_modulus: C must be >= 1");
    HullVerdict v;
    v.member = true;
    double slack = 1e300;
    // Certificate = the monomial with the largest relative violation. Powers
    // of a fixed generator violate by growing ratios, so this surfaces the
    // highest informative degree.
    int worst = -1;
    double worst_ratio = 1.0, worst_val = 0, worst_bound = 0;
    for (int m = 0; m < static_cast<int>(F.monomials.size()); ++m) {
        double sup = 0;
        for (const Point& s : S) sup = std::max(sup, std::abs(eval_monomial(F, m, s)));
        const double val = std::abs(eval_monomial(F, m, w));
        const double bound = C * sup;
        if (val > bound + tol) {
            v.member = false;
            const double ratio = val / std::max(bound, 1e-300);
            if (ratio > worst_ratio) {
                worst = m;
                worst_ratio = ratio;
                worst_val = val;
                worst_bound = bound;
            }
        }
        slack = std::min(slack, bound + tol - val);
    }
    if (!v.member) {
        SeparatingCertificate cert;
        cert.term = Term{Term::Kind::monomial_modulus, worst};
        cert.description = term_describe(F, *cert.term);
        cert.value_at_query = worst_val;
        cert.bound = worst_bound;
        cert.gap = worst_val - worst_bound;
        v.gap = cert.gap;
        v.certificate = std::move(cert);
        return v;
    }
    v.gap = slack;
    return v;
}

namespace hull_detail {

// Shared precomputation for LP-route grid hulls.
struct LinearSystem {
    int m = 0;  // feature rows (plus one normalization row in the C route)
    int n = 0;  // columns
    std::vector<double> A;  // row-major
    bool doubled = false;
    double C = 1.0;
};

inline LinearSystem linear_system(const FeatureMatrix& M) {
    LinearSystem sys;
    sys.m = M.rows;
    sys.n = M.cols;
    sys.A = M.data;
    return sys;
}

// Columns [Phi(S), -Phi(S)] plus the row 1.1 = C: feasibility of
// Phi(w) in C * conv(Phi(S) u -Phi(S)).
//
// Derivation: a(w) <= C sup|a|(K) for every a in the span says exactly that
// c.x <= C * max_j |c.phi_j| for every coefficient vector c; the right-hand
// side is the support function of D = conv(+-phi_j) scaled by C, so the
// condition is x in C*D. Writing x = sum nu_j^+ phi_j - sum nu_j^- phi_j
// with nu >= 0 and sum(nu^+ + nu^-) = C gives the LP below. Note the
// constant feature row already pins sum(nu^+) - sum(nu^-) = 1; the explicit
// normalization row is the support-function constraint, not a substitute
// for it.
inline LinearSystem doubled_system(const FeatureMatrix& M, double C) {
    LinearSystem sys;
    sys.doubled = true;
    sys.C = C;
    sys.m = M.rows + 1;
    sys.n = 2 * M.cols;
    sys.A.assign(static_cast<std::size_t>(sys.m) * sys.n, 0.0);
    for (int r = 0; r < M.rows; ++r) {
        for (int c = 0; c < M.cols; ++c) {
            sys.A[static_cast<std::size_t>(r) * sys.n + c] = M.at(r, c);
            sys.A[static_cast<std::size_t>(r) * sys.n + M.cols + c] = -M.at(r, c);
        }
    }
    for (int c = 0; c < sys.n; ++c)
        sys.A[static_cast<std::size_t>(M.rows) * sys.n + c] = 1.0;
    return sys;
}

inline HullVerdict decide_linear(const FunctionFamily& F, const LinearSystem& sys,
                                 std::span<const Point> S, const Point& w, double tol) {
    std::vector<double> b = feature_vector(F, w);
    if (sys.doubled) b.push_back(sys.C);
    // Inclusive membership at the caller's tolerance: the phase-1 optimum is
    // the total residual, so the feasibility threshold carries the tol.
    const LpResult lp = phase1_feasible(sys.A, b, sys.m, sys.n, std::max(tol, 1e-9));
    HullVerdict v;
    v.lp_iterations = lp.iterations;
    if (lp.status == LpResult::Status::iteration_cap)
        throw LpIndeterminateError("hull membership LP exceeded its iteration cap");
    if (lp.status == LpResult::Status::feasible) {
        v.member = true;
        v.gap = lp.objective;
        v.coefficients = lp.solution;
        return v;
    }
    // Farkas row -> separating function, re-verified through direct
    // evaluation; an unsound certificate is surfaced, never patched.
    std::vector<double> y(lp.farkas.begin(),
                          lp.farkas.begin() + (sys.doubled ? sys.m - 1 : sys.m));
    double norm = 0;
    for (double t : y) norm = std::max(norm, std::abs(t));
    if (norm > 0)
        for (double& t : y) t /= norm;
    SeparatingCertificate cert;
    cert.value_at_query = combo_eval(F, y, w);
    double bound = -1e300;
    if (sys.doubled) {
        double supabs = 0;
        for (const Point& s : S) supabs = std::max(supabs, std::abs(combo_eval(F, y, s)));
        bound = sys.C * supabs;
    } else {
        for (const Point& s : S) bound = std::max(bound, combo_eval(F, y, s));
    }
    cert.bound = bound;
    cert.gap = cert.value_at_query - bound;
    cert.coefficients = y;
    cert.description = combo_describe(F, y);
    if (!(cert.gap > 0))
        throw LpIndeterminateError("hull membership: Farkas certificate failed verification");
    v.member = false;
    v.gap = cert.gap;
    v.certificate = std::move(cert);
    return v;
}

}  // namespace hull_detail

// Phi(w) in clConv Phi(S): barycentric LP feasibility with Farkas
// certificates realizing the separating function.
inline HullVerdict membership_linear(const FunctionFamily& F, std::span<const Point> S,
                                     const Point& w, double tol) {
    hull_detail::require_separating(F);
    if (F.structure == FamilyStructure::cone_sample)
        throw std::invalid_argument("membership_linear: use the cone route for cone samples");
    if (S.empty()) throw std::invalid_argument("membership_linear: empty sample set");
    if (F.size() < 2) throw std::invalid_argument("membership_linear: need >= 2 basis elements");
    const FeatureMatrix M = embed(F, S);
    const auto sys = hull_detail::linear_system(M);
    return hull_detail::decide_linear(F, sys, S, w, tol);
}

// a(w) <= C sup|a|(K) for all a in the span.
inline HullVerdict membership_C(const FunctionFamily& F, std::span<const Point> S, const Point& w,
                                double C, double tol) {
    hull_detail::require_separating(F);
    if (F.structure == FamilyStructure::cone_sample)
        throw std::invalid_argument("membership_C: use the cone route for cone samples");
    if (S.empty()) throw std::invalid_argument("membership_C: empty sample set");
    if (F.size() < 2) throw std::invalid_argument("membership_C: need >= 2 basis elements");
    if (C < 1.0) throw std::invalid_argument("membership_C: C must be >= 1");
    const FeatureMatrix M = embed(F, S);
    const auto sys = hull_detail::doubled_system(M, C);
    return hull_detail::decide_linear(F, sys, S, w, tol);
}

inline HullVerdict membership(const FunctionFamily& F, std::span<const Point> S, const Point& w,
                              HullMode mode, double C, double tol) {
    switch (mode) {
        case HullMode::cone: return membership_cone_direct(F, S, w, C, tol);
        case HullMode::linear: return membership_linear(F, S, w, tol);
        case HullMode::with_constant: return membership_C(F, S, w, C, tol);
        case HullMode::modulus: return membership_modulus(F, S, w, C, tol);
    }
    throw std::logic_error("unreachable");
}

// Hull of S evaluated over every grid point, with the margin-layer escape
// flag: a hull member on the margin is the discrete evidence that the hull
// is not compactly contained in the window.
struct GridHull {
    HullMode mode = HullMode::linear;
    double C = 1.0;
    int sample_count = 0;
    std::vector<HullVerdict> verdicts;
    bool escape = false;
    std::vector<int> escape_indices;

    std::vector<int> member_indices() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(verdicts.size()); ++i)
            if (verdicts[static_cast<std::size_t>(i)].member) out.push_back(i);
        return out;
    }
};

inline GridHull compute_hull(const FunctionFamily& F, std::span<const Point> S, const Grid& grid,
                             double C, HullMode mode, double tol) {
    hull_detail::require_separating(F);
    if (S.empty()) throw std::invalid_argument("compute_hull: empty sample set");
    GridHull result;
    result.mode = mode;
    result.C = C;
    result.sample_count = static_cast<int>(S.size());
    result.verdicts.assign(static_cast<std::size_t>(grid.size()), HullVerdict{});

    if (mode == HullMode::cone || mode == HullMode::modulus) {
        // Precompute per-term sups over S once.
        const bool modulus = mode == HullMode::modulus;
        if (modulus && !F.is_algebra())
            throw std::invalid_argument("compute_hull: modulus mode needs an algebra family");
        if (!modulus && F.structure != FamilyStructure::cone_sample)
            throw std::invalid_argument("compute_hull: cone mode needs a cone sample");
        const int terms = modulus ? static_cast<int>(F.monomials.size()) : F.size();
        std::vector<double> sup(static_cast<std::size_t>(terms), modulus ? 0.0 : -1e300);
        for (int tix = 0; tix < terms; ++tix) {
            for (const Point& s : S) {
                const double v = modulus ? std::abs(eval_monomial(F, tix, s)) : eval(F, tix, s);
                sup[static_cast<std::size_t>(tix)] = std::max(sup[static_cast<std::size_t>(tix)], v);
            }
        }
        parallel_for(grid.size(), [&](int i) {
            const Point& w = grid.points[static_cast<std::size_t>(i)];
            HullVerdict v;
            v.member = true;
            double slack = 1e300;
            int worst = -1;
            double worst_ratio = 1.0, worst_val = 0, worst_bound = 0;
            for (int tix = 0; tix < terms; ++tix) {
                const double val = modulus ? std::abs(eval_monomial(F, tix, w)) : eval(F, tix, w);
                const double bound = C * sup[static_cast<std::size_t>(tix)];
                if (val > bound + tol) {
                    v.member = false;
                    if (!modulus) {  // cone route certifies the first violator
                        worst = tix;
                        worst_val = val;
                        worst_bound = bound;
                        break;
                    }
                    const double ratio = val / std::max(bound, 1e-300);
                    if (ratio > worst_ratio) {
                        worst = tix;
                        worst_ratio = ratio;
                        worst_val = val;
                        worst_bound = bound;
                    }
                }
                slack = std::min(slack, bound + tol - val);
            }
            if (v.member) {
                v.gap = slack;
            } else {
                SeparatingCertificate cert;
                cert.term = modulus ? Term{Term::Kind::monomial_modulus, worst}
                                    : Term{Term::Kind::basis_element, worst};
                cert.description = term_describe(F, *cert.term);
                cert.value_at_query = worst_val;
                cert.bound = worst_bound;
                cert.gap = worst_val - worst_bound;
                v.gap = cert.gap;
                v.certificate = std::move(cert);
            }
            result.verdicts[static_cast<std::size_t>(i)] = std::move(v);
        });
    } else {
        const FeatureMatrix M = embed(F, S);
        const auto sys = mode == HullMode::linear ? hull_detail::linear_system(M)
                                                  : hull_detail::doubled_system(M, C);
        parallel_for(grid.size(), [&](int i) {
            result.verdicts[static_cast<std::size_t>(i)] = hull_detail::decide_linear(
                F, sys, S, grid.points[static_cast<std::size_t>(i)], tol);
        });
    }

    for (int i = 0; i < grid.size(); ++i) {
        if (result.verdicts[static_cast<std::size_t>(i)].member && grid.is_margin(i)) {
            result.escape = true;
            result.escape_indices.push_back(i);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Power trick: membership_C along a degree sweep. For algebras, raising
// generators to powers collapses the C-hulls onto the C = 1 hull; the report
// records the degree at which each tested C flips to non-member.
// ---------------------------------------------------------------------------

struct PowerTrickReport {
    std::vector<int> degrees;
    std::vector<double> C_values;
    // member[c][d] for C_values[c] at degrees[d]
    std::vector<std::vector<bool>> member;
    std::vector<int> flip_degree;  // first non-member degree per C, -1 if none
    bool collapse_certified = false;

    bool member_at(double C, int degree) const {
        for (std::size_t c = 0; c < C_values.size(); ++c)
            if (C_values[c] == C)
                for (std::size_t d = 0; d < degrees.size(); ++d)
                    if (degrees[d] == degree) return member[c][d];
        throw std::out_of_range("power trick report: no such entry");
    }
};

inline PowerTrickReport power_trick_refine(int n_complex, bool laurent, int base_degree,
                                           std::span<const Point> S, const Point& w,
                                           std::vector<double> C_values, int d_max, double tol) {
    if (base_degree < 1) throw std::invalid_argument("power_trick_refine: base degree >= 1");
    if (d_max < base_degree)
        throw std::invalid_argument("power_trick_refine: d_max below base degree");
    if (std::find(C_values.begin(), C_values.end(), 1.0) == C_values.end())
        C_values.insert(C_values.begin(), 1.0);
    PowerTrickReport rep;
    rep.C_values = C_values;
    for (int d = base_degree; d <= d_max; d += base_degree) rep.degrees.push_back(d);
    rep.member.assign(C_values.size(), std::vector<bool>(rep.degrees.size(), false));
    rep.flip_degree.assign(C_values.size(), -1);
    for (std::size_t di = 0; di < rep.degrees.size(); ++di) {
        const FunctionFamily F = monomial_family(n_complex, rep.degrees[di], laurent);
        for (std::size_t ci = 0; ci < C_values.size(); ++ci) {
            const HullVerdict v = membership_C(F, S, w, C_values[ci], tol);
            rep.member[ci][di] = v.member;
            if (!v.member && rep.flip_degree[ci] < 0) rep.flip_degree[ci] = rep.degrees[di];
        }
    }
    // Collapse property, discretely: if C = 1 ever flips, every tested C
    // flips by the end of the sweep.
    bool one_flips = rep.flip_degree[0] >= 0;
    bool all_flip = true;
    for (int f : rep.flip_degree) all_flip = all_flip && f >= 0;
    rep.collapse_certified = !one_flips || all_flip;
    return rep;
}

}  // namespace genconvex
