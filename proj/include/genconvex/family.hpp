#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/point.hpp"

namespace genconvex {

enum class BasisKind { constant, affine, re_monomial, im_monomial };

// One real-valued generator: a constant, an affine function of the real
// coordinates, or the real/imaginary part of a complex (Laurent) monomial
// z^alpha, each carrying a real multiplier.
struct BasisFunction {
    BasisKind kind = BasisKind::constant;
    double scale = 1.0;
    std::vector<double> coeffs;  // affine only
    double offset = 0.0;         // affine only
    std::vector<int> exponents;  // monomials only
    int pair_id = -1;            // complex monomial id shared by the Re/Im pair

    bool is_constant() const { return kind == BasisKind::constant; }

    bool same_symbol(const BasisFunction& o) const {
        if (kind != o.kind || scale != o.scale) return false;
        switch (kind) {
            case BasisKind::constant: return true;
            case BasisKind::affine: return coeffs == o.coeffs && offset == o.offset;
            default: return exponents == o.exponents;
        }
    }

    std::string describe() const;
};

enum class FamilyStructure { linear_span, cone_sample, algebra_real_parts };

struct ComplexMonomial {
    std::vector<int> exponents;
    int re_index = -1;  // basis index of Re z^alpha
    int im_index = -1;  // basis index of Im z^alpha
    int total_degree = 0;
};

struct FunctionFamily {
    std::vector<BasisFunction> basis;
    FamilyStructure structure = FamilyStructure::linear_span;
    bool symmetric = false;
    bool contains_constants = false;
    Dimension dim;
    bool laurent = false;
    double laurent_floor = 1e-6;
    int max_degree = 0;
    std::vector<ComplexMonomial> monomials;  // Re/Im pairing, algebra families

    int size() const { return static_cast<int>(basis.size()); }

    bool constants_only() const {
        for (const auto& f : basis)
            if (!f.is_constant()) return false;
        return true;
    }

    bool is_algebra() const { return structure == FamilyStructure::algebra_real_parts; }

    std::string fingerprint() const {
        std::ostringstream os;
        os << (structure == FamilyStructure::linear_span ? "span" :
               structure == FamilyStructure::cone_sample ? "cone" : "alg")
           << "/r" << dim.n_real << "c" << dim.n_complex
           << "/d" << max_degree << (laurent ? "L" : "") << "/m" << basis.size();
        return os.str();
    }
};

namespace detail {

inline std::complex<double> ipow(std::complex<double> z, int k) {
    std::complex<double> r{1.0, 0.0};
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

}  // namespace detail

// z^alpha at a point, honoring the Laurent floor: each negatively powered
// coordinate must stay at least laurent_floor away from its hyperplane.
inline std::complex<double> eval_complex_monomial(std::span<const int> alpha, const Point& p,
                                                  double laurent_floor) {
    if (static_cast<int>(alpha.size()) != p.dim.n_complex)
        throw std::invalid_argument("monomial/point dimension mismatch");
    std::complex<double> w{1.0, 0.0};
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const int e = alpha[j];
        if (e == 0) continue;
        const std::complex<double> zj = p.z(static_cast<int>(j));
        if (e > 0) {
            w *= detail::ipow(zj, e);
        } else {
            if (std::abs(zj) < laurent_floor)
                throw std::domain_error("Laurent evaluation inside the floor region");
            w *= detail::ipow(1.0 / zj, -e);
        }
    }
    return w;
}

inline double eval(const BasisFunction& f, const Point& p, double laurent_floor = 1e-6) {
    switch (f.kind) {
        case BasisKind::constant:
            return f.scale;
        case BasisKind::affine: {
            if (static_cast<int>(f.coeffs.size()) != p.dim.n_real)
                throw std::invalid_argument("affine/point dimension mismatch");
            double s = f.offset;
            for (std::size_t i = 0; i < f.coeffs.size(); ++i) s += f.coeffs[i] * p.coords[i];
            return f.scale * s;
        }
        case BasisKind::re_monomial:
            return f.scale * eval_complex_monomial(f.exponents, p, laurent_floor).real();
        case BasisKind::im_monomial:
            return f.scale * eval_complex_monomial(f.exponents, p, laurent_floor).imag();
    }
    throw std::logic_error("unreachable");
}

inline double eval(const FunctionFamily& F, int i, const Point& p) {
    return eval(F.basis[static_cast<std::size_t>(i)], p, F.laurent_floor);
}

inline std::complex<double> eval_monomial(const FunctionFamily& F, int mono, const Point& p) {
    return eval_complex_monomial(F.monomials[static_cast<std::size_t>(mono)].exponents, p,
                                 F.laurent_floor);
}

inline std::string BasisFunction::describe() const {
    std::ostringstream os;
    auto num = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };
    if (kind == BasisKind::constant) {
        os << num(scale);
        return os.str();
    }
    if (scale != 1.0) os << num(scale) << "*";
    if (kind == BasisKind::affine) {
        bool first = true;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] == 0.0) continue;
            if (!first) os << (coeffs[i] > 0 ? "+" : "");
            if (coeffs[i] == 1.0) {
                os << "x" << (i + 1);
            } else if (coeffs[i] == -1.0) {
                os << "-x" << (i + 1);
            } else {
                os << num(coeffs[i]) << "x" << (i + 1);
            }
            first = false;
        }
        if (offset != 0.0 || first) os << (offset >= 0 && !first ? "+" : "") << num(offset);
        return os.str();
    }
    os << (kind == BasisKind::re_monomial ? "Re " : "Im ");
    const bool single = exponents.size() == 1;
    bool first = true;
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        if (exponents[j] == 0) continue;
        if (!first) os << " ";
        os << "z";
        if (!single) os << (j + 1);
        if (exponents[j] != 1) os << "^" << exponents[j];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

// {1, x_1, ..., x_n}: the linear space of affine functions on R^n.
inline FunctionFamily affine_family(int n_real) {
    if (n_real < 1) throw std::invalid_argument("affine_family: n_real must be >= 1");
    FunctionFamily F;
    F.dim = Dimension{n_real, 0};
    F.structure = FamilyStructure::linear_span;
    F.symmetric = true;  // span closure represents negation implicitly
    F.contains_constants = true;
    F.max_degree = 1;
    BasisFunction one;
    one.kind = BasisKind::constant;
    F.basis.push_back(one);
    for (int i = 0; i < n_real; ++i) {
        BasisFunction xi;
        xi.kind = BasisKind::affine;
        xi.coeffs.assign(static_cast<std::size_t>(n_real), 0.0);
        xi.coeffs[static_cast<std::size_t>(i)] = 1.0;
        F.basis.push_back(xi);
    }
    return F;
}

namespace detail {

// Multi-indices of fixed total degree, first entry descending; prefix-stable
// across degrees so truncations nest as symbolic sets.
inline void enumerate_degree(int n, int degree, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
    const int pos = static_cast<int>(cur.size());
    if (pos == n - 1) {
        cur.push_back(degree);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur.push_back(e);
        enumerate_degree(n, degree - e, cur, out);
        cur.pop_back();
    }
}

inline void enumerate_signs(const std::vector<int>& pattern, std::vector<std::vector<int>>& out) {
    std::vector<int> nz;
    for (std::size_t i = 0; i < pattern.size(); ++i)
        if (pattern[i] != 0) nz.push_back(static_cast<int>(i));
    const std::uint32_t count = 1u << nz.size();
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        std::vector<int> a = pattern;
        for (std::size_t b = 0; b < nz.size(); ++b)
            if (mask & (1u << b)) a[static_cast<std::size_t>(nz[b])] *= -1;
        out.push_back(std::move(a));
    }
}

}  // namespace detail

// Real and imaginary parts of all monomials z^alpha with 1 <= |alpha|_1 <=
// max_degree, plus the constant. Laurent families admit negative exponents
// with the same total absolute degree bound.
inline FunctionFamily monomial_family(int n_complex, int max_degree, bool laurent) {
    if (n_complex < 1) throw std::invalid_argument("monomial_family: n_complex must be >= 1");
    if (max_degree < 1) throw std::invalid_argument("monomial_family: max_degree must be >= 1");
    FunctionFamily F;
    F.dim = Dimension{0, n_complex};
    F.structure = FamilyStructure::algebra_real_parts;
    F.symmetric = true;
    F.contains_constants = true;
    F.laurent = laurent;
    F.max_degree = max_degree;
    BasisFunction one;
    one.kind = BasisKind::constant;
    F.basis.push_back(one);

    std::vector<std::vector<int>> alphas;
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<std::vector<int>> patterns;
        std::vector<int> cur;
        detail::enumerate_degree(n_complex, d, cur, patterns);
        for (const auto& pat : patterns) {
            if (laurent) {
                detail::enumerate_signs(pat, alphas);
            } else {
                alphas.push_back(pat);
            }
        }
    }
    for (auto& alpha : alphas) {
        ComplexMonomial m;
        m.exponents = alpha;
        m.total_degree = 0;
        for (int e : alpha) m.total_degree += std::abs(e);
        BasisFunction re;
        re.kind = BasisKind::re_monomial;
        re.exponents = alpha;
        re.pair_id = static_cast<int>(F.monomials.size());
        m.re_index = F.size();
        F.basis.push_back(re);
        BasisFunction im;
        im.kind = BasisKind::im_monomial;
        im.exponents = alpha;
        im.pair_id = re.pair_id;
        m.im_index = F.size();
        F.basis.push_back(im);
        F.monomials.push_back(std::move(m));
    }
    return F;
}

// Appends the negation of every cone-sample element whose negation is not
// already present. Idempotent.
inline FunctionFamily symmetrize(const FunctionFamily& F) {
    if (F.structure != FamilyStructure::cone_sample)
        throw std::invalid_argument("symmetrize: family must be a cone sample");
    FunctionFamily G = F;
    const std::size_t n = F.basis.size();
    for (std::size_t i = 0; i < n; ++i) {
        BasisFunction neg = F.basis[i];
        neg.scale = -neg.scale;
        bool present = false;
        for (const auto& g : G.basis)
            if (g.same_symbol(neg)) { present = true; break; }
        if (!present) G.basis.push_back(std::move(neg));
    }
    G.symmetric = true;
    return G;
}

// Cone sample of affine direction functions u.x for n_directions unit vectors
// on the circle, plus the constant. Finitely many directions stand in for the
// cone generated by a symmetric linear span.
inline FunctionFamily direction_cone(int n_directions) {
    if (n_directions < 3) throw std::invalid_argument("direction_cone: need >= 3 directions");
    FunctionFamily F;
    F.dim = Dimension{2, 0};
    F.structure = FamilyStructure::cone_sample;
    F.symmetric = true;  // directions cover the full circle
    F.contains_constants = true;
    F.max_degree = 1;
    BasisFunction one;
    one.kind = BasisKind::constant;
    F.basis.push_back(one);
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < n_directions; ++k) {
        const double th = 2.0 * pi * k / n_directions;
        BasisFunction u;
        u.kind = BasisKind::affine;
        u.coeffs = {std::cos(th), std::sin(th)};
        F.basis.push_back(u);
    }
    return F;
}

// Linear combination sum_i c_i basis_i of a linear-span family, folded into a
// single affine basis function. Used to realize LP separation certificates as
// explicit functions.
inline BasisFunction compose_affine(const FunctionFamily& F, std::span<const double> c) {
    if (c.size() != F.basis.size())
        throw std::invalid_argument("compose_affine: coefficient count mismatch");
    BasisFunction a;
    a.kind = BasisKind::affine;
    a.coeffs.assign(static_cast<std::size_t>(F.dim.n_real), 0.0);
    a.offset = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const BasisFunction& f = F.basis[i];
        const double w = c[i] * f.scale;
        if (f.kind == BasisKind::constant) {
            a.offset += w;
        } else if (f.kind == BasisKind::affine) {
            for (std::size_t j = 0; j < f.coeffs.size(); ++j) a.coeffs[j] += w * f.coeffs[j];
            a.offset += w * f.offset;
        } else {
            throw std::invalid_argument("compose_affine: non-affine basis element");
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Magnitude terms. The exhaustion and covering constructions work on |a| for
// real generators and on the full modulus |z^alpha| for the Re/Im pair of an
// algebra family (the pair is the sampled trace of the symmetric subfamily
// {Re(theta z^alpha)}, whose pointwise supremum is the modulus).
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind { basis_element, monomial_modulus };
    Kind kind = Kind::basis_element;
    int index = 0;  // basis index or monomial id

    bool operator==(const Term& o) const { return kind == o.kind && index == o.index; }
};

// |term| at a point.
inline double term_magnitude(const FunctionFamily& F, const Term& t, const Point& p) {
    if (t.kind == Term::Kind::monomial_modulus) return std::abs(eval_monomial(F, t.index, p));
    return std::abs(eval(F, t.index, p));
}

// Signed cone value: the basis element itself for cone samples, the modulus
// (a cone element, as a supremum of the algebra's real parts) for monomials.
inline double term_value(const FunctionFamily& F, const Term& t, const Point& p) {
    if (t.kind == Term::Kind::monomial_modulus) return std::abs(eval_monomial(F, t.index, p));
    return eval(F, t.index, p);
}

inline std::string term_describe(const FunctionFamily& F, const Term& t) {
    if (t.kind == Term::Kind::monomial_modulus) {
        BasisFunction probe;
        probe.kind = BasisKind::re_monomial;
        probe.exponents = F.monomials[static_cast<std::size_t>(t.index)].exponents;
        std::string s = probe.describe();
        return "|" + s.substr(3) + "|";
    }
    return F.basis[static_cast<std::size_t>(t.index)].describe();
}

inline int term_degree(const FunctionFamily& F, const Term& t) {
    if (t.kind == Term::Kind::monomial_modulus)
        return F.monomials[static_cast<std::size_t>(t.index)].total_degree;
    const auto& b = F.basis[static_cast<std::size_t>(t.index)];
    if (b.kind == BasisKind::re_monomial || b.kind == BasisKind::im_monomial) {
        int d = 0;
        for (int e : b.exponents) d += std::abs(e);
        return d;
    }
    return b.kind == BasisKind::constant ? 0 : 1;
}

// Non-constant covering candidates in deterministic family order.
inline std::vector<Term> cover_terms(const FunctionFamily& F) {
    std::vector<Term> out;
    if (F.is_algebra()) {
        for (int m = 0; m < static_cast<int>(F.monomials.size()); ++m)
            out.push_back(Term{Term::Kind::monomial_modulus, m});
    } else {
        for (int i = 0; i < F.size(); ++i)
            if (!F.basis[static_cast<std::size_t>(i)].is_constant())
                out.push_back(Term{Term::Kind::basis_element, i});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Maximum principle diagnostics: numerical evidence that every non-constant
// generator has a strictly larger supremum on U than on the compact K inside.
// ---------------------------------------------------------------------------

struct MaxPrincipleEntry {
    int basis_index = 0;
    std::string description;
    double sup_K = 0;
    double sup_U = 0;
    bool skipped = false;  // constants
    bool pass = false;
};

struct MaxPrincipleReport {
    std::vector<MaxPrincipleEntry> entries;
    bool pass = true;
};

inline MaxPrincipleReport maximum_principle_test(const FunctionFamily& F,
                                                 std::span<const Point> K,
                                                 std::span<const Point> U, double margin) {
    if (K.empty() || U.empty())
        throw std::invalid_argument("maximum_principle_test: empty point set");
    if (margin <= 0) throw std::invalid_argument("maximum_principle_test: margin must be > 0");
    MaxPrincipleReport rep;
    for (int i = 0; i < F.size(); ++i) {
        MaxPrincipleEntry e;
        e.basis_index = i;
        e.description = F.basis[static_cast<std::size_t>(i)].describe();
        if (F.basis[static_cast<std::size_t>(i)].is_constant()) {
            e.skipped = true;
            e.pass = true;
            rep.entries.push_back(std::move(e));
            continue;
        }
        double sk = -1e300, su = -1e300;
        for (const Point& p : K) sk = std::max(sk, eval(F, i, p));
        for (const Point& p : U) su = std::max(su, eval(F, i, p));
        e.sup_K = sk;
        e.sup_U = su;
        e.pass = sk + margin <= su;
        rep.pass = rep.pass && e.pass;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace genconvex
