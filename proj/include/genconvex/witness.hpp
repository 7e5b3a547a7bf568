#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/family.hpp"
#include "genconvex/hull.hpp"

namespace genconvex {

// One term of the completeness witness series: a_j(z) = Re(c * z^beta) with
// beta = k * alpha for a separating monomial z^alpha, the phase of c chosen
// so a_j(w_j) is real positive, the power k the smallest meeting both
// growth requirements, and |c| normalizing sup|a_j|(K_j) to 2^-j.
struct WitnessTerm {
    int j = 1;
    std::vector<int> exponents;          // beta
    std::complex<double> coefficient;    // c
    int power = 1;                       // k
    std::string base_description;        // the separating monomial
    double sup_on_Kj = 0;                // asserted <= 2^-j
    double value_at_wj = 0;              // asserted > j + sum_{i<j} |a_i(w_j)|
    double prior_sum_at_wj = 0;

    double eval(const Point& p, double laurent_floor = 1e-6) const {
        const std::complex<double> w = eval_complex_monomial(exponents, p, laurent_floor);
        return (coefficient * w).real();
    }
};

struct Witness {
    std::vector<WitnessTerm> terms;
    std::vector<Point> sequence;      // the boundary escalator w_j
    std::vector<int> window_shift;    // relabeling applied per step (0 = none)
    double laurent_floor = 1e-6;

    double eval_partial(const Point& p, int j_max) const {
        double s = 0;
        for (const auto& t : terms) {
            if (t.j > j_max) break;
            s += t.eval(p, laurent_floor);
        }
        return s;
    }
};

struct WitnessBuildError : std::runtime_error {
    int step = 0;
    WitnessBuildError(const std::string& msg, int j) : std::runtime_error(msg), step(j) {}
};

struct WitnessOptions {
    int k_cap = 512;
    double tol = 1e-9;
};

// Builds the witness over nested sample sets chain_sets[0] = K_1, ...,
// following the growth scheme sup|a_j|(K_j) <= 2^-j and
// a_j(w_j) > j + sum_{i<j} |a_i(w_j)|. Requires an algebra family (the
// construction raises separating monomials to powers). If w_j is not
// contained in K_{j+1}, the window is shifted forward and the shift logged.
inline Witness witness_build(const FunctionFamily& F,
                             const std::vector<std::vector<Point>>& chain_sets,
                             const std::vector<Point>& sequence, int j_max, WitnessOptions opts) {
    if (!F.is_algebra())
        throw std::invalid_argument("witness: needs an algebra family (powers of generators)");
    if (j_max < 1) throw std::invalid_argument("witness: j_max must be >= 1");
    if (static_cast<int>(sequence.size()) < j_max)
        throw std::invalid_argument("witness: sequence shorter than j_max");
    if (static_cast<int>(chain_sets.size()) < j_max + 1)
        throw std::invalid_argument("witness: chain must reach K_{j_max+1}");

    Witness out;
    out.laurent_floor = F.laurent_floor;
    out.sequence.assign(sequence.begin(), sequence.begin() + j_max);

    for (int j = 1; j <= j_max; ++j) {
        const Point& wj = sequence[static_cast<std::size_t>(j - 1)];

        // Containment w_j in K_{j+1}, shifting the window if necessary.
        int c = j;  // 0-based index of K_{j+1}
        int shift = 0;
        while (c < static_cast<int>(chain_sets.size()) &&
               !membership_modulus(F, chain_sets[static_cast<std::size_t>(c)], wj, 1.0, opts.tol)
                    .member) {
            ++c;
            ++shift;
        }
        if (c >= static_cast<int>(chain_sets.size()))
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": w_j is outside every chain set",
                                    j);
        out.window_shift.push_back(shift);

        // Separating monomial from the hull certificate against K_j.
        const auto& Kj = chain_sets[static_cast<std::size_t>(j - 1)];
        HullVerdict sep = membership_modulus(F, Kj, wj, 1.0, opts.tol);
        if (sep.member) {
            // estimate the degree at which separation first appears
            std::string estimate = "no separation up to degree " +
                                   std::to_string(F.max_degree + 8);
            for (int d = F.max_degree + 1; d <= F.max_degree + 8; ++d) {
                const FunctionFamily Fd = monomial_family(F.dim.n_complex, d, F.laurent);
                if (!membership_modulus(Fd, Kj, wj, 1.0, opts.tol).member) {
                    estimate = "separation first available at degree " + std::to_string(d);
                    break;
                }
            }
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": no separating monomial at degree " +
                                        std::to_string(F.max_degree) + " (" + estimate + ")",
                                    j);
        }
        const Term base = *sep.certificate->term;
        const auto& alpha = F.monomials[static_cast<std::size_t>(base.index)].exponents;

        double sup_base = 0;
        for (const Point& s : Kj) sup_base = std::max(sup_base, term_magnitude(F, base, s));
        const std::complex<double> bw = eval_complex_monomial(alpha, wj, F.laurent_floor);
        const double rho = std::abs(bw) / sup_base;
        if (!(rho > 1.0))
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": certificate ratio did not exceed one",
                                    j);

        // Prior terms at w_j.
        double prior = 0;
        for (const auto& t : out.terms) prior += std::abs(t.eval(wj, F.laurent_floor));
        const double target = j + prior;
        const double scale = std::pow(0.5, j);

        // Smallest k with scale * rho^k > target, then verify directly.
        int k = std::max(1, static_cast<int>(std::ceil((std::log(target) - std::log(scale)) /
                                                       std::log(rho))));
        auto value_at = [&](int kk) { return scale * std::pow(rho, kk); };
        while (k > 1 && value_at(k - 1) > target) --k;
        while (value_at(k) <= target) {
            ++k;
            if (k > opts.k_cap)
                throw WitnessBuildError("witness step " + std::to_string(j) +
                                            ": power search cap exceeded (k_cap " +
                                            std::to_string(opts.k_cap) + ")",
                                        j);
        }
        if (k > opts.k_cap)
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": power search cap exceeded (k_cap " +
                                        std::to_string(opts.k_cap) + ")",
                                    j);

        // Phase: theta * b(w_j)^k real positive; coefficient folds the
        // normalization 2^-j / sup^k.
        const std::complex<double> bwk = detail::ipow(bw, k);
        const std::complex<double> theta =
            std::abs(bwk) > 0 ? std::conj(bwk) / std::abs(bwk) : std::complex<double>(1, 0);
        const double log_mag = std::log(scale) - k * std::log(sup_base);
        if (log_mag > 690.0)
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": coefficient overflows the double range",
                                    j);

        WitnessTerm term;
        term.j = j;
        term.power = k;
        term.exponents.reserve(alpha.size());
        for (int e : alpha) term.exponents.push_back(e * k);
        term.coefficient = theta * (scale / std::pow(sup_base, k));
        term.base_description = term_describe(F, base);
        term.prior_sum_at_wj = prior;
        term.value_at_wj = term.eval(wj, F.laurent_floor);
        term.sup_on_Kj = 0;
        for (const Point& s : Kj)
            term.sup_on_Kj = std::max(term.sup_on_Kj, std::abs(term.eval(s, F.laurent_floor)));

        if (term.sup_on_Kj > scale * (1 + 1e-9))
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": sup bound 2^-j violated",
                                    j);
        if (!(term.value_at_wj > target))
            throw WitnessBuildError("witness step " + std::to_string(j) +
                                        ": growth requirement failed after the power step",
                                    j);
        out.terms.push_back(std::move(term));
    }
    return out;
}

// Partial sums along the escalator: the witness takes arbitrarily large
// values along w_j, which is the discrete divergence signal.
struct DivergenceReport {
    struct Row {
        int j = 1;
        double partial_sum = 0;
        double lower_bound = 0;  // j - 2^-j
        bool ok = true;
    };
    std::vector<Row> rows;
    bool pass = true;
    double max_on_base = 0;  // sup of the full series on the supplied base set
};

inline DivergenceReport divergence_check(const Witness& w, std::span<const Point> base_set,
                                         double tol = 1e-9) {
    DivergenceReport rep;
    const int j_max = static_cast<int>(w.sequence.size());
    for (int j = 1; j <= j_max; ++j) {
        DivergenceReport::Row row;
        row.j = j;
        row.partial_sum = w.eval_partial(w.sequence[static_cast<std::size_t>(j - 1)], j_max);
        row.lower_bound = j - std::pow(0.5, j);
        row.ok = row.partial_sum >= row.lower_bound - tol;
        rep.pass = rep.pass && row.ok;
        rep.rows.push_back(row);
    }
    for (const Point& p : base_set)
        rep.max_on_base = std::max(rep.max_on_base, std::abs(w.eval_partial(p, j_max)));
    return rep;
}

}  // namespace genconvex
