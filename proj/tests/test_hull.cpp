#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "genconvex/hull.hpp"
#include "genconvex/oracle.hpp"

using namespace genconvex;

namespace {

Point zpt(double re, double im) {
    return Point::complex_point({std::complex<double>(re, im)});
}

FunctionFamily cone_one_rez_symmetrized() {
    FunctionFamily F;
    F.dim = Dimension{0, 1};
    F.structure = FamilyStructure::cone_sample;
    F.contains_constants = true;
    BasisFunction one;
    one.kind = BasisKind::constant;
    BasisFunction rez;
    rez.kind = BasisKind::re_monomial;
    rez.exponents = {1};
    F.basis = {one, rez};
    return symmetrize(F);
}

std::vector<Point> segment_points() {
    std::vector<Point> S;
    for (int i = 0; i <= 10; ++i) S.push_back(Point::real({i * 0.1, 0.0}));
    return S;
}

}  // namespace

TEST_CASE("cone-sample membership") {
    FunctionFamily F = cone_one_rez_symmetrized();
    auto S = circle_samples(0.75, 32);
    SECTION("points of S are members at C = 1") {
        for (const Point& s : S) CHECK(membership_cone_direct(F, S, s, 1.0, 1e-9).member);
    }
    SECTION("0.9 is separated by Re z") {
        auto v = membership_cone_direct(F, S, zpt(0.9, 0), 1.0, 1e-9);
        REQUIRE_FALSE(v.member);
        REQUIRE(v.certificate.has_value());
        CHECK(v.certificate->description == "Re z");
        CHECK(v.certificate->value_at_query == Catch::Approx(0.9));
        CHECK(v.certificate->bound == Catch::Approx(0.75));
    }
    SECTION("the origin is a member") {
        CHECK(membership_cone_direct(F, S, zpt(0, 0), 1.0, 1e-9).member);
    }
    SECTION("constants-only family rejected") {
        FunctionFamily K;
        K.dim = Dimension{0, 1};
        K.structure = FamilyStructure::cone_sample;
        BasisFunction one;
        one.kind = BasisKind::constant;
        K.basis = {one};
        CHECK_THROWS_AS(membership_cone_direct(K, S, zpt(0, 0), 1.0, 1e-9),
                        std::invalid_argument);
    }
}

TEST_CASE("barycentric membership with certificates") {
    FunctionFamily F = affine_family(2);
    std::vector<Point> S = {Point::real({0, 0}), Point::real({1, 0}), Point::real({0, 1})};
    SECTION("interior point with reproducing coefficients") {
        Point w = Point::real({0.25, 0.25});
        auto v = membership_linear(F, S, w, 1e-9);
        REQUIRE(v.member);
        REQUIRE(v.coefficients.size() == 3);
        double sum = 0;
        std::vector<double> rebuilt(3, 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(v.coefficients[j] >= -1e-9);
            sum += v.coefficients[j];
            const auto col = feature_vector(F, S[j]);
            for (std::size_t r = 0; r < 3; ++r) rebuilt[r] += v.coefficients[j] * col[r];
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-9));
        const auto target = feature_vector(F, w);
        for (std::size_t r = 0; r < 3; ++r)
            CHECK(rebuilt[r] == Catch::Approx(target[r]).margin(1e-8));
    }
    SECTION("outside point carries a verified separating function") {
        auto v = membership_linear(F, S, Point::real({1, 1}), 1e-9);
        REQUIRE_FALSE(v.member);
        REQUIRE(v.certificate.has_value());
        CHECK(v.certificate->gap > 0);
        // re-check through eval: a(w) > max a(S) by at least gap/2
        const auto& c = v.certificate->coefficients;
        BasisFunction a = compose_affine(F, c);
        double sup = -1e300;
        for (const Point& s : S) sup = std::max(sup, eval(a, s));
        CHECK(eval(a, Point::real({1, 1})) > sup + v.certificate->gap / 2);
    }
    SECTION("singleton hull") {
        std::vector<Point> P = {Point::real({0.3, -0.2})};
        auto v = membership_linear(F, P, P[0], 1e-9);
        REQUIRE(v.member);
        CHECK(v.coefficients[0] == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("C-hull membership") {
    FunctionFamily F = affine_family(2);
    auto S = segment_points();
    SECTION("no C reaches off the segment's line") {
        for (double C : {1.0, 10.0, 1000.0}) {
            auto v = membership_C(F, S, Point::real({0.5, 0.2}), C, 1e-9);
            REQUIRE_FALSE(v.member);
            REQUIRE(v.certificate.has_value());
            const auto& c = v.certificate->coefficients;
            // the separating direction is the y coordinate
            CHECK(std::abs(c[2]) > std::abs(c[1]));
            CHECK(std::abs(c[2]) > 0.5);
            CHECK(v.certificate->gap > 0);
        }
    }
    SECTION("C-hulls grow along the segment's affine hull") {
        Point w = Point::real({-1.0, 0.0});
        CHECK_FALSE(membership_C(F, S, w, 1.5, 1e-9).member);
        CHECK(membership_C(F, S, w, 4.0, 1e-9).member);
    }
    SECTION("C = 1 on a symmetric sample agrees with the barycentric route over +-S") {
        std::vector<Point> sym = {Point::real({1, 0}), Point::real({-1, 0}),
                                  Point::real({0, 1}), Point::real({0, -1})};
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.2, 1.2);
        for (int t = 0; t < 40; ++t) {
            Point w = Point::real({u(rng), u(rng)});
            const bool viaC = membership_C(F, sym, w, 1.0, 1e-9).member;
            const bool viaLinear = membership_linear(F, sym, w, 1e-9).member;
            if (std::abs(std::abs(w.x(0)) + std::abs(w.x(1)) - 1.0) < 1e-7) continue;
            CHECK(viaC == viaLinear);
        }
    }
}

TEST_CASE("modulus membership") {
    FunctionFamily F = monomial_family(1, 4, false);
    auto S = circle_samples(0.75, 64);
    SECTION("the origin is a member") {
        CHECK(membership_modulus(F, S, zpt(0, 0), 1.0, 1e-9).member);
    }
    SECTION("0.9 is separated by z^4") {
        auto v = membership_modulus(F, S, zpt(0.9, 0), 1.0, 1e-9);
        REQUIRE_FALSE(v.member);
        REQUIRE(v.certificate.has_value());
        CHECK(v.certificate->term->index == 3);  // z^4
        CHECK(v.certificate->value_at_query == Catch::Approx(std::pow(0.9, 4)));
        CHECK(v.certificate->bound == Catch::Approx(std::pow(0.75, 4)).epsilon(1e-9));
    }
    SECTION("sample points are members") {
        for (int k = 0; k < 64; k += 7)
            CHECK(membership_modulus(F, S, S[static_cast<std::size_t>(k)], 1.0, 1e-9).member);
    }
    SECTION("non-algebra family rejected") {
        CHECK_THROWS_AS(membership_modulus(affine_family(2), segment_points(),
                                           Point::real({0, 0}), 1.0, 1e-9),
                        std::invalid_argument);
    }
}

TEST_CASE("grid hull against the gift-wrapping oracle") {
    FunctionFamily F = affine_family(2);
    std::vector<Point> S = {Point::real({0, 0}), Point::real({1, 0}), Point::real({0, 1})};
    Grid grid = make_rect_grid(0, 1, 0, 1, 21, 1);
    GridHull H = compute_hull(F, S, grid, 1.0, HullMode::linear, 1e-9);
    auto oracle = classical_hull_oracle({{0, 0}, {1, 0}, {0, 1}});
    for (int i = 0; i < grid.size(); ++i) {
        const Point& p = grid.points[static_cast<std::size_t>(i)];
        const double d = oracle.outside_distance({p.x(0), p.x(1)});
        if (std::abs(d) < 1e-7) continue;
        CHECK(H.verdicts[static_cast<std::size_t>(i)].member == (d < 0));
    }
}

TEST_CASE("grid hull escape flag") {
    FunctionFamily F = monomial_family(1, 4, false);
    Grid grid = make_disc_grid(1.0, 21, 1);
    SECTION("small hull does not escape") {
        auto S = circle_samples(0.5, 32);
        GridHull H = compute_hull(F, S, grid, 1.0, HullMode::modulus, 1e-9);
        CHECK_FALSE(H.escape);
    }
    SECTION("hull meeting the margin escapes") {
        auto S = circle_samples(0.98, 32);
        GridHull H = compute_hull(F, S, grid, 1.0, HullMode::modulus, 1e-9);
        CHECK(H.escape);
        CHECK_FALSE(H.escape_indices.empty());
    }
}

TEST_CASE("hull operator laws on random instances") {
    FunctionFamily F = affine_family(2);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    auto random_set = [&](int n) {
        std::vector<Point> S;
        for (int i = 0; i < n; ++i) S.push_back(Point::real({u(rng), u(rng)}));
        return S;
    };
    SECTION("extensiveness") {
        for (int t = 0; t < 10; ++t) {
            auto S = random_set(6);
            for (const Point& s : S) CHECK(membership_linear(F, S, s, 1e-9).member);
        }
    }
    SECTION("monotonicity under sample growth") {
        for (int t = 0; t < 10; ++t) {
            auto S = random_set(5);
            auto T = S;
            auto extra = random_set(4);
            T.insert(T.end(), extra.begin(), extra.end());
            for (int q = 0; q < 10; ++q) {
                Point w = Point::real({u(rng), u(rng)});
                if (membership_linear(F, S, w, 1e-9).member)
                    CHECK(membership_linear(F, T, w, 1e-9).member);
            }
        }
    }
    SECTION("C-nestedness") {
        for (int t = 0; t < 10; ++t) {
            auto S = random_set(5);
            for (int q = 0; q < 8; ++q) {
                Point w = Point::real({2 * u(rng) - 0.5, 2 * u(rng) - 0.5});
                if (membership_C(F, S, w, 1.0, 1e-9).member)
                    CHECK(membership_C(F, S, w, 5.0, 1e-9).member);
            }
        }
    }
}

TEST_CASE("power trick on the disc scenario") {
    auto S = circle_samples(0.75, 64);
    auto rep = power_trick_refine(1, false, 1, S, zpt(0.9, 0), {10.0}, 16, 1e-9);
    REQUIRE(rep.degrees.size() == 16);
    CHECK(rep.member_at(10.0, 1));
    for (int d = 13; d <= 16; ++d) CHECK_FALSE(rep.member_at(10.0, d));
    CHECK(rep.flip_degree[1] >= 2);
    CHECK(rep.flip_degree[1] <= 13);
    // C = 1 is separated from degree 1 on
    CHECK_FALSE(rep.member_at(1.0, 1));
    CHECK(rep.collapse_certified);

    SECTION("interior point stays a member at every stage") {
        auto rep0 = power_trick_refine(1, false, 1, S, zpt(0, 0), {10.0}, 8, 1e-9);
        for (std::size_t c = 0; c < rep0.C_values.size(); ++c)
            for (std::size_t d = 0; d < rep0.degrees.size(); ++d) CHECK(rep0.member[c][d]);
        CHECK(rep0.collapse_certified);
    }
    SECTION("sample point stays a member at every stage") {
        auto repS = power_trick_refine(1, false, 1, S, S[5], {10.0}, 8, 1e-9);
        for (std::size_t c = 0; c < repS.C_values.size(); ++c)
            for (std::size_t d = 0; d < repS.degrees.size(); ++d) CHECK(repS.member[c][d]);
    }
}

TEST_CASE("certificate soundness across modes") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1, 1);
    FunctionFamily F = monomial_family(1, 3, false);
    auto S = circle_samples(0.6, 24);
    int nonmembers = 0;
    for (int t = 0; t < 60; ++t) {
        Point w = zpt(u(rng), u(rng));
        for (HullMode mode : {HullMode::linear, HullMode::modulus}) {
            auto v = membership(F, S, w, mode, 1.0, 1e-9);
            if (v.member) continue;
            ++nonmembers;
            REQUIRE(v.certificate.has_value());
            const auto& cert = *v.certificate;
            double val, sup = -1e300;
            if (cert.term.has_value()) {
                val = term_magnitude(F, *cert.term, w);
                for (const Point& s : S) sup = std::max(sup, term_magnitude(F, *cert.term, s));
            } else {
                val = 0;
                for (std::size_t i = 0; i < cert.coefficients.size(); ++i)
                    val += cert.coefficients[i] * eval(F, static_cast<int>(i), w);
                for (const Point& s : S) {
                    double as = 0;
                    for (std::size_t i = 0; i < cert.coefficients.size(); ++i)
                        as += cert.coefficients[i] * eval(F, static_cast<int>(i), s);
                    sup = std::max(sup, as);
                }
            }
            CHECK(val > sup + cert.gap / 2);
        }
    }
    CHECK(nonmembers > 30);
}
