#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "genconvex/simplex.hpp"

using namespace genconvex;

namespace {

// Brute-force Farkas verification: y.A <= eps on every column, y.b > 0.
void check_farkas(const std::vector<double>& A, const std::vector<double>& b, int m, int n,
                  const std::vector<double>& y) {
    double yb = 0;
    for (int r = 0; r < m; ++r) yb += y[static_cast<std::size_t>(r)] * b[static_cast<std::size_t>(r)];
    CHECK(yb > 0);
    for (int c = 0; c < n; ++c) {
        double ya = 0;
        for (int r = 0; r < m; ++r)
            ya += y[static_cast<std::size_t>(r)] * A[static_cast<std::size_t>(r) * n + c];
        CHECK(ya <= 1e-7 * (1 + std::abs(yb)));
    }
}

}  // namespace

TEST_CASE("feasible barycentric systems") {
    // x in conv{(0,0),(1,0),(0,1)} with the all-ones row: A is 3x3.
    std::vector<double> A = {1, 1, 1,   // constants
                             0, 1, 0,   // x-coords
                             0, 0, 1};  // y-coords
    SECTION("interior point") {
        std::vector<double> b = {1, 0.25, 0.25};
        auto r = phase1_feasible(A, b, 3, 3);
        REQUIRE(r.status == LpResult::Status::feasible);
        REQUIRE(r.solution.size() == 3);
        double sum = 0;
        for (double v : r.solution) {
            CHECK(v >= -1e-12);
            sum += v;
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-9));
        CHECK(r.solution[1] == Catch::Approx(0.25).margin(1e-9));
        CHECK(r.solution[2] == Catch::Approx(0.25).margin(1e-9));
    }
    SECTION("vertex") {
        std::vector<double> b = {1, 1, 0};
        auto r = phase1_feasible(A, b, 3, 3);
        REQUIRE(r.status == LpResult::Status::feasible);
        CHECK(r.solution[1] == Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("outside point is infeasible with a Farkas row") {
        std::vector<double> b = {1, 1, 1};
        auto r = phase1_feasible(A, b, 3, 3);
        REQUIRE(r.status == LpResult::Status::infeasible);
        CHECK(r.objective > 1e-6);
        check_farkas(A, b, 3, 3, r.farkas);
    }
}

TEST_CASE("negative right-hand sides are handled by row flips") {
    // x1 - x2 = -0.5, x1 + x2 = 0.75 has the nonnegative solution (0.125, 0.625)
    std::vector<double> A = {1, -1, 1, 1};
    std::vector<double> b = {-0.5, 0.75};
    auto r = phase1_feasible(A, b, 2, 2);
    REQUIRE(r.status == LpResult::Status::feasible);
    // verify residual directly
    for (int row = 0; row < 2; ++row) {
        double s = 0;
        for (int c = 0; c < 2; ++c)
            s += A[static_cast<std::size_t>(row) * 2 + c] * r.solution[static_cast<std::size_t>(c)];
        CHECK(s == Catch::Approx(b[static_cast<std::size_t>(row)]).margin(1e-9));
    }
}

TEST_CASE("randomized feasibility agrees with construction") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> w01(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 4, n = 7;
        std::vector<double> A(static_cast<std::size_t>(m) * n);
        for (double& v : A) v = u(rng);
        for (int c = 0; c < n; ++c) A[static_cast<std::size_t>(c)] = 1.0;  // constants row

        // b = A * lambda for a random simplex lambda: always feasible.
        std::vector<double> lambda(static_cast<std::size_t>(n));
        double tot = 0;
        for (double& v : lambda) {
            v = w01(rng);
            tot += v;
        }
        for (double& v : lambda) v /= tot;
        std::vector<double> b(static_cast<std::size_t>(m), 0.0);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c)
                b[static_cast<std::size_t>(r)] +=
                    A[static_cast<std::size_t>(r) * n + c] * lambda[static_cast<std::size_t>(c)];

        auto res = phase1_feasible(A, b, m, n);
        REQUIRE(res.status == LpResult::Status::feasible);
        for (int r = 0; r < m; ++r) {
            double s = 0;
            for (int c = 0; c < n; ++c)
                s += A[static_cast<std::size_t>(r) * n + c] * res.solution[static_cast<std::size_t>(c)];
            CHECK(s == Catch::Approx(b[static_cast<std::size_t>(r)]).margin(1e-7));
        }
    }
}

TEST_CASE("randomized infeasibility produces verified Farkas rows") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1, 1);
    int infeasible_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 5, n = 6;
        std::vector<double> A(static_cast<std::size_t>(m) * n);
        for (double& v : A) v = u(rng);
        for (int c = 0; c < n; ++c) A[static_cast<std::size_t>(c)] = 1.0;
        std::vector<double> b(static_cast<std::size_t>(m));
        for (double& v : b) v = 3.0 * u(rng);  // mostly outside the hull of columns
        b[0] = 1.0;
        auto res = phase1_feasible(A, b, m, n);
        if (res.status == LpResult::Status::infeasible) {
            ++infeasible_seen;
            check_farkas(A, b, m, n, res.farkas);
        }
    }
    CHECK(infeasible_seen > 50);
}
