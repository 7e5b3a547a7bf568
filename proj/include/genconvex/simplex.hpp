#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace genconvex {

// Phase-1 simplex on the equality system A x = b, x >= 0, with Bland's
// anti-cycling rule. This is the certificate engine of the hull module: on
// infeasibility the dual (Farkas) row is returned, which is exactly the
// coefficient vector of a separating function.
//
// Feasible:    x >= 0 with ||A x - b|| at the reported objective (<= tol).
// Infeasible:  y with y.A <= 0 componentwise and y.b = objective > tol.

struct LpResult {
    enum class Status { feasible, infeasible, iteration_cap };
    Status status = Status::iteration_cap;
    std::vector<double> solution;  // size n, feasible case
    std::vector<double> farkas;    // size m, infeasible case
    double objective = 0;          // phase-1 optimum: minimal total residual
    int iterations = 0;
};

struct LpIndeterminateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline LpResult phase1_feasible(const std::vector<double>& A, const std::vector<double>& b,
                                int m, int n, double feas_tol = 1e-9, int iter_cap = -1) {
    if (iter_cap < 0) iter_cap = 10 * (m + n);
    const int width = n + m + 1;  // original columns, artificials, rhs
    std::vector<double> T(static_cast<std::size_t>(m) * width, 0.0);
    std::vector<int> flip(static_cast<std::size_t>(m), 1);
    auto t = [&](int r, int c) -> double& {
        return T[static_cast<std::size_t>(r) * width + static_cast<std::size_t>(c)];
    };

    for (int r = 0; r < m; ++r) {
        const double sign = b[static_cast<std::size_t>(r)] < 0 ? -1.0 : 1.0;
        flip[static_cast<std::size_t>(r)] = sign < 0 ? -1 : 1;
        for (int c = 0; c < n; ++c)
            t(r, c) = sign * A[static_cast<std::size_t>(r) * n + static_cast<std::size_t>(c)];
        t(r, n + r) = 1.0;
        t(r, n + m) = sign * b[static_cast<std::size_t>(r)];
    }

    // Reduced-cost row for min(sum of artificials): z_j = -sum_r T[r][j] on
    // original columns, 0 on artificials.
    std::vector<double> z(static_cast<std::size_t>(n + m), 0.0);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) z[static_cast<std::size_t>(c)] -= t(r, c);

    std::vector<int> basis(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) basis[static_cast<std::size_t>(r)] = n + r;

    const double eps_cost = 1e-10;
    const double eps_pivot = 1e-11;
    // Dantzig pricing until the safeguard trips, then Bland's rule, whose
    // lowest-index pivots exclude cycling for the remainder of the run.
    const int bland_after = 2 * (m + n);
    int iter = 0;
    while (true) {
        int enter = -1;
        if (iter >= bland_after) {
            for (int c = 0; c < n + m; ++c) {
                if (z[static_cast<std::size_t>(c)] < -eps_cost) {
                    enter = c;
                    break;
                }
            }
        } else {
            double most = -eps_cost;
            for (int c = 0; c < n + m; ++c) {
                if (z[static_cast<std::size_t>(c)] < most) {
                    most = z[static_cast<std::size_t>(c)];
                    enter = c;
                }
            }
        }
        if (enter < 0) break;
        if (++iter > iter_cap) {
            LpResult r;
            r.status = LpResult::Status::iteration_cap;
            r.iterations = iter;
            return r;
        }
        // Ratio test; ties broken toward the smallest basic variable index.
        int leave = -1;
        double best = 0;
        for (int r = 0; r < m; ++r) {
            const double a = t(r, enter);
            if (a <= eps_pivot) continue;
            const double ratio = t(r, n + m) / a;
            if (leave < 0 || ratio < best - 1e-12 ||
                (ratio <= best + 1e-12 &&
                 basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave < 0)
            throw LpIndeterminateError("phase-1 simplex: unbounded pivot column");

        const double piv = t(leave, enter);
        for (int c = 0; c <= n + m; ++c) t(leave, c) /= piv;
        for (int r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = t(r, enter);
            if (f == 0.0) continue;
            for (int c = 0; c <= n + m; ++c) t(r, c) -= f * t(leave, c);
        }
        const double zf = z[static_cast<std::size_t>(enter)];
        if (zf != 0.0)
            for (int c = 0; c < n + m; ++c) z[static_cast<std::size_t>(c)] -= zf * t(leave, c);
        basis[static_cast<std::size_t>(leave)] = enter;
    }

    // Phase-1 optimum: the residual still carried by basic artificials.
    double obj = 0;
    for (int r = 0; r < m; ++r)
        if (basis[static_cast<std::size_t>(r)] >= n) obj += std::max(0.0, t(r, n + m));

    LpResult res;
    res.iterations = iter;
    res.objective = obj;
    if (res.objective <= feas_tol) {
        res.status = LpResult::Status::feasible;
        res.solution.assign(static_cast<std::size_t>(n), 0.0);
        for (int r = 0; r < m; ++r) {
            const int v = basis[static_cast<std::size_t>(r)];
            if (v < n)
                res.solution[static_cast<std::size_t>(v)] = std::max(0.0, t(r, n + m));
        }
    } else {
        res.status = LpResult::Status::infeasible;
        // Dual values from the artificials' reduced costs: y_r = 1 - z[n+r],
        // mapped back through the row sign flips.
        res.farkas.assign(static_cast<std::size_t>(m), 0.0);
        for (int r = 0; r < m; ++r)
            res.farkas[static_cast<std::size_t>(r)] =
                flip[static_cast<std::size_t>(r)] * (1.0 - z[static_cast<std::size_t>(n + r)]);
    }
    return res;
}

}  // namespace genconvex
