#pragma once

#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/family.hpp"
#include "genconvex/point.hpp"

namespace genconvex {

// The finite-basis feature map: column j is the evaluation functional of
// point j restricted to the family's basis. Row 0 is the all-ones row of the
// constant generator.
struct FeatureMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major
    std::string family_fingerprint;
    std::vector<std::string> row_labels;

    double at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                    static_cast<std::size_t>(c)];
    }
    double& at(int r, int c) {
        return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                    static_cast<std::size_t>(c)];
    }

    std::vector<double> column(int c) const {
        std::vector<double> v(static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r) v[static_cast<std::size_t>(r)] = at(r, c);
        return v;
    }
};

struct EmbedError : std::runtime_error {
    int point_index;
    EmbedError(int idx, const std::string& what)
        : std::runtime_error("embed: point " + std::to_string(idx) + ": " + what),
          point_index(idx) {}
};

inline FeatureMatrix embed(const FunctionFamily& F, std::span<const Point> S) {
    if (S.empty()) throw std::invalid_argument("embed: empty point list");
    FeatureMatrix M;
    M.rows = F.size();
    M.cols = static_cast<int>(S.size());
    M.data.assign(static_cast<std::size_t>(M.rows) * static_cast<std::size_t>(M.cols), 0.0);
    M.family_fingerprint = F.fingerprint();
    M.row_labels.reserve(F.basis.size());
    for (const auto& b : F.basis) M.row_labels.push_back(b.describe());
    for (int c = 0; c < M.cols; ++c) {
        const Point& p = S[static_cast<std::size_t>(c)];
        if (p.dim != F.dim) throw EmbedError(c, "dimension mismatch");
        try {
            for (int r = 0; r < M.rows; ++r) M.at(r, c) = eval(F, r, p);
        } catch (const std::domain_error& e) {
            throw EmbedError(c, e.what());
        }
    }
    return M;
}

inline std::vector<double> feature_vector(const FunctionFamily& F, const Point& p) {
    std::vector<double> v(static_cast<std::size_t>(F.size()));
    for (int r = 0; r < F.size(); ++r) v[static_cast<std::size_t>(r)] = eval(F, r, p);
    return v;
}

// Pairs of points the truncated family fails to separate: their feature
// columns agree within tol in max-norm. An empty report means separation
// holds on S at this truncation.
struct SeparationReport {
    struct Pair {
        int i = 0, j = 0;
        double max_diff = 0;
    };
    std::vector<Pair> coincident;
    bool separates() const { return coincident.empty(); }
};

inline SeparationReport separation_check(const FunctionFamily& F, std::span<const Point> S,
                                         double tol) {
    if (tol <= 0) throw std::invalid_argument("separation_check: tol must be > 0");
    SeparationReport rep;
    if (S.empty()) return rep;
    const FeatureMatrix M = embed(F, S);
    for (int i = 0; i < M.cols; ++i) {
        for (int j = i + 1; j < M.cols; ++j) {
            double d = 0;
            for (int r = 0; r < M.rows; ++r)
                d = std::max(d, std::abs(M.at(r, i) - M.at(r, j)));
            if (d < tol) rep.coincident.push_back({i, j, d});
        }
    }
    return rep;
}

}  // namespace genconvex
