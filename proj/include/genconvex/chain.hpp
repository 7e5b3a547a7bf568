#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/grid.hpp"

namespace genconvex {

// Nested compact windows K_1 c K_2 c ... c K_N as grid index sets, the
// discrete stand-in for an exhaustion of the domain by compacta. Interior
// margins K_i c int K_{i+1} are measured in grid cells.
struct CompactChain {
    std::vector<std::vector<int>> sets;

    int length() const { return static_cast<int>(sets.size()); }
    const std::vector<int>& at(int i) const { return sets[static_cast<std::size_t>(i)]; }
};

struct ChainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::vector<Point> chain_points(const Grid& g, const CompactChain& chain, int i) {
    return gather_points(g, chain.at(i));
}

// Grid indices of K_{i+1} \ K_i style differences.
inline std::vector<int> index_difference(const std::vector<int>& big,
                                         const std::vector<int>& small) {
    std::vector<bool> in_small;
    if (!small.empty()) {
        const int mx = *std::max_element(small.begin(), small.end());
        in_small.assign(static_cast<std::size_t>(mx) + 1, false);
        for (int s : small) in_small[static_cast<std::size_t>(s)] = true;
    }
    std::vector<int> out;
    for (int b : big)
        if (static_cast<std::size_t>(b) >= in_small.size() || !in_small[static_cast<std::size_t>(b)])
            out.push_back(b);
    return out;
}

inline void validate_chain(const Grid& g, const CompactChain& chain, int min_margin_cells = 1) {
    if (chain.length() < 2) throw ChainError("chain: need at least two sets");
    for (int i = 0; i < chain.length(); ++i) {
        if (chain.at(i).empty()) throw ChainError("chain: set " + std::to_string(i + 1) + " is empty");
        for (int idx : chain.at(i)) {
            if (idx < 0 || idx >= g.size()) throw ChainError("chain: index out of range");
            if (g.is_margin(idx))
                throw ChainError("chain: set " + std::to_string(i + 1) +
                                 " touches the grid margin");
        }
    }
    for (int i = 0; i + 1 < chain.length(); ++i) {
        std::vector<bool> in_next(static_cast<std::size_t>(g.size()), false);
        for (int idx : chain.at(i + 1)) in_next[static_cast<std::size_t>(idx)] = true;
        for (int idx : chain.at(i))
            if (!in_next[static_cast<std::size_t>(idx)])
                throw ChainError("chain: set " + std::to_string(i + 1) +
                                 " is not contained in set " + std::to_string(i + 2));
        if (chain.at(i + 1).size() == chain.at(i).size())
            throw ChainError("chain: sets " + std::to_string(i + 1) + " and " +
                             std::to_string(i + 2) + " coincide");
        // Interior margin: a K_i point with an axis neighbor outside K_{i+1}
        // sits on the discrete boundary of K_{i+1}, not in its interior, so
        // the distance to the complement must strictly exceed the cell span.
        const double need = min_margin_cells * g.cell * (1.0 + 1e-9);
        std::vector<int> outside;
        for (int idx = 0; idx < g.size(); ++idx)
            if (!in_next[static_cast<std::size_t>(idx)]) outside.push_back(idx);
        for (int a : chain.at(i)) {
            const Point& pa = g.points[static_cast<std::size_t>(a)];
            for (int b : outside) {
                if (g.component[static_cast<std::size_t>(a)] !=
                    g.component[static_cast<std::size_t>(b)])
                    continue;
                if (distance(pa, g.points[static_cast<std::size_t>(b)]) <= need)
                    throw ChainError("chain: sets " + std::to_string(i + 1) + " and " +
                                     std::to_string(i + 2) +
                                     " lack the one-cell interior margin");
            }
        }
    }
}

inline CompactChain chain_from_predicate(
    const Grid& g, int n_sets, const std::function<bool(const Grid&, int, int)>& member) {
    CompactChain chain;
    for (int i = 0; i < n_sets; ++i) {
        std::vector<int> set;
        for (int idx = 0; idx < g.size(); ++idx)
            if (!g.is_margin(idx) && member(g, idx, i)) set.push_back(idx);
        chain.sets.push_back(std::move(set));
    }
    return chain;
}

// Radial chains: discs |z| <= r_i, per-component discs for multi-component
// grids, quarter squares max(|z|,|w|) <= r_i on Reinhardt diagrams.
inline CompactChain radial_chain(const Grid& g, const std::vector<double>& radii,
                                 const std::vector<double>& centers_x = {}) {
    return chain_from_predicate(g, static_cast<int>(radii.size()), [&](const Grid& gr, int idx,
                                                                       int i) {
        const double r = radii[static_cast<std::size_t>(i)];
        const auto& xy = gr.plot_xy[static_cast<std::size_t>(idx)];
        if (gr.kind == "bidisc" || gr.kind == "hartogs")
            return std::max(xy[0], xy[1]) <= r + 1e-12;
        double cx = 0;
        if (!centers_x.empty())
            cx = centers_x[static_cast<std::size_t>(gr.component[static_cast<std::size_t>(idx)])];
        return std::hypot(xy[0] - cx, xy[1]) <= r + 1e-12;
    });
}

// Sub-annuli s_i <= |z| <= t_i.
inline CompactChain annuli_chain(const Grid& g, const std::vector<std::pair<double, double>>& st) {
    return chain_from_predicate(g, static_cast<int>(st.size()),
                                [&](const Grid& gr, int idx, int i) {
                                    const auto& xy = gr.plot_xy[static_cast<std::size_t>(idx)];
                                    const double r = std::hypot(xy[0], xy[1]);
                                    return st[static_cast<std::size_t>(i)].first <= r + 1e-12 &&
                                           r <= st[static_cast<std::size_t>(i)].second + 1e-12;
                                });
}

// Hartogs-figure insets: the L-shaped region pulled in by k_i cells from its
// boundary, largest inset first so the sets grow with the index.
inline CompactChain hartogs_inset_chain(const Grid& g, const std::vector<int>& insets,
                                        double notch_x = 0.8, double notch_y = 0.5) {
    if (g.kind != "hartogs") throw ChainError("inset chain: needs a hartogs grid");
    return chain_from_predicate(g, static_cast<int>(insets.size()), [&](const Grid& gr, int idx,
                                                                        int i) {
        const double d = insets[static_cast<std::size_t>(i)] * gr.cell;
        const auto& xy = gr.plot_xy[static_cast<std::size_t>(idx)];
        const double x = xy[0], y = xy[1];
        const bool arm_z = x >= notch_x + d - 1e-12 && x <= 1 - d + 1e-12 && y <= 1 - d + 1e-12;
        const bool arm_w = y >= notch_y + d - 1e-12 && y <= 1 - d + 1e-12 && x <= 1 - d + 1e-12;
        return arm_z || arm_w;
    });
}

}  // namespace genconvex
