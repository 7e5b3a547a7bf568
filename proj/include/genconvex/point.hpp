#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace genconvex {

// Dimension metadata of the ambient space. A point of C^n is flattened to
// 2n reals (all real parts first, then all imaginary parts), so a single
// point type serves R^n and C^n; the complex structure lives in the
// function family, not in the point.
struct Dimension {
    int n_real = 0;
    int n_complex = 0;

    int flat_size() const { return n_real + 2 * n_complex; }
    bool operator==(const Dimension& o) const {
        return n_real == o.n_real && n_complex == o.n_complex;
    }
    bool operator!=(const Dimension& o) const { return !(*this == o); }
};

struct Point {
    Dimension dim;
    std::vector<double> coords;

    Point() = default;
    Point(Dimension d, std::vector<double> c) : dim(d), coords(std::move(c)) {
        validate();
    }

    static Point real(std::vector<double> c) {
        Dimension d{static_cast<int>(c.size()), 0};
        return Point(d, std::move(c));
    }

    static Point complex_point(const std::vector<std::complex<double>>& zs) {
        Dimension d{0, static_cast<int>(zs.size())};
        std::vector<double> c(d.flat_size());
        for (std::size_t j = 0; j < zs.size(); ++j) {
            c[j] = zs[j].real();
            c[zs.size() + j] = zs[j].imag();
        }
        return Point(d, std::move(c));
    }

    double x(int j) const { return coords[static_cast<std::size_t>(j)]; }

    std::complex<double> z(int j) const {
        const int base = dim.n_real;
        return {coords[static_cast<std::size_t>(base + j)],
                coords[static_cast<std::size_t>(base + dim.n_complex + j)]};
    }

    void validate() const {
        if (static_cast<int>(coords.size()) != dim.flat_size())
            throw std::invalid_argument("point: coordinate count does not match dimension");
        for (double v : coords)
            if (!std::isfinite(v))
                throw std::invalid_argument("point: non-finite coordinate");
    }
};

inline double distance(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        const double d = a.coords[i] - b.coords[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Lexicographic coordinate order, used wherever a deterministic tie-break
// between points is required.
inline bool lex_less(const Point& a, const Point& b) {
    return a.coords < b.coords;
}

}  // namespace genconvex
