#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "qlheat/errors.hpp"

namespace qlheat {

/// Uniform 1-D grid: node i sits at x0 + i*dx.
struct Grid1D {
    double x0;
    double dx;
    std::size_t n;

    Grid1D(double x0_, double dx_, std::size_t n_) : x0(x0_), dx(dx_), n(n_) {
        if (!(dx > 0.0)) throw ValidationError("Grid1D: dx must be positive");
        if (n < 3) throw ValidationError("Grid1D: at least 3 nodes required");
    }

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_back() const { return x(n - 1); }
};

/// Grid over [0, x_max] with spacing dx (x_max rounded to a whole number of cells).
inline Grid1D make_grid(double x_max, double dx) {
    if (!(dx > 0.0) || !(x_max > 2.0 * dx))
        throw ValidationError("make_grid: need dx > 0 and x_max spanning at least 2 cells");
    const auto cells = static_cast<std::size_t>(std::llround(x_max / dx));
    return Grid1D(0.0, dx, cells + 1);
}

/// One sample per grid node at a single time level (temperature, or a
/// temperature gradient for the conservation-form solver).
struct Field {
    Grid1D grid;
    double t;
    std::vector<double> values;

    explicit Field(const Grid1D& g, double t_ = 0.0) : grid(g), t(t_), values(g.n, 0.0) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Dirichlet data: time-dependent value on the left edge, fixed value on the
/// right edge.
struct BoundarySpec {
    std::function<double(double)> left;
    double right = 0.0;
};

} // namespace qlheat
