#pragma once

#include <cstddef>
#include <numbers>

namespace levylab {

/// Periodic sample grid on the torus [-L/2, L/2)^dim.
///
/// Discrete frequencies are integer multiples of the fundamental 2*pi/L.
/// Throughout the library, frequency indices m are measured in units of the
/// fundamental; physical wave numbers are fundamental()*m.
struct Grid {
    int dim = 1;         // 1 or 2
    int n = 0;           // points per axis; power of two, >= 16
    double length = 0.0; // torus side L

    std::size_t size() const {
        std::size_t s = static_cast<std::size_t>(n);
        return dim == 1 ? s : s * s;
    }
    double spacing() const { return length / n; }
    double cell_volume() const {
        double h = spacing();
        return dim == 1 ? h : h * h;
    }
    double fundamental() const { return 2.0 * std::numbers::pi / length; }
    int nyquist() const { return n / 2; }

    /// Retained (dealiased) band: frequency indices with |m| <= n/3,
    /// the 2/3 rule applied radially.
    double band_limit() const { return n / 3.0; }

    /// Node coordinate along one axis, in [-L/2, L/2).
    double coord(int i) const { return -0.5 * length + i * spacing(); }

    bool operator==(const Grid&) const = default;
};

/// Validates and constructs a grid; throws std::invalid_argument on bad input.
Grid make_grid(int dim, int n, double length);

/// Shortest signed displacement from b to a on the torus, in [-L/2, L/2).
double torus_delta(double a, double b, double length);

/// Wraps a coordinate into [-L/2, L/2).
double torus_wrap(double x, double length);

} // namespace levylab
