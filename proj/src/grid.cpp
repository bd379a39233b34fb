#include "levylab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levylab {

Grid make_grid(int dim, int n, double length) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("grid dim must be 1 or 2, got " + std::to_string(dim));
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("grid n must be a power of two >= 16, got " + std::to_string(n));
    if (!(length > 0.0))
        throw std::invalid_argument("grid side length must be positive");
    return Grid{dim, n, length};
}

double torus_wrap(double x, double length) {
    double y = std::fmod(x + 0.5 * length, length);
    if (y < 0.0) y += length;
    return y - 0.5 * length;
}

double torus_delta(double a, double b, double length) {
    return torus_wrap(a - b, length);
}

} // namespace levylab
