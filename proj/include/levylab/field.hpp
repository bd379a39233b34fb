#pragma once

#include <span>
#include <vector>

#include "levylab/grid.hpp"

namespace levylab {

/// Grid function with one or more scalar components, stored component-major
/// in row-major node order. Fields are plain values; operations on them are
/// pure functions, so they are safe to share across workers.
class Field {
public:
    Field() = default;
    Field(const Grid& grid, int components);

    static Field scalar(const Grid& grid) { return Field(grid, 1); }

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t nodes() const { return grid_.size(); }
    bool is_scalar() const { return components_ == 1; }

    std::span<double> component(int c);
    std::span<const double> component(int c) const;

    double& operator()(int c, std::size_t node) { return values_[c * nodes() + node]; }
    double operator()(int c, std::size_t node) const { return values_[c * nodes() + node]; }

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    /// Cell-volume-weighted integral of one component.
    double integral(int c = 0) const;
    double min_value(int c = 0) const;
    double max_value(int c = 0) const;
    /// Sup norm over all components.
    double sup_norm() const;

private:
    Grid grid_{};
    int components_ = 0;
    std::vector<double> values_;
};

/// Node index helpers (row-major; for dim 2 the first axis is the slow one).
inline std::size_t node_index(const Grid& g, int ix, int iy = 0) {
    return g.dim == 1 ? static_cast<std::size_t>(ix)
                      : static_cast<std::size_t>(ix) * g.n + iy;
}

} // namespace levylab
