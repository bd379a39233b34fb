#include "levylab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylab {

Field::Field(const Grid& grid, int components)
    : grid_(grid), components_(components), values_(grid.size() * components, 0.0) {
    if (components < 1) throw std::invalid_argument("field needs at least one component");
}

std::span<double> Field::component(int c) {
    return std::span<double>(values_.data() + c * nodes(), nodes());
}

std::span<const double> Field::component(int c) const {
    return std::span<const double>(values_.data() + c * nodes(), nodes());
}

double Field::integral(int c) const {
    double s = 0.0;
    for (double v : component(c)) s += v;
    return s * grid_.cell_volume();
}

double Field::min_value(int c) const {
    auto sp = component(c);
    return *std::min_element(sp.begin(), sp.end());
}

double Field::max_value(int c) const {
    auto sp = component(c);
    return *std::max_element(sp.begin(), sp.end());
}

double Field::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

} // namespace levylab
