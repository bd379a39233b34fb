#include "levylab/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "levylab/spectral_ops.hpp"

namespace levylab::fpe {

KernelSpec KernelSpec::smooth_gaussian_gradient(double width, double amplitude) {
    if (!(width > 0.0))
        throw std::invalid_argument("kernel width must be positive");
    KernelSpec k;
    k.kind = Kind::SmoothGaussianGradient;
    k.width = width;
    k.amplitude = amplitude;
    return k;
}

KernelSpec KernelSpec::synthetic_besov(double beta, std::uint64_t seed, double amplitude) {
    KernelSpec k;
    k.kind = Kind::SyntheticBesov;
    k.beta = beta;
    k.seed = seed;
    k.amplitude = amplitude;
    return k;
}

KernelSpec KernelSpec::custom_field(Field f) {
    KernelSpec k;
    k.kind = Kind::Custom;
    k.custom = std::move(f);
    return k;
}

namespace {

// Periodic Gaussian bump with unit peak at the origin; a few images suffice
// for width << L.
Field periodic_gaussian_peak(const Grid& g, double width) {
    Field out(g, 1);
    auto vals = out.component(0);
    auto bump1d = [&](double x) {
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) {
            double d = x + k * g.length;
            s += std::exp(-0.5 * d * d / (width * width));
        }
        return s;
    };
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) vals[i] = bump1d(g.coord(i));
    } else {
        std::vector<double> line(g.n);
        for (int i = 0; i < g.n; ++i) line[i] = bump1d(g.coord(i));
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                vals[node_index(g, ix, iy)] = line[ix] * line[iy];
    }
    double peak = out.max_value();
    for (double& v : out.raw()) v /= peak;
    return out;
}

} // namespace

Field kernel_field(const KernelSpec& spec, const Grid& grid) {
    switch (spec.kind) {
        case KernelSpec::Kind::Zero:
            return Field(grid, grid.dim);
        case KernelSpec::Kind::SmoothGaussianGradient: {
            Field bump = periodic_gaussian_peak(grid, spec.width);
            Field out(grid, grid.dim);
            for (int axis = 0; axis < grid.dim; ++axis) {
                Field d = spectral::derivative(bump, axis);
                auto dv = d.component(0);
                auto ov = out.component(axis);
                for (std::size_t i = 0; i < dv.size(); ++i) ov[i] = spec.amplitude * dv[i];
            }
            return out;
        }
        case KernelSpec::Kind::SyntheticBesov: {
            Field out(grid, grid.dim);
            for (int axis = 0; axis < grid.dim; ++axis) {
                Field comp = spectral::synth_besov_field(spec.beta, spec.seed + axis, grid);
                auto cv = comp.component(0);
                auto ov = out.component(axis);
                for (std::size_t i = 0; i < cv.size(); ++i) ov[i] = spec.amplitude * cv[i];
            }
            return out;
        }
        case KernelSpec::Kind::Custom: {
            if (!spec.custom) throw std::invalid_argument("custom kernel carries no field");
            if (!(spec.custom->grid() == grid))
                throw std::invalid_argument("custom kernel grid mismatch");
            if (spec.custom->components() != grid.dim)
                throw std::invalid_argument("custom kernel needs dim components");
            return *spec.custom;
        }
    }
    throw std::logic_error("unreachable kernel kind");
}

} // namespace levylab::fpe
