#pragma once

#include <cstdint>
#include <optional>

#include "levylab/field.hpp"

namespace levylab::fpe {

/// Declarative interaction kernel. Zero gives the free fractional heat flow.
/// SmoothGaussianGradient is amplitude * grad of a periodic unit-peak
/// Gaussian of the given width (positive amplitude drifts mass uphill along
/// the smoothed density, i.e. attracts). SyntheticBesov components are
/// lacunary fields with Hoelder C^beta norm in [amplitude/4, 4*amplitude].
struct KernelSpec {
    enum class Kind { Zero, SmoothGaussianGradient, SyntheticBesov, Custom };

    Kind kind = Kind::Zero;
    double width = 0.5;
    double amplitude = 1.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::optional<Field> custom;
    bool time_dependent = false; // reserved; always false in v1

    static KernelSpec zero() { return {}; }
    static KernelSpec smooth_gaussian_gradient(double width, double amplitude);
    static KernelSpec synthetic_besov(double beta, std::uint64_t seed, double amplitude);
    static KernelSpec custom_field(Field f);
};

/// Realizes the kernel as a vector field with grid.dim components.
/// Custom kernels must match the grid and component count.
Field kernel_field(const KernelSpec& spec, const Grid& grid);

} // namespace levylab::fpe
