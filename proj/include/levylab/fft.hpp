#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levylab/grid.hpp"

namespace levylab::fft {

using Spectrum = std::vector<std::complex<double>>;

/// Fourier coefficients c_m of samples taken at x_j = -L/2 + j*h, defined by
/// f(x) = sum_m c_m exp(i*k0*m.x) with k0 the fundamental frequency. Stored
/// in standard DFT order (index j holds m = j for j < n/2, m = j - n above).
Spectrum forward(const Grid& grid, std::span<const double> values);

/// Inverse of forward(); returns the real part (inputs produced from real
/// fields have conjugate-symmetric spectra, so the imaginary part is rounding).
std::vector<double> inverse(const Grid& grid, const Spectrum& spectrum);

/// Integer frequency component m_axis for a spectrum storage index.
int freq_component(const Grid& grid, std::size_t index, int axis);

/// Squared frequency-index radius |m|^2 for a spectrum storage index.
double freq_radius_sq(const Grid& grid, std::size_t index);

/// Precomputed per-index |m| table for a grid.
std::vector<double> radius_table(const Grid& grid);

} // namespace levylab::fft
