#pragma once

#include <cstdint>

#include "levylab/dyadic.hpp"
#include "levylab/field.hpp"

namespace levylab::spectral {

/// Discrete L^p norm of a value array: cell-volume-weighted sum for finite p,
/// grid max for p = inf.
double lp_norm(const Grid& grid, std::span<const double> values, double p);

/// Projection onto the retained band |m| <= (2/3)*nyquist (all components).
Field project_band(const Field& f);

/// Frequency-shell restriction R_j f = (psi_j f_hat)^check. The input is
/// projected to the retained band first. Scalar fields only.
Field lp_block(const Field& f, const DyadicPartition& part, int j);

/// Discrete Besov norm over shells -1..j_max.
double besov_norm(const Field& f, const BesovIndex& idx, const DyadicPartition& part);

/// Fractional Laplacian via the Fourier multiplier -|xi|^alpha (physical
/// frequency), alpha in (0, 2]. alpha = 2 is the exact Laplacian multiplier.
Field frac_laplacian(const Field& f, double alpha);

/// ||grad^k R_j f||_p2 / (2^((k + d(1/p1 - 1/p2)) j) ||R_j f||_p1).
/// Gradients are spectral; k in {0, 1}; returns 0 when the denominator block
/// vanishes. Bounded over j and f by a grid-stable constant.
double bernstein_ratio(const Field& f, const DyadicPartition& part, int j, int k,
                       double p1, double p2);

/// Coercivity statistic of the fractional Laplacian at the peak of R_j u:
/// sgn(R_j u(x*)) * (-frac_laplacian(R_j u)(x*)) / (2^(alpha j) ||R_j u||_inf)
/// with x* the grid argmax of |R_j u|. Positive for j >= 1 across random
/// frequency-localized fields. Throws std::domain_error when the block
/// sup-norm is below 1e-14.
double max_principle_stat(const Field& u, const DyadicPartition& part, int j, double alpha);

/// Periodic convolution normalized by cell volume, so convolving with a
/// unit-mass density averages. Scalar*scalar, or vector*scalar per component.
Field convolve(const Field& f, const Field& g);

/// Commutator [R_j, b] g = R_j(b g) - b R_j(g). Callers keep the combined
/// bandwidth of b and g below the Nyquist radius; the products are formed
/// without extra filtering so the constant-b case is an exact zero.
Field commutator_apply(const Field& b, const Field& g, const DyadicPartition& part, int j);

/// Lacunary random series sum_j 2^(-j beta) a_j cos(2^j w_j.x + theta_j) with
/// unit vectors w_j, amplitudes a_j in [1/2, 1] and phases drawn
/// deterministically from the seed; its (beta, inf, inf) Besov norm lies in
/// [1/4, 4] with the per-shell values a_j by construction. beta in (-1, 2).
Field synth_besov_field(double beta, std::uint64_t seed, const Grid& grid);

/// Spectral partial derivative along one axis (physical frequency).
Field derivative(const Field& f, int axis);

/// Pointwise product; scalar*scalar or scalar*vector.
Field multiply(const Field& a, const Field& b);

} // namespace levylab::spectral
