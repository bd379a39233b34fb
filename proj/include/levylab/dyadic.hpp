#pragma once

#include <limits>
#include <span>
#include <vector>

#include "levylab/grid.hpp"

namespace levylab::spectral {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Besov smoothness/integrability triple (s, p, q); p, q in [1, inf].
/// The Hoelder scale C^s is (s, inf, inf).
struct BesovIndex {
    double s = 0.0;
    double p = kInf;
    double q = kInf;
};

/// Dyadic partition of unity on the grid frequencies.
///
/// chi is a radial smooth cutoff with chi = 1 on r <= 1 and chi = 0 on
/// r >= 3/2, realized as the integral of a normalized exp(-1/(1-t^2)) bump
/// and tabulated once. Shells, at frequency-index radius r:
///
///   psi_{-1}(r) = chi(2r)
///   psi_j(r)    = chi(2^-j r) - chi(2^-(j-1) r)        0 <= j < j_max
///   psi_jmax(r) = 1 - chi(2^-(jmax-1) r)
///
/// The sum over j = -1..j_max telescopes to exactly 1, so the partition of
/// unity holds on the whole retained band |m| <= (2/3)*nyquist, where the
/// top shell still lies inside its dyadic annulus. j_max is pinned to
/// floor(log2((2/3)*nyquist)), which for power-of-two n is log2(n) - 2.
class DyadicPartition {
public:
    explicit DyadicPartition(const Grid& grid);

    const Grid& grid() const { return grid_; }
    int j_max() const { return j_max_; }

    /// Cutoff profile at radius r (any nonnegative r).
    double chi(double r) const;

    /// Shell weight psi_j at frequency-index radius r, j in [-1, j_max].
    double shell(int j, double r) const;

    /// Per-spectrum-index shell mask, already restricted to the retained
    /// band. Read-only and precomputed, safe to share across workers.
    std::span<const double> mask(int j) const;

    /// Retained-band indicator per spectrum index.
    std::span<const double> band_mask() const { return band_; }

private:
    Grid grid_;
    int j_max_ = 0;
    std::vector<std::vector<double>> masks_; // index j+1
    std::vector<double> band_;
};

} // namespace levylab::spectral
