#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levylab/rng.hpp"

namespace levylab::stable {

/// Rotationally invariant alpha-stable law; the increment over time t has
/// characteristic function exp(-t |xi|^alpha). alpha = 2 is the Gaussian
/// endpoint with covariance 2t * Identity.
struct StableParams {
    double alpha = 2.0;
    int dim = 1;
};

void validate(const StableParams& p);

/// One exact-in-law increment of length dt, drawn deterministically from the
/// stream key. Routes:
///   alpha = 2          Gaussian, covariance 2*dt*I
///   dim = 1, alpha < 2 Chambers-Mallows-Stuck transform, scaled by dt^(1/alpha)
///   dim >= 2, alpha<2  subordination: positive (alpha/2)-stable S with
///                      E exp(-lambda S) = exp(-dt lambda^(alpha/2)), then a
///                      centered Gaussian with covariance 2*S*I
std::vector<double> sample_increment(const StableParams& p, double dt, const StreamKey& key);

/// Increment path; increments[i] is the step-i increment (step-major layout,
/// dim doubles per step). The running sum is the sampled path. `level`
/// tracks how many times refine_path produced this object; it is folded
/// into the derived seed so refinement draws never collide with base draws.
struct NoisePath {
    StableParams params;
    double dt = 0.0;
    StreamKey base;
    int level = 0;
    std::vector<double> increments;

    int nsteps() const { return static_cast<int>(increments.size()) / params.dim; }
    std::span<const double> increment(int i) const {
        return std::span<const double>(increments.data() + static_cast<std::size_t>(i) * params.dim,
                                       params.dim);
    }
};

/// Path of nsteps increments over [0, T]; increments[i] uses the base key
/// with step = base.step + i.
NoisePath sample_path(const StableParams& p, double T, int nsteps, const StreamKey& base);

/// Halves the step: each coarse increment is split into a fresh dt/2 draw
/// (keyed at the next refinement level) plus the exact remainder, so the
/// pairwise sums reproduce the coarse increments bit-exactly and each half
/// keeps the dt/2 marginal law up to the conditional-split approximation
/// (exact for alpha = 2).
NoisePath refine_path(const NoisePath& coarse);

/// (1/N) sum_k exp(i xi . X_k); samples are flat, dim doubles per draw.
std::complex<double> empirical_charfn(std::span<const double> samples, int dim,
                                      std::span<const double> xi);

/// Hill estimator of the tail exponent from the top-k order statistics of
/// the magnitudes; requires 10 <= k <= N/10 and strictly positive inputs at
/// the used order statistics.
double hill_tail_index(std::span<const double> magnitudes, int k);

} // namespace levylab::stable
