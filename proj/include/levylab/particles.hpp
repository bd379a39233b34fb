#pragma once

#include <span>
#include <vector>

#include "levylab/fpe.hpp"
#include "levylab/stable.hpp"

namespace levylab::particles {

/// Interacting ensemble on the torus. Noise draws for particle i at step k
/// use the stream key (base.seed, lane = i, step = base.step + k), so
/// permuting particles together with their lanes permutes trajectories
/// exactly, and reruns are bit-identical.
struct Ensemble {
    std::vector<double> positions; // N x dim, particle-major
    int dim = 1;
    double t = 0.0;
    long step = 0;
    StreamKey base;

    std::size_t size() const { return positions.size() / dim; }
    std::span<double> particle(std::size_t i) {
        return std::span<double>(positions.data() + i * dim, dim);
    }
    std::span<const double> particle(std::size_t i) const {
        return std::span<const double>(positions.data() + i * dim, dim);
    }
};

struct EulerConfig {
    double dt = 1e-2;
    enum class DriftMode { Grid, Pairwise };
    DriftMode drift_mode = DriftMode::Grid;
    double bandwidth = 0.0; // density smoothing scale; >= grid spacing
    enum class Interp { Nearest, Linear };
    Interp interpolation = Interp::Linear;
    double cfl_limit = 0.9;
};

/// Draws N iid particles from a density field (inverse-CDF over cells plus a
/// uniform offset within the cell), deterministically from the base key.
Ensemble init_ensemble(const Field& rho0, std::size_t n, const StreamKey& base);

/// Gaussian-smoothed, cell-deposited empirical measure; unit mass exactly.
Field estimate_density(const Ensemble& ens, const Grid& grid, double bandwidth);

/// One Euler step of the interacting system: the drift is either the
/// convolution kernel applied to the smoothed empirical density and
/// interpolated at the particles (Grid mode), or a direct mollified pair sum
/// (Pairwise mode; mollification scale = bandwidth). Noise is an exact
/// stable increment per particle.
Ensemble step_mckean(const Ensemble& ens, const stable::StableParams& p,
                     const fpe::KernelSpec& K, const EulerConfig& cfg, const Grid& grid);

/// Euler step against a frozen drift trajectory (the linearized dynamics);
/// noise increments are supplied by the caller. Throws std::invalid_argument
/// when the trajectory does not cover the step time.
std::vector<double> step_linear(std::span<const double> positions, int dim,
                                const fpe::FpeTrajectory& drift, double s, double dt,
                                std::span<const double> increments, const EulerConfig& cfg);

struct GapSeries {
    std::vector<double> times;
    std::vector<double> gaps; // sup-so-far torus distance
    double terminal() const { return gaps.empty() ? 0.0 : gaps.back(); }
};

/// Runs two solutions of the linearized dynamics from x0a and x0b under the
/// identical noise path (same base key) and step h, and returns the running
/// supremum of their torus distance. Identical starts give the identically
/// zero series.
GapSeries pathwise_gap(std::span<const double> x0a, std::span<const double> x0b,
                       const fpe::FpeTrajectory& drift, double T, double h,
                       const StreamKey& base, const EulerConfig& cfg);

struct OrderFit {
    double order = 0.0;
    double band = 0.0;   // 95% half-width on the fitted order
    bool monotone = true;// gap ladder decayed monotonically with h
};

/// Least-squares slope of log(gap) against log(h); needs >= 4 ladder points.
OrderFit strong_error_order(std::span<const double> hs, std::span<const double> gaps);

/// Largest slope magnitude of the piecewise-linear interpolant of a drift
/// field between adjacent nodes (the Lipschitz constant actually seen by
/// the particle update).
double interpolated_lipschitz(const Field& drift);

} // namespace levylab::particles
