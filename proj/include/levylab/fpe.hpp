#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "levylab/fft.hpp"
#include "levylab/kernel.hpp"

namespace levylab::fpe {

/// Step-size guard failure: dt * (max advection speed) * (max retained
/// frequency) exceeded the configured limit.
struct CflError : std::runtime_error {
    CflError(double speed_, double dt_, double limit_);
    double speed;
    double dt;
    double limit;
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(double t);
};

struct SolverConfig {
    double dt = 1e-3;
    bool dealias = true;
    enum class NegativityPolicy { Report, ClipRenormalize };
    NegativityPolicy negativity_policy = NegativityPolicy::Report;
    int time_scheme = 2; // exponential integrator order, 1 or 2
    double cfl_limit = 0.9;
    int store_every = 1; // trajectory checkpoint stride, in steps
};

void validate(const SolverConfig& cfg);

struct FpeState {
    Field rho;
    double t = 0.0;
};

/// Drift B = K * rho, computed by spectral convolution per component and
/// dealiased to the retained band. rho must carry unit mass.
Field drift_field(const KernelSpec& K, const Field& rho);

/// One step of the mass-transport equation
///   d/dt rho = frac_laplacian(rho, alpha) - div((K * rho) rho)
/// with the linear part advanced exactly by its multiplier and the flux term
/// evaluated pseudo-spectrally (product in real space, divergence in
/// frequency space, dealiased). The zero mode is invariant to rounding.
FpeState fpe_step(const FpeState& state, double alpha, const KernelSpec& K,
                  const SolverConfig& cfg);

struct FpeObservation {
    double t = 0.0;
    double mass = 0.0;
    double min_rho = 0.0;
    std::vector<double> besov_norms; // one per requested delta, index (delta, 1, inf)
};

/// Time-indexed solution record: spectra at checkpoint steps plus requested
/// observation rows. Also reconstructs the drift trajectory for the dual
/// equation and the linearized particle dynamics.
class FpeTrajectory {
public:
    const Grid& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double dt() const { return dt_; }
    double t_final() const { return t_final_; }
    const KernelSpec& kernel() const { return kernel_; }

    std::size_t n_stored() const { return times_.size(); }
    double stored_time(std::size_t i) const { return times_[i]; }
    Field rho_at(std::size_t i) const;
    /// Density at an arbitrary time in [0, t_final]: exact at checkpoints,
    /// linear interpolation of spectra in between.
    Field rho_at_time(double t) const;
    /// Drift B(t) = K * rho_t on [0, t_final]; throws std::invalid_argument
    /// outside the covered span.
    Field drift_at(double t) const;

    const std::vector<FpeObservation>& observations() const { return obs_; }
    double min_rho_seen() const { return min_rho_seen_; }
    /// Largest mass observed outside the central half-domain (monitor).
    double mass_outside_max() const { return mass_outside_max_; }
    long clip_events() const { return clip_events_; }

private:
    friend FpeTrajectory fpe_solve(const Field&, double, const KernelSpec&, double,
                                   const SolverConfig&, const std::vector<double>&,
                                   const std::vector<double>&,
                                   const std::function<void(const FpeState&)>&);
    fft::Spectrum spectrum_at_time(double t) const;

    Grid grid_{};
    double alpha_ = 0.0;
    double dt_ = 0.0;
    double t_final_ = 0.0;
    KernelSpec kernel_;
    std::vector<double> times_;
    std::vector<fft::Spectrum> spectra_;
    std::vector<FpeObservation> obs_;
    double min_rho_seen_ = 0.0;
    double mass_outside_max_ = 0.0;
    long clip_events_ = 0;
};

/// Integrates from rho0 (nonnegative, unit mass; projected to the retained
/// band) to time T. Observation rows are written at the step times nearest
/// to the requested times; observers get read-only snapshots.
FpeTrajectory fpe_solve(const Field& rho0, double alpha, const KernelSpec& K, double T,
                        const SolverConfig& cfg,
                        const std::vector<double>& observe_times = {},
                        const std::vector<double>& besov_deltas = {},
                        const std::function<void(const FpeState&)>& observer = nullptr);

/// Dual (non-divergence-form) evolution: integrates
///   d/ds u(s) = frac_laplacian(u, alpha) + B(t - s) . grad u(s),  u(0) = phi
/// forward in s over [0, t] against the time-reversed drift of the forward
/// trajectory, and returns u(t). phi is projected to the retained band.
Field kbe_solve(const Field& phi, const FpeTrajectory& traj, double t, const SolverConfig& cfg);

/// |<phi, rho_t> - <u^t(t), rho_0>| / ||phi||_inf, both pairings as grid
/// quadratures. Zero kernels and constant phi give exact (rounding-level)
/// zeros; the general case converges under joint (dt, 1/n) refinement.
double duality_gap(const FpeTrajectory& traj, const Field& phi, double t,
                   const SolverConfig& cfg);

/// Unit-mass periodic Gaussian bump centered at `center`, band-projected;
/// the standard initializer for near-point-mass experiments (width in
/// multiples of the grid spacing is the caller's choice).
Field gaussian_density(const Grid& grid, double width, const std::vector<double>& center = {});

} // namespace levylab::fpe
