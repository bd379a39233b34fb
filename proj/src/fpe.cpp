#include "levylab/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "levylab/spectral_ops.hpp"

namespace levylab::fpe {

CflError::CflError(double speed_, double dt_, double limit_)
    : std::runtime_error("advection step-size guard tripped: dt * speed * max_freq = "
                         + std::to_string(speed_ * dt_) + " * max_freq exceeds limit "
                         + std::to_string(limit_) + " (measured speed " + std::to_string(speed_) + ")"),
      speed(speed_), dt(dt_), limit(limit_) {}

DivergenceError::DivergenceError(double t)
    : std::runtime_error("solution diverged (non-finite values) at t = " + std::to_string(t)) {}

void validate(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver dt must be positive");
    if (cfg.time_scheme != 1 && cfg.time_scheme != 2)
        throw std::invalid_argument("time_scheme must be 1 or 2");
    if (!(cfg.cfl_limit > 0.0)) throw std::invalid_argument("cfl_limit must be positive");
    if (cfg.store_every < 1) throw std::invalid_argument("store_every must be >= 1");
}

namespace {

double phi1(double z) { // (e^z - 1)/z, stable near 0
    return std::abs(z) < 1e-12 ? 1.0 : std::expm1(z) / z;
}

Field field_from_spectrum(const Grid& g, const fft::Spectrum& s) {
    Field f(g, 1);
    auto vals = fft::inverse(g, s);
    std::copy(vals.begin(), vals.end(), f.component(0).begin());
    return f;
}

/// Shared machinery of the forward (divergence-form) and dual
/// (advection-form) integrators: exponential tables and dealiased
/// pseudo-spectral products.
class Stepper {
public:
    Stepper(const Grid& grid, double alpha, const SolverConfig& cfg)
        : grid_(grid), cfg_(cfg) {
        if (!(alpha > 0.0) || !(alpha <= 2.0))
            throw std::invalid_argument("alpha must lie in (0, 2]");
        validate(cfg);
        const double k0 = grid.fundamental();
        const double band2 = grid.band_limit() * grid.band_limit();
        const std::size_t n = grid.size();
        e_full_.resize(n);
        e_half_.resize(n);
        p_full_.resize(n);
        p_half_.resize(n);
        band_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double r2 = fft::freq_radius_sq(grid_, i);
            double z = -cfg.dt * (r2 == 0.0 ? 0.0 : std::pow(k0 * k0 * r2, 0.5 * alpha));
            e_full_[i] = std::exp(z);
            e_half_[i] = std::exp(0.5 * z);
            p_full_[i] = cfg.dt * phi1(z);
            p_half_[i] = 0.5 * cfg.dt * phi1(0.5 * z);
            band_[i] = (!cfg.dealias || r2 <= band2) ? 1.0 : 0.0;
        }
        max_freq_ = k0 * grid.band_limit();
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& band() const { return band_; }

    void check_cfl(double speed) const {
        if (speed * cfg_.dt * max_freq_ > cfg_.cfl_limit)
            throw CflError(speed, cfg_.dt, cfg_.cfl_limit);
    }

    /// u_hat <- E*u_hat + P*n_hat with the full- or half-step tables.
    void apply(fft::Spectrum& u_hat, const fft::Spectrum& n_hat, bool half) const {
        const auto& e = half ? e_half_ : e_full_;
        const auto& p = half ? p_half_ : p_full_;
        for (std::size_t i = 0; i < u_hat.size(); ++i)
            u_hat[i] = e[i] * u_hat[i] + p[i] * n_hat[i];
    }

    void apply_linear(fft::Spectrum& u_hat) const {
        for (std::size_t i = 0; i < u_hat.size(); ++i) u_hat[i] *= e_full_[i];
    }

    /// -div(B rho) in frequency space; also reports max |B| and min rho.
    fft::Spectrum flux_divergence(const fft::Spectrum& rho_hat,
                                  const std::vector<fft::Spectrum>& k_hat,
                                  double* max_speed, double* min_rho) const {
        const std::size_t n = grid_.size();
        auto rho = fft::inverse(grid_, rho_hat);
        if (min_rho) *min_rho = *std::min_element(rho.begin(), rho.end());

        std::vector<std::vector<double>> b(grid_.dim);
        fft::Spectrum tmp(n);
        for (int axis = 0; axis < grid_.dim; ++axis) {
            for (std::size_t i = 0; i < n; ++i) tmp[i] = k_hat[axis][i] * rho_hat[i] * band_[i];
            b[axis] = fft::inverse(grid_, tmp);
        }
        if (max_speed) {
            double sp = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double s2 = 0.0;
                for (int axis = 0; axis < grid_.dim; ++axis) s2 += b[axis][i] * b[axis][i];
                sp = std::max(sp, s2);
            }
            *max_speed = std::sqrt(sp);
        }

        const double k0 = grid_.fundamental();
        fft::Spectrum out(n, {0.0, 0.0});
        std::vector<double> flux(n);
        for (int axis = 0; axis < grid_.dim; ++axis) {
            for (std::size_t i = 0; i < n; ++i) flux[i] = b[axis][i] * rho[i];
            fft::Spectrum fh = fft::forward(grid_, flux);
            for (std::size_t i = 0; i < n; ++i) {
                double m = fft::freq_component(grid_, i, axis);
                out[i] -= std::complex<double>(0.0, k0 * m) * fh[i] * band_[i];
            }
        }
        return out;
    }

    /// B(s) . grad u in frequency space (advection form, positive sign).
    fft::Spectrum advection(const fft::Spectrum& u_hat, const Field& drift) const {
        const std::size_t n = grid_.size();
        const double k0 = grid_.fundamental();
        fft::Spectrum tmp(n);
        std::vector<double> prod(n, 0.0);
        for (int axis = 0; axis < grid_.dim; ++axis) {
            for (std::size_t i = 0; i < n; ++i) {
                double m = fft::freq_component(grid_, i, axis);
                tmp[i] = std::complex<double>(0.0, k0 * m) * u_hat[i];
            }
            auto du = fft::inverse(grid_, tmp);
            auto bv = drift.component(axis);
            for (std::size_t i = 0; i < n; ++i) prod[i] += bv[i] * du[i];
        }
        fft::Spectrum out = fft::forward(grid_, prod);
        for (std::size_t i = 0; i < n; ++i) out[i] *= band_[i];
        return out;
    }

    int scheme() const { return cfg_.time_scheme; }
    double dt() const { return cfg_.dt; }

private:
    Grid grid_;
    SolverConfig cfg_;
    std::vector<double> e_full_, e_half_, p_full_, p_half_, band_;
    double max_freq_ = 0.0;
};

std::vector<fft::Spectrum> kernel_spectra(const KernelSpec& K, const Grid& grid,
                                          const std::vector<double>& band) {
    Field kf = kernel_field(K, grid);
    const double vol = grid.length * (grid.dim == 2 ? grid.length : 1.0);
    std::vector<fft::Spectrum> k_hat(grid.dim);
    for (int axis = 0; axis < grid.dim; ++axis) {
        k_hat[axis] = fft::forward(grid, kf.component(axis));
        for (std::size_t i = 0; i < k_hat[axis].size(); ++i) k_hat[axis][i] *= vol * band[i];
    }
    return k_hat;
}

void check_finite(const fft::Spectrum& s, double t) {
    for (const auto& v : s)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DivergenceError(t);
}

/// One step of the forward equation on the spectrum; reports the smallest
/// density value seen among the stage evaluations.
void forward_step(const Stepper& st, const std::vector<fft::Spectrum>& k_hat, bool zero_kernel,
                  fft::Spectrum& rho_hat, double t, double* min_rho) {
    if (zero_kernel) {
        st.apply_linear(rho_hat);
        if (min_rho) *min_rho = std::numeric_limits<double>::infinity();
        return;
    }
    double speed = 0.0, mr1 = 0.0, mr2 = 0.0;
    fft::Spectrum n1 = st.flux_divergence(rho_hat, k_hat, &speed, &mr1);
    st.check_cfl(speed);
    if (st.scheme() == 1) {
        st.apply(rho_hat, n1, false);
        if (min_rho) *min_rho = mr1;
    } else {
        fft::Spectrum mid = rho_hat;
        st.apply(mid, n1, true);
        fft::Spectrum n2 = st.flux_divergence(mid, k_hat, nullptr, &mr2);
        st.apply(rho_hat, n2, false);
        if (min_rho) *min_rho = std::min(mr1, mr2);
    }
    check_finite(rho_hat, t);
}

double mass_outside_center(const Field& rho) {
    const Grid& g = rho.grid();
    double quarter = 0.25 * g.length;
    double acc = 0.0;
    auto vals = rho.component(0);
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i)
            if (std::abs(g.coord(i)) > quarter) acc += vals[i];
    } else {
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                if (std::abs(g.coord(ix)) > quarter || std::abs(g.coord(iy)) > quarter)
                    acc += vals[node_index(g, ix, iy)];
    }
    return acc * g.cell_volume();
}

} // namespace

Field drift_field(const KernelSpec& K, const Field& rho) {
    if (!rho.is_scalar()) throw std::invalid_argument("drift_field: rho must be scalar");
    if (std::abs(rho.integral() - 1.0) > 1e-6)
        throw std::invalid_argument("drift_field: rho must carry unit mass");
    Field kf = kernel_field(K, rho.grid());
    return spectral::project_band(spectral::convolve(kf, rho));
}

FpeState fpe_step(const FpeState& state, double alpha, const KernelSpec& K,
                  const SolverConfig& cfg) {
    const Grid& g = state.rho.grid();
    Stepper st(g, alpha, cfg);
    bool zero_kernel = K.kind == KernelSpec::Kind::Zero;
    auto k_hat = zero_kernel ? std::vector<fft::Spectrum>{} : kernel_spectra(K, g, st.band());
    fft::Spectrum rho_hat = fft::forward(g, state.rho.component(0));
    forward_step(st, k_hat, zero_kernel, rho_hat, state.t, nullptr);
    return FpeState{field_from_spectrum(g, rho_hat), state.t + cfg.dt};
}

Field FpeTrajectory::rho_at(std::size_t i) const {
    return field_from_spectrum(grid_, spectra_.at(i));
}

fft::Spectrum FpeTrajectory::spectrum_at_time(double t) const {
    if (times_.empty()) throw std::invalid_argument("trajectory is empty");
    const double tol = 1e-9 * std::max(1.0, t_final_);
    if (t < times_.front() - tol || t > times_.back() + tol)
        throw std::invalid_argument("trajectory does not cover requested time t = "
                                    + std::to_string(t));
    auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
    std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    if (hi >= times_.size()) hi = times_.size() - 1;
    if (std::abs(times_[hi] - t) <= tol) return spectra_[hi];
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    fft::Spectrum out(spectra_[lo].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * spectra_[lo][i] + w * spectra_[hi][i];
    return out;
}

Field FpeTrajectory::rho_at_time(double t) const {
    return field_from_spectrum(grid_, spectrum_at_time(t));
}

Field FpeTrajectory::drift_at(double t) const {
    fft::Spectrum rho_hat = spectrum_at_time(t);
    if (kernel_.kind == KernelSpec::Kind::Zero) return Field(grid_, grid_.dim);
    const double band2 = grid_.band_limit() * grid_.band_limit();
    std::vector<double> band(grid_.size());
    for (std::size_t i = 0; i < band.size(); ++i)
        band[i] = fft::freq_radius_sq(grid_, i) <= band2 ? 1.0 : 0.0;
    auto k_hat = kernel_spectra(kernel_, grid_, band);
    Field out(grid_, grid_.dim);
    fft::Spectrum tmp(grid_.size());
    for (int axis = 0; axis < grid_.dim; ++axis) {
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = k_hat[axis][i] * rho_hat[i];
        auto vals = fft::inverse(grid_, tmp);
        std::copy(vals.begin(), vals.end(), out.component(axis).begin());
    }
    return out;
}

FpeTrajectory fpe_solve(const Field& rho0, double alpha, const KernelSpec& K, double T,
                        const SolverConfig& cfg, const std::vector<double>& observe_times,
                        const std::vector<double>& besov_deltas,
                        const std::function<void(const FpeState&)>& observer) {
    if (!rho0.is_scalar()) throw std::invalid_argument("fpe_solve: rho0 must be scalar");
    validate(cfg);
    if (!(T > 0.0)) throw std::invalid_argument("fpe_solve: T must be positive");
    const long nsteps = std::lround(T / cfg.dt);
    if (nsteps < 1 || std::abs(nsteps * cfg.dt - T) > 1e-6 * std::max(1.0, T))
        throw std::invalid_argument("fpe_solve: T must be an integer multiple of dt");

    const Grid& g = rho0.grid();
    Field rho_start = spectral::project_band(rho0);
    if (std::abs(rho_start.integral() - 1.0) > 1e-10)
        throw std::invalid_argument("fpe_solve: rho0 must carry unit mass");

    Stepper st(g, alpha, cfg);
    bool zero_kernel = K.kind == KernelSpec::Kind::Zero;
    auto k_hat = zero_kernel ? std::vector<fft::Spectrum>{} : kernel_spectra(K, g, st.band());

    FpeTrajectory traj;
    traj.grid_ = g;
    traj.alpha_ = alpha;
    traj.dt_ = cfg.dt;
    traj.t_final_ = T;
    traj.kernel_ = K;
    traj.min_rho_seen_ = rho_start.min_value();

    // snap requested observation times to step indices
    std::vector<std::vector<std::size_t>> obs_at_step(nsteps + 1);
    for (std::size_t k = 0; k < observe_times.size(); ++k) {
        long s = std::clamp(std::lround(observe_times[k] / cfg.dt), 0L, nsteps);
        obs_at_step[s].push_back(k);
    }
    traj.obs_.resize(observe_times.size());

    std::optional<spectral::DyadicPartition> part;
    if (!besov_deltas.empty()) part.emplace(g);

    fft::Spectrum rho_hat = fft::forward(g, rho_start.component(0));

    auto record = [&](long step_index, double t) {
        bool store = step_index % cfg.store_every == 0 || step_index == nsteps;
        bool observe = !obs_at_step[step_index].empty();
        if (store) {
            traj.times_.push_back(t);
            traj.spectra_.push_back(rho_hat);
        }
        if (!observe && !observer) return;
        Field rho = field_from_spectrum(g, rho_hat);
        traj.min_rho_seen_ = std::min(traj.min_rho_seen_, rho.min_value());
        traj.mass_outside_max_ = std::max(traj.mass_outside_max_, mass_outside_center(rho));
        if (observe) {
            FpeObservation row;
            row.t = t;
            row.mass = rho.integral();
            row.min_rho = rho.min_value();
            for (double delta : besov_deltas)
                row.besov_norms.push_back(
                    spectral::besov_norm(rho, {delta, 1.0, spectral::kInf}, *part));
            for (std::size_t k : obs_at_step[step_index]) traj.obs_[k] = row;
        }
        if (observer) observer(FpeState{std::move(rho), t});
    };

    record(0, 0.0);
    for (long s = 0; s < nsteps; ++s) {
        double min_rho = 0.0;
        forward_step(st, k_hat, zero_kernel, rho_hat, s * cfg.dt, &min_rho);
        if (!zero_kernel) traj.min_rho_seen_ = std::min(traj.min_rho_seen_, min_rho);
        if (cfg.negativity_policy == SolverConfig::NegativityPolicy::ClipRenormalize &&
            min_rho < 0.0) {
            Field rho = field_from_spectrum(g, rho_hat);
            double mass = rho.integral();
            bool clipped = false;
            for (double& v : rho.raw())
                if (v < 0.0) {
                    v = 0.0;
                    clipped = true;
                }
            if (clipped) {
                ++traj.clip_events_;
                double scale = mass / rho.integral();
                for (double& v : rho.raw()) v *= scale;
                rho_hat = fft::forward(g, rho.component(0));
            }
        }
        record(s + 1, (s + 1) * cfg.dt);
    }
    return traj;
}

Field kbe_solve(const Field& phi, const FpeTrajectory& traj, double t, const SolverConfig& cfg) {
    if (!phi.is_scalar()) throw std::invalid_argument("kbe_solve: phi must be scalar");
    if (!(phi.grid() == traj.grid())) throw std::invalid_argument("kbe_solve: grid mismatch");
    validate(cfg);
    if (t > traj.t_final() + 1e-9)
        throw std::invalid_argument("kbe_solve: trajectory does not cover [0, t]");
    const long nsteps = std::lround(t / cfg.dt);
    if (nsteps < 1 || std::abs(nsteps * cfg.dt - t) > 1e-6 * std::max(1.0, t))
        throw std::invalid_argument("kbe_solve: t must be an integer multiple of dt");

    const Grid& g = phi.grid();
    Stepper st(g, traj.alpha(), cfg);
    Field phi_p = spectral::project_band(phi);
    fft::Spectrum u_hat = fft::forward(g, phi_p.component(0));
    bool zero_kernel = traj.kernel().kind == KernelSpec::Kind::Zero;

    for (long k = 0; k < nsteps; ++k) {
        double s = k * cfg.dt;
        if (zero_kernel) {
            st.apply_linear(u_hat);
            continue;
        }
        fft::Spectrum n1 = st.advection(u_hat, traj.drift_at(t - s));
        if (st.scheme() == 1) {
            st.apply(u_hat, n1, false);
        } else {
            fft::Spectrum mid = u_hat;
            st.apply(mid, n1, true);
            fft::Spectrum n2 = st.advection(mid, traj.drift_at(t - s - 0.5 * cfg.dt));
            st.apply(u_hat, n2, false);
        }
        check_finite(u_hat, s);
    }
    return field_from_spectrum(g, u_hat);
}

double duality_gap(const FpeTrajectory& traj, const Field& phi, double t,
                   const SolverConfig& cfg) {
    const Grid& g = traj.grid();
    Field phi_p = spectral::project_band(phi);
    double sup = phi_p.sup_norm();
    if (sup == 0.0) return 0.0;

    Field rho_t = traj.rho_at_time(t);
    Field rho_0 = traj.rho_at(0);
    Field u = kbe_solve(phi_p, traj, t, cfg);

    auto pair = [&](const Field& a, const Field& b) {
        double s = 0.0;
        auto av = a.component(0);
        auto bv = b.component(0);
        for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
        return s * g.cell_volume();
    };
    return std::abs(pair(phi_p, rho_t) - pair(u, rho_0)) / sup;
}

Field gaussian_density(const Grid& grid, double width, const std::vector<double>& center) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_density: width must be positive");
    std::vector<double> c(grid.dim, 0.0);
    if (!center.empty()) {
        if (static_cast<int>(center.size()) != grid.dim)
            throw std::invalid_argument("gaussian_density: center dimension mismatch");
        c = center;
    }
    Field out(grid, 1);
    auto vals = out.component(0);
    auto bump = [&](double x, double mu) {
        double s = 0.0;
        for (int k = -5; k <= 5; ++k) {
            double d = torus_delta(x, mu, grid.length) + k * grid.length;
            s += std::exp(-0.5 * d * d / (width * width));
        }
        return s;
    };
    if (grid.dim == 1) {
        for (int i = 0; i < grid.n; ++i) vals[i] = bump(grid.coord(i), c[0]);
    } else {
        for (int ix = 0; ix < grid.n; ++ix)
            for (int iy = 0; iy < grid.n; ++iy)
                vals[node_index(grid, ix, iy)] =
                    bump(grid.coord(ix), c[0]) * bump(grid.coord(iy), c[1]);
    }
    Field projected = spectral::project_band(out);
    double mass = projected.integral();
    for (double& v : projected.raw()) v /= mass;
    return projected;
}

} // namespace levylab::fpe
