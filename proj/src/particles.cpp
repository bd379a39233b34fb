#include "levylab/particles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "levylab/analysis.hpp"
#include "levylab/spectral_ops.hpp"

namespace levylab::particles {

namespace {

constexpr std::uint64_t kInitSalt = 0x696E697470617274ULL;

void parallel_over(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (n < 4096 || workers == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

// Linear (cloud-in-cell) or nearest-node interpolation of a field component
// at an off-grid point.
double interp_component(const Field& f, int c, std::span<const double> x,
                        EulerConfig::Interp mode) {
    const Grid& g = f.grid();
    const double h = g.spacing();
    auto vals = f.component(c);
    auto base_frac = [&](double xi, long& i0, double& frac) {
        double u = (xi + 0.5 * g.length) / h;
        double fl = std::floor(u);
        i0 = static_cast<long>(fl);
        frac = u - fl;
    };
    auto wrap = [&](long i) {
        long m = i % g.n;
        return static_cast<std::size_t>(m < 0 ? m + g.n : m);
    };
    if (mode == EulerConfig::Interp::Nearest) {
        if (g.dim == 1) {
            long i0;
            double fr;
            base_frac(x[0], i0, fr);
            return vals[wrap(i0 + (fr >= 0.5 ? 1 : 0))];
        }
        long i0, j0;
        double fx, fy;
        base_frac(x[0], i0, fx);
        base_frac(x[1], j0, fy);
        return vals[node_index(g, static_cast<int>(wrap(i0 + (fx >= 0.5 ? 1 : 0))),
                               static_cast<int>(wrap(j0 + (fy >= 0.5 ? 1 : 0))))];
    }
    if (g.dim == 1) {
        long i0;
        double fr;
        base_frac(x[0], i0, fr);
        return (1.0 - fr) * vals[wrap(i0)] + fr * vals[wrap(i0 + 1)];
    }
    long i0, j0;
    double fx, fy;
    base_frac(x[0], i0, fx);
    base_frac(x[1], j0, fy);
    std::size_t a = wrap(i0), b = wrap(i0 + 1), c0 = wrap(j0), c1 = wrap(j0 + 1);
    double v00 = vals[node_index(g, static_cast<int>(a), static_cast<int>(c0))];
    double v01 = vals[node_index(g, static_cast<int>(a), static_cast<int>(c1))];
    double v10 = vals[node_index(g, static_cast<int>(b), static_cast<int>(c0))];
    double v11 = vals[node_index(g, static_cast<int>(b), static_cast<int>(c1))];
    return (1.0 - fx) * ((1.0 - fy) * v00 + fy * v01) + fx * ((1.0 - fy) * v10 + fy * v11);
}

Field gaussian_smooth(const Field& f, double bandwidth) {
    const Grid& g = f.grid();
    const double k0 = g.fundamental();
    Field out(g, f.components());
    for (int c = 0; c < f.components(); ++c) {
        fft::Spectrum s = fft::forward(g, f.component(c));
        for (std::size_t i = 0; i < s.size(); ++i) {
            double xi2 = k0 * k0 * fft::freq_radius_sq(g, i);
            s[i] *= std::exp(-0.5 * xi2 * bandwidth * bandwidth);
        }
        auto vals = fft::inverse(g, s);
        std::copy(vals.begin(), vals.end(), out.component(c).begin());
    }
    return out;
}

void check_particle_cfl(double speed, double dt, const Grid& g, double limit) {
    if (speed * dt * g.fundamental() * g.band_limit() > limit)
        throw fpe::CflError(speed, dt, limit);
}

} // namespace

Ensemble init_ensemble(const Field& rho0, std::size_t n, const StreamKey& base) {
    if (!rho0.is_scalar()) throw std::invalid_argument("init_ensemble: rho0 must be scalar");
    if (n < 2) throw std::invalid_argument("init_ensemble: need at least 2 particles");
    const Grid& g = rho0.grid();
    auto vals = rho0.component(0);

    std::vector<double> cdf(vals.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        acc += std::max(0.0, vals[i]);
        cdf[i] = acc;
    }
    if (!(acc > 0.0)) throw std::invalid_argument("init_ensemble: density has no positive mass");
    for (double& v : cdf) v /= acc;

    Ensemble ens;
    ens.dim = g.dim;
    ens.base = base;
    ens.positions.resize(n * g.dim);
    const double h = g.spacing();
    std::uint64_t init_seed = mix64(base.seed ^ kInitSalt);
    for (std::size_t i = 0; i < n; ++i) {
        KeyedStream rs(StreamKey{init_seed, i, 0});
        double u = rs.uniform();
        std::size_t cell = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (cell >= cdf.size()) cell = cdf.size() - 1;
        if (g.dim == 1) {
            ens.positions[i] = torus_wrap(g.coord(static_cast<int>(cell)) +
                                          (rs.uniform() - 0.5) * h, g.length);
        } else {
            int ix = static_cast<int>(cell) / g.n, iy = static_cast<int>(cell) % g.n;
            ens.positions[2 * i] = torus_wrap(g.coord(ix) + (rs.uniform() - 0.5) * h, g.length);
            ens.positions[2 * i + 1] = torus_wrap(g.coord(iy) + (rs.uniform() - 0.5) * h, g.length);
        }
    }
    return ens;
}

Field estimate_density(const Ensemble& ens, const Grid& grid, double bandwidth) {
    if (ens.dim != grid.dim) throw std::invalid_argument("estimate_density: dim mismatch");
    if (!(bandwidth >= grid.spacing()))
        throw std::invalid_argument("estimate_density: bandwidth must be >= grid spacing");
    const double h = grid.spacing();
    std::vector<long> counts(grid.size(), 0);
    auto cell_of = [&](double x) {
        long i = std::lround((x + 0.5 * grid.length) / h);
        long m = i % grid.n;
        return static_cast<std::size_t>(m < 0 ? m + grid.n : m);
    };
    const std::size_t n = ens.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto p = ens.particle(i);
        std::size_t idx = grid.dim == 1
            ? cell_of(p[0])
            : node_index(grid, static_cast<int>(cell_of(p[0])), static_cast<int>(cell_of(p[1])));
        ++counts[idx];
    }
    Field raw(grid, 1);
    auto vals = raw.component(0);
    const double scale = 1.0 / (static_cast<double>(n) * grid.cell_volume());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = counts[i] * scale;
    Field smooth = gaussian_smooth(raw, bandwidth);
    double mass = smooth.integral();
    for (double& v : smooth.raw()) v /= mass;
    return smooth;
}

Ensemble step_mckean(const Ensemble& ens, const stable::StableParams& p,
                     const fpe::KernelSpec& K, const EulerConfig& cfg, const Grid& grid) {
    stable::validate(p);
    if (p.dim != ens.dim || grid.dim != ens.dim)
        throw std::invalid_argument("step_mckean: dimension mismatch");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("step_mckean: dt must be positive");

    const std::size_t n = ens.size();
    std::vector<double> drift(n * ens.dim, 0.0);
    bool zero_kernel = K.kind == fpe::KernelSpec::Kind::Zero;

    if (!zero_kernel && cfg.drift_mode == EulerConfig::DriftMode::Grid) {
        Field density = estimate_density(ens, grid, cfg.bandwidth);
        Field b = fpe::drift_field(K, density);
        parallel_over(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                for (int a = 0; a < ens.dim; ++a)
                    drift[i * ens.dim + a] =
                        interp_component(b, a, ens.particle(i), cfg.interpolation);
        });
    } else if (!zero_kernel) {
        if (!(cfg.bandwidth >= grid.spacing()))
            throw std::invalid_argument("step_mckean: bandwidth must be >= grid spacing");
        Field k_moll = gaussian_smooth(fpe::kernel_field(K, grid), cfg.bandwidth);
        parallel_over(n, [&](std::size_t lo, std::size_t hi) {
            std::vector<double> disp(ens.dim);
            for (std::size_t i = lo; i < hi; ++i) {
                auto xi = ens.particle(i);
                for (std::size_t j = 0; j < n; ++j) {
                    auto xj = ens.particle(j);
                    for (int a = 0; a < ens.dim; ++a)
                        disp[a] = torus_delta(xi[a], xj[a], grid.length);
                    for (int a = 0; a < ens.dim; ++a)
                        drift[i * ens.dim + a] +=
                            interp_component(k_moll, a, disp, cfg.interpolation);
                }
                for (int a = 0; a < ens.dim; ++a) drift[i * ens.dim + a] /= static_cast<double>(n);
            }
        });
    }

    double speed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s2 = 0.0;
        for (int a = 0; a < ens.dim; ++a) s2 += drift[i * ens.dim + a] * drift[i * ens.dim + a];
        speed = std::max(speed, s2);
    }
    speed = std::sqrt(speed);
    if (!zero_kernel) check_particle_cfl(speed, cfg.dt, grid, cfg.cfl_limit);

    Ensemble next = ens;
    next.t = ens.t + cfg.dt;
    next.step = ens.step + 1;
    parallel_over(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto inc = stable::sample_increment(
                p, cfg.dt,
                StreamKey{ens.base.seed, ens.base.lane + i,
                          ens.base.step + static_cast<std::uint64_t>(ens.step)});
            for (int a = 0; a < ens.dim; ++a) {
                double x = ens.positions[i * ens.dim + a] + drift[i * ens.dim + a] * cfg.dt + inc[a];
                next.positions[i * ens.dim + a] = torus_wrap(x, grid.length);
            }
        }
    });
    return next;
}

std::vector<double> step_linear(std::span<const double> positions, int dim,
                                const fpe::FpeTrajectory& drift, double s, double dt,
                                std::span<const double> increments, const EulerConfig& cfg) {
    Field b = drift.drift_at(s); // throws on coverage gap
    const Grid& g = drift.grid();
    const std::size_t n = positions.size() / dim;
    if (increments.size() != positions.size())
        throw std::invalid_argument("step_linear: increment count mismatch");
    std::vector<double> out(positions.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> x(positions.data() + i * dim, dim);
        for (int a = 0; a < dim; ++a) {
            double v = interp_component(b, a, x, cfg.interpolation);
            out[i * dim + a] = torus_wrap(x[a] + v * dt + increments[i * dim + a], g.length);
        }
    }
    return out;
}

GapSeries pathwise_gap(std::span<const double> x0a, std::span<const double> x0b,
                       const fpe::FpeTrajectory& drift, double T, double h,
                       const StreamKey& base, const EulerConfig& cfg) {
    const Grid& g = drift.grid();
    const int dim = g.dim;
    if (static_cast<int>(x0a.size()) != dim || static_cast<int>(x0b.size()) != dim)
        throw std::invalid_argument("pathwise_gap: initial point dimension mismatch");
    int nsteps = static_cast<int>(std::lround(T / h));
    stable::NoisePath path =
        stable::sample_path(stable::StableParams{drift.alpha(), dim}, T, nsteps, base);

    auto dist = [&](std::span<const double> a, std::span<const double> b) {
        double s2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            double d = torus_delta(a[c], b[c], g.length);
            s2 += d * d;
        }
        return std::sqrt(s2);
    };

    std::vector<double> xa(x0a.begin(), x0a.end()), xb(x0b.begin(), x0b.end());
    GapSeries series;
    double running = dist(xa, xb);
    series.times.push_back(0.0);
    series.gaps.push_back(running);
    EulerConfig step_cfg = cfg;
    step_cfg.dt = h;
    for (int k = 0; k < nsteps; ++k) {
        double s = k * h;
        auto inc = path.increment(k);
        xa = step_linear(xa, dim, drift, s, h, inc, step_cfg);
        xb = step_linear(xb, dim, drift, s, h, inc, step_cfg);
        running = std::max(running, dist(xa, xb));
        series.times.push_back((k + 1) * h);
        series.gaps.push_back(running);
    }
    return series;
}

OrderFit strong_error_order(std::span<const double> hs, std::span<const double> gaps) {
    if (hs.size() != gaps.size() || hs.size() < 4)
        throw std::invalid_argument("strong_error_order: need >= 4 ladder points");
    OrderFit fit;
    // ladder is expected to shrink with h; flag (do not fail) if it does not
    for (std::size_t i = 1; i < hs.size(); ++i) {
        bool h_down = hs[i] < hs[i - 1];
        if ((h_down && gaps[i] > gaps[i - 1]) || (!h_down && gaps[i] < gaps[i - 1]))
            fit.monotone = false;
    }
    auto line = analysis::fit_loglog(hs, gaps);
    fit.order = line.slope;
    fit.band = line.band;
    return fit;
}

double interpolated_lipschitz(const Field& drift) {
    const Grid& g = drift.grid();
    const double h = g.spacing();
    double lip = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
        double axis_lip = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::size_t nb;
            if (g.dim == 1) {
                nb = (i + 1) % g.n;
            } else {
                int ix = static_cast<int>(i) / g.n, iy = static_cast<int>(i) % g.n;
                nb = axis == 0 ? node_index(g, (ix + 1) % g.n, iy)
                               : node_index(g, ix, (iy + 1) % g.n);
            }
            double d2 = 0.0;
            for (int c = 0; c < drift.components(); ++c) {
                double d = drift(c, nb) - drift(c, i);
                d2 += d * d;
            }
            axis_lip = std::max(axis_lip, std::sqrt(d2) / h);
        }
        lip += axis_lip;
    }
    return lip;
}

} // namespace levylab::particles
