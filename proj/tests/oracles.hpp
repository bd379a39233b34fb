#pragma once

// Test-side reference computations, independent of the library's spectral
// path: direct trig synthesis for band-limited fields, finite differences,
// closed-form Gaussians, two-sample Kolmogorov-Smirnov, exact Pareto draws.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "levylab/field.hpp"
#include "levylab/rng.hpp"

namespace oracles {

struct TrigMode {
    double amplitude;
    double phase;
    int m0;
    int m1; // unused in 1D
};

/// Random band-limited field as an explicit trig sum: exactly representable
/// on any grid whose retained band contains every mode, so the same field
/// can be sampled on two resolutions for refinement studies.
inline levylab::Field random_trig_field(const levylab::Grid& g, std::uint64_t seed,
                                        double max_radius, int n_modes) {
    levylab::KeyedStream rs(levylab::StreamKey{seed, 0, 0});
    std::vector<TrigMode> modes;
    while (static_cast<int>(modes.size()) < n_modes) {
        double r = max_radius * std::sqrt(rs.uniform());
        double ang = 2.0 * std::numbers::pi * rs.uniform();
        int m0, m1 = 0;
        if (g.dim == 1) {
            m0 = static_cast<int>(std::lround(r));
        } else {
            m0 = static_cast<int>(std::lround(r * std::cos(ang)));
            m1 = static_cast<int>(std::lround(r * std::sin(ang)));
        }
        if (m0 * m0 + m1 * m1 > max_radius * max_radius) continue;
        modes.push_back({rs.uniform() * 2.0 - 1.0, 2.0 * std::numbers::pi * rs.uniform(), m0, m1});
    }
    levylab::Field f(g, 1);
    auto vals = f.component(0);
    const double k0 = g.fundamental();
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) {
            double x = g.coord(i), v = 0.0;
            for (const auto& m : modes) v += m.amplitude * std::cos(k0 * m.m0 * x + m.phase);
            vals[i] = v;
        }
    } else {
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy) {
                double x = g.coord(ix), y = g.coord(iy), v = 0.0;
                for (const auto& m : modes)
                    v += m.amplitude * std::cos(k0 * (m.m0 * x + m.m1 * y) + m.phase);
                vals[levylab::node_index(g, ix, iy)] = v;
            }
    }
    return f;
}

inline levylab::Field cosine_field(const levylab::Grid& g, int m, double phase = 0.0) {
    levylab::Field f(g, 1);
    auto vals = f.component(0);
    const double k0 = g.fundamental();
    for (int i = 0; i < g.n; ++i) vals[i] = std::cos(k0 * m * g.coord(i) + phase);
    return f;
}

/// Second-order centered finite-difference Laplacian (1D).
inline std::vector<double> fd_laplacian_1d(const levylab::Grid& g,
                                           const std::vector<double>& f) {
    std::vector<double> out(f.size());
    const double h2 = g.spacing() * g.spacing();
    for (int i = 0; i < g.n; ++i) {
        int l = (i + g.n - 1) % g.n, r = (i + 1) % g.n;
        out[i] = (f[l] - 2.0 * f[i] + f[r]) / h2;
    }
    return out;
}

/// Periodic Gaussian with given variance, unit mass, centered at the origin.
inline levylab::Field periodic_gaussian(const levylab::Grid& g, double variance) {
    levylab::Field f(g, 1);
    auto vals = f.component(0);
    auto bump = [&](double x) {
        double s = 0.0;
        for (int k = -6; k <= 6; ++k) {
            double d = x + k * g.length;
            s += std::exp(-0.5 * d * d / variance);
        }
        return s / std::sqrt(2.0 * std::numbers::pi * variance);
    };
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) vals[i] = bump(g.coord(i));
    } else {
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                vals[levylab::node_index(g, ix, iy)] = bump(g.coord(ix)) * bump(g.coord(iy));
    }
    return f;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

/// KS critical value at level 0.01 for a two-sample test.
inline double ks_critical_001(std::size_t n, std::size_t m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

/// Exact Pareto(alpha) magnitudes, P(X > x) = x^-alpha for x >= 1.
inline std::vector<double> pareto_sample(double alpha, std::size_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    levylab::KeyedStream rs(levylab::StreamKey{seed, 0, 0});
    for (auto& v : out) v = std::pow(rs.uniform_oo(), -1.0 / alpha);
    return out;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

/// L1 distance between two scalar fields (cell-weighted).
inline double l1_distance(const levylab::Field& a, const levylab::Field& b) {
    double s = 0.0;
    auto av = a.component(0), bv = b.component(0);
    for (std::size_t i = 0; i < av.size(); ++i) s += std::abs(av[i] - bv[i]);
    return s * a.grid().cell_volume();
}

} // namespace oracles
