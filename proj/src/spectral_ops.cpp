#include "levylab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "levylab/fft.hpp"
#include "levylab/rng.hpp"

namespace levylab::spectral {

namespace {

void require_scalar(const Field& f, const char* op) {
    if (!f.is_scalar())
        throw std::invalid_argument(std::string(op) + ": scalar field required");
}

void require_same_grid(const Field& a, const Field& b, const char* op) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

void require_grid(const Field& f, const Grid& g, const char* op) {
    if (!(f.grid() == g))
        throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

fft::Spectrum band_projected_spectrum(const Field& f, int c, const DyadicPartition& part) {
    fft::Spectrum s = fft::forward(f.grid(), f.component(c));
    auto band = part.band_mask();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= band[i];
    return s;
}

} // namespace

double lp_norm(const Grid& grid, std::span<const double> values, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be in [1, inf]");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    if (p == 1.0) {
        for (double v : values) s += std::abs(v);
    } else if (p == 2.0) {
        for (double v : values) s += v * v;
    } else {
        for (double v : values) s += std::pow(std::abs(v), p);
    }
    return std::pow(s * grid.cell_volume(), 1.0 / p);
}

Field project_band(const Field& f) {
    const Grid& g = f.grid();
    const double band2 = g.band_limit() * g.band_limit();
    Field out(g, f.components());
    for (int c = 0; c < f.components(); ++c) {
        fft::Spectrum s = fft::forward(g, f.component(c));
        for (std::size_t i = 0; i < s.size(); ++i)
            if (fft::freq_radius_sq(g, i) > band2) s[i] = 0.0;
        auto vals = fft::inverse(g, s);
        std::copy(vals.begin(), vals.end(), out.component(c).begin());
    }
    return out;
}

Field lp_block(const Field& f, const DyadicPartition& part, int j) {
    require_scalar(f, "lp_block");
    require_grid(f, part.grid(), "lp_block");
    if (j < -1 || j > part.j_max())
        throw std::invalid_argument("lp_block: shell index out of range: " + std::to_string(j));
    fft::Spectrum s = fft::forward(f.grid(), f.component(0));
    auto mask = part.mask(j);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mask[i];
    Field out(f.grid(), 1);
    auto vals = fft::inverse(f.grid(), s);
    std::copy(vals.begin(), vals.end(), out.component(0).begin());
    return out;
}

double besov_norm(const Field& f, const BesovIndex& idx, const DyadicPartition& part) {
    require_scalar(f, "besov_norm");
    require_grid(f, part.grid(), "besov_norm");
    if (!(idx.p >= 1.0) || !(idx.q >= 1.0))
        throw std::invalid_argument("besov_norm: p, q must be in [1, inf]");
    const Grid& g = f.grid();
    fft::Spectrum s = band_projected_spectrum(f, 0, part);

    double acc = 0.0, acc_max = 0.0;
    fft::Spectrum shell(s.size());
    for (int j = -1; j <= part.j_max(); ++j) {
        auto mask = part.mask(j);
        for (std::size_t i = 0; i < s.size(); ++i) shell[i] = s[i] * mask[i];
        auto vals = fft::inverse(g, shell);
        double term = std::exp2(idx.s * j) * lp_norm(g, vals, idx.p);
        if (std::isinf(idx.q))
            acc_max = std::max(acc_max, term);
        else
            acc += std::pow(term, idx.q);
    }
    return std::isinf(idx.q) ? acc_max : std::pow(acc, 1.0 / idx.q);
}

Field frac_laplacian(const Field& f, double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw std::invalid_argument("frac_laplacian: alpha must lie in (0, 2]");
    const Grid& g = f.grid();
    const double k0 = g.fundamental();
    Field out(g, f.components());
    for (int c = 0; c < f.components(); ++c) {
        fft::Spectrum s = fft::forward(g, f.component(c));
        for (std::size_t i = 0; i < s.size(); ++i) {
            double r2 = fft::freq_radius_sq(g, i);
            s[i] *= r2 == 0.0 ? 0.0 : -std::pow(k0 * k0 * r2, 0.5 * alpha);
        }
        auto vals = fft::inverse(g, s);
        std::copy(vals.begin(), vals.end(), out.component(c).begin());
    }
    return out;
}

Field derivative(const Field& f, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative: bad axis");
    const double k0 = g.fundamental();
    Field out(g, f.components());
    for (int c = 0; c < f.components(); ++c) {
        fft::Spectrum s = fft::forward(g, f.component(c));
        for (std::size_t i = 0; i < s.size(); ++i) {
            double m = fft::freq_component(g, i, axis);
            s[i] *= std::complex<double>(0.0, k0 * m);
        }
        auto vals = fft::inverse(g, s);
        std::copy(vals.begin(), vals.end(), out.component(c).begin());
    }
    return out;
}

double bernstein_ratio(const Field& f, const DyadicPartition& part, int j, int k,
                       double p1, double p2) {
    if (k != 0 && k != 1)
        throw std::invalid_argument("bernstein_ratio: k must be 0 or 1");
    if (!(p1 >= 1.0) || !(p2 >= 1.0) || p1 > p2)
        throw std::invalid_argument("bernstein_ratio: need 1 <= p1 <= p2");
    const Grid& g = f.grid();
    Field block = lp_block(f, part, j);
    double denom_norm = lp_norm(g, block.component(0), p1);
    // rounding-level blocks count as vanishing
    if (denom_norm <= 1e-13 * lp_norm(g, f.component(0), p1)) return 0.0;

    double num_norm;
    if (k == 0) {
        num_norm = lp_norm(g, block.component(0), p2);
    } else {
        std::vector<double> mag(g.size(), 0.0);
        for (int axis = 0; axis < g.dim; ++axis) {
            Field d = derivative(block, axis);
            auto dv = d.component(0);
            for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += dv[i] * dv[i];
        }
        for (double& v : mag) v = std::sqrt(v);
        num_norm = lp_norm(g, mag, p2);
    }
    double exponent = k + g.dim * (1.0 / p1 - 1.0 / p2);
    return num_norm / (std::exp2(exponent * j) * denom_norm);
}

double max_principle_stat(const Field& u, const DyadicPartition& part, int j, double alpha) {
    if (j < 0) throw std::invalid_argument("max_principle_stat: j must be >= 0");
    Field block = lp_block(u, part, j);
    auto vals = block.component(0);
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double a = std::abs(vals[i]);
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (best < 1e-14)
        throw std::domain_error("max_principle_stat: degenerate input, block vanishes");
    Field lap = frac_laplacian(block, alpha);
    double sign = vals[arg] > 0.0 ? 1.0 : -1.0;
    return sign * (-lap(0, arg)) / (std::exp2(alpha * j) * best);
}

Field convolve(const Field& f, const Field& g) {
    require_same_grid(f, g, "convolve");
    if (!g.is_scalar() && !f.is_scalar())
        throw std::invalid_argument("convolve: at least one operand must be scalar");
    const Field& vec = f.is_scalar() ? g : f;
    const Field& sca = f.is_scalar() ? f : g;
    const Grid& grid = f.grid();
    const double vol = grid.length * (grid.dim == 2 ? grid.length : 1.0);

    fft::Spectrum sh = fft::forward(grid, sca.component(0));
    Field out(grid, vec.components());
    for (int c = 0; c < vec.components(); ++c) {
        fft::Spectrum vh = fft::forward(grid, vec.component(c));
        for (std::size_t i = 0; i < vh.size(); ++i) vh[i] *= sh[i] * vol;
        auto vals = fft::inverse(grid, vh);
        std::copy(vals.begin(), vals.end(), out.component(c).begin());
    }
    return out;
}

Field multiply(const Field& a, const Field& b) {
    require_same_grid(a, b, "multiply");
    if (!a.is_scalar() && !b.is_scalar())
        throw std::invalid_argument("multiply: at least one operand must be scalar");
    const Field& vec = a.is_scalar() ? b : a;
    const Field& sca = a.is_scalar() ? a : b;
    Field out(a.grid(), vec.components());
    auto sv = sca.component(0);
    for (int c = 0; c < vec.components(); ++c) {
        auto vv = vec.component(c);
        auto ov = out.component(c);
        for (std::size_t i = 0; i < sv.size(); ++i) ov[i] = vv[i] * sv[i];
    }
    return out;
}

Field commutator_apply(const Field& b, const Field& g, const DyadicPartition& part, int j) {
    require_scalar(b, "commutator_apply");
    require_scalar(g, "commutator_apply");
    require_same_grid(b, g, "commutator_apply");
    Field bg = multiply(b, g);
    Field t1 = lp_block(bg, part, j);
    Field rg = lp_block(g, part, j);
    Field t2 = multiply(b, rg);
    Field out(b.grid(), 1);
    auto o = out.component(0);
    auto v1 = t1.component(0);
    auto v2 = t2.component(0);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = v1[i] - v2[i];
    return out;
}

Field synth_besov_field(double beta, std::uint64_t seed, const Grid& grid) {
    if (!(beta > -1.0) || !(beta < 2.0))
        throw std::invalid_argument("synth_besov_field: beta must lie in (-1, 2)");
    DyadicPartition part(grid);
    Field out(grid, 1);
    auto vals = out.component(0);
    const double k0 = grid.fundamental();
    for (int j = 0; j <= part.j_max(); ++j) {
        KeyedStream rs(StreamKey{seed, static_cast<std::uint64_t>(j), 0});
        double amp = std::exp2(-beta * j) * (0.5 + 0.5 * rs.uniform());
        double phase = 2.0 * std::numbers::pi * rs.uniform();
        int axis = grid.dim == 2 && rs.uniform() < 0.5 ? 1 : 0;
        double wave = k0 * std::exp2(j);
        if (grid.dim == 1) {
            for (int i = 0; i < grid.n; ++i)
                vals[i] += amp * std::cos(wave * grid.coord(i) + phase);
        } else {
            for (int ix = 0; ix < grid.n; ++ix)
                for (int iy = 0; iy < grid.n; ++iy) {
                    double x = grid.coord(axis == 0 ? ix : iy);
                    vals[node_index(grid, ix, iy)] += amp * std::cos(wave * x + phase);
                }
        }
    }
    return out;
}

} // namespace levylab::spectral
