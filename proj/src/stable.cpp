#include "levylab/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace levylab::stable {

namespace {

constexpr std::uint64_t kRefineSalt = 0x726566696E657061ULL;

// Symmetric alpha-stable variate with charfn exp(-|xi|^alpha), alpha in (0,2).
// Draw order: U then W.
double cms_symmetric(double alpha, KeyedStream& rs) {
    double u = std::numbers::pi * (rs.uniform_oo() - 0.5);
    if (alpha == 1.0) return std::tan(u);
    double w = rs.exponential();
    double t1 = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
    double t2 = std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
    return t1 * t2;
}

// Positive rho-stable variate with Laplace transform exp(-lambda^rho),
// rho in (0,1) (Kanter's representation). Draw order: U then W.
double positive_stable(double rho, KeyedStream& rs) {
    double u = std::numbers::pi * rs.uniform_oo();
    double w = rs.exponential();
    double a = std::pow(std::pow(std::sin(rho * u), rho) *
                            std::pow(std::sin((1.0 - rho) * u), 1.0 - rho) / std::sin(u),
                        1.0 / (1.0 - rho));
    return std::pow(a / w, (1.0 - rho) / rho);
}

} // namespace

void validate(const StableParams& p) {
    if (!(p.alpha > 0.0) || !(p.alpha <= 2.0))
        throw std::invalid_argument("stable alpha must lie in (0, 2]");
    if (p.dim < 1) throw std::invalid_argument("stable dim must be >= 1");
}

std::vector<double> sample_increment(const StableParams& p, double dt, const StreamKey& key) {
    validate(p);
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be positive");
    KeyedStream rs(key);
    std::vector<double> out(p.dim, 0.0);
    if (p.alpha == 2.0) {
        double s = std::sqrt(2.0 * dt);
        for (int i = 0; i < p.dim; ++i) out[i] = s * rs.normal();
    } else if (p.dim == 1) {
        out[0] = std::pow(dt, 1.0 / p.alpha) * cms_symmetric(p.alpha, rs);
    } else {
        double s = std::pow(dt, 2.0 / p.alpha) * positive_stable(0.5 * p.alpha, rs);
        double scale = std::sqrt(2.0 * s);
        for (int i = 0; i < p.dim; ++i) out[i] = scale * rs.normal();
    }
    return out;
}

NoisePath sample_path(const StableParams& p, double T, int nsteps, const StreamKey& base) {
    validate(p);
    if (nsteps < 1) throw std::invalid_argument("sample_path: nsteps must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("sample_path: T must be positive");
    NoisePath path;
    path.params = p;
    path.dt = T / nsteps;
    path.base = base;
    path.level = 0;
    path.increments.resize(static_cast<std::size_t>(nsteps) * p.dim);
    for (int i = 0; i < nsteps; ++i) {
        auto inc = sample_increment(p, path.dt, StreamKey{base.seed, base.lane, base.step + i});
        std::copy(inc.begin(), inc.end(),
                  path.increments.begin() + static_cast<std::size_t>(i) * p.dim);
    }
    return path;
}

NoisePath refine_path(const NoisePath& coarse) {
    NoisePath fine;
    fine.params = coarse.params;
    fine.dt = coarse.dt / 2.0;
    fine.base = coarse.base;
    fine.level = coarse.level + 1;
    const int d = coarse.params.dim;
    const int n = coarse.nsteps();
    fine.increments.resize(static_cast<std::size_t>(2 * n) * d);
    std::uint64_t seed = mix64(coarse.base.seed ^ (kRefineSalt * static_cast<std::uint64_t>(fine.level)));
    for (int i = 0; i < n; ++i) {
        auto half = sample_increment(coarse.params, fine.dt,
                                     StreamKey{seed, coarse.base.lane,
                                               coarse.base.step + 2 * static_cast<std::uint64_t>(i)});
        auto c = coarse.increment(i);
        for (int a = 0; a < d; ++a) {
            fine.increments[(2 * static_cast<std::size_t>(i)) * d + a] = half[a];
            fine.increments[(2 * static_cast<std::size_t>(i) + 1) * d + a] = c[a] - half[a];
        }
    }
    return fine;
}

std::complex<double> empirical_charfn(std::span<const double> samples, int dim,
                                      std::span<const double> xi) {
    if (dim < 1 || samples.empty() || samples.size() % dim != 0)
        throw std::invalid_argument("empirical_charfn: need a nonempty multiple-of-dim sample array");
    if (static_cast<int>(xi.size()) != dim)
        throw std::invalid_argument("empirical_charfn: xi dimension mismatch");
    const std::size_t n = samples.size() / dim;
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double phase = 0.0;
        for (int a = 0; a < dim; ++a) phase += xi[a] * samples[k * dim + a];
        re += std::cos(phase);
        im += std::sin(phase);
    }
    return {re / static_cast<double>(n), im / static_cast<double>(n)};
}

double hill_tail_index(std::span<const double> magnitudes, int k) {
    const int n = static_cast<int>(magnitudes.size());
    if (k < 10 || k > n / 10)
        throw std::invalid_argument("hill_tail_index: need 10 <= k <= N/10, got k = "
                                    + std::to_string(k));
    std::vector<double> v(magnitudes.begin(), magnitudes.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    if (!(v[k] > 0.0))
        throw std::invalid_argument("hill_tail_index: order statistics must be positive");
    double h = 0.0;
    for (int i = 0; i < k; ++i) h += std::log(v[i] / v[k]);
    h /= k;
    return 1.0 / h;
}

} // namespace levylab::stable
