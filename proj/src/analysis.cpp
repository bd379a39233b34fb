#include "levylab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "levylab/spectral_ops.hpp"

namespace levylab::analysis {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "Subcritical";
        case Regime::Critical: return "Critical";
        case Regime::Supercritical: return "Supercritical";
    }
    return "?";
}

namespace {

Rational reduced(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) a = 1;
    n /= a;
    d /= a;
    constexpr __int128 lim = static_cast<__int128>(1) << 62;
    if (n > lim || n < -lim || d > lim)
        throw std::overflow_error("rational overflow");
    return Rational{static_cast<long long>(n), static_cast<long long>(d)};
}

const char* kScalingNote =
    "regime follows the sign of the rescaling exponent alpha-1-alpha/q+beta: "
    "a positive exponent sends the rescaled drift norm to zero as lambda->0 "
    "(subcritical); the inequality-style statement of the same classification "
    "with the opposite orientation is not used";

Regime regime_of_sign(int s) {
    return s > 0 ? Regime::Subcritical : s == 0 ? Regime::Critical : Regime::Supercritical;
}

// two-sided 97.5% Student-t quantiles for small dof; 1.96 beyond the table
double t_quantile_975(int dof) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                   2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                   2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                   2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof < 1) return 12.706;
    if (dof <= 30) return table[dof - 1];
    return 1.96;
}

} // namespace

Rational Rational::of(long long n, long long d) {
    return reduced(n, d);
}

std::optional<Rational> Rational::parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            long long n = std::stoll(text.substr(0, slash));
            long long d = std::stoll(text.substr(slash + 1));
            return of(n, d);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return of(std::stoll(text), 1);
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        int places = static_cast<int>(text.size() - dot - 1);
        if (places > 15) return std::nullopt;
        long long n = std::stoll(digits);
        long long d = 1;
        for (int i = 0; i < places; ++i) d *= 10;
        return of(n, d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return reduced(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                   static_cast<__int128>(den) * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return reduced(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                   static_cast<__int128>(den) * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return reduced(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("rational division by zero");
    return reduced(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
}

ScalingVerdict classify_scaling(double alpha, double beta, double q) {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw std::invalid_argument("classify_scaling: alpha must lie in (0, 2]");
    if (!(q >= 1.0)) throw std::invalid_argument("classify_scaling: q must be >= 1");
    ScalingVerdict v;
    v.alpha = alpha;
    v.beta = beta;
    v.q = q;
    v.exponent = alpha - 1.0 - (std::isinf(q) ? 0.0 : alpha / q) + beta;
    v.regime = regime_of_sign(v.exponent > 0.0 ? 1 : v.exponent == 0.0 ? 0 : -1);
    v.exact = false;
    v.note = kScalingNote;
    return v;
}

ScalingVerdict classify_scaling(const Rational& alpha, const Rational& beta,
                                const Rational& q_inv) {
    double a = alpha.value();
    if (!(a > 0.0) || !(a <= 2.0))
        throw std::invalid_argument("classify_scaling: alpha must lie in (0, 2]");
    if (q_inv.sign() < 0 || (q_inv.sign() > 0 && q_inv.value() > 1.0))
        throw std::invalid_argument("classify_scaling: q must be >= 1 (q_inv in [0, 1])");
    Rational e = alpha - Rational::of(1) - alpha * q_inv + beta;
    ScalingVerdict v;
    v.alpha = a;
    v.beta = beta.value();
    v.q = q_inv.sign() == 0 ? std::numeric_limits<double>::infinity() : 1.0 / q_inv.value();
    v.exponent = e.value();
    v.regime = regime_of_sign(e.sign());
    v.exact = true;
    v.note = kScalingNote;
    return v;
}

LineFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw std::invalid_argument("fit_loglog: need >= 4 points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::invalid_argument("fit_loglog: inputs must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - fit.intercept - fit.slope * lx[i];
        rss += r * r;
    }
    if (n > 2) {
        double se = std::sqrt(rss / (n - 2) / sxx);
        fit.band = t_quantile_975(static_cast<int>(n) - 2) * se;
    }
    return fit;
}

std::vector<double> geometric_times(double a, double b, int n) {
    if (!(a > 0.0) || !(b > a) || n < 2)
        throw std::invalid_argument("geometric_times: need 0 < a < b and n >= 2");
    std::vector<double> t(n);
    double r = std::pow(b / a, 1.0 / (n - 1));
    double v = a;
    for (int i = 0; i < n; ++i) {
        t[i] = v;
        v *= r;
    }
    t.back() = b;
    return t;
}

std::vector<RateReport> rate_experiment(double alpha, const fpe::KernelSpec& K,
                                        const Grid& grid, const fpe::SolverConfig& cfg,
                                        const RateConfig& rc) {
    if (rc.deltas.empty()) throw std::invalid_argument("rate_experiment: no deltas given");
    if (alpha <= 1.0)
        for (double d : rc.deltas)
            if (d >= alpha)
                throw std::invalid_argument(
                    "rate_experiment: for alpha <= 1 the decay rate only covers delta < alpha "
                    "(got delta = " + std::to_string(d) + ")");
    for (double d : rc.deltas)
        if (d < 0.0) throw std::invalid_argument("rate_experiment: delta must be >= 0");

    Field rho0 = fpe::gaussian_density(grid, rc.init_width_cells * grid.spacing());
    auto times = geometric_times(rc.t_min, rc.t_max, rc.n_obs);
    fpe::FpeTrajectory traj = fpe::fpe_solve(rho0, alpha, K, rc.t_max, cfg, times, rc.deltas);

    std::vector<RateReport> reports;
    for (std::size_t di = 0; di < rc.deltas.size(); ++di) {
        RateReport rep;
        rep.alpha = alpha;
        rep.delta = rc.deltas[di];
        rep.t_min = rc.t_min;
        rep.t_max = rc.t_max;
        rep.mass_outside_max = traj.mass_outside_max();
        rep.min_rho_seen = traj.min_rho_seen();
        for (const auto& row : traj.observations()) {
            rep.times.push_back(row.t);
            rep.norms.push_back(row.besov_norms[di]);
            rep.compensated.push_back(std::pow(row.t, rep.delta / alpha) * row.besov_norms[di]);
        }
        auto fit = fit_loglog(rep.times, rep.norms);
        rep.fitted_slope = fit.slope;
        rep.slope_band = fit.band;
        auto [lo, hi] = std::minmax_element(rep.compensated.begin(), rep.compensated.end());
        rep.compensated_spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
        reports.push_back(std::move(rep));
    }
    return reports;
}

DriftRegularityReport drift_regularity_check(double alpha, double beta_surrogate,
                                             const fpe::FpeTrajectory& traj, double eps,
                                             std::span<const double> times) {
    if (!(eps > 0.0) || !(eps < beta_surrogate + alpha - 1.0))
        throw std::invalid_argument(
            "drift_regularity_check: eps must lie in (0, beta + alpha - 1)");
    if (times.size() < 2)
        throw std::invalid_argument("drift_regularity_check: need at least 2 times");

    DriftRegularityReport rep;
    rep.alpha = alpha;
    rep.eps = eps;
    rep.smoothness = 1.0 - 0.5 * alpha + 0.5 * eps;
    spectral::DyadicPartition part(traj.grid());
    spectral::BesovIndex idx{rep.smoothness, spectral::kInf, spectral::kInf};
    const double weight_exp = 0.5 - eps / alpha;

    for (double t : times) {
        Field b = traj.drift_at(t);
        double norm = 0.0;
        for (int c = 0; c < b.components(); ++c) {
            Field comp(traj.grid(), 1);
            std::copy(b.component(c).begin(), b.component(c).end(),
                      comp.component(0).begin());
            norm = std::max(norm, spectral::besov_norm(comp, idx, part));
        }
        rep.times.push_back(t);
        rep.norms.push_back(norm);
        rep.compensated.push_back(std::pow(t, weight_exp) * norm);
    }

    bool all_zero = std::all_of(rep.norms.begin(), rep.norms.end(),
                                [](double v) { return v == 0.0; });
    if (all_zero) {
        rep.spread = 1.0;
        rep.l2_time_integral = 0.0;
        return rep;
    }
    auto [lo, hi] = std::minmax_element(rep.compensated.begin(), rep.compensated.end());
    rep.spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    double integral = 0.0;
    for (std::size_t i = 1; i < rep.times.size(); ++i)
        integral += 0.5 * (rep.norms[i] * rep.norms[i] + rep.norms[i - 1] * rep.norms[i - 1]) *
                    (rep.times[i] - rep.times[i - 1]);
    rep.l2_time_integral = integral;
    return rep;
}

} // namespace levylab::analysis
