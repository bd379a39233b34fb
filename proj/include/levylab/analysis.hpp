#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levylab/fpe.hpp"

namespace levylab::analysis {

enum class Regime { Subcritical, Critical, Supercritical };

const char* regime_name(Regime r);

/// Exact fraction with 64-bit terms; decimal strings ("1.5", "-0.2") and
/// plain fractions ("3/2") parse exactly, so criticality comparisons on
/// rational inputs involve no floating rounding.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational of(long long n, long long d = 1);
    static std::optional<Rational> parse(const std::string& text);
    Rational operator+(const Rational&) const;
    Rational operator-(const Rational&) const;
    Rational operator*(const Rational&) const;
    Rational operator/(const Rational&) const;
    int sign() const { return num == 0 ? 0 : (num > 0) == (den > 0) ? 1 : -1; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Classification of the drift norm's behavior under the rescaling
/// x -> lambda x, t -> lambda^alpha t: the norm picks up lambda^e with
/// e = alpha - 1 - alpha/q + beta. Positive e means the rescaled drift
/// vanishes as lambda -> 0 (subcritical); e = 0 is critical; negative e
/// supercritical.
struct ScalingVerdict {
    double alpha = 0.0;
    double beta = 0.0;
    double q = 0.0; // +inf allowed
    double exponent = 0.0;
    Regime regime = Regime::Critical;
    bool exact = false; // exponent computed in exact rational arithmetic
    std::string note;
};

ScalingVerdict classify_scaling(double alpha, double beta, double q);

/// Exact-rational route; q_inv is 1/q (so infinity is the exact zero).
ScalingVerdict classify_scaling(const Rational& alpha, const Rational& beta,
                                const Rational& q_inv);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double band = 0.0; // 95% half-width on the slope
};

/// Ordinary least squares on (log x, log y); inputs must be positive and
/// at least 4 points long.
LineFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// Result of one decay-rate experiment: Besov norms of the solution on a
/// geometric time grid, the fitted log-log slope, and the spread
/// max/min of t^(delta/alpha) * norm over the window. The contract is
/// one-sided: bounded compensated spread and a slope no steeper than
/// -delta/alpha - margin, never slope equality.
struct RateReport {
    double alpha = 0.0;
    double delta = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::vector<double> times;
    std::vector<double> norms;       // |rho_t| in (delta, 1, inf)
    std::vector<double> compensated; // t^(delta/alpha) * norm
    double fitted_slope = 0.0;
    double slope_band = 0.0;
    double compensated_spread = 0.0;
    double mass_outside_max = 0.0;
    double min_rho_seen = 0.0;
};

struct RateConfig {
    std::vector<double> deltas;
    double t_min = 0.0;
    double t_max = 0.0;
    int n_obs = 16;
    double init_width_cells = 4.0; // near-point-mass initializer width, in cells
    double spread_max = 5.0;       // acceptance threshold, stored with the config
    double slope_margin = 0.2;
};

/// Runs the solver from the narrow-Gaussian initializer and reports one
/// RateReport per delta. For alpha <= 1 every delta must stay below alpha.
std::vector<RateReport> rate_experiment(double alpha, const fpe::KernelSpec& K,
                                        const Grid& grid, const fpe::SolverConfig& cfg,
                                        const RateConfig& rc);

/// Time-weighted drift regularity along a solved trajectory: the Hoelder
/// norm of B(t) at smoothness 1 - alpha/2 + eps/2, its compensated spread
/// with weight t^(1/2 - eps/alpha), and the discrete L^2-in-time integral.
struct DriftRegularityReport {
    double alpha = 0.0;
    double eps = 0.0;
    double smoothness = 0.0;
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<double> compensated;
    double spread = 0.0;
    double l2_time_integral = 0.0;
};

DriftRegularityReport drift_regularity_check(double alpha, double beta_surrogate,
                                             const fpe::FpeTrajectory& traj, double eps,
                                             std::span<const double> times);

/// Geometric grid of n points spanning [a, b].
std::vector<double> geometric_times(double a, double b, int n);

} // namespace levylab::analysis
