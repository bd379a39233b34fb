#include "levylab/dyadic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "levylab/fft.hpp"

namespace levylab::spectral {

namespace {

// Cumulative integral of the bump exp(-1/(1-t^2)) over (-1, 1), normalized,
// sampled on a uniform t-grid. chi descends along this table between r = 1
// and r = 3/2.
const std::vector<double>& bump_cdf_table() {
    static const std::vector<double> table = [] {
        constexpr int kCells = 1 << 13;
        std::vector<double> cdf(kCells + 1, 0.0);
        auto bump = [](double t) {
            double s = 1.0 - t * t;
            return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
        };
        const double h = 2.0 / kCells;
        double acc = 0.0;
        for (int i = 0; i < kCells; ++i) {
            double a = -1.0 + i * h;
            // Simpson on each cell
            acc += h / 6.0 * (bump(a) + 4.0 * bump(a + 0.5 * h) + bump(a + h));
            cdf[i + 1] = acc;
        }
        for (double& v : cdf) v /= acc;
        cdf.back() = 1.0;
        return cdf;
    }();
    return table;
}

double smooth_step(double t) { // 0 at t<=-1, 1 at t>=1, C-infinity in between
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const auto& cdf = bump_cdf_table();
    double pos = (t + 1.0) * 0.5 * (cdf.size() - 1);
    auto k = static_cast<std::size_t>(pos);
    if (k >= cdf.size() - 1) k = cdf.size() - 2;
    double frac = pos - k;
    return cdf[k] + frac * (cdf[k + 1] - cdf[k]);
}

} // namespace

DyadicPartition::DyadicPartition(const Grid& grid) : grid_(grid) {
    j_max_ = static_cast<int>(std::floor(std::log2(grid.band_limit())));
    if (j_max_ < 1)
        throw std::runtime_error("grid too small to host a dyadic partition: j_max = "
                                 + std::to_string(j_max_));

    const double band2 = grid.band_limit() * grid.band_limit();
    band_.assign(grid.size(), 0.0);
    masks_.assign(j_max_ + 2, std::vector<double>(grid.size(), 0.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r2 = fft::freq_radius_sq(grid, i);
        if (r2 > band2) continue;
        band_[i] = 1.0;
        double r = std::sqrt(r2);
        for (int j = -1; j <= j_max_; ++j) masks_[j + 1][i] = shell(j, r);
    }
}

double DyadicPartition::chi(double r) const {
    // descending smooth step: 1 on [0,1], 0 on [3/2,inf)
    return 1.0 - smooth_step((r - 1.25) / 0.25);
}

double DyadicPartition::shell(int j, double r) const {
    if (j < -1 || j > j_max_)
        throw std::invalid_argument("shell index out of range: j = " + std::to_string(j));
    if (j == -1) return chi(2.0 * r);
    if (j == j_max_) return 1.0 - chi(std::ldexp(r, -(j - 1)));
    return chi(std::ldexp(r, -j)) - chi(std::ldexp(r, -(j - 1)));
}

std::span<const double> DyadicPartition::mask(int j) const {
    if (j < -1 || j > j_max_)
        throw std::invalid_argument("mask index out of range: j = " + std::to_string(j));
    return masks_[j + 1];
}

} // namespace levylab::spectral
