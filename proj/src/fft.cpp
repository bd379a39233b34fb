#include "levylab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levylab::fft {

namespace {

struct PlanKey {
    int dim, n, sign;
    auto operator<=>(const PlanKey&) const = default;
};

// Plans are created once per (shape, direction) and executed with the
// new-array interface; FFTW_UNALIGNED keeps them valid for any buffer.
fftw_plan plan_for(const Grid& grid, int sign) {
    static std::map<PlanKey, fftw_plan> cache;
    static std::mutex mutex;
    PlanKey key{grid.dim, grid.n, sign};
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> buf(grid.size());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = grid.dim == 1
        ? fftw_plan_dft_1d(grid.n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_2d(grid.n, grid.n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(key, plan);
    return plan;
}

// Sign (-1)^(sum of axis indices); since n is even this equals the parity of
// the frequency components and implements the shift to centered coordinates.
inline double parity(const Grid& grid, std::size_t index) {
    if (grid.dim == 1) return (index & 1) ? -1.0 : 1.0;
    std::size_t ix = index / grid.n, iy = index % grid.n;
    return ((ix + iy) & 1) ? -1.0 : 1.0;
}

void execute(const Grid& grid, int sign, std::complex<double>* data) {
    fftw_plan plan = plan_for(grid, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

} // namespace

Spectrum forward(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.size())
        throw std::invalid_argument("forward: value count does not match grid");
    Spectrum out(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i];
    execute(grid, FFTW_FORWARD, out.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= parity(grid, i) * scale;
    return out;
}

std::vector<double> inverse(const Grid& grid, const Spectrum& spectrum) {
    if (spectrum.size() != grid.size())
        throw std::invalid_argument("inverse: spectrum size does not match grid");
    Spectrum buf(grid.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = spectrum[i] * parity(grid, i);
    execute(grid, FFTW_BACKWARD, buf.data());
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
    return out;
}

int freq_component(const Grid& grid, std::size_t index, int axis) {
    int j;
    if (grid.dim == 1) {
        j = static_cast<int>(index);
    } else {
        j = axis == 0 ? static_cast<int>(index / grid.n) : static_cast<int>(index % grid.n);
    }
    return j < grid.n / 2 ? j : j - grid.n;
}

double freq_radius_sq(const Grid& grid, std::size_t index) {
    double m0 = freq_component(grid, index, 0);
    if (grid.dim == 1) return m0 * m0;
    double m1 = freq_component(grid, index, 1);
    return m0 * m0 + m1 * m1;
}

std::vector<double> radius_table(const Grid& grid) {
    std::vector<double> r(grid.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sqrt(freq_radius_sq(grid, i));
    return r;
}

} // namespace levylab::fft
