#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levylab/stable.hpp"
#include "oracles.hpp"

using namespace levylab;
using namespace levylab::stable;

namespace {

std::vector<double> draw_1d(double alpha, double dt, std::size_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    StableParams p{alpha, 1};
    for (std::size_t i = 0; i < n; ++i) out[i] = sample_increment(p, dt, {seed, i, 0})[0];
    return out;
}

std::vector<double> draw_flat(const StableParams& p, double dt, std::size_t n,
                              std::uint64_t seed) {
    std::vector<double> out(n * p.dim);
    for (std::size_t i = 0; i < n; ++i) {
        auto inc = sample_increment(p, dt, {seed, i, 0});
        std::copy(inc.begin(), inc.end(), out.begin() + i * p.dim);
    }
    return out;
}

// Monte Carlo standard error of the real part of the empirical charfn.
double charfn_se(std::span<const double> samples, int dim, std::span<const double> xi) {
    const std::size_t n = samples.size() / dim;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double phase = 0.0;
        for (int a = 0; a < dim; ++a) phase += xi[a] * samples[k * dim + a];
        double c = std::cos(phase);
        mean += c;
        m2 += c * c;
    }
    mean /= n;
    m2 /= n;
    return std::sqrt(std::max(0.0, m2 - mean * mean) / n);
}

} // namespace

TEST_CASE("keyed determinism and lane independence") {
    StableParams p{1.5, 1};
    auto a = sample_increment(p, 0.1, {42, 7, 3});
    auto b = sample_increment(p, 0.1, {42, 7, 3});
    CHECK(a == b);
    auto c = sample_increment(p, 0.1, {42, 8, 3});
    CHECK(a != c);
    auto d = sample_increment(p, 0.1, {42, 7, 4});
    CHECK(a != d);

    CHECK_THROWS_AS(sample_increment(p, 0.0, {0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_increment(StableParams{2.5, 1}, 1.0, {0, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_increment(StableParams{1.5, 0}, 1.0, {0, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("gaussian endpoint has variance 2 dt") {
    const std::size_t n = 100000;
    auto xs = draw_1d(2.0, 1.0, n, 1001);
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= n - 1;
    CHECK(std::abs(var - 2.0) < 0.05);
}

TEST_CASE("cauchy case matches exp(-|xi|) within Monte Carlo error") {
    const std::size_t n = 100000;
    auto xs = draw_1d(1.0, 1.0, n, 1002);
    for (double xi : {0.5, 1.0, 2.0}) {
        std::vector<double> probe{xi};
        auto emp = empirical_charfn(xs, 1, probe);
        double se = charfn_se(xs, 1, probe);
        CHECK(std::abs(emp.real() - std::exp(-xi)) <= 3.0 * se);
    }
}

TEST_CASE("increment magnitudes scale like dt^(1/alpha)") {
    const std::size_t n = 100000;
    for (double alpha : {0.8, 1.5}) {
        auto coarse = draw_1d(alpha, 1.0, n, 1003);
        auto fine = draw_1d(alpha, 0.5, n, 1004);
        auto med = [](std::vector<double> v) {
            for (auto& x : v) x = std::abs(x);
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            return v[v.size() / 2];
        };
        double ratio = med(fine) / med(coarse);
        CHECK(std::abs(ratio - std::exp2(-1.0 / alpha)) < 0.05 * std::exp2(-1.0 / alpha));
    }
}

TEST_CASE("law check across alpha and dimension") {
    const std::size_t n = 30000;
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        for (int dim : {1, 2}) {
            StableParams p{alpha, dim};
            auto xs = draw_flat(p, 1.0, n, 2000 + static_cast<std::uint64_t>(10 * alpha) + dim);
            for (double r : {0.5, 1.0, 2.0}) {
                std::vector<double> xi(dim, 0.0);
                if (dim == 1) {
                    xi[0] = r;
                } else {
                    xi[0] = 0.6 * r;
                    xi[1] = 0.8 * r;
                }
                auto emp = empirical_charfn(xs, dim, xi);
                CHECK(std::abs(emp.real() - std::exp(-std::pow(r, alpha))) <= tol);
                CHECK(std::abs(emp.imag()) <= tol);
            }
        }
    }
}

TEST_CASE("empirical charfn edge cases") {
    std::vector<double> xs{0.3, -1.2, 4.0};
    std::vector<double> zero{0.0};
    auto emp = empirical_charfn(xs, 1, zero);
    CHECK(emp.real() == 1.0);
    CHECK(emp.imag() == 0.0);

    // pooled with the negated sample: imaginary part cancels exactly
    std::vector<double> pooled = xs;
    for (double v : xs) pooled.push_back(-v);
    std::vector<double> probe{0.73};
    CHECK(empirical_charfn(pooled, 1, probe).imag() == 0.0);

    CHECK_THROWS_AS(empirical_charfn(std::span<const double>{}, 1, probe),
                    std::invalid_argument);
}

TEST_CASE("hill estimator recovers tail exponents") {
    const std::size_t n = 100000;
    auto pareto = oracles::pareto_sample(1.5, n, 55);
    CHECK(std::abs(hill_tail_index(pareto, 1000) - 1.5) < 0.1);

    auto xs = draw_1d(0.8, 1.0, n, 66);
    for (auto& v : xs) v = std::abs(v);
    CHECK(std::abs(hill_tail_index(xs, 1000) - 0.8) < 0.1);

    auto gauss = draw_1d(2.0, 1.0, n, 77);
    for (auto& v : gauss) v = std::abs(v);
    double est = hill_tail_index(gauss, 1000);
    CHECK(est > 3.0); // no heavy tail

    CHECK_THROWS_AS(hill_tail_index(pareto, 5), std::invalid_argument);
    CHECK_THROWS_AS(hill_tail_index(pareto, static_cast<int>(n)), std::invalid_argument);
}

TEST_CASE("paths draw per-step keys from the base") {
    StableParams p{1.5, 2};
    StreamKey base{9, 4, 100};
    NoisePath path = sample_path(p, 1.0, 8, base);
    CHECK(path.nsteps() == 8);
    CHECK(path.dt == doctest::Approx(0.125));
    for (int i = 0; i < 8; ++i) {
        auto direct = sample_increment(p, path.dt, {9, 4, 100 + static_cast<std::uint64_t>(i)});
        auto stored = path.increment(i);
        CHECK(stored[0] == direct[0]);
        CHECK(stored[1] == direct[1]);
    }
}

TEST_CASE("refinement reproduces coarse increments bit-exactly") {
    StableParams p{1.2, 1};
    NoisePath coarse = sample_path(p, 2.0, 16, {5, 0, 0});
    NoisePath fine = refine_path(coarse);
    CHECK(fine.nsteps() == 32);
    CHECK(fine.dt == coarse.dt / 2.0);
    for (int i = 0; i < 16; ++i)
        CHECK(fine.increment(2 * i)[0] + fine.increment(2 * i + 1)[0] == coarse.increment(i)[0]);

    NoisePath finer = refine_path(fine);
    for (int i = 0; i < 16; ++i) {
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) sum += finer.increment(4 * i + k)[0];
        double direct = fine.increment(2 * i)[0] + fine.increment(2 * i + 1)[0];
        CHECK(sum == direct);
    }

    // refinement draws come from a different stream than the base draws
    auto base_draw = sample_increment(p, coarse.dt / 2.0, {5, 0, 0});
    CHECK(fine.increment(0)[0] != base_draw[0]);
}

TEST_CASE("refined increments keep the dt/2 marginal law") {
    StableParams p{1.5, 1};
    const int npaths = 6000, nsteps = 8;
    std::vector<double> halves;
    halves.reserve(static_cast<std::size_t>(npaths) * 2 * nsteps);
    for (int k = 0; k < npaths; ++k) {
        NoisePath coarse = sample_path(p, 1.0, nsteps, {123, static_cast<std::uint64_t>(k), 0});
        NoisePath fine = refine_path(coarse);
        for (double v : fine.increments) halves.push_back(v);
    }
    const double dt2 = 1.0 / (2 * nsteps);
    for (double xi : {1.0, 2.0, 4.0}) {
        std::vector<double> probe{xi};
        auto emp = empirical_charfn(halves, 1, probe);
        double se = charfn_se(halves, 1, probe);
        double exact = std::exp(-dt2 * std::pow(xi, p.alpha));
        CHECK(std::abs(emp.real() - exact) <= 3.5 * se + 1e-4);
    }
}

TEST_CASE("self-similarity under rescaling (two-sample KS)") {
    const std::size_t n = 20000;
    for (double alpha : {1.0, 1.5}) {
        auto a = draw_1d(alpha, 1.0, n, 31);
        auto b = draw_1d(alpha, 0.25, n, 32);
        for (auto& v : a) v *= std::pow(0.25, 1.0 / alpha); // rescale to the dt = 0.25 law
        double d = oracles::ks_statistic(a, b);
        CHECK(d < oracles::ks_critical_001(n, n));
    }
}

TEST_CASE("rotational invariance in two dimensions") {
    const std::size_t n = 50000;
    StableParams p{1.5, 2};
    auto xs = draw_flat(p, 1.0, n, 404);
    double exact = std::exp(-1.0);
    for (auto dir : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.6, 0.8},
                     std::pair{-0.707, 0.707}}) {
        std::vector<double> xi{dir.first, dir.second};
        double r = std::hypot(xi[0], xi[1]);
        xi[0] /= r;
        xi[1] /= r;
        auto emp = empirical_charfn(xs, 2, xi);
        double se = charfn_se(xs, 2, xi);
        CHECK(std::abs(emp.real() - exact) <= 3.5 * se);
    }
}

TEST_CASE("one-dimensional transform and subordination agree in law") {
    const std::size_t n = 30000;
    for (double alpha : {0.8, 1.5}) {
        auto direct = draw_1d(alpha, 1.0, n, 71);
        auto planar = draw_flat(StableParams{alpha, 2}, 1.0, n, 72);
        std::vector<double> first(n);
        for (std::size_t i = 0; i < n; ++i) first[i] = planar[2 * i];
        double d = oracles::ks_statistic(direct, first);
        CHECK(d < oracles::ks_critical_001(n, n));
    }
}
