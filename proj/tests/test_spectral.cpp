#include <doctest.h>

#include <cmath>

#include "levylab/dyadic.hpp"
#include "levylab/fft.hpp"
#include "levylab/spectral_ops.hpp"
#include "oracles.hpp"

using namespace levylab;
using namespace levylab::spectral;

TEST_CASE("fft round trip and coefficient convention") {
    Grid g = make_grid(1, 64, 2.0 * std::numbers::pi);
    Field f = oracles::cosine_field(g, 3, 0.7);
    auto s = fft::forward(g, f.component(0));
    // cos(3x + phi) has coefficients e^{+-i phi}/2 at m = +-3
    CHECK(std::abs(s[3] - std::polar(0.5, 0.7)) < 1e-12);
    CHECK(std::abs(s[g.n - 3] - std::polar(0.5, -0.7)) < 1e-12);
    auto back = fft::inverse(g, s);
    for (int i = 0; i < g.n; ++i) CHECK(std::abs(back[i] - f(0, i)) < 1e-12);
}

TEST_CASE("partition of unity on the retained band") {
    for (int n : {256, 1024}) {
        Grid g = make_grid(1, n, 2.0 * std::numbers::pi);
        DyadicPartition part(g);
        CHECK(part.j_max() == static_cast<int>(std::log2(n)) - 2);
        CHECK(part.j_max() >= 6);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double r2 = fft::freq_radius_sq(g, i);
            if (r2 > g.band_limit() * g.band_limit()) continue;
            double sum = 0.0;
            for (int j = -1; j <= part.j_max(); ++j) sum += part.mask(j)[i];
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("shells at zero frequency and at shell centers") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    DyadicPartition part(g);
    CHECK(part.shell(-1, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j <= part.j_max(); ++j) CHECK(part.shell(j, 0.0) == 0.0);

    for (int j = 1; j + 1 <= part.j_max(); ++j) {
        double r = std::exp2(j);
        double covered = part.shell(j, r) + part.shell(j - 1, r) + part.shell(j + 1, r);
        CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(part.shell(j, r) == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = -1; k <= part.j_max(); ++k) {
            if (std::abs(k - j) <= 1) continue;
            CHECK(part.shell(k, r) == 0.0);
        }
    }
}

TEST_CASE("lp_block of constants and pure shell modes") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    DyadicPartition part(g);
    Field c(g, 1);
    for (auto& v : c.raw()) v = 2.5;
    Field low = lp_block(c, part, -1);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(low(0, i) == doctest::Approx(2.5).epsilon(1e-13));
    for (int j = 0; j <= part.j_max(); ++j) {
        Field b = lp_block(c, part, j);
        CHECK(b.sup_norm() < 1e-13);
    }

    int j = 4;
    Field f = oracles::cosine_field(g, 1 << j, 0.3);
    Field bj = lp_block(f, part, j);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(bj(0, i) - f(0, i)) < 1e-12);
    CHECK(lp_block(f, part, j - 1).sup_norm() < 1e-13);
    CHECK(lp_block(f, part, j + 1).sup_norm() < 1e-13);

    CHECK_THROWS_AS(lp_block(f, part, part.j_max() + 1), std::invalid_argument);
}

TEST_CASE("block reconstruction of band-limited fields") {
    for (int n : {256, 1024}) {
        Grid g = make_grid(1, n, 2.0 * std::numbers::pi);
        DyadicPartition part(g);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Field f = oracles::random_trig_field(g, seed, g.band_limit(), 24);
            Field sum(g, 1);
            for (int j = -1; j <= part.j_max(); ++j) {
                Field b = lp_block(f, part, j);
                for (std::size_t i = 0; i < g.size(); ++i) sum(0, i) += b(0, i);
            }
            double err = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                err = std::max(err, std::abs(sum(0, i) - f(0, i)));
            CHECK(err <= 1e-10 * f.sup_norm());
        }
    }
}

TEST_CASE("block support stays in the dyadic annulus") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    DyadicPartition part(g);
    Field f = oracles::random_trig_field(g, 11, g.band_limit(), 30);
    for (int j = 0; j <= part.j_max(); ++j) {
        Field b = lp_block(f, part, j);
        auto s = fft::forward(g, b.component(0));
        for (std::size_t i = 0; i < s.size(); ++i) {
            double r = std::sqrt(fft::freq_radius_sq(g, i));
            if (r >= std::exp2(j - 1) && r <= 1.5 * std::exp2(j)) continue;
            CHECK(std::abs(s[i]) < 1e-14);
        }
    }
}

TEST_CASE("besov norm basics") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    DyadicPartition part(g);

    Field zero(g, 1);
    CHECK(besov_norm(zero, {0.7, kInf, kInf}, part) == 0.0);

    // single mode strictly inside shell 4: norm is exactly 2^(4s)
    Field f = oracles::cosine_field(g, 16);
    for (double s : {-0.5, 0.0, 0.5, 1.5})
        CHECK(oracles::rel_err(besov_norm(f, {s, kInf, kInf}, part), std::exp2(4 * s)) < 1e-12);

    // q = inf is dominated by q = 1 at identical (s, p)
    Field r = oracles::random_trig_field(g, 3, g.band_limit(), 40);
    for (double s : {0.0, 0.5})
        CHECK(besov_norm(r, {s, kInf, kInf}, part) <=
              besov_norm(r, {s, kInf, 1.0}, part) + 1e-12);
}

TEST_CASE("synthetic fields have two-sided shell bounds") {
    Grid g = make_grid(1, 1024, 2.0 * std::numbers::pi);
    DyadicPartition part(g);
    for (double beta : {0.5, 1.2, -0.3}) {
        Field f = synth_besov_field(beta, 7, g);
        for (int j = 0; j <= part.j_max(); ++j) {
            Field b = lp_block(f, part, j);
            double v = std::exp2(beta * j) * b.sup_norm();
            CHECK(v >= 0.25);
            CHECK(v <= 4.0);
        }
        double norm = besov_norm(f, {beta, kInf, kInf}, part);
        CHECK(norm >= 0.25);
        CHECK(norm <= 4.0);
    }

    // beta = 1.5: the spectral derivative is a C^0.5 field, same bounds
    Field f = synth_besov_field(1.5, 9, g);
    Field df = derivative(f, 0);
    for (int j = 0; j <= part.j_max(); ++j) {
        Field b = lp_block(df, part, j);
        double v = std::exp2(0.5 * j) * b.sup_norm();
        CHECK(v >= 0.25);
        CHECK(v <= 4.0);
    }

    // determinism
    Field a = synth_besov_field(0.5, 7, g);
    Field b = synth_besov_field(0.5, 7, g);
    CHECK(a.raw() == b.raw());
    CHECK_THROWS_AS(synth_besov_field(2.5, 0, g), std::invalid_argument);
}

TEST_CASE("fractional Laplacian multiplier") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    Field c(g, 1);
    for (auto& v : c.raw()) v = 1.3;
    for (double alpha : {0.6, 1.0, 1.5, 2.0})
        CHECK(frac_laplacian(c, alpha).sup_norm() < 1e-13);

    Field f = oracles::cosine_field(g, 5, 0.2);
    for (double alpha : {0.6, 1.0, 1.5, 2.0}) {
        Field lf = frac_laplacian(f, alpha);
        double factor = -std::pow(5.0, alpha);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(lf(0, i) - factor * f(0, i)) <= 1e-12 * std::abs(factor));
    }
    CHECK_THROWS_AS(frac_laplacian(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(frac_laplacian(f, 2.5), std::invalid_argument);
}

TEST_CASE("alpha = 2 matches the finite-difference Laplacian at O(h^2)") {
    auto fd_gap = [](int n) {
        Grid g = make_grid(1, n, 2.0 * std::numbers::pi);
        Field f = oracles::periodic_gaussian(g, 0.15);
        Field lap = frac_laplacian(f, 2.0);
        auto fd = oracles::fd_laplacian_1d(g, {f.component(0).begin(), f.component(0).end()});
        double err = 0.0;
        for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(lap(0, i) - fd[i]));
        return err;
    };
    double e1 = fd_gap(128), e2 = fd_gap(256);
    CHECK(e1 / e2 > 3.0); // second-order convergence of the FD oracle
    CHECK(e1 / e2 < 5.0);
}

TEST_CASE("bernstein ratios") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    DyadicPartition part(g);

    // vanishing block returns 0 by convention
    Field f16 = oracles::cosine_field(g, 16);
    CHECK(bernstein_ratio(f16, part, 1, 0, 1.0, kInf) == 0.0);

    // exact plane wave at shell center: gradient gains exactly 2^j
    for (int j : {2, 3, 4, 5}) {
        Field f = oracles::cosine_field(g, 1 << j);
        CHECK(bernstein_ratio(f, part, j, 1, kInf, kInf) == doctest::Approx(1.0).epsilon(1e-10));
    }

    // sweep: bounded, and stable under grid doubling for identical content
    // (content kept at |m| <= n/4 so both partitions see identical shells)
    double c_coarse = 0.0, c_fine = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Grid gc = make_grid(1, 256, 2.0 * std::numbers::pi);
        Grid gf = make_grid(1, 512, 2.0 * std::numbers::pi);
        DyadicPartition pc(gc), pf(gf);
        Field fc = oracles::random_trig_field(gc, 100 + seed, gc.n / 4.0, 30);
        Field ff = oracles::random_trig_field(gf, 100 + seed, gc.n / 4.0, 30);
        for (int j = -1; j <= pc.j_max(); ++j)
            for (int k : {0, 1})
                for (auto [p1, p2] : {std::pair{kInf, kInf}, std::pair{1.0, kInf}}) {
                    c_coarse = std::max(c_coarse, bernstein_ratio(fc, pc, j, k, p1, p2));
                    c_fine = std::max(c_fine, bernstein_ratio(ff, pf, j, k, p1, p2));
                }
    }
    CHECK(c_coarse > 0.0);
    CHECK(std::abs(c_fine / c_coarse - 1.0) < 0.2);

    CHECK_THROWS_AS(bernstein_ratio(f16, part, 4, 2, 1.0, kInf), std::invalid_argument);
    CHECK_THROWS_AS(bernstein_ratio(f16, part, 4, 0, kInf, 1.0), std::invalid_argument);
}

TEST_CASE("frequency-localized coercivity statistic") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);
    DyadicPartition part(g);

    for (int j : {2, 3, 4}) {
        Field f = oracles::cosine_field(g, 1 << j);
        for (double alpha : {0.8, 1.5})
            CHECK(max_principle_stat(f, part, j, alpha) == doctest::Approx(1.0).epsilon(1e-12));
    }

    double c0 = 1e300;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Field u = oracles::random_trig_field(g, 500 + seed, g.band_limit(), 40);
        for (int j = 1; j <= part.j_max(); ++j) {
            Field block = lp_block(u, part, j);
            if (block.sup_norm() < 1e-12) continue;
            double s = max_principle_stat(u, part, j, 1.5);
            CHECK(s > 0.0);
            c0 = std::min(c0, s);
        }
    }
    CHECK(c0 > 0.0);
    CHECK(c0 < 1e300);

    Field zero(g, 1);
    CHECK_THROWS_AS(max_principle_stat(zero, part, 2, 1.5), std::domain_error);
    Field f = oracles::cosine_field(g, 4);
    CHECK_THROWS_AS(max_principle_stat(f, part, -1, 1.5), std::invalid_argument);
}

TEST_CASE("convolution identity, Gaussians, and the product inequality") {
    Grid g = make_grid(1, 256, 2.0 * std::numbers::pi);

    // discrete unit-mass delta at the origin is the identity element
    Field delta(g, 1);
    delta(0, g.n / 2) = 1.0 / g.cell_volume();
    Field f = oracles::random_trig_field(g, 21, 40.0, 20);
    Field conv = convolve(f, delta);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(conv(0, i) - f(0, i)) < 1e-10 * std::max(1.0, f.sup_norm()));

    // Gaussian variances add
    Field ga = oracles::periodic_gaussian(g, 0.02);
    Field gb = oracles::periodic_gaussian(g, 0.03);
    Field gc = convolve(ga, gb);
    Field gexact = oracles::periodic_gaussian(g, 0.05);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(gc(0, i) - gexact(0, i)) < 1e-10);

    // |f*g|_{B^(b1+b2)} <= 5 |f|_{C^b1} |g|_{B^b2_{1,inf}} on sampled pairs
    DyadicPartition part(g);
    for (auto [b1, b2] : {std::pair{0.3, 0.4}, std::pair{0.5, 0.2}, std::pair{0.8, 0.6}}) {
        Field u = synth_besov_field(b1, 31, g);
        Field v = synth_besov_field(b2, 32, g);
        double lhs = besov_norm(convolve(u, v), {b1 + b2, kInf, kInf}, part);
        double rhs = 5.0 * besov_norm(u, {b1, kInf, kInf}, part) *
                     besov_norm(v, {b2, 1.0, kInf}, part);
        CHECK(lhs <= rhs);
    }

    Grid g2 = make_grid(1, 128, 2.0 * std::numbers::pi);
    CHECK_THROWS_AS(convolve(f, Field(g2, 1)), std::invalid_argument);
}

TEST_CASE("commutator with the block operator") {
    Grid g = make_grid(1, 1024, 2.0 * std::numbers::pi);
    DyadicPartition part(g);

    // constant multiplier commutes exactly
    Field c(g, 1);
    for (auto& v : c.raw()) v = 0.8;
    Field gfield = oracles::random_trig_field(g, 3, g.n / 8.0, 20);
    Field comm = commutator_apply(c, gfield, part, 3);
    CHECK(comm.sup_norm() <= 1e-14 * gfield.sup_norm());

    // b = cos(x), g = cos(2^j x): commutator norms shrink at least like 2^-j
    Field b = oracles::cosine_field(g, 1);
    double prev = 1e300;
    for (int j = 3; j <= part.j_max() - 1; ++j) {
        Field gj = oracles::cosine_field(g, 1 << j);
        double v = commutator_apply(b, gj, part, j).sup_norm();
        CHECK(v <= prev + 1e-15);
        CHECK(v * std::exp2(j) < 8.0);
        prev = v;
    }

    // random sweep: 2^(j s1) |[R_j, b] g| / (|b|_{C^s1} |g|_inf) bounded in j
    const double s1 = 0.7;
    Field bb = synth_besov_field(s1, 77, g);
    double bnorm = besov_norm(bb, {s1, kInf, kInf}, part);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Field gg = oracles::random_trig_field(g, 900 + seed, g.n / 8.0, 25);
        for (int j = 2; j <= part.j_max() - 2; ++j) {
            double v = commutator_apply(bb, gg, part, j).sup_norm();
            double ratio = v * std::exp2(s1 * j) / (bnorm * gg.sup_norm());
            CHECK(ratio < 20.0);
        }
    }
}

TEST_CASE("lp norms and band projection") {
    Grid g = make_grid(1, 128, 4.0);
    Field f(g, 1);
    for (auto& v : f.raw()) v = -2.0;
    CHECK(lp_norm(g, f.component(0), 1.0) == doctest::Approx(8.0)); // |f| * L
    CHECK(lp_norm(g, f.component(0), 2.0) == doctest::Approx(4.0)); // sqrt(4 * 4)
    CHECK(lp_norm(g, f.component(0), kInf) == doctest::Approx(2.0));

    Field high = oracles::cosine_field(g, g.n / 2 - 4);
    Field proj = project_band(high);
    CHECK(proj.sup_norm() < 1e-13);
}
