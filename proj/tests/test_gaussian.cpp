// Copyright 2026 The sqlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sqlsim/grid.hpp"
#include "sqlsim/random.hpp"

using namespace sqlsim;

namespace {

GaussianState random_state(RngStream& rng) {
    const double re_a = 0.05 + 3.0 * rng.uniform01();
    const double im_a = -4.0 + 8.0 * rng.uniform01();
    const double qbar = -3.0 + 6.0 * rng.uniform01();
    const double kbar = -3.0 + 6.0 * rng.uniform01();
    return GaussianState(cdouble(re_a, im_a), qbar, kbar, 0.0).normalized();
}

Moments grid_moments_of(const GaussianState& s, std::size_t n = 2048, double span = 14.0) {
    const Grid g = Grid::covering(std::span<const GaussianState>(&s, 1), span, n);
    return moments_grid(discretize(s, g), PhysicalUnits{});
}

}  // namespace

TEST_CASE("minimum uncertainty wave-packet moments") {
    const GaussianState s = make_muw(0.0, 0.0, 0.5);
    const Moments m = moments(s);
    CHECK(m.var_q == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.var_p == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.corr == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.is_normalized());

    const Moments m2 = moments(make_muw(1.0, 2.0, 0.25));
    CHECK(m2.mean_q == doctest::Approx(1.0));
    CHECK(m2.mean_p == doctest::Approx(2.0));

    PhysicalUnits u{3.0, 2.0, 1.0};
    const Moments m3 = moments(make_muw(1.0, 2.0, 0.25, u), u);
    CHECK(m3.mean_p == doctest::Approx(3.0 * 2.0));  // hbar k0

    CHECK_THROWS_AS(make_muw(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_muw(0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("muw moments agree with the grid oracle") {
    const GaussianState s = make_muw(0.0, 0.0, 0.5);
    const Moments mg = grid_moments_of(s, 4096);
    const Moments ma = moments(s);
    CHECK(std::abs(mg.mean_q - ma.mean_q) < 1e-9);
    CHECK(std::abs(mg.var_q - ma.var_q) < 1e-9);
    CHECK(std::abs(mg.mean_p - ma.mean_p) < 1e-9);
    CHECK(std::abs(mg.var_p - ma.var_p) < 1e-9);
    CHECK(std::abs(mg.corr - ma.corr) < 1e-9);
}

TEST_CASE("twisted coherent state construction") {
    SUBCASE("coherent limit has no squeezing") {
        PhysicalUnits u{2.0, 3.0, 0.5};
        const Moments m = moments(make_tcs(1.0, 0.0, 0.0, u), u);
        CHECK(m.var_q == doctest::Approx(u.hbar / (2.0 * u.mass * u.omega)).epsilon(1e-13));
        CHECK(m.corr == doctest::Approx(0.0));
    }
    SUBCASE("xi > 0 is contractive, against the grid oracle") {
        const double r = 1.0;
        const GaussianState s = make_tcs(std::cosh(r), cdouble(0.0, std::sinh(r)), 0.0);
        const Moments m = moments(s);
        CHECK(m.corr == doctest::Approx(-std::sinh(r) * std::cosh(r)).epsilon(1e-12));
        CHECK(m.contractive());
        const Moments mg = grid_moments_of(s);
        CHECK(std::abs(mg.corr - m.corr) < 1e-8);
        CHECK(std::abs(mg.var_q - m.var_q) < 1e-8);
    }
    SUBCASE("purity identity") {
        RngStream rng(11);
        for (int i = 0; i < 50; ++i) {
            const double r = 2.0 * rng.uniform01();
            const double phase = 6.28 * rng.uniform01();
            const cdouble mu = std::cosh(r);
            const cdouble nu = std::sinh(r) * std::exp(cdouble(0.0, phase));
            const Moments m = moments(make_tcs(mu, nu, cdouble(1.0, -0.5)));
            CHECK(m.var_q * m.var_p - m.corr * m.corr == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
    SUBCASE("hyperbolic normalization enforced") {
        CHECK_THROWS_AS(make_tcs(1.1, 0.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(make_tcs(0.5, 0.5, 0.0), std::invalid_argument);
    }
    SUBCASE("mean position and momentum from alpha") {
        const Moments m = moments(make_tcs_with_xi(1.0, cdouble(0.7, -0.4)));
        CHECK(m.mean_q == doctest::Approx(0.7));
        CHECK(m.mean_p == doctest::Approx(-0.4));
    }
}

TEST_CASE("free evolution") {
    SUBCASE("muw spreading formula") {
        const double delta_sq = 0.5, t = 1.0;
        const GaussianState s = make_muw(0.0, 0.0, delta_sq);
        const double expected = delta_sq + t * t / (4.0 * delta_sq);
        CHECK(moments(free_evolve(s, t)).var_q == doctest::Approx(expected).epsilon(1e-13));
        CHECK(variance_curve(s, t) == doctest::Approx(expected).epsilon(1e-13));
    }
    SUBCASE("t = 0 is the identity") {
        const GaussianState s = make_tcs_with_xi(0.7, cdouble(0.2, 0.4));
        const GaussianState e = free_evolve(s, 0.0);
        CHECK(std::abs(e.exponent() - s.exponent()) < 1e-15);
        CHECK(e.mean_position() == doctest::Approx(s.mean_position()));
        CHECK(e.mean_wavenumber() == doctest::Approx(s.mean_wavenumber()));
        CHECK(std::abs(e.log_norm() - s.log_norm()) < 1e-15);
    }
    SUBCASE("contractive state variance decreases initially") {
        const GaussianState s = make_tcs_with_xi(2.0, 0.0);
        CHECK(variance_curve(s, 0.05) < variance_curve(s, 0.0));
        CHECK(moments(free_evolve(s, 0.05)).var_q < moments(s).var_q);
    }
    SUBCASE("norm and momentum are conserved, mean drifts") {
        PhysicalUnits u{1.0, 2.5, 1.0};
        const GaussianState s = make_muw(0.3, 1.1, 0.4, u);
        const GaussianState e = free_evolve(s, 2.0, u);
        CHECK(e.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
        const Moments m0 = moments(s, u), m1 = moments(e, u);
        CHECK(m1.mean_p == doctest::Approx(m0.mean_p).epsilon(1e-12));
        CHECK(m1.var_p == doctest::Approx(m0.var_p).epsilon(1e-12));
        CHECK(m1.mean_q == doctest::Approx(m0.mean_q + m0.mean_p * 2.0 / u.mass).epsilon(1e-12));
    }
    SUBCASE("negative time inverts the evolution") {
        const GaussianState s = make_tcs_with_xi(1.0, cdouble(0.5, 0.2));
        const GaussianState back = free_evolve(free_evolve(s, 1.3), -1.3);
        CHECK(std::abs(back.exponent() - s.exponent()) < 1e-12);
        CHECK(back.mean_position() == doctest::Approx(s.mean_position()).epsilon(1e-12));
    }
}

TEST_CASE("variance curve vertex") {
    SUBCASE("non-contractive states have the minimum at t = 0") {
        const auto [t, v] = min_variance_point(make_muw(0.0, 0.0, 0.7));
        CHECK(t == 0.0);
        CHECK(v == doctest::Approx(0.7));
    }
    SUBCASE("xi = 1 family with |mu+nu|^2 = 4 reaches the minimum at t = 0.5") {
        // Solve cs sin(phi) = 1, sqrt(1 + 4 cs^2) + 2 cs cos(phi) = 4 for
        // mu = cosh r, nu = sinh r e^{i phi}; then t_min = 2 xi/|mu+nu|^2 = 0.5.
        double lo = 1.001, hi = 3.0;
        const auto f = [](double cs) {
            const double sin_phi = 1.0 / cs;
            const double cos_phi = std::sqrt(1.0 - sin_phi * sin_phi);
            return std::sqrt(1.0 + 4.0 * cs * cs) + 2.0 * cs * cos_phi - 4.0;
        };
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0.0 ? hi : lo) = mid;
        }
        const double cs = 0.5 * (lo + hi);
        const double r = 0.5 * std::asinh(2.0 * cs);
        const double phi = std::asin(1.0 / cs);
        const cdouble mu = std::cosh(r);
        const cdouble nu = std::sinh(r) * std::exp(cdouble(0.0, phi));
        REQUIRE(std::imag(std::conj(mu) * nu) == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(std::norm(mu + nu) == doctest::Approx(4.0).epsilon(1e-10));
        const GaussianState s = make_tcs(mu, nu, 0.0);
        const auto [t_min, v_min] = min_variance_point(s);
        CHECK(t_min == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(v_min == doctest::Approx(0.25 * t_min).epsilon(1e-10));  // (1/4 xi) hbar t/m
        for (double t = 0.0; t <= 1.0; t += 0.01) CHECK(variance_curve(s, t) >= v_min - 1e-12);
        CHECK(variance_curve(s, t_min) == doctest::Approx(v_min).epsilon(1e-12));
    }
    SUBCASE("large squeezing dips below the standard quantum limit") {
        const GaussianState s = make_tcs_with_xi(5.0, 0.0);
        const auto [t_min, v_min] = min_variance_point(s);
        CHECK(v_min < sql_value(t_min));
        CHECK(v_min == doctest::Approx(sql_value(t_min) / (4.0 * 5.0)).epsilon(1e-12));
    }
    SUBCASE("zero-correlation curve reduces to the correlation-free bound") {
        const GaussianState s = make_muw(0.0, 0.0, 0.3);
        const Moments m = moments(s);
        for (double t : {0.1, 0.7, 2.0})
            CHECK(variance_curve(s, t) == doctest::Approx(m.var_q + m.var_p * t * t).epsilon(1e-13));
    }
}

TEST_CASE("gaussian factor multiplication") {
    const GaussianState s = make_muw(0.2, -0.5, 0.8);
    SUBCASE("unit factor is the identity") {
        const GaussianState p = multiply_gaussian_factor(s, 0.0, 0.0, 0.0);
        CHECK(std::abs(p.exponent() - s.exponent()) < 1e-15);
        CHECK(p.mean_position() == doctest::Approx(s.mean_position()));
    }
    SUBCASE("real factors combine variances as a parallel sum") {
        const double v1 = 0.8, v2 = 0.3;
        const GaussianState p = multiply_gaussian_factor(s, 1.0 / (4.0 * v2), 0.0, 0.0);
        CHECK(moments(p).var_q == doctest::Approx(1.0 / (1.0 / v1 + 1.0 / v2)).epsilon(1e-12));
        const Grid g = Grid::covering(std::span<const GaussianState>(&s, 1), 14.0, 2048);
        std::vector<cdouble> amps(g.n_points);
        for (std::size_t j = 0; j < g.n_points; ++j)
            amps[j] = s.amplitude(g.point(j)) * std::exp(-1.0 / (4.0 * v2) * g.point(j) * g.point(j));
        const Moments mg = moments_grid(GridState(g, amps));
        CHECK(std::abs(mg.var_q - moments(p).var_q) < 1e-8);
    }
    SUBCASE("imaginary quadratic part changes corr, not the position variance") {
        const GaussianState p = multiply_gaussian_factor(s, cdouble(0.0, 0.6), 0.0, 0.0);
        CHECK(moments(p).var_q == doctest::Approx(moments(s).var_q).epsilon(1e-13));
        CHECK(std::abs(moments(p).corr - moments(s).corr) > 0.1);
        const Grid g = Grid::covering(std::span<const GaussianState>(&s, 1), 14.0, 2048);
        std::vector<cdouble> amps(g.n_points);
        for (std::size_t j = 0; j < g.n_points; ++j)
            amps[j] = s.amplitude(g.point(j)) * std::exp(cdouble(0.0, -0.6) * g.point(j) * g.point(j));
        const Moments mg = moments_grid(GridState(g, amps));
        CHECK(std::abs(mg.corr - moments(p).corr) < 1e-8);
    }
    SUBCASE("non-normalizable products are rejected") {
        CHECK_THROWS_AS(multiply_gaussian_factor(s, cdouble(-1.0, 0.0), 0.0, 0.0), std::domain_error);
    }
}

TEST_CASE("shift and dilate") {
    const GaussianState s = make_muw(0.0, 0.0, 1.0);
    SUBCASE("identities") {
        CHECK(shift_position(s, 0.0).mean_position() == doctest::Approx(0.0));
        CHECK(std::abs(dilate(s, 1.0).exponent() - s.exponent()) < 1e-15);
    }
    SUBCASE("scaling law") {
        CHECK(moments(dilate(s, 2.0)).var_q == doctest::Approx(0.25).epsilon(1e-13));
        CHECK(moments(dilate(s, 2.0)).var_p == doctest::Approx(4.0 * moments(s).var_p).epsilon(1e-13));
    }
    SUBCASE("dilate preserves purity and normalization") {
        const GaussianState t = make_tcs_with_xi(1.3, cdouble(0.4, 0.1));
        const Moments m = moments(dilate(t, 1.7));
        CHECK(m.var_q * m.var_p - m.corr * m.corr == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(dilate(t, 1.7).squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.corr == doctest::Approx(moments(t).corr).epsilon(1e-12));
    }
    SUBCASE("composition round-trips") {
        const GaussianState t = make_tcs_with_xi(0.9, cdouble(-0.3, 0.6));
        const GaussianState a = dilate(dilate(t, 1.9), 1.0 / 1.9);
        CHECK(std::abs(a.exponent() - t.exponent()) < 1e-12);
        CHECK(a.mean_position() == doctest::Approx(t.mean_position()).epsilon(1e-12));
        CHECK(std::abs(a.log_norm() - t.log_norm()) < 1e-12);
        const GaussianState b = shift_position(shift_position(t, 0.8), -0.8);
        CHECK(b.mean_position() == doctest::Approx(t.mean_position()).epsilon(1e-12));
    }
    SUBCASE("nonpositive lambda rejected") {
        CHECK_THROWS_AS(dilate(s, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(dilate(s, -2.0), std::invalid_argument);
    }
}

TEST_CASE("overlap") {
    const GaussianState a = make_muw(0.0, 0.0, 0.5);
    CHECK(std::abs(overlap(a, a) - cdouble(1.0, 0.0)) < 1e-13);
    SUBCASE("displaced states decohere with separation") {
        double prev = 1.0;
        for (double d : {1.0, 3.0, 6.0, 10.0}) {
            const double ov = std::abs(overlap(a, make_muw(d, 0.0, 0.5)));
            CHECK(ov < prev);
            prev = ov;
        }
        CHECK(prev < 1e-10);  // exp(-d^2/(8 delta^2)) at d = 10
    }
    SUBCASE("matches the grid inner product") {
        const GaussianState b = make_tcs_with_xi(0.8, cdouble(0.5, -0.7));
        const GaussianState pair[] = {a, b};
        const Grid g = Grid::covering(pair, 14.0, 4096);
        const GridState ga = discretize(a, g), gb = discretize(b, g);
        cdouble inner = 0.0;
        for (std::size_t j = 0; j < g.n_points; ++j)
            inner += std::conj(ga.amplitudes()[j]) * gb.amplitudes()[j];
        inner *= g.spacing();
        CHECK(std::abs(inner - overlap(a, b)) < 1e-8);
    }
    SUBCASE("|overlap| <= 1 for normalized states") {
        RngStream rng(5);
        for (int i = 0; i < 20; ++i)
            CHECK(std::abs(overlap(random_state(rng), random_state(rng))) <= 1.0 + 1e-12);
    }
}

TEST_CASE("purity identity holds for random states") {
    RngStream rng(17);
    for (int i = 0; i < 100; ++i) {
        const Moments m = moments(random_state(rng));
        CHECK(m.var_q * m.var_p - m.corr * m.corr == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("evolution is consistent with the closed-form second moments") {
    RngStream rng(23);
    for (int i = 0; i < 100; ++i) {
        const GaussianState s = random_state(rng);
        const double t = -2.0 + 6.0 * rng.uniform01();
        const Moments m0 = moments(s);
        const Moments m1 = moments(free_evolve(s, t));
        const double expected = m0.var_q + 2.0 * m0.corr * t + m0.var_p * t * t;
        CHECK(m1.var_q == doctest::Approx(expected).epsilon(1e-10));
        CHECK(m1.var_q == doctest::Approx(variance_curve(s, t)).epsilon(1e-10));
        CHECK(m1.var_p == doctest::Approx(m0.var_p).epsilon(1e-10));
        CHECK(m1.corr == doctest::Approx(m0.corr + m0.var_p * t).epsilon(1e-10));
        CHECK(free_evolve(s, t).squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("squeezed-state fluctuation formula in symbolic units") {
    // Var(q,t) = (hbar/2 m omega)|mu-nu|^2 - (2 hbar xi/m) t + (hbar omega/2m)|mu+nu|^2 t^2
    RngStream rng(29);
    for (int i = 0; i < 40; ++i) {
        const PhysicalUnits u{0.5 + 2.0 * rng.uniform01(), 0.5 + 2.0 * rng.uniform01(),
                              0.5 + 2.0 * rng.uniform01()};
        const double r = 1.8 * rng.uniform01();
        const double phase = 6.283185307 * rng.uniform01();
        const cdouble mu = std::cosh(r);
        const cdouble nu = std::sinh(r) * std::exp(cdouble(0.0, phase));
        const double xi = std::imag(std::conj(mu) * nu);
        const GaussianState s = make_tcs(mu, nu, cdouble(0.3, -0.2), u);
        const double t = 2.0 * rng.uniform01();
        const double expected = u.hbar / (2.0 * u.mass * u.omega) * std::norm(mu - nu) -
                                2.0 * u.hbar * xi / u.mass * t +
                                u.hbar * u.omega / (2.0 * u.mass) * std::norm(mu + nu) * t * t;
        CHECK(variance_curve(s, t, u) == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("sql minimization over the initial width") {
    const auto f = [](double delta_sq) { return variance_curve(make_muw(0.0, 0.0, delta_sq), 1.0); };
    const auto [arg, val] = testing::golden_section_min(f, 1e-3, 1e3);
    CHECK(std::abs(val - sql_value(1.0)) < 1e-9);
    CHECK(std::abs(arg - 0.5) < 1e-5);
}

TEST_CASE("tcs correlation equals -hbar Im(mu* nu)") {
    RngStream rng(31);
    for (int i = 0; i < 100; ++i) {
        const double r = 2.5 * rng.uniform01();
        const double phase = 6.283185307 * rng.uniform01();
        const cdouble mu = std::cosh(r) * std::exp(cdouble(0.0, 3.0 * rng.uniform01()));
        const cdouble nu = std::sinh(r) * std::exp(cdouble(0.0, phase));
        const double xi = std::imag(std::conj(mu) * nu);
        CHECK(moments(make_tcs(mu, nu, 0.0)).corr == doctest::Approx(-xi).epsilon(1e-10));
    }
}

TEST_CASE("grid agreement for random states") {
    RngStream rng(41);
    for (int i = 0; i < 50; ++i) {
        const GaussianState s = random_state(rng);
        const Moments mg = grid_moments_of(s);
        const Moments ma = moments(s);
        CHECK(std::abs(mg.mean_q - ma.mean_q) < 1e-8);
        CHECK(std::abs(mg.var_q - ma.var_q) < 1e-8);
        CHECK(std::abs(mg.mean_p - ma.mean_p) < 1e-8);
        CHECK(std::abs(mg.var_p - ma.var_p) < 1e-8);
        CHECK(std::abs(mg.corr - ma.corr) < 1e-8);
    }
}
