#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "moirepw/weyl.hpp"

using namespace moirepw;

namespace {
constexpr double kPi = std::numbers::pi;

ScalarField constant_field_1d(double value, double length, double h) {
    ScalarField f;
    f.grid = make_grid_1d(0.0, length, h);
    f.label = FieldLabel::potential;
    f.values.assign(f.grid.size(), value);
    return f;
}

ScalarField smooth_field(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.2, 1.2), freq(0.3, 2.0), phase(0.0, 2.0 * kPi);
    ScalarField f;
    f.grid = dim == 1 ? make_grid_1d(0.0, 10.0, 0.02)
                      : make_grid_2d(RVec(0.0, 0.0), RVec(6.0, 6.0), 0.05);
    f.label = FieldLabel::potential;
    double a1 = amp(rng), a2 = amp(rng), w1 = freq(rng), w2 = freq(rng);
    double p1 = phase(rng), p2 = phase(rng);
    f.values.resize(f.grid.size());
    for (std::size_t p = 0; p < f.values.size(); ++p) {
        RVec x = f.grid.point(p);
        f.values[p] = 3.0 + a1 * std::cos(w1 * x(0) + p1) +
                      a2 * std::cos(w2 * (x(0) + x(1)) + p2);
    }
    return f;
}
} // namespace

TEST_CASE("closed forms") {
    SUBCASE("1D constant potential") {
        ScalarField f = constant_field_1d(5.0, 1.0, 0.01);
        IDoSCurve c = weyl_idos(f, {9.0});
        CHECK(c.values[0] == doctest::Approx(2.0 / kPi).epsilon(1e-13));
        CHECK(c.kind == IDoSKind::weyl_standard);
    }
    SUBCASE("2D free potential on the unit square") {
        ScalarField f;
        f.grid = make_grid_2d(RVec(0.0, 0.0), RVec(1.0, 1.0), 0.02);
        f.label = FieldLabel::potential;
        f.values.assign(f.grid.size(), 0.0);
        IDoSCurve c = weyl_idos(f, {4.0 * kPi});
        CHECK(c.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("effective label produces the effective kind") {
        ScalarField f = constant_field_1d(5.0, 1.0, 0.01);
        f.label = FieldLabel::veff_abs;
        CHECK(weyl_idos(f, {9.0}).kind == IDoSKind::weyl_effective);
    }
}

TEST_CASE("monotonicity and support") {
    ScalarField f = smooth_field(1, 17);
    std::vector<double> energies = linspace(0.0, 12.0, 60);
    IDoSCurve c = weyl_idos(f, energies);
    double p_min = *std::min_element(f.values.begin(), f.values.end());
    for (std::size_t k = 1; k < c.values.size(); ++k) CHECK(c.values[k] >= c.values[k - 1]);
    for (std::size_t k = 0; k < c.values.size(); ++k) {
        if (energies[k] <= p_min) CHECK(c.values[k] == 0.0);
        CHECK(c.values[k] >= 0.0);
    }
}

TEST_CASE("quadrature refinement changes the curve by under 1 percent") {
    for (int dim : {1, 2}) {
        ScalarField coarse = smooth_field(dim, 23);
        // same analytic field, half the spacing
        ScalarField fine;
        fine.grid = dim == 1 ? make_grid_1d(0.0, 10.0, 0.01)
                             : make_grid_2d(RVec(0.0, 0.0), RVec(6.0, 6.0), 0.025);
        fine.label = FieldLabel::potential;
        {
            std::mt19937_64 rng(23);
            std::uniform_real_distribution<double> amp(0.2, 1.2), freq(0.3, 2.0),
                phase(0.0, 2.0 * kPi);
            double a1 = amp(rng), a2 = amp(rng), w1 = freq(rng), w2 = freq(rng);
            double p1 = phase(rng), p2 = phase(rng);
            fine.values.resize(fine.grid.size());
            for (std::size_t p = 0; p < fine.values.size(); ++p) {
                RVec x = fine.grid.point(p);
                fine.values[p] = 3.0 + a1 * std::cos(w1 * x(0) + p1) +
                                 a2 * std::cos(w2 * (x(0) + x(1)) + p2);
            }
        }
        for (double e : {6.0, 9.0, 12.0}) {
            double a = weyl_idos(coarse, {e}).values[0];
            double b = weyl_idos(fine, {e}).values[0];
            CHECK(std::abs(a - b) / b < 0.01);
        }
    }
}

TEST_CASE("Monte-Carlo oracle") {
    SUBCASE("constant potential is estimated exactly") {
        // sampling ball radius equals the level set, so every sample hits
        ScalarField f = constant_field_1d(5.0, 1.0, 0.01);
        McEstimate mc = mc_phase_volume(f, 9.0, 200000, 99);
        CHECK(mc.estimate == doctest::Approx(2.0 / kPi).epsilon(1e-13));
        CHECK(mc.std_error == 0.0);
    }
    SUBCASE("varying potential within 3 sigma of the closed form") {
        ScalarField f = constant_field_1d(5.0, 1.0, 0.01);
        for (std::size_t p = 0; p < f.values.size(); ++p)
            f.values[p] += 0.5 * std::cos(2.0 * kPi * f.grid.point(p)(0));
        double quad = weyl_idos(f, {9.0}).values[0];
        McEstimate mc = mc_phase_volume(f, 9.0, 200000, 99);
        CHECK(std::abs(mc.estimate - quad) <= 3.0 * mc.std_error);
        CHECK(mc.std_error > 0.0);
        CHECK(mc.std_error < 0.05);
    }
    SUBCASE("energy below the minimum gives exactly zero") {
        ScalarField f = constant_field_1d(5.0, 1.0, 0.01);
        McEstimate mc = mc_phase_volume(f, 4.0, 20000, 7);
        CHECK(mc.estimate == 0.0);
        CHECK(mc.std_error == 0.0);
    }
    SUBCASE("doubling samples shrinks the error by about sqrt(2)") {
        ScalarField f = smooth_field(1, 5);
        McEstimate a = mc_phase_volume(f, 6.0, 100000, 42);
        McEstimate b = mc_phase_volume(f, 6.0, 200000, 42);
        CHECK(b.std_error / a.std_error == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.1));
    }
    SUBCASE("n_samples floor enforced") {
        ScalarField f = constant_field_1d(5.0, 1.0, 0.01);
        CHECK_THROWS_AS(mc_phase_volume(f, 9.0, 100, 1), std::invalid_argument);
    }
}

TEST_CASE("quadrature agrees with the Monte-Carlo oracle within 3 sigma") {
    for (int dim : {1, 2}) {
        ScalarField f = smooth_field(dim, 1000 + dim);
        for (double e : {5.0, 7.0, 10.0}) {
            double quad = weyl_idos(f, {e}).values[0];
            McEstimate mc = mc_phase_volume(f, e, 300000, 4242 + static_cast<int>(10 * e));
            CHECK(std::abs(quad - mc.estimate) <= 3.0 * mc.std_error + 1e-12);
        }
    }
}

TEST_CASE("convention covariance") {
    for (int dim : {1, 2}) {
        ScalarField f = smooth_field(dim, 31);
        std::vector<double> energies = linspace(4.0, 12.0, 40);
        IDoSCurve full = weyl_idos(f, energies, {KineticConvention::full});
        IDoSCurve half = weyl_idos(f, energies, {KineticConvention::half});
        double factor = std::pow(2.0, 0.5 * dim);
        for (std::size_t k = 0; k < energies.size(); ++k) {
            if (full.values[k] == 0.0) CHECK(half.values[k] == 0.0);
            else CHECK(half.values[k] / full.values[k] ==
                       doctest::Approx(factor).epsilon(1e-12));
        }
    }
}

TEST_CASE("fit_scale") {
    IDoSCurve counting, weyl;
    counting.energies = weyl.energies = linspace(0.0, 10.0, 50);
    counting.values.resize(50);
    weyl.values.resize(50);
    for (std::size_t k = 0; k < 50; ++k) {
        weyl.values[k] = 0.1 * static_cast<double>(k * k);
        counting.values[k] = 3.0 * weyl.values[k];
    }

    SUBCASE("exact multiple recovers the constant") {
        ScaleFit fit = fit_scale(counting, weyl, 0.0, 10.0);
        CHECK(fit.c == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(fit.misfit < 1e-14);
    }

    SUBCASE("scale equivariance is exact for powers of two") {
        IDoSCurve doubled = scaled(weyl, 2.0);
        ScaleFit a = fit_scale(counting, weyl, 0.0, 10.0);
        ScaleFit b = fit_scale(counting, doubled, 0.0, 10.0);
        CHECK(b.c == a.c / 2.0);
        CHECK(doubled.scale == 2.0);
    }

    SUBCASE("general scaling to close tolerance") {
        IDoSCurve s17 = scaled(weyl, 1.7);
        ScaleFit a = fit_scale(counting, weyl, 0.0, 10.0);
        ScaleFit b = fit_scale(counting, s17, 0.0, 10.0);
        CHECK(b.c == doctest::Approx(a.c / 1.7).epsilon(1e-14));
    }

    SUBCASE("degenerate window rejected") {
        IDoSCurve zero = weyl;
        std::fill(zero.values.begin(), zero.values.end(), 0.0);
        CHECK_THROWS_AS(fit_scale(counting, zero, 0.0, 10.0), DegenerateFit);
        CHECK_THROWS_AS(fit_scale(counting, weyl, 20.0, 30.0), std::invalid_argument);
    }

    SUBCASE("mismatched grids rejected") {
        IDoSCurve other = weyl;
        other.energies[3] += 1e-6;
        CHECK_THROWS_AS(fit_scale(counting, other, 0.0, 10.0), std::invalid_argument);
    }
}
