#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "moirepw/spectrum.hpp"

using namespace moirepw;

namespace {
constexpr double kPi = std::numbers::pi;

LatticeSpec recip_1d(double length) { return reciprocal(make_lattice_1d(length)); }

FourierPotential constant(const LatticeSpec& recip, double value) {
    return potential_from_modes(recip, {{IVec{}, Complex(value, 0.0)}});
}

struct Fixture {
    LatticeSpec r1 = recip_1d(2.0);
    LatticeSpec r2 = recip_1d(std::sqrt(5.0) - 1.0);

    BasisSet basis(double w, double l) const { return build_basis(r1, r2, w, l); }
    HamiltonianMatrix bilayer(const BasisSet& b) const {
        return assemble(b, gaussian_potential(r1, 3.0, 0.05), gaussian_potential(r2, 2.0, 0.05));
    }
    HamiltonianMatrix constant5(const BasisSet& b) const {
        return assemble(b, constant(r1, 3.0), constant(r2, 2.0));
    }
};
} // namespace

TEST_CASE("diagonal case: eigenvalues are kinetic plus 5, vectors are axes") {
    Fixture f;
    BasisSet basis = f.basis(4.0, 8.0);
    Spectrum s = eigensolve(f.constant5(basis));
    REQUIRE(s.count() == 3);
    CHECK(s.eigenvalues(0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(5.0 + kPi * kPi / 2.0).epsilon(1e-14));
    CHECK(s.eigenvalues(2) == doctest::Approx(5.0 + kPi * kPi / 2.0).epsilon(1e-14));
    Eigen::VectorXcd phi0 = s.vector(0);
    CHECK(std::abs(phi0(basis.zero_index())) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full solve invariants on the Gaussian bilayer instance") {
    Fixture f;
    BasisSet basis = f.basis(12.0, 30.0);
    HamiltonianMatrix h = f.bilayer(basis);
    Spectrum s = eigensolve(h);
    REQUIRE(s.count() == basis.size());
    CHECK(s.real_vectors);

    SUBCASE("ascending eigenvalues, positive definite") {
        CHECK(s.eigenvalues(0) > 0.0);
        for (std::size_t j = 1; j < s.count(); ++j)
            CHECK(s.eigenvalues(j) >= s.eigenvalues(j - 1));
    }

    SUBCASE("trace identity") {
        double tr_h = 0.0;
        Eigen::VectorXd diag = h.diagonal_real();
        for (Eigen::Index i = 0; i < diag.size(); ++i) tr_h += diag(i);
        CHECK(s.eigenvalues.sum() == doctest::Approx(tr_h).epsilon(1e-8));
    }

    SUBCASE("orthonormality") {
        Eigen::MatrixXd gram = s.vectors_real.transpose() * s.vectors_real;
        gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
        CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("eigen residuals") {
        for (std::size_t j = 0; j < s.count(); j += 7) {
            Eigen::VectorXcd phi = s.vector(j);
            double resid = (matvec(h, phi) - s.eigenvalues(j) * phi).norm();
            CHECK(resid <= 1e-8 * (1.0 + std::abs(s.eigenvalues(j))));
        }
    }

    SUBCASE("interval count agrees with the counting function") {
        for (double e : {3.0, 10.0, 40.0, 80.0}) {
            std::size_t direct = 0;
            for (std::size_t j = 0; j < s.count(); ++j)
                if (s.eigenvalues(j) <= e) ++direct;
            CHECK(interval_count(h, e) == direct);
        }
    }
}

TEST_CASE("complex Hermitian full solve against residual checks") {
    Fixture f;
    BasisSet basis = f.basis(8.0, 18.0);
    FourierPotential v1 = potential_from_modes(
        f.r1, {{IVec{}, Complex(3.0, 0.0)}, {IVec{{1, 0}}, Complex(0.6, 0.4)}});
    HamiltonianMatrix h = assemble(basis, v1, constant(f.r2, 2.0));
    CHECK(!h.is_real);
    Spectrum s = eigensolve(h);
    CHECK(!s.real_vectors);
    for (std::size_t j = 0; j < s.count(); ++j) {
        Eigen::VectorXcd phi = s.vector(j);
        double resid = (matvec(h, phi) - s.eigenvalues(j) * phi).norm();
        CHECK(resid <= 1e-8 * (1.0 + std::abs(s.eigenvalues(j))));
    }
}

TEST_CASE("partial solve matches dense below the ceiling") {
    Fixture f;
    BasisSet basis = f.basis(12.0, 30.0);
    HamiltonianMatrix h = f.bilayer(basis);
    Spectrum full = eigensolve(h);
    double e_max = full.eigenvalues(full.count() / 3);

    Spectrum part = eigensolve(h, EigenMode::partial_mode(e_max));
    std::size_t expect = 0;
    for (std::size_t j = 0; j < full.count(); ++j)
        if (full.eigenvalues(j) <= e_max) ++expect;
    REQUIRE(part.count() == expect);
    for (std::size_t j = 0; j < part.count(); ++j)
        CHECK(part.eigenvalues(j) == doctest::Approx(full.eigenvalues(j)).epsilon(1e-10));

    SUBCASE("partial residuals") {
        for (std::size_t j = 0; j < part.count(); ++j) {
            Eigen::VectorXcd phi = part.vector(j);
            double resid = (matvec(h, phi) - part.eigenvalues(j) * phi).norm();
            CHECK(resid <= 1e-8 * (1.0 + std::abs(part.eigenvalues(j))));
        }
    }
}

TEST_CASE("counting function") {
    Fixture f;
    BasisSet basis = f.basis(4.0, 8.0);
    Spectrum s = eigensolve(f.constant5(basis));
    double lam2 = 5.0 + kPi * kPi / 2.0;

    IDoSCurve c =
        counting_function(s, {0.0, 4.999, 5.0 + 1e-12, 9.0, lam2 - 1e-9, lam2 + 1e-9, 50.0});
    CHECK(c.values[0] == 0.0);
    CHECK(c.values[1] == 0.0);
    CHECK(c.values[2] == 1.0);   // step lands at the eigenvalue
    CHECK(c.values[3] == 1.0);
    CHECK(c.values[4] == 1.0);
    CHECK(c.values[5] == 3.0);
    CHECK(c.values[6] == 3.0);   // saturates at N_{W,L}
    CHECK(c.kind == IDoSKind::counting);

    CHECK_THROWS_AS(counting_function(s, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("fermi_dirac") {
    CHECK(fermi_dirac(3.8, 3.8, 100.0) == 0.5);
    CHECK(fermi_dirac(3.8 + 10.0 / 100.0, 3.8, 100.0) == doctest::Approx(4.5398e-5).epsilon(1e-4));
    CHECK(fermi_dirac(1e6, 0.0, 100.0) == 0.0);          // no overflow
    CHECK(fermi_dirac(-1e6, 0.0, 100.0) == 1.0);
    double prev = 1.0;
    for (double e = -5.0; e <= 5.0; e += 0.25) {
        double v = fermi_dirac(e, 0.0, 3.0);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK_THROWS_AS(fermi_dirac(0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("electron density") {
    Fixture f;
    BasisSet basis = f.basis(4.0, 8.0);
    HamiltonianMatrix h = f.constant5(basis);
    Spectrum s = eigensolve(h);
    RealSpaceGrid grid = make_grid_1d(0.0, 10.0, kPi / 16.0);

    SUBCASE("only the bottom state is occupied at mu = 6") {
        ScalarField rho = electron_density(s, basis, grid, 6.0, 100.0, 2.0);
        double f5 = fermi_dirac(5.0, 6.0, 100.0);
        for (double v : rho.values) CHECK(v == doctest::Approx(f5 / 2.0).epsilon(1e-10));
    }

    SUBCASE("mu far below the spectrum suppresses everything") {
        ScalarField rho = electron_density(s, basis, grid, 4.0, 100.0, 2.0);
        for (double v : rho.values) CHECK(v < 1e-30);
    }

    SUBCASE("normalization scales exactly and argmax is invariant") {
        BasisSet wider = f.basis(10.0, 20.0);
        HamiltonianMatrix hw = f.bilayer(wider);
        Spectrum sw = eigensolve(hw);
        RealSpaceGrid g = make_grid_1d(0.0, 20.0, kPi / 40.0);
        ScalarField a = electron_density(sw, wider, g, 3.8, 100.0, 1.0);
        ScalarField b = electron_density(sw, wider, g, 3.8, 100.0, 2.0);
        std::size_t arg_a = 0, arg_b = 0;
        for (std::size_t p = 0; p < a.values.size(); ++p) {
            CHECK(a.values[p] / 2.0 == b.values[p]);
            CHECK(a.values[p] >= 0.0);
            if (a.values[p] > a.values[arg_a]) arg_a = p;
            if (b.values[p] > b.values[arg_b]) arg_b = p;
        }
        CHECK(arg_a == arg_b);
    }

    SUBCASE("partial spectrum must reach mu + 30/beta") {
        Spectrum part = eigensolve(h, EigenMode::partial_mode(5.5));
        CHECK_THROWS_AS(electron_density(part, basis, grid, 6.0, 100.0, 2.0),
                        IncompleteSpectrum);
        ScalarField ok = electron_density(part, basis, grid, 5.2 - 30.0 / 100.0, 100.0, 2.0);
        CHECK(ok.values[0] > 0.0);
    }

    SUBCASE("preconditions") {
        CHECK_THROWS_AS(electron_density(s, basis, grid, 6.0, 100.0, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(electron_density(s, basis, grid, 6.0, -1.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("default normalization constant") {
    CHECK(default_s_norm(1, 200.0) == doctest::Approx(2.0 * 200.0 / (2.0 * kPi)));
    CHECK(default_s_norm(2, 20.0) == doctest::Approx(kPi * 400.0 / (4.0 * kPi * kPi)));
}

TEST_CASE("random Hermitian spot check via trace and interval counts") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Fixture f;
    BasisSet basis = f.basis(6.0, 14.0);
    // random conjugate-symmetric mode set on layer 1
    std::vector<std::pair<IVec, Complex>> entries{{IVec{}, Complex(4.0, 0.0)}};
    for (int n = 1; n <= 3; ++n)
        entries.push_back({IVec{{n, 0}}, Complex(0.3 * g(rng), 0.3 * g(rng))});
    HamiltonianMatrix h =
        assemble(basis, potential_from_modes(f.r1, entries), constant(f.r2, 1.0));
    Spectrum s = eigensolve(h);
    double tr = h.diagonal_real().sum();
    CHECK(s.eigenvalues.sum() == doctest::Approx(tr).epsilon(1e-8));
    for (double e : {2.0, 6.0, 12.0})
        CHECK(interval_count(h, e) ==
              static_cast<std::size_t>(counting_function(s, {e}).values[0]));
}
