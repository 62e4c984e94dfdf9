#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "moirepw/hamiltonian.hpp"

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
};
} // namespace

TEST_CASE("constant potentials give the kinetic diagonal plus 5") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 4.0, 8.0);
    HamiltonianMatrix h = assemble(basis, constant(f.r1, 3.0), constant(f.r2, 2.0));
    REQUIRE(h.size() == 3);
    CHECK(h.is_real);

    Eigen::MatrixXcd dense = h.dense();
    std::vector<double> expect = {5.0, 5.0 + kPi * kPi / 2.0, 5.0 + kPi * kPi / 2.0};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(dense(i, i).real() == doctest::Approx(expect[i]).epsilon(1e-14));
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(dense(i, j) == Complex(0.0, 0.0));
    }
    CHECK(dense(1, 1).real() == doctest::Approx(9.9348).epsilon(1e-4));
}

TEST_CASE("Gaussian-family couplings carry the closed-form coefficients") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 4.0, 8.0);
    FourierPotential v1 = gaussian_potential(f.r1, 3.0, 0.05);
    FourierPotential v2 = gaussian_potential(f.r2, 2.0, 0.05);
    HamiltonianMatrix h = assemble(basis, v1, v2);

    Eigen::MatrixXcd dense = h.dense();
    std::size_t i00 = *pair_index(basis, IVec{}, IVec{});
    std::size_t i10 = *pair_index(basis, IVec{{1, 0}}, IVec{});
    std::size_t im10 = *pair_index(basis, IVec{{-1, 0}}, IVec{});

    double c1 = 3.0 * std::exp(-0.05 * kPi * kPi);
    double c2 = 3.0 * std::exp(-0.05 * 4.0 * kPi * kPi);
    CHECK(dense(i00, i10).real() == doctest::Approx(c1).epsilon(1e-14));
    CHECK(dense(i00, i10).real() == doctest::Approx(1.8316).epsilon(1e-3));
    CHECK(dense(i10, im10).real() == doctest::Approx(c2).epsilon(1e-14));
    CHECK(dense(i10, im10).real() == doctest::Approx(0.41674).epsilon(1e-4));

    SUBCASE("diagonal is kinetic plus both zero modes") {
        double v0 = v1.coeff_at(IVec{})->real() + v2.coeff_at(IVec{})->real();
        for (std::size_t i = 0; i < h.size(); ++i)
            CHECK(dense(i, i).real() ==
                  doctest::Approx(h.diag_kinetic[i] + v0).epsilon(1e-14));
    }
}

TEST_CASE("exact Hermiticity and negation-conjugation symmetry") {
    Fixture f;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uw(3.0, 10.0), ul(6.0, 25.0), us(0.5, 4.0),
        ug(0.02, 0.2);
    for (int trial = 0; trial < 10; ++trial) {
        double w = uw(rng), l = ul(rng);
        BasisSet basis = build_basis(f.r1, f.r2, w, l);
        FourierPotential v1 = gaussian_potential(f.r1, us(rng), ug(rng));
        FourierPotential v2 = gaussian_potential(f.r2, us(rng), ug(rng));
        HamiltonianMatrix h = assemble(basis, v1, v2);

        Eigen::MatrixXcd dense = h.dense();
        CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() == 0.0);

        bool sym = true;
        for (std::size_t i = 0; i < h.size() && sym; ++i)
            for (std::size_t j = 0; j < h.size(); ++j) {
                Complex a = dense(basis.negation_map[i], basis.negation_map[j]);
                if (a != std::conj(dense(i, j))) {
                    sym = false;
                    break;
                }
            }
        CHECK(sym);
    }
}

TEST_CASE("complex mode potentials remain exactly Hermitian") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 6.0, 14.0);
    FourierPotential v1 = potential_from_modes(
        f.r1, {{IVec{}, Complex(3.0, 0.0)}, {IVec{{1, 0}}, Complex(0.4, 0.3)}});
    FourierPotential v2 = constant(f.r2, 2.0);
    HamiltonianMatrix h = assemble(basis, v1, v2);
    CHECK(!h.is_real);
    Eigen::MatrixXcd dense = h.dense();
    CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("positive definiteness on small Gaussian-family instances") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 8.0, 16.0);
    HamiltonianMatrix h =
        assemble(basis, gaussian_potential(f.r1, 3.0, 0.05), gaussian_potential(f.r2, 2.0, 0.05));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
    CHECK(es.eigenvalues()(0) > 0.0);
}

TEST_CASE("sparsity bounded by retained mode counts") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 20.0, 50.0);
    FourierPotential v1 = gaussian_potential(f.r1, 3.0, 0.05);
    FourierPotential v2 = gaussian_potential(f.r2, 2.0, 0.05);
    HamiltonianMatrix h = assemble(basis, v1, v2);
    std::size_t bound = v1.modes.size() + v2.modes.size() - 1;
    for (std::size_t i = 0; i < h.size(); ++i)
        CHECK(h.mat.row_ptr[i + 1] - h.mat.row_ptr[i] <= bound);
}

TEST_CASE("matvec") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 4.0, 8.0);
    HamiltonianMatrix h = assemble(basis, constant(f.r1, 3.0), constant(f.r2, 2.0));

    SUBCASE("diagonal action on a coordinate axis") {
        std::vector<Complex> e1(3, Complex(0.0, 0.0));
        e1[1] = Complex(1.0, 0.0);
        std::vector<Complex> y = matvec(h, e1);
        CHECK(y[1].real() == doctest::Approx(5.0 + kPi * kPi / 2.0).epsilon(1e-14));
        CHECK(y[0] == Complex(0.0, 0.0));
        CHECK(y[2] == Complex(0.0, 0.0));
    }

    SUBCASE("dense oracle on random vectors") {
        BasisSet bigger = build_basis(f.r1, f.r2, 12.0, 30.0);
        HamiltonianMatrix hb = assemble(bigger, gaussian_potential(f.r1, 3.0, 0.05),
                                        gaussian_potential(f.r2, 2.0, 0.05));
        Eigen::MatrixXcd dense = hb.dense();
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXcd x(dense.rows());
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = Complex(g(rng), g(rng));
            Eigen::VectorXcd ours = matvec(hb, x);
            Eigen::VectorXcd ref = dense * x;
            CHECK((ours - ref).norm() / ref.norm() < 1e-13);
        }
    }

    SUBCASE("Hermitian quadratic form") {
        BasisSet bigger = build_basis(f.r1, f.r2, 12.0, 30.0);
        HamiltonianMatrix hb = assemble(bigger, gaussian_potential(f.r1, 3.0, 0.05),
                                        gaussian_potential(f.r2, 2.0, 0.05));
        std::mt19937_64 rng(4);
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXcd x(static_cast<Eigen::Index>(hb.size())), y(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                x(i) = Complex(g(rng), g(rng));
                y(i) = Complex(g(rng), g(rng));
            }
            Complex a = x.dot(matvec(hb, y));
            Complex b = y.dot(matvec(hb, x));
            CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        }
    }

    SUBCASE("size mismatch rejected") {
        std::vector<Complex> bad(5);
        CHECK_THROWS_AS(matvec(h, bad), SizeMismatch);
    }
}

TEST_CASE("lattice mismatch rejected") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 4.0, 8.0);
    FourierPotential wrong = constant(recip_1d(1.9), 3.0);
    CHECK_THROWS_AS(assemble(basis, wrong, constant(f.r2, 2.0)), LatticeMismatch);
}

TEST_CASE("eps_mat drops small couplings symmetrically") {
    Fixture f;
    BasisSet basis = build_basis(f.r1, f.r2, 12.0, 30.0);
    FourierPotential v1 = gaussian_potential(f.r1, 3.0, 0.05);
    FourierPotential v2 = gaussian_potential(f.r2, 2.0, 0.05);
    HamiltonianMatrix full = assemble(basis, v1, v2, 0.0);
    HamiltonianMatrix trimmed = assemble(basis, v1, v2, 0.1);
    CHECK(trimmed.mat.val.size() < full.mat.val.size());
    Eigen::MatrixXcd dense = trimmed.dense();
    CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t k = 0; k < trimmed.mat.val.size(); ++k) {
        std::size_t i = 0;
        while (trimmed.mat.row_ptr[i + 1] <= k) ++i;
        if (trimmed.mat.col[k] != i) CHECK(std::abs(trimmed.mat.val[k]) >= 0.1);
    }
}
