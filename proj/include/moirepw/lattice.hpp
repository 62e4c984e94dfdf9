#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

#include "moirepw/errors.hpp"

namespace moirepw {

enum class LatticeKind { direct, reciprocal };

// Bravais lattice {A n : n in Z^d}. Columns of `basis` are the lattice
// vectors; reciprocal lattices use the convention {2 pi A^{-T} n}.
struct LatticeSpec {
    int dim = 1;
    Eigen::MatrixXd basis;      // d x d, invertible
    LatticeKind kind = LatticeKind::direct;
    double condition_number = 1.0;

    double cell_volume() const { return std::abs(basis.determinant()); }
};

enum class Commensurability { incommensurate, commensurate, undecided };

// Best integer relation m * a1 ~ n * a2 found by the search. For 2D the
// witness columns hold the integer vectors m and n.
struct IncommensurabilityReport {
    Commensurability verdict = Commensurability::undecided;
    Eigen::Matrix<long, 2, 2> witness = Eigen::Matrix<long, 2, 2>::Zero();
    double residual = 0.0;      // |A1 m - A2 n| in length units
    int depth = 0;

    std::string describe() const;
};

LatticeSpec make_lattice(int dim, const Eigen::MatrixXd& basis_matrix,
                         LatticeKind kind = LatticeKind::direct);

// Convenience for 1D.
LatticeSpec make_lattice_1d(double length, LatticeKind kind = LatticeKind::direct);

LatticeSpec reciprocal(const LatticeSpec& lattice);

LatticeSpec rotate(const LatticeSpec& lattice, double angle_degrees);

// Numeric, advisory only: searches integer relations up to `depth` and never
// certifies irrationality. 1D uses continued fractions of the length ratio,
// 2D an integer-relation scan on A2^{-1} A1.
IncommensurabilityReport check_incommensurate(const LatticeSpec& lat1,
                                              const LatticeSpec& lat2,
                                              double tol = 1e-10, int depth = 30);

} // namespace moirepw
