#pragma once

#include <vector>

#include <Eigen/Core>

#include "moirepw/basis.hpp"
#include "moirepw/kernels.hpp"
#include "moirepw/potential.hpp"

namespace moirepw {

// Discrete Hamiltonian over a BasisSet: kinetic diagonal 1/2 |G1+G2|^2 plus
// intra-layer Fourier couplings. Hermitian, both triangles stored.
struct HamiltonianMatrix {
    Csr mat;
    std::vector<double> diag_kinetic;   // 1/2 |q_i|^2
    bool is_real = false;               // true when every entry has zero imaginary part

    std::size_t size() const { return mat.n; }

    Eigen::MatrixXcd dense() const;
    Eigen::MatrixXd dense_real() const;  // valid only when is_real
    Eigen::VectorXd diagonal_real() const;
};

// Couplings are matched by integer index difference on each layer, never by
// floating-point G comparison. Off-diagonal entries below eps_mat are dropped.
HamiltonianMatrix assemble(const BasisSet& basis, const FourierPotential& v1,
                           const FourierPotential& v2, double eps_mat = 0.0);

std::vector<Complex> matvec(const HamiltonianMatrix& h, const std::vector<Complex>& x,
                            kernels::Exec exec = kernels::Exec::parallel);

Eigen::VectorXcd matvec(const HamiltonianMatrix& h, const Eigen::VectorXcd& x,
                        kernels::Exec exec = kernels::Exec::parallel);

} // namespace moirepw
