#pragma once

#include <Eigen/Core>

#include "moirepw/grid.hpp"
#include "moirepw/hamiltonian.hpp"

namespace moirepw {

enum class SolveMethod { iterative, dense };

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;    // relative, verified by an extra mat-vec
};

// Fourier coefficients of the landscape function, solution of H U = I_0.
struct LandscapeCoefficients {
    Eigen::VectorXcd u_hat;
    SolveStats stats;
};

// Iterative method: Jacobi-preconditioned conjugate gradients on the
// Hermitian positive-definite system (the kinetic part dominates the
// diagonal, so D^{-1} H clusters near 1). Dense method: Cholesky.
// max_iter <= 0 selects 10 N + 100.
LandscapeCoefficients solve_landscape(const HamiltonianMatrix& h, const BasisSet& basis,
                                      SolveMethod method = SolveMethod::iterative,
                                      double tol = 1e-10, int max_iter = 0);

// Synthesizes sum_i c_i exp(i q_i . x) on the grid and discards the imaginary
// part after checking |Im| < 1e-8 (1 + |Re|). The grid must resolve the
// basis cutoff: h <= pi / W.
ScalarField eval_field(const Eigen::VectorXcd& coeffs, const BasisSet& basis,
                       const RealSpaceGrid& grid, FieldLabel label = FieldLabel::u);

struct EffectivePotentialResult {
    ScalarField field;              // label veff_abs, min(1/|u|, cap)
    std::size_t clamped = 0;        // points with |u| <= 1/cap
    std::size_t nonpositive = 0;    // points with u <= 0
};

EffectivePotentialResult effective_potential(const ScalarField& u_field, double cap = 1e6);

} // namespace moirepw
