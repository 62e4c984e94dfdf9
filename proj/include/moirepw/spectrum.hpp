#pragma once

#include <vector>

#include <Eigen/Core>

#include "moirepw/grid.hpp"
#include "moirepw/hamiltonian.hpp"

namespace moirepw {

struct EigenMode {
    enum Kind { full, partial } kind = full;
    double e_max = 0.0;   // partial: all eigenpairs with lambda <= e_max

    static EigenMode full_mode() { return {full, 0.0}; }
    static EigenMode partial_mode(double e_max) { return {partial, e_max}; }
};

// Eigenpairs of the discrete Hamiltonian, eigenvalues ascending. Vectors are
// stored real when the matrix is real (the Gaussian-coefficient family), complex
// otherwise; column j is the coefficient vector of state j.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd vectors_real;
    Eigen::MatrixXcd vectors_cplx;
    bool real_vectors = false;
    EigenMode mode;

    std::size_t count() const { return static_cast<std::size_t>(eigenvalues.size()); }
    Eigen::VectorXcd vector(std::size_t j) const;
};

// IDoS samples N(E) on an ascending energy grid.
enum class IDoSKind { counting, weyl_standard, weyl_effective };

struct IDoSCurve {
    std::vector<double> energies;
    std::vector<double> values;
    IDoSKind kind = IDoSKind::counting;
    double scale = 1.0;   // applied constant; 1 for raw
};

IDoSCurve scaled(const IDoSCurve& curve, double c);

// Full mode: dense Hermitian solve. Partial mode: Lanczos with full
// reorthogonalization, verified complete against a dense solve when
// N <= 3000 and against a tridiagonal Sturm count otherwise.
Spectrum eigensolve(const HamiltonianMatrix& h, EigenMode mode = EigenMode::full_mode());

// Count of eigenvalues <= E via a Householder tridiagonalization and a Sturm
// sequence; used to certify partial solves.
std::size_t interval_count(const HamiltonianMatrix& h, double e);

IDoSCurve counting_function(const Spectrum& spectrum, const std::vector<double>& energy_grid);

// 1 / (1 + exp((e - mu) beta)), evaluated on the overflow-safe branch.
double fermi_dirac(double e, double mu, double beta);

// rho(x) = (1/s_norm) sum_j f(lambda_j) |psi_j(x)|^2 over states with weight
// above weight_floor. Partial spectra must reach mu + 30/beta.
ScalarField electron_density(const Spectrum& spectrum, const BasisSet& basis,
                             const RealSpaceGrid& grid, double mu, double beta, double s_norm,
                             double weight_floor = 1e-12);

// Default normalization: omega_d L^d / (2 pi)^d.
double default_s_norm(int dim, double l);

} // namespace moirepw
