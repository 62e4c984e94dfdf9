#pragma once

#include <complex>
#include <unordered_map>
#include <vector>

#include "moirepw/lattice.hpp"
#include "moirepw/vec.hpp"

namespace moirepw {

using Complex = std::complex<double>;

struct PotentialMode {
    IVec n;         // integer index on the reciprocal lattice
    RVec g;         // 2 pi A^{-T} n, padded to 2D
    Complex coeff;  // energy units
};

// Layer potential given by its Fourier coefficients on one reciprocal
// lattice. Retained modes are closed under negation with conjugate
// coefficients, which keeps the real-space potential real-valued.
struct FourierPotential {
    LatticeSpec lattice;                 // reciprocal kind
    std::vector<PotentialMode> modes;
    std::unordered_map<IVec, std::size_t, IVecHash> index;

    const Complex* coeff_at(const IVec& n) const {
        auto it = index.find(n);
        return it == index.end() ? nullptr : &modes[it->second].coeff;
    }
};

// Coefficients s * exp(-gamma |G|^2); modes below eps_cut are dropped
// symmetrically.
FourierPotential gaussian_potential(const LatticeSpec& reciprocal_lattice, double s,
                                    double gamma, double eps_cut = 1e-12);

// Builds a potential from explicit (n, coefficient) entries. Conjugate
// symmetry is completed exactly: for each given n the mode -n gets the
// conjugate coefficient; conflicting duplicates are rejected.
FourierPotential potential_from_modes(const LatticeSpec& reciprocal_lattice,
                                      const std::vector<std::pair<IVec, Complex>>& entries,
                                      double eps_cut = 0.0);

// Sum of all layer potentials evaluated at real-space points. Verifies the
// imaginary residue stays below 1e-10 * (1 + |Re|) before discarding it.
std::vector<double> eval_potential(const std::vector<const FourierPotential*>& potentials,
                                   const std::vector<RVec>& points);

// Coefficient of the retained mode whose G matches delta_g within tol
// (absolute); 0 if none. Two modes inside tol is an error.
Complex coefficient_lookup(const FourierPotential& potential, const RVec& delta_g, double tol);

} // namespace moirepw
