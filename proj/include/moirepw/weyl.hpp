#pragma once

#include <cstdint>

#include "moirepw/grid.hpp"
#include "moirepw/spectrum.hpp"

namespace moirepw {

// The symbol is P(x) + |xi|^2 under the full convention, P(x) + |xi|^2 / 2
// under the half convention; the two differ by an exact 2^{d/2} factor.
enum class KineticConvention { full, half };

struct WeylConfig {
    KineticConvention convention = KineticConvention::full;
};

const char* convention_name(KineticConvention c);

// Phase-space Riemann sum over the field's grid:
//   N(E) = (2 pi)^{-d} omega_d kappa^{d/2} sum_x (E - P(x))_+^{d/2} h^d
// with kappa = 1 (full) or 2 (half). Kind follows the field label:
// veff_abs -> weyl_effective, anything else -> weyl_standard.
IDoSCurve weyl_idos(const ScalarField& potential_field, const std::vector<double>& energy_grid,
                    const WeylConfig& config = {});

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

// Independent oracle: uniform (x, xi) samples over window x ball. The x
// coordinate is snapped to its cell's grid value, so the estimator targets
// exactly the quadrature's integrand and the two are directly comparable.
McEstimate mc_phase_volume(const ScalarField& potential_field, double e, long n_samples,
                           std::uint64_t seed, const WeylConfig& config = {});

struct ScaleFit {
    double c = 0.0;
    double misfit = 0.0;      // relative L2 over the window
    std::size_t n_window = 0;
};

// Least-squares constant minimizing sum (N(E) - c N_weyl(E))^2 over energies
// in [e_lo, e_hi]; both curves must share the same energy grid.
ScaleFit fit_scale(const IDoSCurve& counting, const IDoSCurve& weyl, double e_lo, double e_hi);

std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace moirepw
