#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "moirepw/vec.hpp"

namespace moirepw {

using Complex = std::complex<double>;

// Hermitian sparse matrix in CSR form, both triangles stored.
struct Csr {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;   // size n+1
    std::vector<std::size_t> col;
    std::vector<Complex> val;
};

namespace kernels {

// Every kernel has an OpenMP-parallel variant and a plain serial reference.
// The parallel variants split work across *output* elements only and each
// element is computed by the same sequential loop as the reference, so the
// two produce bit-identical results and output never depends on the thread
// count.
enum class Exec { serial, parallel };

// y = A x
void matvec(const Csr& a, const Complex* x, Complex* y, Exec exec);

// out[p] = sum_i coeff[i] * exp(i q_i . x_p)
void synth(const std::vector<RVec>& q, const Complex* coeff, std::size_t n_modes,
           const std::vector<RVec>& points, Complex* out, Exec exec);

// out[p] = sum_j w_j |sum_i phi(i,j) exp(i q_i . x_p)|^2
// phi is column-major n_modes x n_states, real or complex entries.
void weighted_density(const std::vector<RVec>& q, const Complex* phi, std::size_t n_modes,
                      std::size_t n_states, const double* weights,
                      const std::vector<RVec>& points, double* out, Exec exec);
void weighted_density(const std::vector<RVec>& q, const double* phi, std::size_t n_modes,
                      std::size_t n_states, const double* weights,
                      const std::vector<RVec>& points, double* out, Exec exec);

// out[e] = sum_k max(energies[e] - p[k], 0)^(d/2)  for d in {1, 2}
void halfpow_sum(const std::vector<double>& p, const std::vector<double>& energies, int dim,
                 double* out, Exec exec);

} // namespace kernels
} // namespace moirepw
