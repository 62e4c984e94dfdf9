#include "moirepw/kernels.hpp"

#include <cmath>

#include "moirepw/errors.hpp"

namespace moirepw::kernels {

namespace {

inline Complex row_dot(const Csr& a, std::size_t i, const Complex* x) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        acc += a.val[k] * x[a.col[k]];
    return acc;
}

inline Complex synth_point(const std::vector<RVec>& q, const Complex* coeff,
                           std::size_t n_modes, const RVec& x) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < n_modes; ++i)
        acc += coeff[i] * std::polar(1.0, q[i].dot(x));
    return acc;
}

template <typename Scalar>
inline double density_point(const std::vector<RVec>& q, const Scalar* phi, std::size_t n_modes,
                            std::size_t n_states, const double* weights, const RVec& x,
                            std::vector<Complex>& phase) {
    for (std::size_t i = 0; i < n_modes; ++i) phase[i] = std::polar(1.0, q[i].dot(x));
    double acc = 0.0;
    for (std::size_t j = 0; j < n_states; ++j) {
        const Scalar* col = phi + j * n_modes;
        Complex s(0.0, 0.0);
        for (std::size_t i = 0; i < n_modes; ++i) s += col[i] * phase[i];
        acc += weights[j] * std::norm(s);
    }
    return acc;
}

inline double halfpow_energy(const std::vector<double>& p, double e, int dim) {
    double acc = 0.0;
    if (dim == 1) {
        for (double v : p) {
            double t = e - v;
            if (t > 0.0) acc += std::sqrt(t);
        }
    } else {
        for (double v : p) {
            double t = e - v;
            if (t > 0.0) acc += t;
        }
    }
    return acc;
}

} // namespace

void matvec(const Csr& a, const Complex* x, Complex* y, Exec exec) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n);
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = row_dot(a, i, x);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = row_dot(a, i, x);
}

void synth(const std::vector<RVec>& q, const Complex* coeff, std::size_t n_modes,
           const std::vector<RVec>& points, Complex* out, Exec exec) {
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(points.size());
    if (exec == Exec::serial) {
        for (std::ptrdiff_t p = 0; p < np; ++p) out[p] = synth_point(q, coeff, n_modes, points[p]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < np; ++p) out[p] = synth_point(q, coeff, n_modes, points[p]);
}

template <typename Scalar>
void weighted_density_impl(const std::vector<RVec>& q, const Scalar* phi, std::size_t n_modes,
                           std::size_t n_states, const double* weights,
                           const std::vector<RVec>& points, double* out, Exec exec) {
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(points.size());
    if (exec == Exec::serial) {
        std::vector<Complex> phase(n_modes);
        for (std::ptrdiff_t p = 0; p < np; ++p)
            out[p] = density_point(q, phi, n_modes, n_states, weights, points[p], phase);
        return;
    }
#pragma omp parallel
    {
        std::vector<Complex> phase(n_modes);
#pragma omp for schedule(static)
        for (std::ptrdiff_t p = 0; p < np; ++p)
            out[p] = density_point(q, phi, n_modes, n_states, weights, points[p], phase);
    }
}

void weighted_density(const std::vector<RVec>& q, const Complex* phi, std::size_t n_modes,
                      std::size_t n_states, const double* weights,
                      const std::vector<RVec>& points, double* out, Exec exec) {
    weighted_density_impl(q, phi, n_modes, n_states, weights, points, out, exec);
}

void weighted_density(const std::vector<RVec>& q, const double* phi, std::size_t n_modes,
                      std::size_t n_states, const double* weights,
                      const std::vector<RVec>& points, double* out, Exec exec) {
    weighted_density_impl(q, phi, n_modes, n_states, weights, points, out, exec);
}

void halfpow_sum(const std::vector<double>& p, const std::vector<double>& energies, int dim,
                 double* out, Exec exec) {
    if (dim != 1 && dim != 2) throw DimensionMismatch("halfpow_sum: dim must be 1 or 2");
    const std::ptrdiff_t ne = static_cast<std::ptrdiff_t>(energies.size());
    if (exec == Exec::serial) {
        for (std::ptrdiff_t e = 0; e < ne; ++e) out[e] = halfpow_energy(p, energies[e], dim);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) out[e] = halfpow_energy(p, energies[e], dim);
}

} // namespace moirepw::kernels
