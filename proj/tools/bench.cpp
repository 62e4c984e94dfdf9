// Kernel benchmark: serial reference vs OpenMP variants on a mid-size
// 1D bilayer problem. Usage: moirepw_bench [W] [L]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "moirepw/hamiltonian.hpp"
#include "moirepw/landscape.hpp"
#include "moirepw/spectrum.hpp"
#include "moirepw/weyl.hpp"

using namespace moirepw;
using kernels::Exec;

namespace {

double time_ms(const std::function<void()>& f, int reps) {
    using clock = std::chrono::steady_clock;
    f();   // warm up
    auto t0 = clock::now();
    for (int r = 0; r < reps; ++r) f();
    auto t1 = clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-18s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    double w = argc > 1 ? std::atof(argv[1]) : 50.0;
    double l = argc > 2 ? std::atof(argv[2]) : 200.0;

    LatticeSpec r1 = reciprocal(make_lattice_1d(2.0));
    LatticeSpec r2 = reciprocal(make_lattice_1d(std::sqrt(5.0) - 1.0));
    BasisSet basis = build_basis(r1, r2, w, l);
    FourierPotential v1 = gaussian_potential(r1, 3.0, 0.05);
    FourierPotential v2 = gaussian_potential(r2, 2.0, 0.05);
    HamiltonianMatrix h = assemble(basis, v1, v2);

#ifdef _OPENMP
    std::printf("N = %zu, omp threads = %d\n", basis.size(), omp_get_max_threads());
#else
    std::printf("N = %zu, OpenMP disabled\n", basis.size());
#endif

    std::vector<RVec> q(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) q[i] = basis.pairs[i].q;

    RealSpaceGrid grid = make_grid_1d(0.0, 60.0, std::numbers::pi / (4.0 * w));
    std::vector<RVec> pts = grid.points();

    // matvec
    std::vector<Complex> x(basis.size(), Complex(1.0, 0.5)), y(basis.size());
    report("matvec",
           time_ms([&] { kernels::matvec(h.mat, x.data(), y.data(), Exec::serial); }, 20),
           time_ms([&] { kernels::matvec(h.mat, x.data(), y.data(), Exec::parallel); }, 20));

    // field synthesis
    LandscapeCoefficients lc = solve_landscape(h, basis);
    std::vector<Complex> field(pts.size());
    report("synth",
           time_ms([&] { kernels::synth(q, lc.u_hat.data(), basis.size(), pts, field.data(),
                                        Exec::serial); }, 3),
           time_ms([&] { kernels::synth(q, lc.u_hat.data(), basis.size(), pts, field.data(),
                                        Exec::parallel); }, 3));

    // weighted density over the lowest states
    Spectrum s = eigensolve(h);
    std::size_t n_states = std::min<std::size_t>(64, s.count());
    std::vector<double> weights(n_states, 1.0);
    std::vector<double> rho(pts.size());
    Eigen::MatrixXd phi = s.vectors_real.leftCols(n_states);
    report("weighted_density",
           time_ms([&] { kernels::weighted_density(q, phi.data(), basis.size(), n_states,
                                                   weights.data(), pts, rho.data(),
                                                   Exec::serial); }, 2),
           time_ms([&] { kernels::weighted_density(q, phi.data(), basis.size(), n_states,
                                                   weights.data(), pts, rho.data(),
                                                   Exec::parallel); }, 2));

    // Weyl quadrature
    ScalarField vf;
    vf.grid = grid;
    vf.label = FieldLabel::potential;
    vf.values = eval_potential({&v1, &v2}, pts);
    std::vector<double> energies = linspace(0.0, 30.0, 400);
    std::vector<double> idos(energies.size());
    report("halfpow_sum",
           time_ms([&] { kernels::halfpow_sum(vf.values, energies, 1, idos.data(),
                                              Exec::serial); }, 5),
           time_ms([&] { kernels::halfpow_sum(vf.values, energies, 1, idos.data(),
                                              Exec::parallel); }, 5));
    return 0;
}
