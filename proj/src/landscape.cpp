#include "moirepw/landscape.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>

namespace moirepw {

namespace {

Eigen::VectorXcd rhs_i0(const BasisSet& basis) {
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(basis.size());
    b(basis.zero_index()) = Complex(1.0, 0.0);
    return b;
}

LandscapeCoefficients solve_dense(const HamiltonianMatrix& h, const Eigen::VectorXcd& b) {
    LandscapeCoefficients out;
    if (h.is_real) {
        Eigen::LLT<Eigen::MatrixXd> llt(h.dense_real());
        if (llt.info() != Eigen::Success)
            throw IndefiniteMatrix("solve_landscape: Cholesky failed, matrix not positive definite");
        out.u_hat = llt.solve(b.real()).cast<Complex>();
    } else {
        Eigen::LLT<Eigen::MatrixXcd> llt(h.dense());
        if (llt.info() != Eigen::Success)
            throw IndefiniteMatrix("solve_landscape: Cholesky failed, matrix not positive definite");
        out.u_hat = llt.solve(b);
    }
    out.stats.iterations = 0;
    return out;
}

LandscapeCoefficients solve_cg(const HamiltonianMatrix& h, const Eigen::VectorXcd& b, double tol,
                               int max_iter) {
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::VectorXd diag = h.diagonal_real();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(diag(i) > 0.0))
            throw IndefiniteMatrix("solve_landscape: nonpositive diagonal, matrix not HPD");

    const double b_norm = b.norm();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd r = b;
    Eigen::VectorXcd z = r.cwiseQuotient(diag.cast<Complex>());
    Eigen::VectorXcd p = z;
    Complex rz = r.dot(z);   // Eigen dot conjugates the first argument

    double best_res = r.norm() / b_norm;
    Eigen::VectorXcd best_x = x;

    int it = 0;
    for (; it < max_iter; ++it) {
        if (best_res <= tol) break;
        Eigen::VectorXcd hp = matvec(h, p, kernels::Exec::serial);
        double php = p.dot(hp).real();
        if (!(php > 0.0))
            throw IndefiniteMatrix("solve_landscape: curvature p^H H p = " + std::to_string(php));
        Complex alpha = rz / php;
        x += alpha * p;
        r -= alpha * hp;
        double res = r.norm() / b_norm;
        if (res < best_res) {
            best_res = res;
            best_x = x;
        }
        if (res <= tol) break;
        z = r.cwiseQuotient(diag.cast<Complex>());
        Complex rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }

    LandscapeCoefficients out;
    out.u_hat = best_x;
    out.stats.iterations = it;
    out.stats.residual = best_res;
    if (best_res > tol) {
        std::ostringstream msg;
        msg << "solve_landscape: residual " << best_res << " after " << it
            << " iterations (tol " << tol << ")";
        throw NotConverged(msg.str(), it, best_res,
                           std::vector<Complex>(best_x.data(), best_x.data() + best_x.size()));
    }
    return out;
}

} // namespace

LandscapeCoefficients solve_landscape(const HamiltonianMatrix& h, const BasisSet& basis,
                                      SolveMethod method, double tol, int max_iter) {
    if (h.size() != basis.size())
        throw SizeMismatch("solve_landscape: matrix and basis sizes differ");
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("solve_landscape: tol must lie in (0,1)");
    if (max_iter <= 0) max_iter = 10 * static_cast<int>(h.size()) + 100;

    Eigen::VectorXcd b = rhs_i0(basis);
    LandscapeCoefficients out =
        method == SolveMethod::dense ? solve_dense(h, b) : solve_cg(h, b, tol, max_iter);

    // Verify the contract independently of the solver's recurrence.
    Eigen::VectorXcd r = b - matvec(h, out.u_hat, kernels::Exec::serial);
    out.stats.residual = r.norm() / b.norm();
    if (out.stats.residual > tol) {
        std::ostringstream msg;
        msg << "solve_landscape: verified residual " << out.stats.residual << " exceeds tol "
            << tol;
        throw NotConverged(msg.str(), out.stats.iterations, out.stats.residual,
                           std::vector<Complex>(out.u_hat.data(),
                                                out.u_hat.data() + out.u_hat.size()));
    }
    return out;
}

ScalarField eval_field(const Eigen::VectorXcd& coeffs, const BasisSet& basis,
                       const RealSpaceGrid& grid, FieldLabel label) {
    if (static_cast<std::size_t>(coeffs.size()) != basis.size())
        throw SizeMismatch("eval_field: coefficient length != basis size");
    if (grid.dim != basis.dim)
        throw DimensionMismatch("eval_field: grid and basis dims differ");
    const double h_max = std::max(grid.spacing(0), grid.dim == 2 ? grid.spacing(1) : 0.0);
    if (h_max > std::numbers::pi / basis.w * (1.0 + 1e-12))
        throw std::invalid_argument("eval_field: grid spacing exceeds pi/W for this basis");

    std::vector<RVec> q(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) q[i] = basis.pairs[i].q;
    std::vector<RVec> pts = grid.points();
    std::vector<Complex> sum(pts.size());
    kernels::synth(q, coeffs.data(), basis.size(), pts, sum.data(), kernels::Exec::parallel);

    ScalarField field;
    field.grid = grid;
    field.label = label;
    field.values.resize(pts.size());
    for (std::size_t p = 0; p < pts.size(); ++p) {
        double re = sum[p].real(), im = sum[p].imag();
        if (std::abs(im) >= 1e-8 * (1.0 + std::abs(re)))
            throw ComplexResidue("eval_field: imaginary residue " + std::to_string(im) +
                                 " at grid point " + std::to_string(p));
        field.values[p] = re;
    }
    return field;
}

EffectivePotentialResult effective_potential(const ScalarField& u_field, double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("effective_potential: cap > 0 required");
    EffectivePotentialResult out;
    out.field.grid = u_field.grid;
    out.field.label = FieldLabel::veff_abs;
    out.field.values.resize(u_field.values.size());
    const double floor = 1.0 / cap;
    for (std::size_t p = 0; p < u_field.values.size(); ++p) {
        double u = u_field.values[p];
        if (u <= 0.0) ++out.nonpositive;
        double au = std::abs(u);
        if (au <= floor) {
            ++out.clamped;
            out.field.values[p] = cap;
        } else {
            out.field.values[p] = std::min(1.0 / au, cap);
        }
    }
    return out;
}

} // namespace moirepw
