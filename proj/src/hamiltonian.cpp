#include "moirepw/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace moirepw {

namespace {

bool same_lattice(const LatticeSpec& a, const LatticeSpec& b) {
    if (a.dim != b.dim || a.kind != b.kind) return false;
    double scale = std::max(a.basis.norm(), b.basis.norm());
    return (a.basis - b.basis).norm() <= 1e-12 * std::max(scale, 1e-300);
}

} // namespace

Eigen::MatrixXcd HamiltonianMatrix::dense() const {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(mat.n, mat.n);
    for (std::size_t i = 0; i < mat.n; ++i)
        for (std::size_t k = mat.row_ptr[i]; k < mat.row_ptr[i + 1]; ++k)
            a(i, mat.col[k]) = mat.val[k];
    return a;
}

Eigen::MatrixXd HamiltonianMatrix::dense_real() const {
    if (!is_real) throw Error("dense_real: matrix has complex entries");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(mat.n, mat.n);
    for (std::size_t i = 0; i < mat.n; ++i)
        for (std::size_t k = mat.row_ptr[i]; k < mat.row_ptr[i + 1]; ++k)
            a(i, mat.col[k]) = mat.val[k].real();
    return a;
}

Eigen::VectorXd HamiltonianMatrix::diagonal_real() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(mat.n);
    for (std::size_t i = 0; i < mat.n; ++i)
        for (std::size_t k = mat.row_ptr[i]; k < mat.row_ptr[i + 1]; ++k)
            if (mat.col[k] == i) d(i) = mat.val[k].real();
    return d;
}

HamiltonianMatrix assemble(const BasisSet& basis, const FourierPotential& v1,
                           const FourierPotential& v2, double eps_mat) {
    if (!same_lattice(v1.lattice, basis.recip1) || !same_lattice(v2.lattice, basis.recip2))
        throw LatticeMismatch("assemble: potential lattices differ from basis lattices");
    if (eps_mat < 0.0) throw std::invalid_argument("assemble: eps_mat >= 0 required");

    const std::size_t n = basis.size();
    HamiltonianMatrix h;
    h.mat.n = n;
    h.diag_kinetic.resize(n);
    for (std::size_t i = 0; i < n; ++i) h.diag_kinetic[i] = 0.5 * basis.pairs[i].q.squaredNorm();

    // Row i couples to (n1 - m, n2) for V1 modes m and (n1, n2 - m) for V2
    // modes m; both hit the diagonal at m = 0.
    std::vector<std::pair<std::size_t, Complex>> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        const BasisPair& p = basis.pairs[i];
        Complex diag(h.diag_kinetic[i], 0.0);
        for (const PotentialMode& m : v1.modes) {
            auto j = pair_index(basis, p.n1 - m.n, p.n2);
            if (!j) continue;
            if (*j == i) diag += m.coeff;
            else if (std::abs(m.coeff) >= eps_mat) row.emplace_back(*j, m.coeff);
        }
        for (const PotentialMode& m : v2.modes) {
            auto j = pair_index(basis, p.n1, p.n2 - m.n);
            if (!j) continue;
            if (*j == i) diag += m.coeff;
            else if (std::abs(m.coeff) >= eps_mat) row.emplace_back(*j, m.coeff);
        }
        row.emplace_back(i, diag);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        h.mat.row_ptr.push_back(h.mat.col.size());
        for (const auto& [c, v] : row) {
            h.mat.col.push_back(c);
            h.mat.val.push_back(v);
        }
    }
    h.mat.row_ptr.push_back(h.mat.col.size());

    h.is_real = std::all_of(h.mat.val.begin(), h.mat.val.end(),
                            [](const Complex& v) { return v.imag() == 0.0; });
    return h;
}

std::vector<Complex> matvec(const HamiltonianMatrix& h, const std::vector<Complex>& x,
                            kernels::Exec exec) {
    if (x.size() != h.mat.n) throw SizeMismatch("matvec: vector length != matrix size");
    std::vector<Complex> y(x.size());
    kernels::matvec(h.mat, x.data(), y.data(), exec);
    return y;
}

Eigen::VectorXcd matvec(const HamiltonianMatrix& h, const Eigen::VectorXcd& x,
                        kernels::Exec exec) {
    if (static_cast<std::size_t>(x.size()) != h.mat.n)
        throw SizeMismatch("matvec: vector length != matrix size");
    Eigen::VectorXcd y(x.size());
    kernels::matvec(h.mat, x.data(), y.data(), exec);
    return y;
}

} // namespace moirepw
