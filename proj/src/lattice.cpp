#include "moirepw/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace moirepw {

std::string IncommensurabilityReport::describe() const {
    std::ostringstream os;
    switch (verdict) {
        case Commensurability::commensurate: os << "commensurate"; break;
        case Commensurability::incommensurate: os << "incommensurate"; break;
        case Commensurability::undecided: os << "undecided"; break;
    }
    os << " (best relation residual " << residual << " at depth " << depth << ")";
    return os.str();
}

LatticeSpec make_lattice(int dim, const Eigen::MatrixXd& basis_matrix, LatticeKind kind) {
    if (dim != 1 && dim != 2)
        throw DimensionMismatch("make_lattice: dim must be 1 or 2, got " + std::to_string(dim));
    if (basis_matrix.rows() != dim || basis_matrix.cols() != dim)
        throw DimensionMismatch("make_lattice: basis matrix must be " + std::to_string(dim) + "x" +
                                std::to_string(dim));

    double scale = 0.0;
    for (int j = 0; j < dim; ++j) scale = std::max(scale, basis_matrix.col(j).norm());
    double det = basis_matrix.determinant();
    double threshold = 1e-14 * std::pow(std::max(scale, 1e-300), dim);
    if (std::abs(det) <= threshold)
        throw SingularBasis("make_lattice: |det| = " + std::to_string(std::abs(det)) +
                            " below threshold " + std::to_string(threshold));

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis_matrix);
    double cond = svd.singularValues()(0) / svd.singularValues()(dim - 1);

    return LatticeSpec{dim, basis_matrix, kind, cond};
}

LatticeSpec make_lattice_1d(double length, LatticeKind kind) {
    Eigen::MatrixXd a(1, 1);
    a(0, 0) = length;
    return make_lattice(1, a, kind);
}

LatticeSpec reciprocal(const LatticeSpec& lattice) {
    Eigen::MatrixXd b = 2.0 * std::numbers::pi * lattice.basis.inverse().transpose();
    LatticeKind kind = lattice.kind == LatticeKind::direct ? LatticeKind::reciprocal
                                                           : LatticeKind::direct;
    return make_lattice(lattice.dim, b, kind);
}

LatticeSpec rotate(const LatticeSpec& lattice, double angle_degrees) {
    if (lattice.dim != 2)
        throw DimensionMismatch("rotate: only defined for dim=2 lattices");
    if (angle_degrees == 0.0) return lattice;
    double th = angle_degrees * std::numbers::pi / 180.0;
    Eigen::Matrix2d r;
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    return make_lattice(2, r * lattice.basis, lattice.kind);
}

namespace {

Commensurability classify(double residual, double tol) {
    if (residual < tol) return Commensurability::commensurate;
    if (residual > 1e3 * tol) return Commensurability::incommensurate;
    return Commensurability::undecided;
}

// Continued-fraction scan for m * a1 ~ n * a2 in 1D. Tracks the relation with
// the smallest absolute residual among the convergents of a1/a2.
IncommensurabilityReport relation_1d(double a1, double a2, double tol, int depth) {
    IncommensurabilityReport rep;
    rep.depth = depth;
    double ratio = std::abs(a1 / a2);

    // Convergents p_k/q_k of ratio: relation q_k * a1 ~ p_k * a2.
    long p_prev = 0, q_prev = 1;   // p_{-2}, q_{-2}
    long p_cur = 1, q_cur = 0;     // p_{-1}, q_{-1}
    double x = ratio;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < depth; ++k) {
        double fl = std::floor(x);
        if (fl > 1e15 || std::abs(p_cur) > (1L << 50) || std::abs(q_cur) > (1L << 50)) break;
        long a = static_cast<long>(fl);
        long p_next = a * p_cur + p_prev;
        long q_next = a * q_cur + q_prev;
        p_prev = p_cur; q_prev = q_cur; p_cur = p_next; q_cur = q_next;
        if (p_cur != 0 || q_cur != 0) {
            double res = std::abs(q_cur * std::abs(a1) - p_cur * std::abs(a2));
            if (res < best) {
                best = res;
                rep.witness.setZero();
                rep.witness(0, 0) = q_cur;
                rep.witness(0, 1) = p_cur;
                rep.residual = res;
            }
        }
        double frac = x - fl;
        if (frac < 1e-15) break;   // ratio rational within double precision
        x = 1.0 / frac;
    }
    rep.verdict = classify(best, tol);
    return rep;
}

// 2D scan: for every nonzero integer m with |m|_inf <= depth test whether
// A2^{-1} A1 m is close to an integer vector n. Shells are visited inner to
// outer so the reported witness has minimal |m|_inf.
IncommensurabilityReport relation_2d(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2,
                                     double tol, int depth) {
    IncommensurabilityReport rep;
    rep.depth = depth;
    Eigen::Matrix2d m12 = a2.inverse() * a1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= depth && best > 0.0; ++r) {
        for (int i = -r; i <= r; ++i) {
            for (int j = -r; j <= r; ++j) {
                if (std::max(std::abs(i), std::abs(j)) != r) continue;
                Eigen::Vector2d v = m12 * Eigen::Vector2d(i, j);
                Eigen::Vector2d n(std::round(v(0)), std::round(v(1)));
                if (n(0) == 0 && n(1) == 0) continue;
                double res = (a1 * Eigen::Vector2d(i, j) - a2 * n).norm();
                if (res < best) {
                    best = res;
                    rep.residual = res;
                    rep.witness(0, 0) = i;
                    rep.witness(1, 0) = j;
                    rep.witness(0, 1) = static_cast<long>(n(0));
                    rep.witness(1, 1) = static_cast<long>(n(1));
                }
            }
        }
    }
    rep.verdict = classify(best, tol);
    return rep;
}

} // namespace

IncommensurabilityReport check_incommensurate(const LatticeSpec& lat1, const LatticeSpec& lat2,
                                              double tol, int depth) {
    if (lat1.dim != lat2.dim)
        throw DimensionMismatch("check_incommensurate: lattice dims differ");
    if (tol <= 0.0 || depth < 1)
        throw std::invalid_argument("check_incommensurate: tol > 0 and depth >= 1 required");
    if (lat1.dim == 1) return relation_1d(lat1.basis(0, 0), lat2.basis(0, 0), tol, depth);
    return relation_2d(lat1.basis, lat2.basis, tol, depth);
}

} // namespace moirepw
