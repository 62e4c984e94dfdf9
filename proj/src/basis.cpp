#include "moirepw/basis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace moirepw {

namespace {

RVec lattice_vector(const LatticeSpec& recip, const IVec& n) {
    RVec g = RVec::Zero();
    if (recip.dim == 1) {
        g(0) = recip.basis(0, 0) * n[0];
    } else {
        g(0) = recip.basis(0, 0) * n[0] + recip.basis(0, 1) * n[1];
        g(1) = recip.basis(1, 0) * n[0] + recip.basis(1, 1) * n[1];
    }
    return g;
}

std::array<int, 2> integer_bounds(const LatticeSpec& recip, double radius) {
    // |n_a| = |e_a^T B^{-1} G| <= ||row_a(B^{-1})|| * |G|
    Eigen::MatrixXd binv = recip.basis.inverse();
    std::array<int, 2> n_max{0, 0};
    for (int a = 0; a < recip.dim; ++a)
        n_max[a] = static_cast<int>(std::floor(binv.row(a).norm() * radius)) + 1;
    return n_max;
}

} // namespace

std::size_t BasisSet::zero_index() const {
    auto it = index.find(IVecPair{IVec{}, IVec{}});
    if (it == index.end()) throw Error("BasisSet: zero pair missing");
    return it->second;
}

BasisSet build_basis(const LatticeSpec& recip1, const LatticeSpec& recip2, double w, double l,
                     std::size_t cap) {
    if (recip1.kind != LatticeKind::reciprocal || recip2.kind != LatticeKind::reciprocal)
        throw std::invalid_argument("build_basis: lattices must be reciprocal-kind");
    if (recip1.dim != recip2.dim)
        throw DimensionMismatch("build_basis: lattice dims differ");
    if (!(w > 0.0) || !(l > 0.0))
        throw std::invalid_argument("build_basis: W, L > 0 required");

    BasisSet basis;
    basis.recip1 = recip1;
    basis.recip2 = recip2;
    basis.w = w;
    basis.l = l;
    basis.dim = recip1.dim;

    const double radius = 0.5 * (w + l);
    auto b1 = integer_bounds(recip1, radius);
    auto b2 = integer_bounds(recip2, radius);
    const int j1y = basis.dim == 2 ? b1[1] : 0;
    const int j2y = basis.dim == 2 ? b2[1] : 0;

    for (int i1 = -b1[0]; i1 <= b1[0]; ++i1) {
        for (int j1 = -j1y; j1 <= j1y; ++j1) {
            IVec n1{{i1, j1}};
            RVec g1 = lattice_vector(recip1, n1);
            if (g1.norm() > radius) continue;
            for (int i2 = -b2[0]; i2 <= b2[0]; ++i2) {
                for (int j2 = -j2y; j2 <= j2y; ++j2) {
                    IVec n2{{i2, j2}};
                    RVec g2 = lattice_vector(recip2, n2);
                    if ((g1 + g2).norm() <= w && (g1 - g2).norm() <= l) {
                        basis.pairs.push_back({n1, n2, g1, g2, g1 + g2});
                        if (basis.pairs.size() > cap)
                            throw BasisTooLarge("build_basis: N exceeds cap " +
                                                std::to_string(cap));
                    }
                }
            }
        }
    }

    std::sort(basis.pairs.begin(), basis.pairs.end(), [](const BasisPair& a, const BasisPair& b) {
        double qa = a.q.norm(), qb = b.q.norm();
        if (qa != qb) return qa < qb;
        if (a.n1 != b.n1) return a.n1 < b.n1;
        return a.n2 < b.n2;
    });

    basis.index.reserve(basis.pairs.size());
    for (std::size_t i = 0; i < basis.pairs.size(); ++i)
        basis.index.emplace(IVecPair{basis.pairs[i].n1, basis.pairs[i].n2}, i);

    basis.negation_map.resize(basis.pairs.size());
    for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
        auto it = basis.index.find(IVecPair{-basis.pairs[i].n1, -basis.pairs[i].n2});
        if (it == basis.index.end())
            throw Error("build_basis: negation closure violated");   // cannot happen
        basis.negation_map[i] = it->second;
    }
    return basis;
}

std::optional<std::size_t> pair_index(const BasisSet& basis, const IVec& n1, const IVec& n2) {
    auto it = basis.index.find(IVecPair{n1, n2});
    if (it == basis.index.end()) return std::nullopt;
    return it->second;
}

} // namespace moirepw
