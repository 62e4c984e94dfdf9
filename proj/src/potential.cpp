#include "moirepw/potential.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "moirepw/kernels.hpp"

namespace moirepw {

namespace {

RVec mode_vector(const LatticeSpec& recip, const IVec& n) {
    RVec g = RVec::Zero();
    if (recip.dim == 1) {
        g(0) = recip.basis(0, 0) * n[0];
    } else {
        g(0) = recip.basis(0, 0) * n[0] + recip.basis(0, 1) * n[1];
        g(1) = recip.basis(1, 0) * n[0] + recip.basis(1, 1) * n[1];
    }
    return g;
}

void require_reciprocal(const LatticeSpec& lattice, const char* where) {
    if (lattice.kind != LatticeKind::reciprocal)
        throw std::invalid_argument(std::string(where) + ": expected a reciprocal-kind lattice");
}

void finalize(FourierPotential& pot) {
    std::sort(pot.modes.begin(), pot.modes.end(),
              [](const PotentialMode& a, const PotentialMode& b) { return a.n < b.n; });
    pot.index.clear();
    for (std::size_t i = 0; i < pot.modes.size(); ++i) pot.index.emplace(pot.modes[i].n, i);
}

} // namespace

FourierPotential gaussian_potential(const LatticeSpec& reciprocal_lattice, double s, double gamma,
                                    double eps_cut) {
    require_reciprocal(reciprocal_lattice, "gaussian_potential");
    if (s <= 0.0 || gamma <= 0.0 || eps_cut < 0.0)
        throw std::invalid_argument("gaussian_potential: need s > 0, gamma > 0, eps_cut >= 0");
    if (s < eps_cut)
        throw EmptyPotential("gaussian_potential: zero mode below eps_cut, potential empty");

    // s * exp(-gamma g2) >= eps  <=>  g2 <= ln(s/eps)/gamma
    const double eps = std::max(eps_cut, 1e-300);
    const double g2_max = std::log(s / eps) / gamma;
    const double g_max = std::sqrt(std::max(g2_max, 0.0));

    FourierPotential pot;
    pot.lattice = reciprocal_lattice;

    const int dim = reciprocal_lattice.dim;
    Eigen::MatrixXd binv = reciprocal_lattice.basis.inverse();
    std::array<int, 2> n_max{0, 0};
    for (int a = 0; a < dim; ++a)
        n_max[a] = static_cast<int>(std::floor(binv.row(a).norm() * g_max)) + 1;

    const int jy = dim == 2 ? n_max[1] : 0;
    for (int i = -n_max[0]; i <= n_max[0]; ++i) {
        for (int j = -jy; j <= jy; ++j) {
            IVec n{{i, j}};
            RVec g = mode_vector(reciprocal_lattice, n);
            double c = s * std::exp(-gamma * g.squaredNorm());
            if (c < eps_cut) continue;
            pot.modes.push_back({n, g, Complex(c, 0.0)});
        }
    }
    if (pot.modes.empty()) throw EmptyPotential("gaussian_potential: all modes below eps_cut");
    finalize(pot);
    return pot;
}

FourierPotential potential_from_modes(const LatticeSpec& reciprocal_lattice,
                                      const std::vector<std::pair<IVec, Complex>>& entries,
                                      double eps_cut) {
    require_reciprocal(reciprocal_lattice, "potential_from_modes");
    FourierPotential pot;
    pot.lattice = reciprocal_lattice;

    std::unordered_map<IVec, Complex, IVecHash> given;
    for (const auto& [n, c] : entries) {
        auto [it, fresh] = given.emplace(n, c);
        if (!fresh && std::abs(it->second - c) > 1e-12 * (1.0 + std::abs(c)))
            throw std::invalid_argument("potential_from_modes: conflicting duplicate mode");
    }

    std::unordered_map<IVec, Complex, IVecHash> canon;
    for (const auto& [n, c] : given) {
        if (n.is_zero()) {
            if (std::abs(c.imag()) > 1e-12 * (1.0 + std::abs(c)))
                throw std::invalid_argument("potential_from_modes: zero mode must be real");
            canon[n] = Complex(c.real(), 0.0);
            continue;
        }
        // canonical source is the lexicographically larger of {n, -n}
        IVec m = -n;
        Complex source = c;
        IVec key = n;
        if (m > n) {
            auto it = given.find(m);
            if (it != given.end()) { key = m; source = it->second; }
            else { key = m; source = std::conj(c); }
        } else {
            auto it = given.find(m);
            if (it != given.end() &&
                std::abs(std::conj(it->second) - c) > 1e-10 * (1.0 + std::abs(c)))
                throw std::invalid_argument(
                    "potential_from_modes: modes n and -n violate conjugate symmetry");
        }
        canon[key] = source;
        canon[-key] = std::conj(source);
    }

    for (const auto& [n, c] : canon) {
        if (std::abs(c) < eps_cut) continue;
        pot.modes.push_back({n, mode_vector(reciprocal_lattice, n), c});
    }
    if (pot.modes.empty()) throw EmptyPotential("potential_from_modes: no retained modes");
    finalize(pot);
    return pot;
}

std::vector<double> eval_potential(const std::vector<const FourierPotential*>& potentials,
                                   const std::vector<RVec>& points) {
    std::vector<RVec> q;
    std::vector<Complex> coeff;
    int dim = 0;
    for (const FourierPotential* pot : potentials) {
        if (dim == 0) dim = pot->lattice.dim;
        if (pot->lattice.dim != dim)
            throw DimensionMismatch("eval_potential: mixed-dimension potentials");
        for (const PotentialMode& m : pot->modes) {
            q.push_back(m.g);
            coeff.push_back(m.coeff);
        }
    }

    std::vector<Complex> sum(points.size());
    kernels::synth(q, coeff.data(), coeff.size(), points, sum.data(), kernels::Exec::parallel);

    std::vector<double> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        double re = sum[p].real(), im = sum[p].imag();
        if (std::abs(im) >= 1e-10 * (1.0 + std::abs(re)))
            throw ComplexResidue("eval_potential: imaginary residue " + std::to_string(im) +
                                 " at point " + std::to_string(p));
        out[p] = re;
    }
    return out;
}

Complex coefficient_lookup(const FourierPotential& potential, const RVec& delta_g, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("coefficient_lookup: tol > 0 required");
    const PotentialMode* hit = nullptr;
    for (const PotentialMode& m : potential.modes) {
        if ((m.g - delta_g).norm() <= tol) {
            if (hit != nullptr)
                throw AmbiguousMatch("coefficient_lookup: two retained modes within tol");
            hit = &m;
        }
    }
    return hit ? hit->coeff : Complex(0.0, 0.0);
}

} // namespace moirepw
