#include "moirepw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace moirepw {

Eigen::VectorXcd Spectrum::vector(std::size_t j) const {
    if (real_vectors) return vectors_real.col(j).cast<Complex>();
    return vectors_cplx.col(j);
}

IDoSCurve scaled(const IDoSCurve& curve, double c) {
    IDoSCurve out = curve;
    out.scale = curve.scale * c;
    for (double& v : out.values) v *= c;
    return out;
}

namespace {

Spectrum dense_solve(const HamiltonianMatrix& h) {
    Spectrum s;
    s.mode = EigenMode::full_mode();
    if (h.is_real) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense_real());
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("eigensolve: dense real solver did not converge");
        s.eigenvalues = es.eigenvalues();
        s.vectors_real = es.eigenvectors();
        s.real_vectors = true;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("eigensolve: dense complex solver did not converge");
        s.eigenvalues = es.eigenvalues();
        s.vectors_cplx = es.eigenvectors();
        s.real_vectors = false;
    }
    return s;
}

// Eigenvalue count below e for a symmetric tridiagonal matrix, by the Sturm
// sequence of leading-minor pivots.
std::size_t sturm_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double e) {
    const Eigen::Index n = diag.size();
    const double tiny = 1e-300;
    std::size_t count = 0;
    double d = diag(0) - e;
    if (d < 0.0) ++count;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (std::abs(d) < tiny) d = std::copysign(tiny, d == 0.0 ? -1.0 : d);
        d = diag(i) - e - sub(i - 1) * sub(i - 1) / d;
        if (d < 0.0) ++count;
    }
    return count;
}

struct Tridiag {
    Eigen::VectorXd diag, sub;
};

Tridiag tridiagonalize(const HamiltonianMatrix& h) {
    Tridiag t;
    if (h.is_real) {
        Eigen::Tridiagonalization<Eigen::MatrixXd> tri(h.dense_real());
        t.diag = tri.diagonal();
        t.sub = tri.subDiagonal();
    } else {
        Eigen::Tridiagonalization<Eigen::MatrixXcd> tri(h.dense());
        t.diag = tri.diagonal();
        t.sub = tri.subDiagonal();
    }
    return t;
}

// Lanczos with full reorthogonalization for all eigenpairs with
// lambda <= e_max of a Hermitian matrix, target count known in advance.
Spectrum lanczos_low_end(const HamiltonianMatrix& h, double e_max, std::size_t target) {
    const auto n = static_cast<Eigen::Index>(h.size());
    Spectrum out;
    out.mode = EigenMode::partial_mode(e_max);
    out.real_vectors = false;
    if (target == 0) {
        out.eigenvalues.resize(0);
        out.vectors_cplx.resize(n, 0);
        return out;
    }

    std::mt19937_64 rng(0x5eed5eed1234abcdULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&] {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
        v.normalize();
        return v;
    };

    const Eigen::Index m_max = std::min<Eigen::Index>(n, std::max<Eigen::Index>(
                                   static_cast<Eigen::Index>(4 * target) + 40, 80));
    Eigen::MatrixXcd v(n, m_max + 1);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    v.col(0) = random_unit();

    double scale = 1.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        scale = std::max(scale, std::abs(h.diag_kinetic[i]));
    const double conv_tol = 1e-10;

    // Extraction: Ritz pairs of the m x m tridiagonal section; succeeds when
    // the first `target` Ritz values sit below e_max with small residual
    // bounds.
    auto try_extract = [&](Eigen::Index m) -> bool {
        Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            tmat(i, i) = alpha(i);
            if (i + 1 < m) tmat(i, i + 1) = tmat(i + 1, i) = beta(i);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tmat);
        std::size_t converged = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (es.eigenvalues()(j) > e_max) break;
            double resid = std::abs(beta(m - 1) * es.eigenvectors()(m - 1, j));
            if (resid <= conv_tol * scale) ++converged;
        }
        if (converged < target) return false;
        out.eigenvalues.resize(target);
        out.vectors_cplx.resize(n, static_cast<Eigen::Index>(target));
        std::size_t idx = 0;
        for (Eigen::Index j = 0; j < m && idx < target; ++j) {
            if (es.eigenvalues()(j) > e_max) break;
            out.eigenvalues(idx) = es.eigenvalues()(j);
            out.vectors_cplx.col(idx) = v.leftCols(m) * es.eigenvectors().col(j);
            ++idx;
        }
        return idx == target;
    };

    Eigen::Index k = 0;
    for (; k < m_max; ++k) {
        Eigen::VectorXcd w = matvec(h, Eigen::VectorXcd(v.col(k)), kernels::Exec::parallel);
        alpha(k) = w.dot(v.col(k)).real();
        w -= alpha(k) * v.col(k);
        if (k > 0) w -= beta(k - 1) * v.col(k - 1);
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            w -= v.leftCols(k + 1) * (v.leftCols(k + 1).adjoint() * w);
        beta(k) = w.norm();

        bool exhausted = false;
        if (beta(k) < 1e-13 * scale) {
            // invariant subspace hit; restart with a fresh orthogonal direction
            beta(k) = 0.0;
            Eigen::VectorXcd f = random_unit();
            for (int pass = 0; pass < 2; ++pass)
                f -= v.leftCols(k + 1) * (v.leftCols(k + 1).adjoint() * f);
            double fn = f.norm();
            if (fn < 1e-12)
                exhausted = true;   // whole space spanned
            else
                v.col(k + 1) = f / fn;
        } else {
            v.col(k + 1) = w / beta(k);
        }

        const Eigen::Index m = k + 1;
        if (m >= static_cast<Eigen::Index>(target) &&
            (exhausted || m <= 48 || m % 10 == 0 || m == m_max)) {
            if (try_extract(m)) return out;
        }
        if (exhausted) break;
    }
    throw ConvergenceFailure("eigensolve: Lanczos found fewer than " + std::to_string(target) +
                             " converged eigenpairs below e_max after " + std::to_string(k) +
                             " steps");
}

} // namespace

std::size_t interval_count(const HamiltonianMatrix& h, double e) {
    Tridiag t = tridiagonalize(h);
    // count(lambda <= e): nudge e up by a few ulps so equality lands inside
    double e_up = e + 1e-12 * (1.0 + std::abs(e));
    return sturm_count(t.diag, t.sub, e_up);
}

Spectrum eigensolve(const HamiltonianMatrix& h, EigenMode mode) {
    if (mode.kind == EigenMode::full) return dense_solve(h);
    if (!std::isfinite(mode.e_max))
        throw std::invalid_argument("eigensolve: partial mode needs finite e_max");

    std::size_t target;
    if (h.size() <= 3000) {
        Spectrum dense = dense_solve(h);
        target = static_cast<std::size_t>(
            std::upper_bound(dense.eigenvalues.data(),
                             dense.eigenvalues.data() + dense.eigenvalues.size(), mode.e_max) -
            dense.eigenvalues.data());
    } else {
        target = interval_count(h, mode.e_max);
    }

    Spectrum s = lanczos_low_end(h, mode.e_max, target);

    // Completeness and residual verification.
    if (s.count() != target)
        throw ConvergenceFailure("eigensolve: partial solve returned " + std::to_string(s.count()) +
                                 " pairs, interval count says " + std::to_string(target));
    for (std::size_t j = 0; j < s.count(); j += std::max<std::size_t>(s.count() / 8, 1)) {
        Eigen::VectorXcd phi = s.vector(j);
        double resid = (matvec(h, phi, kernels::Exec::parallel) - s.eigenvalues(j) * phi).norm();
        if (resid > 1e-7 * (1.0 + std::abs(s.eigenvalues(j))))
            throw ConvergenceFailure("eigensolve: residual " + std::to_string(resid) +
                                     " too large for eigenpair " + std::to_string(j));
    }
    return s;
}

IDoSCurve counting_function(const Spectrum& spectrum, const std::vector<double>& energy_grid) {
    if (!std::is_sorted(energy_grid.begin(), energy_grid.end()))
        throw std::invalid_argument("counting_function: energy grid must ascend");
    IDoSCurve curve;
    curve.kind = IDoSKind::counting;
    curve.energies = energy_grid;
    curve.values.resize(energy_grid.size());
    const double* lo = spectrum.eigenvalues.data();
    const double* hi = lo + spectrum.eigenvalues.size();
    for (std::size_t k = 0; k < energy_grid.size(); ++k)
        curve.values[k] = static_cast<double>(std::upper_bound(lo, hi, energy_grid[k]) - lo);
    return curve;
}

double fermi_dirac(double e, double mu, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("fermi_dirac: beta > 0 required");
    const double x = (e - mu) * beta;
    if (x >= 0.0) {
        const double t = std::exp(-x);
        return t / (1.0 + t);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double default_s_norm(int dim, double l) {
    const double omega = dim == 1 ? 2.0 : std::numbers::pi;
    return omega * std::pow(l / (2.0 * std::numbers::pi), dim);
}

ScalarField electron_density(const Spectrum& spectrum, const BasisSet& basis,
                             const RealSpaceGrid& grid, double mu, double beta, double s_norm,
                             double weight_floor) {
    if (!(s_norm > 0.0)) throw std::invalid_argument("electron_density: s_norm > 0 required");
    if (!(beta > 0.0)) throw std::invalid_argument("electron_density: beta > 0 required");
    if (spectrum.mode.kind == EigenMode::partial && spectrum.mode.e_max < mu + 30.0 / beta)
        throw IncompleteSpectrum("electron_density: partial spectrum ceiling " +
                                 std::to_string(spectrum.mode.e_max) + " below mu + 30/beta");
    if (spectrum.real_vectors ? static_cast<std::size_t>(spectrum.vectors_real.rows()) != basis.size()
                              : static_cast<std::size_t>(spectrum.vectors_cplx.rows()) != basis.size())
        throw SizeMismatch("electron_density: spectrum and basis sizes differ");
    const double h_max = std::max(grid.spacing(0), grid.dim == 2 ? grid.spacing(1) : 0.0);
    if (grid.dim != basis.dim)
        throw DimensionMismatch("electron_density: grid and basis dims differ");
    if (h_max > std::numbers::pi / basis.w * (1.0 + 1e-12))
        throw std::invalid_argument("electron_density: grid spacing exceeds pi/W for this basis");

    // Gather states with non-negligible occupation.
    std::vector<std::size_t> kept;
    std::vector<double> weights;
    for (std::size_t j = 0; j < spectrum.count(); ++j) {
        double f = fermi_dirac(spectrum.eigenvalues(j), mu, beta);
        if (f >= weight_floor) {
            kept.push_back(j);
            weights.push_back(f / s_norm);
        }
    }

    std::vector<RVec> q(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) q[i] = basis.pairs[i].q;
    std::vector<RVec> pts = grid.points();

    ScalarField field;
    field.grid = grid;
    field.label = FieldLabel::density;
    field.values.assign(pts.size(), 0.0);
    if (kept.empty()) return field;

    if (spectrum.real_vectors) {
        Eigen::MatrixXd phi(basis.size(), kept.size());
        for (std::size_t c = 0; c < kept.size(); ++c) phi.col(c) = spectrum.vectors_real.col(kept[c]);
        kernels::weighted_density(q, phi.data(), basis.size(), kept.size(), weights.data(), pts,
                                  field.values.data(), kernels::Exec::parallel);
    } else {
        Eigen::MatrixXcd phi(basis.size(), kept.size());
        for (std::size_t c = 0; c < kept.size(); ++c) phi.col(c) = spectrum.vectors_cplx.col(kept[c]);
        kernels::weighted_density(q, phi.data(), basis.size(), kept.size(), weights.data(), pts,
                                  field.values.data(), kernels::Exec::parallel);
    }
    return field;
}

} // namespace moirepw
