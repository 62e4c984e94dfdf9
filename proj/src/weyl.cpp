#include "moirepw/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "moirepw/kernels.hpp"

namespace moirepw {

namespace {

constexpr double kPi = std::numbers::pi;

double unit_ball_volume(int dim) { return dim == 1 ? 2.0 : kPi; }

double kappa_of(KineticConvention c) { return c == KineticConvention::full ? 1.0 : 2.0; }

} // namespace

const char* convention_name(KineticConvention c) {
    return c == KineticConvention::full ? "full" : "half";
}

IDoSCurve weyl_idos(const ScalarField& potential_field, const std::vector<double>& energy_grid,
                    const WeylConfig& config) {
    if (!std::is_sorted(energy_grid.begin(), energy_grid.end()))
        throw std::invalid_argument("weyl_idos: energy grid must ascend");
    const int dim = potential_field.grid.dim;
    const double kappa = kappa_of(config.convention);
    const double prefactor = std::pow(2.0 * kPi, -dim) * unit_ball_volume(dim) *
                             std::pow(kappa, 0.5 * dim) * potential_field.grid.cell_volume();

    IDoSCurve curve;
    curve.kind = potential_field.label == FieldLabel::veff_abs ? IDoSKind::weyl_effective
                                                               : IDoSKind::weyl_standard;
    curve.energies = energy_grid;
    curve.values.resize(energy_grid.size());
    kernels::halfpow_sum(potential_field.values, energy_grid, dim, curve.values.data(),
                         kernels::Exec::parallel);
    for (double& v : curve.values) v *= prefactor;
    return curve;
}

McEstimate mc_phase_volume(const ScalarField& potential_field, double e, long n_samples,
                           std::uint64_t seed, const WeylConfig& config) {
    if (n_samples < 10000)
        throw std::invalid_argument("mc_phase_volume: n_samples >= 1e4 required");
    const RealSpaceGrid& grid = potential_field.grid;
    const int dim = grid.dim;
    const double kappa = kappa_of(config.convention);

    McEstimate out;
    out.seed = seed;
    const double p_min = *std::min_element(potential_field.values.begin(),
                                           potential_field.values.end());
    if (e <= p_min) return out;   // empty set, exactly zero

    const double radius = std::sqrt(kappa * (e - p_min));
    const RVec ext = grid.extent();
    const double window_vol = dim == 1 ? ext(0) : ext(0) * ext(1);
    const double ball_vol = unit_ball_volume(dim) * std::pow(radius, dim);
    const double measure = std::pow(2.0 * kPi, -dim) * window_vol * ball_vol;

    // Fixed-size sample chunks with per-chunk seeded streams; integer hit
    // counts combine associatively, so the result is independent of the
    // execution order.
    const long chunk = 8192;
    const long n_chunks = (n_samples + chunk - 1) / chunk;
    long hits = 0;

#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long c = 0; c < n_chunks; ++c) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const long lo = c * chunk;
        const long hi = std::min(n_samples, lo + chunk);
        long local = 0;
        for (long s = lo; s < hi; ++s) {
            // x uniform over the window, snapped to its cell's sample
            std::size_t ix = std::min<std::size_t>(
                static_cast<std::size_t>(uni(rng) * grid.counts[0]), grid.counts[0] - 1);
            std::size_t flat = ix;
            if (dim == 2) {
                std::size_t iy = std::min<std::size_t>(
                    static_cast<std::size_t>(uni(rng) * grid.counts[1]), grid.counts[1] - 1);
                flat = ix * grid.counts[1] + iy;
            }
            // xi uniform over the ball of the sampling radius
            double xi2;
            if (dim == 1) {
                double xi = (2.0 * uni(rng) - 1.0) * radius;
                xi2 = xi * xi;
            } else {
                double r = radius * std::sqrt(uni(rng));
                (void)uni(rng);   // angle; only |xi| enters the symbol
                xi2 = r * r;
            }
            if (potential_field.values[flat] + xi2 / kappa <= e) ++local;
        }
        hits += local;
    }

    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    out.estimate = measure * p;
    out.std_error = measure * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    return out;
}

ScaleFit fit_scale(const IDoSCurve& counting, const IDoSCurve& weyl, double e_lo, double e_hi) {
    if (counting.energies.size() != weyl.energies.size())
        throw std::invalid_argument("fit_scale: curves sampled on different grids");
    for (std::size_t k = 0; k < counting.energies.size(); ++k)
        if (counting.energies[k] != weyl.energies[k])
            throw std::invalid_argument("fit_scale: energy grids differ");
    if (!(e_hi >= e_lo)) throw std::invalid_argument("fit_scale: empty window");

    double num = 0.0, den = 0.0, nn = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < counting.energies.size(); ++k) {
        double e = counting.energies[k];
        if (e < e_lo || e > e_hi) continue;
        num += counting.values[k] * weyl.values[k];
        den += weyl.values[k] * weyl.values[k];
        nn += counting.values[k] * counting.values[k];
        ++used;
    }
    if (used == 0) throw std::invalid_argument("fit_scale: no energy samples in window");
    if (den < 1e-300) throw DegenerateFit("fit_scale: weyl curve vanishes on the window");

    ScaleFit fit;
    fit.c = num / den;
    fit.n_window = used;
    double err2 = 0.0;
    for (std::size_t k = 0; k < counting.energies.size(); ++k) {
        double e = counting.energies[k];
        if (e < e_lo || e > e_hi) continue;
        double d = counting.values[k] - fit.c * weyl.values[k];
        err2 += d * d;
    }
    fit.misfit = nn > 0.0 ? std::sqrt(err2 / nn) : 0.0;
    return fit;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t k = 0; k < n; ++k)
        v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return v;
}

} // namespace moirepw
