#include "moirepw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "moirepw/kernels.hpp"

namespace moirepw {

namespace {

// Neighbor offsets: 2 in 1D, 8 in 2D.
struct Neighborhood {
    const RealSpaceGrid& grid;
    std::size_t nx, ny;

    explicit Neighborhood(const RealSpaceGrid& g)
        : grid(g), nx(g.counts[0]), ny(g.dim == 2 ? g.counts[1] : 1) {}

    bool on_boundary(std::size_t p) const {
        std::size_t ix = grid.dim == 1 ? p : p / ny;
        std::size_t iy = grid.dim == 1 ? 0 : p % ny;
        if (ix == 0 || ix + 1 == nx) return true;
        if (grid.dim == 2 && (iy == 0 || iy + 1 == ny)) return true;
        return false;
    }

    template <typename F>
    void for_each(std::size_t p, F&& f) const {
        if (grid.dim == 1) {
            if (p > 0) f(p - 1);
            if (p + 1 < nx) f(p + 1);
            return;
        }
        std::size_t ix = p / ny, iy = p % ny;
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                long jx = static_cast<long>(ix) + dx, jy = static_cast<long>(iy) + dy;
                if (jx < 0 || jy < 0 || jx >= static_cast<long>(nx) || jy >= static_cast<long>(ny))
                    continue;
                f(static_cast<std::size_t>(jx) * ny + static_cast<std::size_t>(jy));
            }
        }
    }
};

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
};

struct Candidate {
    std::size_t point;
    double value;
    double prominence;
};

// Sublevel-set persistence of the sampled field: each component birth is a
// local minimum candidate, and the merge level with an older component gives
// its prominence. Ties process in index order, which collapses plateaus to a
// single birth.
std::vector<Candidate> minima_candidates(const std::vector<double>& f, const Neighborhood& nb) {
    const std::size_t n = f.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (f[a] != f[b]) return f[a] < f[b];
        return a < b;
    });
    std::vector<std::size_t> rank(n);
    for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;

    UnionFind uf(n);
    std::vector<std::size_t> comp_min(n);          // root -> birth point
    std::iota(comp_min.begin(), comp_min.end(), std::size_t{0});
    std::vector<double> prominence(n, -1.0);       // by birth point; -1 = alive
    std::vector<bool> processed(n, false);
    std::vector<bool> is_birth(n, false);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = order[k];
        std::vector<std::size_t> roots;
        nb.for_each(p, [&](std::size_t q) {
            if (!processed[q]) return;
            std::size_t r = uf.find(q);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        });
        processed[p] = true;
        if (roots.empty()) {
            is_birth[p] = true;
            continue;
        }
        // oldest component = deepest birth, ties by processing order
        std::size_t oldest = roots[0];
        for (std::size_t r : roots)
            if (rank[comp_min[r]] < rank[comp_min[oldest]]) oldest = r;
        for (std::size_t r : roots) {
            if (r == oldest) continue;
            prominence[comp_min[r]] = f[p] - f[comp_min[r]];
            uf.parent[r] = oldest;
        }
        uf.parent[p] = oldest;
    }

    const double range = f[order[n - 1]] - f[order[0]];
    std::vector<Candidate> out;
    for (std::size_t p = 0; p < n; ++p) {
        if (!is_birth[p]) continue;
        double prom = prominence[p] >= 0.0 ? prominence[p] : range;
        out.push_back({p, f[p], prom});
    }
    return out;
}

// Validates a candidate's plateau: all outside neighbors strictly higher, no
// boundary contact. Returns the plateau member nearest its centroid.
bool resolve_plateau(const std::vector<double>& f, const Neighborhood& nb, std::size_t seed,
                     std::size_t& representative) {
    const double v = f[seed];
    std::vector<std::size_t> plateau{seed};
    std::unordered_map<std::size_t, bool> visited;
    visited[seed] = true;
    std::queue<std::size_t> todo;
    todo.push(seed);
    bool valid = true;
    while (!todo.empty()) {
        std::size_t p = todo.front();
        todo.pop();
        if (nb.on_boundary(p)) valid = false;
        nb.for_each(p, [&](std::size_t q) {
            if (f[q] < v) valid = false;
            if (f[q] == v && !visited[q]) {
                visited[q] = true;
                plateau.push_back(q);
                todo.push(q);
            }
        });
        if (!valid) return false;
    }
    RVec centroid = RVec::Zero();
    for (std::size_t p : plateau) centroid += nb.grid.point(p);
    centroid /= static_cast<double>(plateau.size());
    std::sort(plateau.begin(), plateau.end());
    representative = plateau[0];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p : plateau) {
        double d = (nb.grid.point(p) - centroid).norm();
        if (d < best) {
            best = d;
            representative = p;
        }
    }
    return true;
}

ExtremaList minima_impl(const ScalarField& field, double prominence_floor, double min_separation) {
    if (prominence_floor < 0.0)
        throw std::invalid_argument("local extrema: prominence_floor >= 0 required");
    ExtremaList out;
    if (field.values.empty()) return out;
    Neighborhood nb(field.grid);

    std::vector<Candidate> cands = minima_candidates(field.values, nb);
    std::vector<Candidate> kept;
    for (Candidate& c : cands) {
        if (c.prominence < prominence_floor) continue;
        std::size_t rep = c.point;
        if (!resolve_plateau(field.values, nb, c.point, rep)) continue;
        if (nb.on_boundary(rep)) continue;
        kept.push_back({rep, c.value, c.prominence});
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.point < b.point;
    });

    for (const Candidate& c : kept) {
        RVec pos = field.grid.point(c.point);
        bool ok = true;
        for (const Extremum& e : out.entries) {
            if ((e.position - pos).norm() < min_separation) {
                ok = false;
                break;
            }
        }
        if (ok) out.entries.push_back({pos, c.value, c.prominence});
    }
    return out;
}

} // namespace

ExtremaList local_minima(const ScalarField& field, double prominence_floor,
                         double min_separation) {
    return minima_impl(field, prominence_floor, min_separation);
}

ExtremaList local_maxima(const ScalarField& field, double prominence_floor,
                         double min_separation) {
    ScalarField neg = field;
    for (double& v : neg.values) v = -v;
    ExtremaList list = minima_impl(neg, prominence_floor, min_separation);
    for (Extremum& e : list.entries) e.value = -e.value;
    return list;   // descending by value, since -value ascended
}

MatchReport match_extrema(const ExtremaList& minima, const ExtremaList& maxima,
                          double match_radius, std::size_t k) {
    if (k > minima.entries.size())
        throw std::invalid_argument("match_extrema: K exceeds number of minima");
    MatchReport report;
    report.k = k;
    std::vector<bool> taken(maxima.entries.size(), false);
    for (std::size_t i = 0; i < k; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = maxima.entries.size();
        for (std::size_t j = 0; j < maxima.entries.size(); ++j) {
            if (taken[j]) continue;
            double d = (minima.entries[i].position - maxima.entries[j].position).norm();
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j < maxima.entries.size() && best <= match_radius) {
            taken[best_j] = true;
            report.pairs.push_back({i, best_j, best});
        }
    }
    report.matched_fraction_first_k =
        k == 0 ? 0.0 : static_cast<double>(report.pairs.size()) / static_cast<double>(k);
    std::size_t agree = 0;
    for (const MatchPair& p : report.pairs)
        if (p.min_rank == p.max_rank) ++agree;
    report.order_agreement =
        report.pairs.empty() ? 0.0
                             : static_cast<double>(agree) / static_cast<double>(report.pairs.size());
    for (std::size_t j = 0; j < maxima.entries.size(); ++j)
        if (!taken[j]) report.unmatched_maxima.push_back(j);
    return report;
}

std::vector<BoundRatio> landscape_bound_report(const Spectrum& spectrum, const BasisSet& basis,
                                               const ScalarField& u_field, std::size_t j_count) {
    if (j_count > spectrum.count())
        throw std::invalid_argument("landscape_bound_report: J exceeds eigenpair count");
    std::vector<RVec> q(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) q[i] = basis.pairs[i].q;
    std::vector<RVec> pts = u_field.grid.points();

    std::vector<BoundRatio> report;
    std::vector<Complex> psi(pts.size());
    for (std::size_t j = 0; j < j_count; ++j) {
        Eigen::VectorXcd phi = spectrum.vector(j);
        kernels::synth(q, phi.data(), basis.size(), pts, psi.data(), kernels::Exec::parallel);
        double psi_max = 0.0;
        for (const Complex& z : psi) psi_max = std::max(psi_max, std::abs(z));
        double lambda = spectrum.eigenvalues(j);
        double worst = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double u = u_field.values[p];
            if (u <= 0.0) continue;   // bound undefined there; diagnostic only
            worst = std::max(worst, std::abs(psi[p]) / (lambda * u * psi_max));
        }
        report.push_back({j, lambda, worst});
    }
    return report;
}

} // namespace moirepw
