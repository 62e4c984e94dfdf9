#pragma once

#include <vector>

#include "moirepw/basis.hpp"
#include "moirepw/grid.hpp"
#include "moirepw/spectrum.hpp"

namespace moirepw {

struct Extremum {
    RVec position;        // a grid point
    double value;
    double prominence;    // height of the lowest saddle to a deeper extremum
};

// Minima ascending by value, maxima descending. Entries are pairwise
// separated by at least the requested separation.
struct ExtremaList {
    std::vector<Extremum> entries;
};

// A grid point is a candidate iff strictly below all neighbors (2 in 1D, 8 in
// 2D); equal-valued plateaus collapse to their centroid and boundary-touching
// plateaus are dropped. Candidates are filtered by topographic prominence and
// then greedily by separation, keeping better values first.
ExtremaList local_minima(const ScalarField& field, double prominence_floor,
                         double min_separation);
ExtremaList local_maxima(const ScalarField& field, double prominence_floor,
                         double min_separation);

struct MatchPair {
    std::size_t min_rank;
    std::size_t max_rank;
    double distance;
};

struct MatchReport {
    std::vector<MatchPair> pairs;
    double matched_fraction_first_k = 0.0;
    double order_agreement = 0.0;    // fraction of matched pairs with equal ranks
    std::size_t k = 0;
    std::vector<std::size_t> unmatched_maxima;
};

// Greedy nearest-unmatched assignment in ascending-minima order within
// match_radius, over the first K minima.
MatchReport match_extrema(const ExtremaList& minima, const ExtremaList& maxima,
                          double match_radius, std::size_t k);

struct BoundRatio {
    std::size_t j;
    double lambda;
    double max_ratio;   // max over grid of |psi_j| / (lambda_j u ||psi_j||_inf)
};

// Diagnostic for the pointwise landscape bound; never fails, only reports.
std::vector<BoundRatio> landscape_bound_report(const Spectrum& spectrum, const BasisSet& basis,
                                               const ScalarField& u_field, std::size_t j_count);

} // namespace moirepw
