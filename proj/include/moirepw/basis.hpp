#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "moirepw/lattice.hpp"
#include "moirepw/vec.hpp"

namespace moirepw {

struct BasisPair {
    IVec n1, n2;
    RVec g1, g2;
    RVec q;         // g1 + g2
};

// Truncated plane-wave pair set {(G1,G2) : |G1+G2| <= W, |G1-G2| <= L},
// ordered by (|q|, n1, n2) and closed under negation.
struct BasisSet {
    LatticeSpec recip1, recip2;
    double w = 0.0, l = 0.0;
    int dim = 1;
    std::vector<BasisPair> pairs;
    std::vector<std::size_t> negation_map;   // involution; fixed point only at (0,0)
    std::unordered_map<IVecPair, std::size_t, IVecPairHash> index;

    std::size_t size() const { return pairs.size(); }
    std::size_t zero_index() const;          // index of the (0,0) pair
};

// Enumerates integer pairs over the bounding box |G1|,|G2| <= (W+L)/2 and
// filters by both constraints. Boundary comparison is plain <=.
BasisSet build_basis(const LatticeSpec& recip1, const LatticeSpec& recip2, double w, double l,
                     std::size_t cap = 200000);

std::optional<std::size_t> pair_index(const BasisSet& basis, const IVec& n1, const IVec& n2);

} // namespace moirepw
