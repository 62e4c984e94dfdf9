#pragma once

#include <cstddef>
#include <vector>

#include "moirepw/vec.hpp"

namespace moirepw {

// Uniform cell-centered grid: along axis a the k-th sample sits at
// origin_a + (k + 1/2) h_a, so the n_a cells exactly tile
// [origin_a, origin_a + n_a h_a). Quadrature treats each sample as the
// midpoint value of its cell.
struct RealSpaceGrid {
    int dim = 1;
    RVec origin = RVec::Zero();
    RVec spacing = RVec::Ones();
    std::array<std::size_t, 2> counts{1, 1};

    std::size_t size() const { return dim == 1 ? counts[0] : counts[0] * counts[1]; }
    RVec extent() const;
    double cell_volume() const;

    // Row-major flattening: index = ix * n_y + iy (1D: index = ix).
    RVec point(std::size_t flat_index) const;
    std::vector<RVec> points() const;
};

RealSpaceGrid make_grid_1d(double lo, double hi, double h);
RealSpaceGrid make_grid_2d(const RVec& lo, const RVec& hi, double h);

enum class FieldLabel { u, veff_abs, potential, density };

struct ScalarField {
    RealSpaceGrid grid;
    std::vector<double> values;   // grid order
    FieldLabel label = FieldLabel::u;
};

const char* field_label_name(FieldLabel label);

} // namespace moirepw
