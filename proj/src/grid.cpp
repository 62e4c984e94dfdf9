#include "moirepw/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace moirepw {

RVec RealSpaceGrid::extent() const {
    RVec e = RVec::Zero();
    e(0) = counts[0] * spacing(0);
    if (dim == 2) e(1) = counts[1] * spacing(1);
    return e;
}

double RealSpaceGrid::cell_volume() const {
    return dim == 1 ? spacing(0) : spacing(0) * spacing(1);
}

RVec RealSpaceGrid::point(std::size_t flat_index) const {
    RVec x = RVec::Zero();
    if (dim == 1) {
        x(0) = origin(0) + (flat_index + 0.5) * spacing(0);
    } else {
        std::size_t ix = flat_index / counts[1];
        std::size_t iy = flat_index % counts[1];
        x(0) = origin(0) + (ix + 0.5) * spacing(0);
        x(1) = origin(1) + (iy + 0.5) * spacing(1);
    }
    return x;
}

std::vector<RVec> RealSpaceGrid::points() const {
    std::vector<RVec> pts(size());
    for (std::size_t p = 0; p < pts.size(); ++p) pts[p] = point(p);
    return pts;
}

namespace {

std::size_t axis_count(double lo, double hi, double h) {
    if (!(h > 0.0) || !(hi > lo))
        throw std::invalid_argument("make_grid: need hi > lo and h > 0");
    auto n = static_cast<long long>(std::llround((hi - lo) / h));
    return static_cast<std::size_t>(std::max(n, 1LL));
}

} // namespace

RealSpaceGrid make_grid_1d(double lo, double hi, double h) {
    RealSpaceGrid g;
    g.dim = 1;
    g.origin(0) = lo;
    g.spacing = RVec(h, h);
    g.counts = {axis_count(lo, hi, h), 1};
    return g;
}

RealSpaceGrid make_grid_2d(const RVec& lo, const RVec& hi, double h) {
    RealSpaceGrid g;
    g.dim = 2;
    g.origin = lo;
    g.spacing = RVec(h, h);
    g.counts = {axis_count(lo(0), hi(0), h), axis_count(lo(1), hi(1), h)};
    return g;
}

const char* field_label_name(FieldLabel label) {
    switch (label) {
        case FieldLabel::u: return "u";
        case FieldLabel::veff_abs: return "veff_abs";
        case FieldLabel::potential: return "potential";
        case FieldLabel::density: return "density";
    }
    return "unknown";
}

} // namespace moirepw
