#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace moirepw {

// Everything downstream of the lattice module works with fixed-size 2-vectors;
// 1D quantities live in component 0 with component 1 pinned to zero, so norms
// and dot products are dimension-agnostic.
using RVec = Eigen::Vector2d;

// Integer lattice index, same padding convention.
struct IVec {
    std::array<int, 2> v{0, 0};

    int& operator[](std::size_t i) { return v[i]; }
    int operator[](std::size_t i) const { return v[i]; }

    friend IVec operator-(IVec a) { return IVec{{-a.v[0], -a.v[1]}}; }
    friend IVec operator-(IVec a, IVec b) { return IVec{{a.v[0] - b.v[0], a.v[1] - b.v[1]}}; }
    friend IVec operator+(IVec a, IVec b) { return IVec{{a.v[0] + b.v[0], a.v[1] + b.v[1]}}; }
    friend bool operator==(const IVec& a, const IVec& b) { return a.v == b.v; }
    friend auto operator<=>(const IVec& a, const IVec& b) { return a.v <=> b.v; }

    bool is_zero() const { return v[0] == 0 && v[1] == 0; }
};

struct IVecHash {
    std::size_t operator()(const IVec& n) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (int c : n.v) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct IVecPair {
    IVec n1, n2;
    friend bool operator==(const IVecPair& a, const IVecPair& b) {
        return a.n1 == b.n1 && a.n2 == b.n2;
    }
};

struct IVecPairHash {
    std::size_t operator()(const IVecPair& p) const {
        IVecHash h;
        return h(p.n1) * 0x9e3779b97f4a7c15ull + h(p.n2);
    }
};

} // namespace moirepw
