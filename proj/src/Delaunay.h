#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "Random.h"

namespace cherry {

struct LatticePoint {
    int64_t x = 0;
    int64_t y = 0;
};

struct Triangulation {
    // counterclockwise triples of point indices, normalized and sorted
    std::vector<std::array<int32_t, 3>> triangles;
    // unique undirected edges, u < v, sorted
    std::vector<std::pair<int32_t, int32_t>> edges;
};

// Incremental Bowyer-Watson over the exact integer lattice. The hull is
// closed by ghost triangles, one per hull edge, so insertion outside the
// current hull is the same cavity operation as insertion inside. Points must
// be pairwise distinct, not all collinear, and have coordinates bounded by
// 2^27 in magnitude so the incircle determinant fits in 128 bits. The rng
// only breaks walk ties during point location; the output is independent
// of it.
Triangulation Triangulate(const std::vector<LatticePoint> &pts, SplitMix64 &rng);

}  // namespace cherry
