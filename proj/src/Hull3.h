#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace cherry {

struct SpherePoint {
    int64_t x = 0;
    int64_t y = 0;
    int64_t z = 0;
};

// Convex hull of integer points, incremental with brute-force visibility
// scans. Faces come out as outward-oriented vertex triples, normalized so
// the smallest index leads, sorted. Every face is a triangle; coplanar
// points are treated as not visible, so degenerate inputs (fewer than four
// affinely independent points) throw. Coordinates must stay below 2^21 in
// magnitude for the orientation determinant to be exact.
std::vector<std::array<int32_t, 3>> ConvexHull3(const std::vector<SpherePoint> &pts);

}  // namespace cherry
