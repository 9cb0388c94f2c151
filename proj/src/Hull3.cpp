#include "Hull3.h"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <utility>

#include "Types.h"

namespace cherry {

namespace {

// sign of det[b-a; c-a; d-a]; positive means d lies on the side the
// right-handed normal of (a, b, c) points to
int Orient3Sign(const SpherePoint &a, const SpherePoint &b,
                const SpherePoint &c, const SpherePoint &d) {
    __int128 bx = b.x - a.x, by = b.y - a.y, bz = b.z - a.z;
    __int128 cx = c.x - a.x, cy = c.y - a.y, cz = c.z - a.z;
    __int128 dx = d.x - a.x, dy = d.y - a.y, dz = d.z - a.z;
    __int128 det = bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) +
                   bz * (cx * dy - cy * dx);
    return det > 0 ? 1 : det < 0 ? -1 : 0;
}

struct Face {
    int32_t v[3];
    bool alive = true;
};

}  // namespace

std::vector<std::array<int32_t, 3>> ConvexHull3(const std::vector<SpherePoint> &pts) {
    const int32_t n = static_cast<int32_t>(pts.size());
    Require(n >= 4, "hull needs at least four points");
    for (const SpherePoint &p : pts) {
        Require(std::llabs(p.x) < (1LL << 21) && std::llabs(p.y) < (1LL << 21) &&
                    std::llabs(p.z) < (1LL << 21),
                "point coordinates exceed the exactness bound");
    }
    // seed tetrahedron: first point, first distinct, first non-collinear,
    // first non-coplanar
    int32_t s0 = 0, s1 = kNullIndex, s2 = kNullIndex, s3 = kNullIndex;
    for (int32_t i = 1; i < n && s1 == kNullIndex; ++i) {
        if (pts[i].x != pts[s0].x || pts[i].y != pts[s0].y || pts[i].z != pts[s0].z) {
            s1 = i;
        }
    }
    if (s1 == kNullIndex) {
        throw InputError("hull input is a single point");
    }
    for (int32_t i = s1 + 1; i < n && s2 == kNullIndex; ++i) {
        __int128 ux = pts[s1].x - pts[s0].x, uy = pts[s1].y - pts[s0].y,
                 uz = pts[s1].z - pts[s0].z;
        __int128 vx = pts[i].x - pts[s0].x, vy = pts[i].y - pts[s0].y,
                 vz = pts[i].z - pts[s0].z;
        if (uy * vz - uz * vy || uz * vx - ux * vz || ux * vy - uy * vx) {
            s2 = i;
        }
    }
    if (s2 == kNullIndex) {
        throw InputError("hull input is collinear");
    }
    for (int32_t i = s2 + 1; i < n && s3 == kNullIndex; ++i) {
        if (Orient3Sign(pts[s0], pts[s1], pts[s2], pts[i]) != 0) {
            s3 = i;
        }
    }
    if (s3 == kNullIndex) {
        throw InputError("hull input is coplanar");
    }
    std::vector<Face> faces;
    {
        const int32_t t[4] = {s0, s1, s2, s3};
        for (int skip = 0; skip < 4; ++skip) {
            int32_t f[3];
            int w = 0;
            for (int i = 0; i < 4; ++i) {
                if (i != skip) {
                    f[w++] = t[i];
                }
            }
            // orient outward: the skipped vertex is interior to this face
            if (Orient3Sign(pts[f[0]], pts[f[1]], pts[f[2]], pts[t[skip]]) > 0) {
                std::swap(f[1], f[2]);
            }
            faces.push_back({{f[0], f[1], f[2]}, true});
        }
    }
    std::vector<std::pair<int32_t, int32_t>> horizon;
    size_t dead = 0;
    for (int32_t i = 0; i < n; ++i) {
        if (i == s0 || i == s1 || i == s2 || i == s3) {
            continue;
        }
        if (dead > 64 && 2 * dead > faces.size()) {
            faces.erase(std::remove_if(faces.begin(), faces.end(),
                                       [](const Face &f) { return !f.alive; }),
                        faces.end());
            dead = 0;
        }
        const SpherePoint &p = pts[i];
        // directed edges of visible faces; an edge whose reverse is missing
        // borders a hidden face, which makes it a horizon edge
        std::map<std::pair<int32_t, int32_t>, int> seen;
        bool any = false;
        for (Face &f : faces) {
            if (!f.alive || Orient3Sign(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]], p) <= 0) {
                continue;
            }
            any = true;
            f.alive = false;
            ++dead;
            for (int e = 0; e < 3; ++e) {
                ++seen[{f.v[e], f.v[(e + 1) % 3]}];
            }
        }
        if (!any) {
            continue;  // interior or on the surface
        }
        horizon.clear();
        for (const auto &[edge, cnt] : seen) {
            Require(cnt == 1, "repeated directed edge in the visible patch");
            if (!seen.count({edge.second, edge.first})) {
                horizon.push_back(edge);
            }
        }
        Require(horizon.size() >= 3, "degenerate horizon");
        for (const auto &[x, y] : horizon) {
            faces.push_back({{x, y, i}, true});
        }
    }
    std::vector<std::array<int32_t, 3>> out;
    for (const Face &f : faces) {
        if (!f.alive) {
            continue;
        }
        std::array<int32_t, 3> tri = {f.v[0], f.v[1], f.v[2]};
        int low = tri[1] < tri[0] ? 1 : 0;
        if (tri[2] < tri[low]) {
            low = 2;
        }
        std::rotate(tri.begin(), tri.begin() + low, tri.end());
        out.push_back(tri);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cherry
