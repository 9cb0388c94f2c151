#include "Delaunay.h"

#include <algorithm>
#include <cstdlib>

#include "Types.h"

namespace cherry {

namespace {

constexpr int32_t kGhost = -1;

// sign of the cross product (b - a) x (c - a); positive means c lies left
// of the directed line a -> b
int OrientSign(const LatticePoint &a, const LatticePoint &b, const LatticePoint &c) {
    __int128 det = (__int128)(b.x - a.x) * (c.y - a.y) -
                   (__int128)(b.y - a.y) * (c.x - a.x);
    return det > 0 ? 1 : det < 0 ? -1 : 0;
}

// bit-interleave key for the spatial insertion order; offset coordinates fit
// in 28 bits, so the key fits in 56
uint64_t Spread(uint64_t v) {
    v &= 0xffffffffULL;
    v = (v | (v << 16)) & 0x0000ffff0000ffffULL;
    v = (v | (v << 8)) & 0x00ff00ff00ff00ffULL;
    v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0fULL;
    v = (v | (v << 2)) & 0x3333333333333333ULL;
    v = (v | (v << 1)) & 0x5555555555555555ULL;
    return v;
}

uint64_t MortonKey(uint64_t x, uint64_t y) { return Spread(x) | (Spread(y) << 1); }

// strict incircle test for a counterclockwise triangle (a, b, c); positive
// means d is strictly inside the circumcircle. Coordinate differences are
// below 2^27, so every term stays below 2^112.
int InCircleSign(const LatticePoint &a, const LatticePoint &b,
                 const LatticePoint &c, const LatticePoint &d) {
    __int128 adx = a.x - d.x, ady = a.y - d.y;
    __int128 bdx = b.x - d.x, bdy = b.y - d.y;
    __int128 cdx = c.x - d.x, cdy = c.y - d.y;
    __int128 ad = adx * adx + ady * ady;
    __int128 bd = bdx * bdx + bdy * bdy;
    __int128 cd = cdx * cdx + cdy * cdy;
    __int128 det = adx * (bdy * cd - cdy * bd) - ady * (bdx * cd - cdx * bd) +
                   ad * (bdx * cdy - cdx * bdy);
    return det > 0 ? 1 : det < 0 ? -1 : 0;
}

struct Tri {
    int32_t v[3];    // ghost triangles keep kGhost in slot 2 with (v0, v1)
                     // directed along the hull, interior on the left
    int32_t nbr[3];  // neighbor opposite each vertex
    bool alive = true;
};

class Builder {
  public:
    Builder(const std::vector<LatticePoint> &pts, SplitMix64 &rng)
        : pts_(pts), rng_(rng) {}

    void Run() {
        const int32_t n = static_cast<int32_t>(pts_.size());
        std::vector<int32_t> order(n);
        for (int32_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        // seed triangle: the first pair plus the first point off their line
        int32_t k = 2;
        while (k < n && OrientSign(pts_[order[0]], pts_[order[1]], pts_[order[k]]) == 0) {
            ++k;
        }
        if (k == n) {
            throw InputError("all points are collinear");
        }
        std::swap(order[2], order[k]);
        int32_t a = order[0], b = order[1], c = order[2];
        if (OrientSign(pts_[a], pts_[b], pts_[c]) < 0) {
            std::swap(b, c);
        }
        // one real triangle and a ghost per hull edge, wired as a fan
        tris_.push_back({{a, b, c}, {1, 2, 3}, true});
        tris_.push_back({{b, c, kGhost}, {2, 3, 0}, true});  // opposite a
        tris_.push_back({{c, a, kGhost}, {3, 1, 0}, true});  // opposite b
        tris_.push_back({{a, b, kGhost}, {1, 2, 0}, true});  // opposite c
        stamp_.assign(4, 0);
        last_real_ = 0;
        // remaining points go in Morton order, so each location walk starts
        // from a triangle near the new point
        int64_t minx = pts_[0].x, miny = pts_[0].y;
        for (const LatticePoint &p : pts_) {
            minx = std::min(minx, p.x);
            miny = std::min(miny, p.y);
        }
        std::sort(order.begin() + 3, order.end(), [&](int32_t u, int32_t v) {
            return MortonKey(static_cast<uint64_t>(pts_[u].x - minx),
                             static_cast<uint64_t>(pts_[u].y - miny)) <
                   MortonKey(static_cast<uint64_t>(pts_[v].x - minx),
                             static_cast<uint64_t>(pts_[v].y - miny));
        });
        for (int32_t i = 3; i < n; ++i) {
            Insert(order[i]);
        }
    }

    Triangulation Finish() const {
        Triangulation out;
        for (const Tri &t : tris_) {
            if (!t.alive || t.v[2] == kGhost) {
                continue;
            }
            std::array<int32_t, 3> tri = {t.v[0], t.v[1], t.v[2]};
            int low = tri[1] < tri[0] ? 1 : 0;
            if (tri[2] < tri[low]) {
                low = 2;
            }
            std::rotate(tri.begin(), tri.begin() + low, tri.end());
            out.triangles.push_back(tri);
            for (int e = 0; e < 3; ++e) {
                int32_t u = tri[e], v = tri[(e + 1) % 3];
                out.edges.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
        std::sort(out.triangles.begin(), out.triangles.end());
        std::sort(out.edges.begin(), out.edges.end());
        out.edges.erase(std::unique(out.edges.begin(), out.edges.end()),
                        out.edges.end());
        return out;
    }

  private:
    bool Conflicts(int32_t ti, const LatticePoint &p) const {
        const Tri &t = tris_[ti];
        if (t.v[2] != kGhost) {
            return InCircleSign(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p) > 0;
        }
        const LatticePoint &ha = pts_[t.v[0]];
        const LatticePoint &hb = pts_[t.v[1]];
        int o = OrientSign(ha, hb, p);
        if (o != 0) {
            return o < 0;
        }
        // collinear: only the open segment interior belongs to this ghost;
        // beyond an endpoint the adjacent ghost claims the point
        __int128 dx = hb.x - ha.x, dy = hb.y - ha.y;
        __int128 dot = dx * (p.x - ha.x) + dy * (p.y - ha.y);
        return dot > 0 && dot < dx * dx + dy * dy;
    }

    // visibility walk over real triangles; stepping through a hull edge
    // lands on the conflicting ghost
    int32_t Locate(const LatticePoint &p) {
        int32_t cur = last_real_;
        size_t guard = 4 * tris_.size() + 16;
        while (true) {
            Require(guard-- > 0, "point location walk did not terminate");
            const Tri &t = tris_[cur];
            int32_t out = kNullIndex;
            uint64_t r = rng_.Next() % 3;
            for (int k0 = 0; k0 < 3; ++k0) {
                int i = static_cast<int>((k0 + r) % 3);
                const LatticePoint &ea = pts_[t.v[(i + 1) % 3]];
                const LatticePoint &eb = pts_[t.v[(i + 2) % 3]];
                if (OrientSign(ea, eb, p) < 0) {
                    out = t.nbr[i];
                    break;
                }
            }
            if (out == kNullIndex) {
                return cur;
            }
            if (tris_[out].v[2] == kGhost) {
                return out;
            }
            cur = out;
        }
    }

    void Insert(int32_t pi) {
        const LatticePoint &p = pts_[pi];
        int32_t start = Locate(p);
        Require(Conflicts(start, p), "located triangle does not conflict");
        ++round_;
        cavity_.clear();
        cavity_.push_back(start);
        stamp_[start] = round_;
        for (size_t qi = 0; qi < cavity_.size(); ++qi) {
            const Tri &t = tris_[cavity_[qi]];
            for (int i = 0; i < 3; ++i) {
                int32_t u = t.nbr[i];
                if (stamp_[u] != round_ && Conflicts(u, p)) {
                    stamp_[u] = round_;
                    cavity_.push_back(u);
                }
            }
        }
        // boundary edges, directed so the fan triangle (p, x, y) comes out
        // counterclockwise; a ghost's real edge flips because the new real
        // triangle lies outside the old hull
        boundary_.clear();
        for (int32_t ti : cavity_) {
            const Tri &t = tris_[ti];
            for (int i = 0; i < 3; ++i) {
                int32_t u = t.nbr[i];
                if (stamp_[u] == round_) {
                    continue;
                }
                int32_t x = t.v[(i + 1) % 3];
                int32_t y = t.v[(i + 2) % 3];
                if (t.v[2] == kGhost && i == 2) {
                    std::swap(x, y);
                }
                boundary_.push_back({x, y, u, ti});
            }
        }
        int32_t base = static_cast<int32_t>(tris_.size());
        side_.clear();
        for (size_t j = 0; j < boundary_.size(); ++j) {
            const BEdge &e = boundary_[j];
            int32_t id = base + static_cast<int32_t>(j);
            tris_.push_back({{pi, e.x, e.y}, {e.outside, kNullIndex, kNullIndex}, true});
            stamp_.push_back(round_ - 1);
            // re-aim the outside triangle's link that pointed into the cavity
            Tri &o = tris_[e.outside];
            for (int s = 0; s < 3; ++s) {
                if (o.nbr[s] == e.inside) {
                    o.nbr[s] = id;
                }
            }
            // the side across (id.v[0], id.v[2]) is opposite slot 1 and joins
            // the fan owning y; across (v[0], v[1]) is slot 2 and joins the
            // fan owning x
            side_.push_back({e.y, id, 1});
            side_.push_back({e.x, id, 2});
        }
        std::sort(side_.begin(), side_.end(), [](const Side &l, const Side &r) {
            return l.vertex < r.vertex;
        });
        for (size_t j = 0; j + 1 < side_.size(); j += 2) {
            Require(side_[j].vertex == side_[j + 1].vertex,
                    "cavity boundary is not a closed loop");
            tris_[side_[j].tri].nbr[side_[j].slot] = side_[j + 1].tri;
            tris_[side_[j + 1].tri].nbr[side_[j + 1].slot] = side_[j].tri;
        }
        for (int32_t ti : cavity_) {
            tris_[ti].alive = false;
        }
        // normalize new ghosts so kGhost sits in slot 2; slot 0 always holds
        // the inserted point, and cyclic rotation keeps the vertex-opposite-
        // neighbor association
        for (size_t j = 0; j < boundary_.size(); ++j) {
            Tri &t = tris_[base + static_cast<int32_t>(j)];
            if (t.v[1] == kGhost) {
                Rotate(t, 2);
            }
            if (t.v[2] != kGhost) {
                last_real_ = base + static_cast<int32_t>(j);
            }
        }
    }

    static void Rotate(Tri &t, int shift) {
        int32_t v[3], nb[3];
        for (int i = 0; i < 3; ++i) {
            v[i] = t.v[(i + shift) % 3];
            nb[i] = t.nbr[(i + shift) % 3];
        }
        for (int i = 0; i < 3; ++i) {
            t.v[i] = v[i];
            t.nbr[i] = nb[i];
        }
    }

    struct BEdge {
        int32_t x, y, outside, inside;
    };
    struct Side {
        int32_t vertex, tri, slot;
    };

    const std::vector<LatticePoint> &pts_;
    SplitMix64 &rng_;
    std::vector<Tri> tris_;
    std::vector<int32_t> stamp_;
    std::vector<int32_t> cavity_;
    std::vector<BEdge> boundary_;
    std::vector<Side> side_;
    int32_t last_real_ = 0;
    int32_t round_ = 0;
};

}  // namespace

Triangulation Triangulate(const std::vector<LatticePoint> &pts, SplitMix64 &rng) {
    Require(pts.size() >= 3, "triangulation needs at least three points");
    Require(pts.size() <= size_t(INT32_MAX), "point count overflows indices");
    {
        std::vector<std::pair<int64_t, int64_t>> chk;
        chk.reserve(pts.size());
        for (const LatticePoint &p : pts) {
            Require(std::llabs(p.x) < (1LL << 27) && std::llabs(p.y) < (1LL << 27),
                    "point coordinates exceed the exactness bound");
            chk.emplace_back(p.x, p.y);
        }
        std::sort(chk.begin(), chk.end());
        Require(std::adjacent_find(chk.begin(), chk.end()) == chk.end(),
                "duplicate points in triangulation input");
    }
    Builder builder(pts, rng);
    builder.Run();
    return builder.Finish();
}

}  // namespace cherry
