#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "Delaunay.h"
#include "DimacsIO.h"
#include "Instances.h"
#include "Random.h"
#include "Solver.h"
#include "Verify.h"
#include "doctest.h"

using namespace cherry;

namespace {

std::string Bytes(const Instance &inst) {
    std::ostringstream out;
    WriteDimacs(inst, out);
    return out.str();
}

Solution SolveChecked(const Instance &inst, SolverConfig cfg = {}) {
    Solver s(inst, cfg);
    Solution sol = s.Run();
    if (!sol.infeasible) {
        auto rep = CheckCertificate(inst, MakeSolutionFile(sol, true));
        for (const auto &v : rep.violations) {
            CAPTURE(v);
        }
        REQUIRE(rep.ok);
    }
    return sol;
}

int Orient(const LatticePoint &a, const LatticePoint &b, const LatticePoint &c) {
    __int128 det = (__int128)(b.x - a.x) * (c.y - a.y) -
                   (__int128)(b.y - a.y) * (c.x - a.x);
    return det > 0 ? 1 : det < 0 ? -1 : 0;
}

// positive when d lies strictly inside the circumcircle of the
// counterclockwise triangle (a, b, c)
int InCircle(const LatticePoint &a, const LatticePoint &b, const LatticePoint &c,
             const LatticePoint &d) {
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

int64_t FloorSqrt(int64_t v) {
    auto s = static_cast<int64_t>(sqrtl(static_cast<long double>(v)));
    while (s > 0 && s * s > v) {
        --s;
    }
    while ((s + 1) * (s + 1) <= v) {
        ++s;
    }
    return s;
}

std::vector<LatticePoint> DistinctPoints(SplitMix64 &rng, int32_t n, int64_t side) {
    std::vector<LatticePoint> pts;
    while (static_cast<int32_t>(pts.size()) < n) {
        LatticePoint p = {static_cast<int64_t>(rng.Below(side)),
                          static_cast<int64_t>(rng.Below(side))};
        bool dup = false;
        for (const auto &q : pts) {
            dup = dup || (q.x == p.x && q.y == p.y);
        }
        if (!dup) {
            pts.push_back(p);
        }
    }
    return pts;
}

struct TempFile {
    std::string path;
    TempFile(const std::string &name, const std::string &content) : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("families are deterministic per seed and differ across seeds") {
    for (Family f : {Family::kRandomDense, Family::kRandomSparse, Family::kDelaunayBw,
                     Family::kDelaunaySw, Family::kGeometricBw, Family::kGeometricSw,
                     Family::kMaxcutBw, Family::kMaxcutSw}) {
        CAPTURE(FamilyName(f));
        int32_t n = f == Family::kMaxcutBw || f == Family::kMaxcutSw ? 30 : 32;
        std::string once = Bytes(Generate({f, n, 424242}));
        std::string twice = Bytes(Generate({f, n, 424242}));
        CHECK(once == twice);
        CHECK(once != Bytes(Generate({f, n, 424243})));
    }
}

TEST_CASE("random families hit the target size exactly and carry a matching") {
    // the union construction tops the edge set up to round(n * avg / 2)
    Instance sparse = Generate({Family::kRandomSparse, 1000, 5});
    CHECK(sparse.n == 1000);
    CHECK(sparse.edges.size() == 5000);
    Instance dense = Generate({Family::kRandomDense, 100, 5});
    CHECK(dense.edges.size() == 500);
    for (const Instance *inst : {&sparse, &dense}) {
        bool in_range = true;
        bool ordered = true;
        for (const auto &e : inst->edges) {
            in_range = in_range && e.w >= -1000000 && e.w <= 1000000;
            ordered = ordered && e.u < e.v;
        }
        CHECK(in_range);
        CHECK(ordered);
        auto keys = [&] {
            std::vector<std::pair<int32_t, int32_t>> k;
            for (const auto &e : inst->edges) {
                k.emplace_back(e.u, e.v);
            }
            std::sort(k.begin(), k.end());
            return k;
        }();
        CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    }
    CHECK(!SolveChecked(sparse).infeasible);

    for (uint64_t seed = 1; seed <= 50; ++seed) {
        Instance tiny = GenRandom(4, 3.0, -5, 5, seed);
        CHECK(tiny.edges.size() <= 6);
        CHECK(OracleMwpm(tiny).has_value());
    }
}

TEST_CASE("triangulations satisfy the empty circumcircle property") {
    for (int32_t n : {50, 200, 500}) {
        CAPTURE(n);
        SplitMix64 coord_rng(1000 + n);
        std::vector<LatticePoint> pts = DistinctPoints(coord_rng, n, 1000000);
        SplitMix64 walk_a(1), walk_b(77);
        Triangulation tr = Triangulate(pts, walk_a);
        // walk tie-breaks must not leak into the result
        Triangulation again = Triangulate(pts, walk_b);
        CHECK(tr.triangles == again.triangles);
        CHECK(tr.edges == again.edges);

        std::vector<char> seen(n, 0);
        bool oriented = true;
        bool empty = true;
        for (const auto &t : tr.triangles) {
            const LatticePoint &a = pts[t[0]], &b = pts[t[1]], &c = pts[t[2]];
            oriented = oriented && Orient(a, b, c) > 0;
            seen[t[0]] = seen[t[1]] = seen[t[2]] = 1;
            for (int32_t p = 0; p < n && empty; ++p) {
                if (p == t[0] || p == t[1] || p == t[2]) {
                    continue;
                }
                empty = InCircle(a, b, c, pts[p]) <= 0;
            }
        }
        CHECK(oriented);
        CHECK(empty);
        CHECK(std::count(seen.begin(), seen.end(), 1) == n);

        std::vector<std::pair<int32_t, int32_t>> from_tris;
        for (const auto &t : tr.triangles) {
            for (int e = 0; e < 3; ++e) {
                int32_t u = t[e], v = t[(e + 1) % 3];
                from_tris.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
        std::sort(from_tris.begin(), from_tris.end());
        from_tris.erase(std::unique(from_tris.begin(), from_tris.end()),
                        from_tris.end());
        CHECK(tr.edges == from_tris);
        CHECK(tr.edges.size() <= static_cast<size_t>(3 * n - 6));
    }
}

TEST_CASE("delaunay families scale weights with the box") {
    Instance bw = Generate({Family::kDelaunayBw, 200, 9});
    Weight max_w = 0;
    bool nonneg = true;
    for (const auto &e : bw.edges) {
        nonneg = nonneg && e.w >= 0;
        max_w = std::max(max_w, e.w);
    }
    CHECK(nonneg);
    CHECK(max_w <= 1414214);  // box diagonal, rounded

    // the small-weights box has unit expected nearest-neighbor spacing
    Instance sw = Generate({Family::kDelaunaySw, 10000, 9});
    std::vector<Weight> ws;
    for (const auto &e : sw.edges) {
        CHECK(e.w >= 0);
        ws.push_back(e.w);
    }
    REQUIRE(!ws.empty());
    std::nth_element(ws.begin(), ws.begin() + ws.size() / 2, ws.end());
    CHECK(ws[ws.size() / 2] <= 3);
}

TEST_CASE("geometric family connects the radius neighborhood plus a matching") {
    const int64_t side = 1000000;
    const long double pi = acosl(-1.0L);
    for (uint64_t seed : {11u, 12u, 13u}) {
        for (int32_t n : {10, 50}) {
            CAPTURE(seed);
            CAPTURE(n);
            Instance inst = Generate({Family::kGeometricBw, n, seed});
            // replay of the documented stream layout: coordinates, then the
            // matching permutation
            SplitMix64 rng(seed);
            std::vector<LatticePoint> pts;
            for (int32_t i = 0; i < n; ++i) {
                pts.push_back({static_cast<int64_t>(rng.Below(side)),
                               static_cast<int64_t>(rng.Below(side))});
            }
            auto r2 = static_cast<int64_t>(static_cast<long double>(side) * side *
                                           10.0L / (pi * n));
            if (n == 10) {
                CHECK(FloorSqrt(r2) == 564189);
            }
            std::vector<int32_t> perm(n);
            for (int32_t i = 0; i < n; ++i) {
                perm[i] = i;
            }
            for (int32_t i = n - 1; i > 0; --i) {
                auto j = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(i) + 1));
                std::swap(perm[i], perm[j]);
            }
            std::vector<std::pair<int32_t, int32_t>> expect;
            for (int32_t u = 0; u < n; ++u) {
                for (int32_t v = u + 1; v < n; ++v) {
                    int64_t dx = pts[u].x - pts[v].x;
                    int64_t dy = pts[u].y - pts[v].y;
                    if (dx * dx + dy * dy <= r2) {
                        expect.emplace_back(u, v);
                    }
                }
            }
            for (int32_t i = 0; i + 1 < n; i += 2) {
                expect.emplace_back(std::min(perm[i], perm[i + 1]),
                                    std::max(perm[i], perm[i + 1]));
            }
            std::sort(expect.begin(), expect.end());
            expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
            REQUIRE(inst.edges.size() == expect.size());
            for (size_t i = 0; i < expect.size(); ++i) {
                CHECK(inst.edges[i].u == expect[i].first);
                CHECK(inst.edges[i].v == expect[i].second);
                int64_t dx = pts[expect[i].first].x - pts[expect[i].second].x;
                int64_t dy = pts[expect[i].first].y - pts[expect[i].second].y;
                auto w = static_cast<Weight>(llroundl(
                    sqrtl(static_cast<long double>(dx * dx + dy * dy))));
                CHECK(inst.edges[i].w == w);
            }
        }
    }

    // paper density: average degree near ten
    Instance big = Generate({Family::kGeometricBw, 10000, 3});
    CHECK(big.edges.size() > 45000);
    CHECK(big.edges.size() < 60000);
}

TEST_CASE("maxcut gadgets are 3-regular triplet expansions") {
    // four sphere points give the tetrahedron: four faces, twelve nodes
    Instance tetra = Generate({Family::kMaxcutBw, 12, 21});
    CHECK(tetra.n == 12);
    CHECK(tetra.edges.size() == 18);
    // the requested size rounds to the nearest gadget size
    CHECK(Generate({Family::kMaxcutBw, 14, 21}).n == 12);
    CHECK(Generate({Family::kMaxcutBw, 16, 21}).n == 18);

    for (auto [f, n] : {std::pair<Family, int32_t>{Family::kMaxcutBw, 12},
                        {Family::kMaxcutSw, 48},
                        {Family::kMaxcutBw, 90}}) {
        CAPTURE(FamilyName(f));
        CAPTURE(n);
        Instance inst = Generate({f, n, 33});
        CHECK(inst.n == n);
        CHECK(inst.edges.size() == static_cast<size_t>(n + n / 2));
        std::vector<int32_t> degree(inst.n, 0);
        bool intra_zero = true;
        bool cross_ok = true;
        int64_t cross = 0;
        for (const auto &e : inst.edges) {
            ++degree[e.u];
            ++degree[e.v];
            if (e.u / 3 == e.v / 3) {
                intra_zero = intra_zero && e.w == 0;
            } else {
                ++cross;
                bool in_range = f == Family::kMaxcutSw ? (e.w == 0 || e.w == 1)
                                                       : (e.w >= 0 && e.w <= 1000000);
                cross_ok = cross_ok && in_range;
            }
        }
        CHECK(intra_zero);
        CHECK(cross_ok);
        CHECK(cross == n / 2);
        CHECK(std::count(degree.begin(), degree.end(), 3) == inst.n);
    }
}

TEST_CASE("every family stays feasible at oracle sizes") {
    for (Family f : {Family::kRandomDense, Family::kRandomSparse, Family::kDelaunayBw,
                     Family::kDelaunaySw, Family::kGeometricBw, Family::kGeometricSw}) {
        for (int32_t n = 4; n <= 16; n += 2) {
            for (uint64_t seed = 1; seed <= 3; ++seed) {
                CAPTURE(FamilyName(f));
                CAPTURE(n);
                CAPTURE(seed);
                Instance inst = Generate({f, n, seed});
                auto oracle = OracleMwpm(inst);
                REQUIRE(oracle.has_value());
                CHECK(SolveChecked(inst).total_weight == oracle->weight);
            }
        }
    }
    for (Family f : {Family::kMaxcutBw, Family::kMaxcutSw}) {
        for (int32_t n : {12, 14, 16}) {
            for (uint64_t seed = 1; seed <= 3; ++seed) {
                CAPTURE(FamilyName(f));
                CAPTURE(n);
                CAPTURE(seed);
                Instance inst = Generate({f, n, seed});
                auto oracle = OracleMwpm(inst);
                REQUIRE(oracle.has_value());
                CHECK(SolveChecked(inst).total_weight == oracle->weight);
            }
        }
    }
}

TEST_CASE("generator rejects unusable requests") {
    CHECK_THROWS_AS(Generate({Family::kPointsFile, 4, 1}), InputError);
    CHECK_THROWS_AS(Generate({Family::kRandomSparse, 5, 1}), InputError);
    CHECK_THROWS_AS(Generate({Family::kDelaunayBw, 2, 1}), InputError);
    CHECK(ParseFamily("delaunay-sw") == Family::kDelaunaySw);
    CHECK(!ParseFamily("no-such-family").has_value());
}

TEST_CASE("points files drop odd tails and keep original distances") {
    TempFile five("tmp_points_five.txt",
                  "0 0\n10 1\n3 9\n9 8\n100 100\n");  // odd count, last dropped
    Instance inst = PointsFileInstance(five.path, 7);
    CHECK(inst.n == 4);
    CHECK(Bytes(inst) == Bytes(PointsFileInstance(five.path, 7)));

    TempFile square("tmp_points_square.txt", "0 0\n1000 0\n0 1000\n1000 1000\n");
    Instance sq = PointsFileInstance(square.path, 7);
    CHECK(sq.n == 4);
    REQUIRE(sq.edges.size() == 5);
    std::vector<Weight> ws;
    for (const auto &e : sq.edges) {
        ws.push_back(e.w);
    }
    std::sort(ws.begin(), ws.end());
    CHECK(ws == std::vector<Weight>{1000, 1000, 1000, 1000, 1414});

    // duplicates only perturb the triangulation; the coincident pair keeps
    // its true distance of zero
    TempFile dup("tmp_points_dup.txt", "0 0\n0 0\n5 0\n0 5\n");
    Instance pd = PointsFileInstance(dup.path, 7);
    CHECK(pd.n == 4);
    Weight min_w = pd.edges.front().w;
    for (const auto &e : pd.edges) {
        min_w = std::min(min_w, e.w);
    }
    CHECK(min_w == 0);
    CHECK(!SolveChecked(pd).infeasible);

    TempFile three("tmp_points_three.txt", "0 0\n1 0\n0 1\n");
    CHECK_THROWS_AS(PointsFileInstance(three.path, 7), InputError);
    TempFile bad("tmp_points_bad.txt", "0 0\n1 zebra\n0 1\n2 2\n");
    CHECK_THROWS_AS(PointsFileInstance(bad.path, 7), InputError);
    CHECK_THROWS_AS(PointsFileInstance("tmp_points_missing.txt", 7), InputError);
}

TEST_CASE("a random points file solves with a verified certificate") {
    SplitMix64 rng(404);
    std::ostringstream content;
    for (int i = 0; i < 200; ++i) {
        content << rng.UnitDouble() * 1000.0 << " " << rng.UnitDouble() * 1000.0
                << "\n";
    }
    TempFile file("tmp_points_random.txt", content.str());
    Instance inst = PointsFileInstance(file.path, 5);
    CHECK(inst.n == 200);
    Solution sol = SolveChecked(inst);
    CHECK(!sol.infeasible);
}
