#include "Instances.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "Delaunay.h"
#include "Hull3.h"
#include "Random.h"
#include "Types.h"

namespace cherry {

namespace {

constexpr Weight kMaxAbsWeight = 1000000;
constexpr int64_t kBigBox = 1000000;      // big-weights square side
constexpr int kSwShift = 26;              // small-weights lattice is 2^26 wide

const long double kPi = acosl(-1.0L);

int64_t ISqrt(__int128 v) {
    if (v <= 0) {
        return 0;
    }
    auto s = static_cast<int64_t>(sqrtl(static_cast<long double>(v)));
    while (s > 0 && static_cast<__int128>(s) * s > v) {
        --s;
    }
    while (static_cast<__int128>(s + 1) * (s + 1) <= v) {
        ++s;
    }
    return s;
}

// round(sqrt(num) / 2^shift), exact: w is the integer with
// (2w-1)^2 * 4^shift <= 4*num < (2w+1)^2 * 4^shift
int64_t RoundSqrtShifted(__int128 num, int shift) {
    int64_t s = ISqrt(num);
    int64_t w = shift == 0 ? s : (s + (1LL << (shift - 1))) >> shift;
    auto bound = [&](int64_t q) { return (static_cast<__int128>(q) * q) << (2 * shift); };
    __int128 four = num * 4;
    while (w > 0 && four < bound(2 * w - 1)) {
        --w;
    }
    while (four >= bound(2 * w + 1)) {
        ++w;
    }
    return w;
}

void SortEdges(Instance &inst) {
    std::sort(inst.edges.begin(), inst.edges.end(),
              [](const InstanceEdge &a, const InstanceEdge &b) {
                  return std::tie(a.u, a.v) < std::tie(b.u, b.v);
              });
}

std::vector<int32_t> RandomPerm(SplitMix64 &rng, int32_t n) {
    std::vector<int32_t> perm(n);
    for (int32_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    for (int32_t i = n - 1; i > 0; --i) {
        auto j = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

// distinct lattice points, duplicates re-drawn from the stream
std::vector<LatticePoint> DistinctSquarePoints(SplitMix64 &rng, int32_t n,
                                               int64_t side) {
    std::vector<LatticePoint> pts;
    pts.reserve(n);
    std::unordered_set<int64_t> used;
    used.reserve(static_cast<size_t>(n) * 2);
    while (static_cast<int32_t>(pts.size()) < n) {
        auto x = static_cast<int64_t>(rng.Below(static_cast<uint64_t>(side)));
        auto y = static_cast<int64_t>(rng.Below(static_cast<uint64_t>(side)));
        if (used.insert(x * side + y).second) {
            pts.push_back({x, y});
        }
    }
    return pts;
}

Instance DelaunayInstance(int32_t n, bool small_weights, uint64_t seed) {
    if (n < 4 || n % 2 != 0) {
        throw InputError("triangulated families need even n >= 4");
    }
    SplitMix64 rng(seed);
    int64_t side = small_weights ? (1LL << kSwShift) : kBigBox + 1;
    std::vector<LatticePoint> pts;
    Triangulation tr;
    for (int attempt = 0;; ++attempt) {
        Require(attempt < 32, "points kept degenerating");
        pts = DistinctSquarePoints(rng, n, side);
        try {
            tr = Triangulate(pts, rng);
            break;
        } catch (const InputError &) {
            continue;  // a fully collinear draw gets replaced wholesale
        }
    }
    Instance inst;
    inst.n = n;
    inst.edges.reserve(tr.edges.size());
    for (auto [u, v] : tr.edges) {
        int64_t dx = pts[u].x - pts[v].x;
        int64_t dy = pts[u].y - pts[v].y;
        __int128 d2 = static_cast<__int128>(dx) * dx + static_cast<__int128>(dy) * dy;
        // small weights: the lattice spans 2^26 over a sqrt(n)-sized square,
        // so true distance is sqrt(d2) * sqrt(n) / 2^26
        Weight w = small_weights ? RoundSqrtShifted(d2 * n, kSwShift)
                                 : RoundSqrtShifted(d2, 0);
        inst.edges.push_back({u, v, w});
    }
    SortEdges(inst);
    return inst;
}

Instance GeometricInstance(int32_t n, bool small_weights, uint64_t seed) {
    if (n < 2 || n % 2 != 0) {
        throw InputError("geometric families need even n >= 2");
    }
    SplitMix64 rng(seed);
    const int64_t side = small_weights ? (1LL << kSwShift) : kBigBox;
    std::vector<LatticePoint> pts;
    pts.reserve(n);
    for (int32_t i = 0; i < n; ++i) {
        pts.push_back({static_cast<int64_t>(rng.Below(static_cast<uint64_t>(side))),
                       static_cast<int64_t>(rng.Below(static_cast<uint64_t>(side)))});
    }
    // connect within radius side * sqrt(10 / (pi n)), average degree near 10
    auto r2 = static_cast<int64_t>(static_cast<long double>(side) * side * 10.0L /
                                   (kPi * n));
    auto weight_of = [&](int32_t u, int32_t v) -> Weight {
        int64_t dx = pts[u].x - pts[v].x;
        int64_t dy = pts[u].y - pts[v].y;
        __int128 d2 = static_cast<__int128>(dx) * dx + static_cast<__int128>(dy) * dy;
        return small_weights ? RoundSqrtShifted(d2 * n, kSwShift)
                             : RoundSqrtShifted(d2, 0);
    };
    std::vector<std::pair<int32_t, int32_t>> pairs;
    {
        const int64_t cell = std::max<int64_t>(1, ISqrt(r2));
        const int64_t cols = side / cell + 1;
        std::vector<std::vector<int32_t>> buckets(
            static_cast<size_t>(cols) * cols);
        auto bucket_of = [&](int32_t i) {
            return static_cast<size_t>((pts[i].x / cell) * cols + pts[i].y / cell);
        };
        for (int32_t i = 0; i < n; ++i) {
            int64_t bx = pts[i].x / cell, by = pts[i].y / cell;
            for (int64_t gx = std::max<int64_t>(0, bx - 1);
                 gx <= std::min(cols - 1, bx + 1); ++gx) {
                for (int64_t gy = std::max<int64_t>(0, by - 1);
                     gy <= std::min(cols - 1, by + 1); ++gy) {
                    for (int32_t j : buckets[static_cast<size_t>(gx) * cols + gy]) {
                        int64_t dx = pts[i].x - pts[j].x;
                        int64_t dy = pts[i].y - pts[j].y;
                        if (dx * dx + dy * dy <= r2) {
                            pairs.emplace_back(j, i);
                        }
                    }
                }
            }
            buckets[bucket_of(i)].push_back(i);
        }
    }
    std::vector<int32_t> perm = RandomPerm(rng, n);
    for (int32_t i = 0; i + 1 < n; i += 2) {
        int32_t u = perm[i], v = perm[i + 1];
        pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    Instance inst;
    inst.n = n;
    inst.edges.reserve(pairs.size());
    for (auto [u, v] : pairs) {
        inst.edges.push_back({u, v, weight_of(u, v)});
    }
    return inst;
}

Instance MaxcutInstance(int32_t n, bool small_weights, uint64_t seed) {
    if (n < 2 || n % 2 != 0) {
        throw InputError("gadget families need even n >= 2");
    }
    SplitMix64 rng(seed);
    // radius keeps rounded coordinates within 21 bits so three of them pack
    // into one dedup key
    const int64_t radius = (1LL << 20) - 1;
    auto s = std::max<int64_t>(4, (n + 15) / 6);  // nodes come out as 6s - 12
    std::vector<std::array<int32_t, 3>> faces;
    for (int attempt = 0;; ++attempt) {
        Require(attempt < 32, "sphere sampling kept degenerating");
        std::vector<SpherePoint> pts;
        std::unordered_set<int64_t> used;
        while (static_cast<int64_t>(pts.size()) < s) {
            double gx = rng.Gaussian(), gy = rng.Gaussian(), gz = rng.Gaussian();
            double norm = std::sqrt(gx * gx + gy * gy + gz * gz);
            if (norm < 1e-9) {
                continue;
            }
            SpherePoint p = {std::llround(gx / norm * radius),
                             std::llround(gy / norm * radius),
                             std::llround(gz / norm * radius)};
            int64_t key = (p.x + radius) + ((p.y + radius) << 21) + ((p.z + radius) << 42);
            if (used.insert(key).second) {
                pts.push_back(p);
            }
        }
        try {
            faces = ConvexHull3(pts);
            break;
        } catch (const InputError &) {
            continue;  // coplanar or collinear sample
        }
    }
    // face pairs sharing a triangulation edge become gadget edges; each face
    // is replaced by a zero-weight triangle, and the dual edge through the
    // face edge (v_j, v_j+1) attaches to triplet member j
    std::map<std::pair<int32_t, int32_t>, std::vector<std::pair<int32_t, int32_t>>>
        by_edge;
    for (size_t fi = 0; fi < faces.size(); ++fi) {
        for (int j = 0; j < 3; ++j) {
            int32_t a = faces[fi][j], b = faces[fi][(j + 1) % 3];
            by_edge[{std::min(a, b), std::max(a, b)}].emplace_back(
                static_cast<int32_t>(fi), j);
        }
    }
    Instance inst;
    inst.n = static_cast<int32_t>(3 * faces.size());
    for (size_t fi = 0; fi < faces.size(); ++fi) {
        auto base = static_cast<int32_t>(3 * fi);
        inst.edges.push_back({base, base + 1, 0});
        inst.edges.push_back({base + 1, base + 2, 0});
        inst.edges.push_back({base, base + 2, 0});
    }
    for (const auto &[edge, sides] : by_edge) {
        Require(sides.size() == 2, "hull edge not shared by two faces");
        Weight w = small_weights
                       ? static_cast<Weight>(rng.Below(2))
                       : static_cast<Weight>(rng.Below(kMaxAbsWeight + 1));
        int32_t u = 3 * sides[0].first + sides[0].second;
        int32_t v = 3 * sides[1].first + sides[1].second;
        inst.edges.push_back({std::min(u, v), std::max(u, v), w});
    }
    SortEdges(inst);
    return inst;
}

}  // namespace

std::string_view FamilyName(Family f) {
    switch (f) {
        case Family::kRandomDense: return "random-dense";
        case Family::kRandomSparse: return "random-sparse";
        case Family::kDelaunayBw: return "delaunay-bw";
        case Family::kDelaunaySw: return "delaunay-sw";
        case Family::kGeometricBw: return "geometric-bw";
        case Family::kGeometricSw: return "geometric-sw";
        case Family::kMaxcutBw: return "maxcut-bw";
        case Family::kMaxcutSw: return "maxcut-sw";
        case Family::kPointsFile: return "points-file";
    }
    return "";
}

std::optional<Family> ParseFamily(std::string_view name) {
    for (Family f : {Family::kRandomDense, Family::kRandomSparse, Family::kDelaunayBw,
                     Family::kDelaunaySw, Family::kGeometricBw, Family::kGeometricSw,
                     Family::kMaxcutBw, Family::kMaxcutSw, Family::kPointsFile}) {
        if (FamilyName(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

Instance GenRandom(int32_t n, double avg_degree, Weight lo, Weight hi,
                   uint64_t seed) {
    if (n < 2 || n % 2 != 0) {
        throw InputError("random families need even n >= 2");
    }
    SplitMix64 rng(seed);
    const int64_t complete = static_cast<int64_t>(n) * (n - 1) / 2;
    int64_t target = std::llround(n * avg_degree / 2.0);
    target = std::min(std::max<int64_t>(target, n / 2), complete);
    Instance inst;
    inst.n = n;
    // dense sizes fit a bitmap; sparse ones use a set
    const bool bitmap = n <= 20000;
    std::vector<bool> grid;
    std::unordered_set<int64_t> set;
    if (bitmap) {
        grid.assign(static_cast<size_t>(n) * n, false);
    } else {
        set.reserve(static_cast<size_t>(target) * 2);
    }
    auto insert = [&](int32_t u, int32_t v) {
        int64_t key = static_cast<int64_t>(u) * n + v;
        if (bitmap) {
            if (grid[static_cast<size_t>(key)]) {
                return false;
            }
            grid[static_cast<size_t>(key)] = true;
            return true;
        }
        return set.insert(key).second;
    };
    std::vector<int32_t> perm = RandomPerm(rng, n);
    for (int32_t i = 0; i + 1 < n; i += 2) {
        int32_t u = std::min(perm[i], perm[i + 1]);
        int32_t v = std::max(perm[i], perm[i + 1]);
        insert(u, v);
        inst.edges.push_back({u, v, rng.IntIn(lo, hi)});
    }
    while (static_cast<int64_t>(inst.edges.size()) < target) {
        auto u = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(n)));
        auto v = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(n)));
        if (u == v) {
            continue;
        }
        if (u > v) {
            std::swap(u, v);
        }
        if (insert(u, v)) {
            inst.edges.push_back({u, v, rng.IntIn(lo, hi)});
        }
    }
    SortEdges(inst);
    return inst;
}

Instance Generate(const GenSpec &spec) {
    switch (spec.family) {
        case Family::kRandomDense:
            return GenRandom(spec.n, spec.n / 10.0, -kMaxAbsWeight, kMaxAbsWeight,
                             spec.seed);
        case Family::kRandomSparse:
            return GenRandom(spec.n, 10.0, -kMaxAbsWeight, kMaxAbsWeight, spec.seed);
        case Family::kDelaunayBw:
            return DelaunayInstance(spec.n, false, spec.seed);
        case Family::kDelaunaySw:
            return DelaunayInstance(spec.n, true, spec.seed);
        case Family::kGeometricBw:
            return GeometricInstance(spec.n, false, spec.seed);
        case Family::kGeometricSw:
            return GeometricInstance(spec.n, true, spec.seed);
        case Family::kMaxcutBw:
            return MaxcutInstance(spec.n, false, spec.seed);
        case Family::kMaxcutSw:
            return MaxcutInstance(spec.n, true, spec.seed);
        case Family::kPointsFile:
            throw InputError("points-file instances come from a coordinate file");
    }
    throw InputError("unknown family");
}

Instance PointsFileInstance(const std::string &path, uint64_t seed) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open points file: " + path);
    }
    std::vector<std::pair<double, double>> orig;
    double x, y;
    while (in >> x >> y) {
        orig.emplace_back(x, y);
    }
    if (!in.eof()) {
        throw InputError("malformed points file: " + path);
    }
    if (orig.size() % 2 == 1) {
        orig.pop_back();
    }
    if (orig.size() < 4) {
        throw InputError("points file needs at least four usable points");
    }
    const auto n = static_cast<int32_t>(orig.size());
    double minx = orig[0].first, maxx = orig[0].first;
    double miny = orig[0].second, maxy = orig[0].second;
    for (auto [px, py] : orig) {
        minx = std::min(minx, px);
        maxx = std::max(maxx, px);
        miny = std::min(miny, py);
        maxy = std::max(maxy, py);
    }
    const double span = std::max(maxx - minx, maxy - miny);
    const double scale = span > 0 ? ((1LL << kSwShift) - 1) / span : 1.0;
    std::vector<LatticePoint> pts;
    pts.reserve(n);
    for (auto [px, py] : orig) {
        pts.push_back({std::llround((px - minx) * scale), std::llround((py - miny) * scale)});
    }
    // duplicates after rounding get nudged from the seed stream; the nudge
    // only affects the triangulation, weights use original coordinates
    SplitMix64 rng(seed);
    for (int attempt = 0;; ++attempt) {
        Require(attempt < 64, "points kept colliding after perturbation");
        std::map<std::pair<int64_t, int64_t>, int32_t> seen;
        bool clean = true;
        for (auto &p : pts) {
            if (!seen.emplace(std::make_pair(p.x, p.y), 0).second) {
                p.x = std::clamp<int64_t>(p.x + rng.IntIn(-8, 8), 0,
                                          (1LL << kSwShift) - 1);
                p.y = std::clamp<int64_t>(p.y + rng.IntIn(-8, 8), 0,
                                          (1LL << kSwShift) - 1);
                clean = false;
            }
        }
        if (clean) {
            break;
        }
    }
    Triangulation tr = Triangulate(pts, rng);
    Instance inst;
    inst.n = n;
    inst.edges.reserve(tr.edges.size());
    for (auto [u, v] : tr.edges) {
        double dx = orig[u].first - orig[v].first;
        double dy = orig[u].second - orig[v].second;
        inst.edges.push_back({u, v, std::llround(std::hypot(dx, dy))});
    }
    SortEdges(inst);
    return inst;
}

}  // namespace cherry
