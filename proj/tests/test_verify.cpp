#include <algorithm>

#include "Random.h"
#include "Verify.h"
#include "doctest.h"

using namespace cherry;

namespace {

Instance MakeInstance(int32_t n, std::vector<InstanceEdge> edges) {
    Instance inst;
    inst.n = n;
    inst.edges = std::move(edges);
    return inst;
}

// every perfect matching by brute force over edge subsets; cross-check for
// the memoized oracle on tiny instances
std::optional<Weight> NaiveBest(const Instance &inst) {
    size_t m = inst.edges.size();
    std::optional<Weight> best;
    for (uint64_t pick = 0; pick < (uint64_t(1) << m); ++pick) {
        std::vector<int32_t> deg(inst.n, 0);
        Weight w = 0;
        int32_t count = 0;
        for (size_t i = 0; i < m; ++i) {
            if (pick >> i & 1) {
                ++deg[inst.edges[i].u];
                ++deg[inst.edges[i].v];
                w += inst.edges[i].w;
                ++count;
            }
        }
        if (count != inst.n / 2) {
            continue;
        }
        if (std::all_of(deg.begin(), deg.end(), [](int32_t d) { return d == 1; })) {
            if (!best || w < *best) {
                best = w;
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("oracle on fixed instances") {
    auto single = OracleMwpm(MakeInstance(2, {{0, 1, 7}}));
    REQUIRE(single.has_value());
    CHECK(single->weight == 7);
    REQUIRE(single->matching.size() == 1);

    // K4 with two cheap disjoint pairs
    auto k4 = OracleMwpm(MakeInstance(4, {{0, 1, 1},
                                          {2, 3, 1},
                                          {0, 2, 10},
                                          {0, 3, 10},
                                          {1, 2, 10},
                                          {1, 3, 10}}));
    REQUIRE(k4.has_value());
    CHECK(k4->weight == 2);

    // two zero triangles bridged by one weight-5 edge
    auto bridge = OracleMwpm(MakeInstance(6, {{0, 1, 0},
                                              {1, 2, 0},
                                              {0, 2, 0},
                                              {3, 4, 0},
                                              {4, 5, 0},
                                              {3, 5, 0},
                                              {2, 3, 5}}));
    REQUIRE(bridge.has_value());
    CHECK(bridge->weight == 5);

    CHECK(!OracleMwpm(MakeInstance(3, {{0, 1, 1}})).has_value());
    CHECK(!OracleMwpm(MakeInstance(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}})).has_value());

    // negative weights are legal
    auto neg = OracleMwpm(MakeInstance(4, {{0, 1, -5}, {2, 3, -9}, {1, 2, 0}}));
    REQUIRE(neg.has_value());
    CHECK(neg->weight == -14);
}

TEST_CASE("oracle matches naive subset enumeration") {
    SplitMix64 rng(42);
    for (int it = 0; it < 200; ++it) {
        int32_t n = 2 + 2 * static_cast<int32_t>(rng.Below(4));  // 2..8
        Instance inst;
        inst.n = n;
        for (int32_t u = 0; u < n; ++u) {
            for (int32_t v = u + 1; v < n; ++v) {
                if (rng.Below(100) < 55) {
                    inst.edges.push_back({u, v, rng.IntIn(-50, 50)});
                }
            }
        }
        auto fast = OracleMwpm(inst);
        auto slow = NaiveBest(inst);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) {
            CHECK(fast->weight == *slow);
            // returned matching is perfect and achieves the weight
            std::vector<int32_t> deg(n, 0);
            Weight w = 0;
            for (auto [u, v] : fast->matching) {
                ++deg[u];
                ++deg[v];
                Weight best_uv = kInfWeight;
                for (const auto &e : inst.edges) {
                    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) {
                        best_uv = std::min(best_uv, e.w);
                    }
                }
                w += best_uv;
            }
            CHECK(w == fast->weight);
            CHECK(std::all_of(deg.begin(), deg.end(), [](int32_t d) { return d == 1; }));
        }
    }
}

TEST_CASE("max matching oracle") {
    CHECK(MaxMatchingOracle(4, {}) == 0);
    CHECK(MaxMatchingOracle(4, {{0, 1}, {2, 3}}) == 2);
    // C5: odd cycle caps at 2
    CHECK(MaxMatchingOracle(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}) == 2);
    // star: one edge max
    CHECK(MaxMatchingOracle(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}) == 1);
}

TEST_CASE("certificate checker accepts a hand-built optimal certificate") {
    // two nodes, w 2 (scale 4 domain: w4 = 8, y = 4 each)
    Instance inst = MakeInstance(2, {{0, 1, 2}});
    SolutionFile sol;
    sol.total_weight = 2;
    sol.matching = {{0, 1}};
    sol.has_duals = true;
    sol.dual_scale = 4;
    sol.node_duals = {4, 4};
    auto rep = CheckCertificate(inst, sol);
    CHECK(rep.ok);
    CHECK(rep.checked_duals);

    // same certificate in the unscaled domain
    sol.dual_scale = 1;
    sol.node_duals = {1, 1};
    CHECK(CheckCertificate(inst, sol).ok);
}

TEST_CASE("certificate checker accepts blossom duals") {
    // zero triangle pair with bridge: optimum 5
    Instance inst = MakeInstance(6, {{0, 1, 0},
                                     {1, 2, 0},
                                     {0, 2, 0},
                                     {3, 4, 0},
                                     {4, 5, 0},
                                     {3, 5, 0},
                                     {2, 3, 5}});
    SolutionFile sol;
    sol.total_weight = 5;
    sol.matching = {{0, 1}, {2, 3}, {4, 5}};
    sol.has_duals = true;
    // the optimal duals are half-integral, so the certificate lives in the
    // quadrupled domain: bridge w4 = 20, each triangle carries y_S = 10
    sol.dual_scale = 4;
    sol.node_duals = {0, 0, 0, 0, 0, 0};
    sol.blossom_duals.push_back({{0, 1, 2}, 10});
    sol.blossom_duals.push_back({{3, 4, 5}, 10});
    auto rep = CheckCertificate(inst, sol);
    CHECK(rep.ok);
}

TEST_CASE("certificate checker pinpoints violations") {
    Instance inst = MakeInstance(4, {{0, 1, 2}, {2, 3, 2}, {1, 2, 2}});
    SolutionFile sol;
    sol.total_weight = 4;
    sol.matching = {{0, 1}, {2, 3}};
    sol.has_duals = true;
    sol.dual_scale = 1;
    sol.node_duals = {1, 1, 1, 1};
    REQUIRE(CheckCertificate(inst, sol).ok);

    SUBCASE("perturbed node dual breaks tightness or feasibility") {
        sol.node_duals[0] = 2;  // matched edge (0,1) now has slack -1
        auto rep = CheckCertificate(inst, sol);
        CHECK(!rep.ok);
    }
    SUBCASE("wrong total weight") {
        sol.total_weight = 5;
        CHECK(!CheckCertificate(inst, sol).ok);
    }
    SUBCASE("non-perfect matching") {
        sol.matching = {{0, 1}};
        CHECK(!CheckCertificate(inst, sol).ok);
    }
    SUBCASE("matching uses a nonexistent edge") {
        sol.matching = {{0, 3}, {1, 2}};
        CHECK(!CheckCertificate(inst, sol).ok);
    }
    SUBCASE("broken duality sum") {
        sol.node_duals = {0, 1, 1, 0};  // sum 2 != weight 4
        CHECK(!CheckCertificate(inst, sol).ok);
    }
}

TEST_CASE("certificate checker rejects malformed blossom families") {
    Instance inst = MakeInstance(6, {{0, 1, 0},
                                     {1, 2, 0},
                                     {0, 2, 0},
                                     {3, 4, 0},
                                     {4, 5, 0},
                                     {3, 5, 0},
                                     {2, 3, 5}});
    SolutionFile sol;
    sol.total_weight = 5;
    sol.matching = {{0, 1}, {2, 3}, {4, 5}};
    sol.has_duals = true;
    sol.dual_scale = 4;
    sol.node_duals = {0, 0, 0, 0, 0, 0};

    SUBCASE("even-sized set") {
        sol.blossom_duals.push_back({{0, 1, 2, 3}, 1});
        CHECK(!CheckCertificate(inst, sol).ok);
    }
    SUBCASE("negative blossom dual") {
        sol.blossom_duals.push_back({{0, 1, 2}, -1});
        CHECK(!CheckCertificate(inst, sol).ok);
    }
    SUBCASE("crossing sets") {
        sol.blossom_duals.push_back({{0, 1, 2}, 10});
        sol.blossom_duals.push_back({{2, 3, 4}, 0});
        sol.blossom_duals.push_back({{3, 4, 5}, 10});
        CHECK(!CheckCertificate(inst, sol).ok);
    }
    SUBCASE("repeated member") {
        sol.blossom_duals.push_back({{0, 1, 1}, 1});
        CHECK(!CheckCertificate(inst, sol).ok);
    }
}

TEST_CASE("matching-only solutions skip dual checks") {
    Instance inst = MakeInstance(2, {{0, 1, 7}});
    SolutionFile sol;
    sol.total_weight = 7;
    sol.matching = {{0, 1}};
    auto rep = CheckCertificate(inst, sol);
    CHECK(rep.ok);
    CHECK(!rep.checked_duals);
}
