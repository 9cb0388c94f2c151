#include <algorithm>
#include <string_view>
#include <vector>

#include "Random.h"
#include "Solver.h"
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

// solves and, when feasible, insists the emitted certificate verifies
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

Instance RandomInstance(SplitMix64 &rng, int32_t n, int32_t density_pct,
                        Weight lo, Weight hi) {
    Instance inst;
    inst.n = n;
    for (int32_t u = 0; u < n; ++u) {
        for (int32_t v = u + 1; v < n; ++v) {
            if (rng.Below(100) < static_cast<uint64_t>(density_pct)) {
                inst.edges.push_back({u, v, rng.IntIn(lo, hi)});
            }
        }
    }
    return inst;
}

// zero triangles bridged by positive edges plus a few cheap chords; the
// chords connect triangle interiors, which is what drives nested shrinks
// and later expansions
Instance TriangleChain(SplitMix64 &rng, int32_t k) {
    Instance inst;
    inst.n = 3 * k;
    for (int32_t i = 0; i < k; ++i) {
        int32_t b = 3 * i;
        inst.edges.push_back({b, b + 1, 0});
        inst.edges.push_back({b + 1, b + 2, 0});
        inst.edges.push_back({b, b + 2, 0});
        if (i + 1 < k) {
            inst.edges.push_back({b + 2, b + 3, static_cast<Weight>(1 + rng.Below(6))});
        }
    }
    for (int32_t t = 0; t < k; ++t) {
        auto u = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(inst.n)));
        auto v = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(inst.n)));
        if (u == v) {
            continue;
        }
        if (u > v) {
            std::swap(u, v);
        }
        inst.edges.push_back({u, v, static_cast<Weight>(rng.Below(3))});
    }
    return inst;
}

// zero-slack original edges recomputed from constant state only; mirrors the
// stored-slack bases without touching the solver's caches
std::vector<std::pair<int32_t, int32_t>> TightOriginalEdges(const Graph &g) {
    auto chain = [&](int32_t v) {
        std::vector<int32_t> out;
        for (NodeId cur(v); cur; cur = g.nodes[cur.v].blossom_parent) {
            out.push_back(cur.v);
        }
        return out;
    };
    auto offset_of = [&](int32_t top) -> Weight {
        const Node &nd = g.nodes[top];
        if (!nd.tree) {
            return 0;
        }
        if (IsPlusish(nd.label)) {
            return g.tree_duals[nd.tree.v];
        }
        if (nd.label == Label::kMinus) {
            return -g.tree_duals[nd.tree.v];
        }
        return 0;
    };
    std::vector<std::pair<int32_t, int32_t>> tight;
    for (int32_t ei = 0; ei < g.original_m; ++ei) {
        const Edge &ed = g.edges[ei];
        auto cu = chain(ed.end_u);
        auto cv = chain(ed.end_v);
        Weight s;
        if (cu.back() == cv.back()) {
            // loop: slack froze when the chains first met
            int32_t meet = -1;
            for (int32_t id : cv) {
                if (std::find(cu.begin(), cu.end(), id) != cu.end()) {
                    meet = id;
                    break;
                }
            }
            REQUIRE(meet >= 0);
            s = ed.lazy_slack - 2 * g.nodes[meet].y_tree_at_birth;
        } else {
            s = ed.lazy_slack - offset_of(cu.back()) - offset_of(cv.back());
        }
        if (s == 0) {
            tight.push_back({ed.end_u, ed.end_v});
        }
    }
    return tight;
}

}  // namespace

TEST_CASE("fixed instances solve to the oracle optimum") {
    auto single = SolveChecked(MakeInstance(2, {{0, 1, 7}}));
    CHECK(!single.infeasible);
    CHECK(single.total_weight == 7);
    REQUIRE(single.matching.size() == 1);

    // path forcing the cheap middle edge to lose
    auto p4 = SolveChecked(MakeInstance(4, {{0, 1, 2}, {1, 2, 1}, {2, 3, 2}}));
    CHECK(p4.total_weight == 4);

    auto k4 = SolveChecked(MakeInstance(4, {{0, 1, 1},
                                            {2, 3, 1},
                                            {0, 2, 10},
                                            {0, 3, 10},
                                            {1, 2, 10},
                                            {1, 3, 10}}));
    CHECK(k4.total_weight == 2);

    // even cycle: two alternating classes, the cheaper one wins
    auto c6 = SolveChecked(MakeInstance(6, {{0, 1, 1},
                                            {1, 2, 2},
                                            {2, 3, 3},
                                            {3, 4, 4},
                                            {4, 5, 5},
                                            {5, 0, 6}}));
    CHECK(c6.total_weight == 9);

    // parallel edges keep the cheaper copy
    auto par = SolveChecked(MakeInstance(2, {{0, 1, 5}, {0, 1, 3}}));
    CHECK(par.total_weight == 3);

    auto neg = SolveChecked(MakeInstance(4, {{0, 1, -5}, {2, 3, -9}, {1, 2, 0}}));
    CHECK(neg.total_weight == -14);

    // weights at the input bound survive the quadrupled domain exactly
    Weight big = Weight(1) << 40;
    auto wide = SolveChecked(MakeInstance(4, {{0, 1, big}, {2, 3, -big}, {0, 2, 0}}));
    CHECK(wide.total_weight == 0);
}

TEST_CASE("infeasible instances are reported") {
    CHECK(SolveChecked(MakeInstance(3, {{0, 1, 1}, {1, 2, 1}})).infeasible);
    CHECK(SolveChecked(MakeInstance(2, {})).infeasible);
    CHECK(SolveChecked(MakeInstance(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}})).infeasible);
    // two odd components
    CHECK(SolveChecked(MakeInstance(6, {{0, 1, 1},
                                        {1, 2, 1},
                                        {0, 2, 1},
                                        {3, 4, 1},
                                        {4, 5, 1},
                                        {3, 5, 1},
                                        {2, 3, 1}}))
              .infeasible == false);
    CHECK(SolveChecked(MakeInstance(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}}))
              .infeasible);
}

TEST_CASE("bridged zero triangles build a supernode") {
    Instance inst = MakeInstance(6, {{0, 1, 0},
                                     {1, 2, 0},
                                     {0, 2, 0},
                                     {3, 4, 0},
                                     {4, 5, 0},
                                     {3, 5, 0},
                                     {2, 3, 5}});
    SolverConfig cfg;
    cfg.init = InitMode::kGreedy;  // leave the odd cycles to the blossom phase
    auto sol = SolveChecked(inst, cfg);
    CHECK(sol.total_weight == 5);
    CHECK(sol.stats.shrinks >= 1);
}

TEST_CASE("solution files fall back to the original scale when exact") {
    auto sol = SolveChecked(MakeInstance(2, {{0, 1, 8}}));
    SolutionFile f = MakeSolutionFile(sol, true);
    CHECK(f.dual_scale == 1);
    CHECK(f.total_weight == 8);
}

TEST_CASE("solution files keep the quarter scale when duals need it") {
    // unit K4 admits no integral dual certificate: the matched pair forces
    // y_u + y_v = 1, and no single odd set can absorb the resulting parity
    Instance inst = MakeInstance(
        4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    SolverConfig cfg;
    cfg.init = InitMode::kGreedy;
    auto sol = SolveChecked(inst, cfg);
    CHECK(sol.total_weight == 2);
    SolutionFile f = MakeSolutionFile(sol, true);
    CHECK(f.dual_scale == 4);
}

TEST_CASE("configurations agree pairwise") {
    SplitMix64 rng(2024);
    std::vector<SolverConfig> cfgs;
    {
        SolverConfig c;
        c.init = InitMode::kGreedy;
        cfgs.push_back(c);
        c.init = InitMode::kFractional;
        cfgs.push_back(c);
        c.init = InitMode::kFractionalThresholded;
        c.init_threshold = 4;
        cfgs.push_back(c);
        c.init = InitMode::kGreedy;
        c.dual_mode = DualMode::kLp;
        cfgs.push_back(c);
        c.init = InitMode::kFractional;
        cfgs.push_back(c);
    }
    for (int it = 0; it < 60; ++it) {
        int32_t n = 4 + 2 * static_cast<int32_t>(rng.Below(6));  // 4..14
        Instance inst = RandomInstance(rng, n, 60, -20, 20);
        auto oracle = OracleMwpm(inst);
        for (const auto &cfg : cfgs) {
            auto sol = SolveChecked(inst, cfg);
            REQUIRE(sol.infeasible == !oracle.has_value());
            if (oracle) {
                CHECK(sol.total_weight == oracle->weight);
            }
        }
    }
}

TEST_CASE("randomized instances match the oracle") {
    SplitMix64 rng(101);
    int64_t feasible = 0;
    for (int it = 0; it < 1200; ++it) {
        int32_t n = 4 + static_cast<int32_t>(rng.Below(13));  // 4..16, odd allowed
        int32_t density = 25 + static_cast<int32_t>(rng.Below(70));
        Weight lo = 0, hi = 50;
        switch (it % 3) {
            case 0:
                lo = -50;
                break;
            case 1:
                hi = 4;  // tie-heavy, drives shrinking and expanding
                break;
            default:
                break;
        }
        Instance inst = RandomInstance(rng, n, density, lo, hi);
        auto oracle = OracleMwpm(inst);
        auto sol = SolveChecked(inst);
        REQUIRE(sol.infeasible == !oracle.has_value());
        if (oracle) {
            ++feasible;
            CHECK(sol.total_weight == oracle->weight);
        }
    }
    // the corpus must genuinely exercise the feasible path
    CHECK(feasible > 400);
}

TEST_CASE("audited runs keep every invariant and stay maximum on tight edges") {
    SplitMix64 rng(555);
    int64_t expands = 0, shrinks = 0, grow_ins = 0;
    int32_t deepest = 0;
    for (int it = 0; it < 250; ++it) {
        Instance inst;
        switch (it % 3) {
            case 0: {
                int32_t n = 4 + static_cast<int32_t>(rng.Below(13));
                int32_t density = 30 + static_cast<int32_t>(rng.Below(60));
                Weight lo = it % 2 == 0 ? -8 : 0;
                inst = RandomInstance(rng, n, density, lo, 8);
                break;
            }
            case 1: {
                // heavy ties make odd tight cycles common
                int32_t n = 8 + 2 * static_cast<int32_t>(rng.Below(5));
                inst = RandomInstance(rng, n, 85, 0, 2);
                break;
            }
            default:
                inst = TriangleChain(rng, 4 + 2 * static_cast<int32_t>(rng.Below(2)));
                break;
        }
        SolverConfig cfg;
        cfg.init = InitMode::kGreedy;  // maximize blossom-phase traffic
        Solver s(inst, cfg);
        s.phase_hook = [&](const char *phase) {
            s.AuditForest();
            if (std::string_view(phase) == "primal") {
                auto tight = TightOriginalEdges(s.graph());
                CHECK(s.MatchedPairCount() == MaxMatchingOracle(inst.n, tight));
            }
        };
        Solution sol = s.Run();
        expands += sol.stats.expands;
        shrinks += sol.stats.shrinks;
        grow_ins += sol.stats.grow_ins;
        deepest = std::max(deepest, sol.stats.max_node_depth);
        auto oracle = OracleMwpm(inst);
        REQUIRE(sol.infeasible == !oracle.has_value());
        if (oracle) {
            CHECK(sol.total_weight == oracle->weight);
        }
    }
    // the audited corpus has to reach the interesting machinery
    CHECK(shrinks > 200);
    CHECK(grow_ins > 200);
    CHECK(expands >= 5);
    CHECK(deepest >= 2);
}

TEST_CASE("zero timeout aborts the blossom phase") {
    // greedy cannot finish this one, so the main loop must start
    Instance inst = MakeInstance(6, {{0, 1, 0},
                                     {1, 2, 0},
                                     {2, 3, 0},
                                     {3, 4, 0},
                                     {4, 0, 0},
                                     {0, 5, 4}});
    SolverConfig cfg;
    cfg.init = InitMode::kGreedy;
    cfg.timeout_seconds = 0.0;
    Solver s(inst, cfg);
    CHECK_THROWS_AS(s.Run(), TimeoutError);
}

TEST_CASE("larger sparse instances cross-check between dual modes") {
    SplitMix64 rng(31337);
    for (int it = 0; it < 6; ++it) {
        int32_t n = 80 + 20 * it;
        Instance inst;
        inst.n = n;
        // random perfect matching guarantees feasibility
        std::vector<int32_t> perm(n);
        for (int32_t i = 0; i < n; ++i) {
            perm[i] = i;
        }
        for (int32_t i = n - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng.Below(static_cast<uint64_t>(i) + 1)]);
        }
        for (int32_t i = 0; i + 1 < n; i += 2) {
            inst.edges.push_back({perm[i], perm[i + 1], rng.IntIn(0, 1000)});
        }
        for (int32_t k = 0; k < 4 * n; ++k) {
            int32_t u = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(n)));
            int32_t v = static_cast<int32_t>(rng.Below(static_cast<uint64_t>(n)));
            if (u != v) {
                inst.edges.push_back({std::min(u, v), std::max(u, v), rng.IntIn(0, 1000)});
            }
        }
        SolverConfig cc;
        cc.dual_mode = DualMode::kComponents;
        SolverConfig lp;
        lp.dual_mode = DualMode::kLp;
        auto a = SolveChecked(inst, cc);
        auto b = SolveChecked(inst, lp);
        REQUIRE(!a.infeasible);
        REQUIRE(!b.infeasible);
        CHECK(a.total_weight == b.total_weight);
    }
}
