#include "Verify.h"

#include <algorithm>
#include <memory>
#include <unordered_map>

namespace cherry {

namespace {

// dense min-weight adjacency; parallel edges collapse to the cheapest one,
// which is the only one a minimum-weight matching can use
struct DenseWeights {
    int32_t n;
    std::vector<Weight> w;  // n*n, kInfWeight where absent

    DenseWeights(int32_t n_in, const std::vector<InstanceEdge> &edges) : n(n_in) {
        w.assign(static_cast<size_t>(n) * n, kInfWeight);
        for (const auto &e : edges) {
            Weight &slot = w[static_cast<size_t>(e.u) * n + e.v];
            slot = std::min(slot, e.w);
            w[static_cast<size_t>(e.v) * n + e.u] = slot;
        }
    }

    Weight At(int32_t u, int32_t v) const { return w[static_cast<size_t>(u) * n + v]; }
};

Weight MwpmRec(uint32_t uncovered, const DenseWeights &dw, std::vector<Weight> &memo,
               std::vector<uint8_t> &seen) {
    if (uncovered == 0) {
        return 0;
    }
    if (seen[uncovered]) {
        return memo[uncovered];
    }
    seen[uncovered] = 1;
    int32_t v = __builtin_ctz(uncovered);
    Weight best = kInfWeight;
    uint32_t rest = uncovered & ~(1u << v);
    for (uint32_t m = rest; m != 0; m &= m - 1) {
        int32_t u = __builtin_ctz(m);
        Weight wvu = dw.At(v, u);
        if (wvu == kInfWeight) {
            continue;
        }
        Weight sub = MwpmRec(rest & ~(1u << u), dw, memo, seen);
        if (sub != kInfWeight && sub + wvu < best) {
            best = sub + wvu;
        }
    }
    memo[uncovered] = best;
    return best;
}

int32_t MaxMatchRec(uint32_t uncovered, const std::vector<uint32_t> &adj,
                    std::vector<int8_t> &memo) {
    if (uncovered == 0) {
        return 0;
    }
    if (memo[uncovered] >= 0) {
        return memo[uncovered];
    }
    int32_t v = __builtin_ctz(uncovered);
    uint32_t rest = uncovered & ~(1u << v);
    int32_t best = MaxMatchRec(rest, adj, memo);  // leave v uncovered
    for (uint32_t m = rest & adj[v]; m != 0; m &= m - 1) {
        int32_t u = __builtin_ctz(m);
        int32_t sub = 1 + MaxMatchRec(rest & ~(1u << u), adj, memo);
        best = std::max(best, sub);
    }
    memo[uncovered] = static_cast<int8_t>(best);
    return best;
}

}  // namespace

std::optional<OracleResult> OracleMwpm(const Instance &inst) {
    Require(inst.n <= 20, "oracle limited to n <= 20");
    if (inst.n % 2 != 0) {
        return std::nullopt;
    }
    DenseWeights dw(inst.n, inst.edges);
    uint32_t full = (1u << inst.n) - 1;
    std::vector<Weight> memo(full + 1, 0);
    std::vector<uint8_t> seen(full + 1, 0);
    Weight best = MwpmRec(full, dw, memo, seen);
    if (best == kInfWeight) {
        return std::nullopt;
    }
    OracleResult res;
    res.weight = best;
    // replay the optimal decisions to reconstruct one optimal matching;
    // the empty state is a valid target even though the recursion never memoizes it
    seen[0] = 1;
    uint32_t uncovered = full;
    while (uncovered != 0) {
        int32_t v = __builtin_ctz(uncovered);
        uint32_t rest = uncovered & ~(1u << v);
        Weight want = memo[uncovered];
        for (uint32_t m = rest; m != 0; m &= m - 1) {
            int32_t u = __builtin_ctz(m);
            Weight wvu = dw.At(v, u);
            if (wvu == kInfWeight) {
                continue;
            }
            uint32_t next = rest & ~(1u << u);
            if (seen[next] && memo[next] != kInfWeight && memo[next] + wvu == want) {
                res.matching.emplace_back(v, u);
                uncovered = next;
                break;
            }
        }
        Require(uncovered != (rest | (1u << v)), "oracle reconstruction stuck");
    }
    return res;
}

int32_t MaxMatchingOracle(int32_t n, const std::vector<std::pair<int32_t, int32_t>> &edges) {
    Require(n <= 20, "oracle limited to n <= 20");
    std::vector<uint32_t> adj(n, 0);
    for (const auto &[u, v] : edges) {
        if (u != v) {
            adj[u] |= 1u << v;
            adj[v] |= 1u << u;
        }
    }
    uint32_t full = (1u << n) - 1;
    std::vector<int8_t> memo(full + 1, -1);
    return MaxMatchRec(full, adj, memo);
}

CertificateReport CheckCertificate(const Instance &inst, const SolutionFile &sol) {
    CertificateReport rep;
    if (sol.infeasible) {
        rep.Fail("solution declares infeasibility; nothing to certify");
        return rep;
    }

    // matching structure: perfect, endpoints distinct, edges exist
    std::vector<int32_t> cover(inst.n, 0);
    std::unique_ptr<DenseWeights> dense;
    std::unordered_map<int64_t, Weight> cheapest;
    if (inst.n <= 2048) {
        dense = std::make_unique<DenseWeights>(inst.n, inst.edges);
    } else {
        for (const auto &e : inst.edges) {
            int64_t key = std::min(e.u, e.v) * int64_t(inst.n) + std::max(e.u, e.v);
            auto it = cheapest.find(key);
            if (it == cheapest.end() || e.w < it->second) {
                cheapest[key] = e.w;
            }
        }
    }
    auto pair_weight = [&](int32_t u, int32_t v) -> Weight {
        if (dense) {
            return dense->At(u, v);
        }
        int64_t key = std::min(u, v) * int64_t(inst.n) + std::max(u, v);
        auto it = cheapest.find(key);
        return it == cheapest.end() ? kInfWeight : it->second;
    };

    Weight primal = 0;
    for (const auto &[u, v] : sol.matching) {
        if (u < 0 || u >= inst.n || v < 0 || v >= inst.n || u == v) {
            rep.Fail("matched pair (" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                     ") is out of range");
            return rep;
        }
        Weight w = pair_weight(u, v);
        if (w == kInfWeight) {
            rep.Fail("matched pair (" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                     ") has no edge");
            continue;
        }
        primal += w;
        ++cover[u];
        ++cover[v];
    }
    for (int32_t v = 0; v < inst.n; ++v) {
        if (cover[v] != 1) {
            rep.Fail("node " + std::to_string(v + 1) + " covered " + std::to_string(cover[v]) +
                     " times");
        }
    }
    if (primal != sol.total_weight) {
        rep.Fail("stated weight " + std::to_string(sol.total_weight) +
                 " differs from recomputed " + std::to_string(primal));
    }
    if (!sol.has_duals) {
        return rep;
    }
    rep.checked_duals = true;
    const Weight scale = sol.dual_scale;
    if (sol.node_duals.size() != static_cast<size_t>(inst.n)) {
        rep.Fail("node dual count " + std::to_string(sol.node_duals.size()) +
                 " differs from node count " + std::to_string(inst.n));
        return rep;
    }

    // certificate well-formedness
    const int32_t nb = static_cast<int32_t>(sol.blossom_duals.size());
    for (int32_t i = 0; i < nb; ++i) {
        const auto &bd = sol.blossom_duals[i];
        if (bd.members.size() < 3 || bd.members.size() % 2 == 0) {
            rep.Fail("blossom set " + std::to_string(i) + " is not an odd set of size >= 3");
        }
        if (bd.value < 0) {
            rep.Fail("blossom set " + std::to_string(i) + " has negative dual");
        }
        auto sorted = bd.members;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            rep.Fail("blossom set " + std::to_string(i) + " has repeated members");
        }
        if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= inst.n)) {
            rep.Fail("blossom set " + std::to_string(i) + " has out-of-range members");
            return rep;
        }
    }

    // laminarity sweep, ascending by size: cur[v] is the largest already
    // placed set containing v, so each set sees its direct children among the
    // cur values of its members, and a child whose full size is not present
    // crosses the current set. The sweep also yields the nesting forest.
    std::vector<int32_t> by_size(nb);
    for (int32_t i = 0; i < nb; ++i) {
        by_size[i] = i;
    }
    std::stable_sort(by_size.begin(), by_size.end(), [&](int32_t a, int32_t b) {
        return sol.blossom_duals[a].members.size() < sol.blossom_duals[b].members.size();
    });
    std::vector<int32_t> cur(inst.n, -1);
    std::vector<int32_t> deepest(inst.n, -1);  // smallest set containing v
    std::vector<int32_t> parent(nb, -1);
    std::vector<int64_t> child_cnt(nb, 0);
    std::vector<int32_t> touched;
    for (int32_t k : by_size) {
        const auto &mem = sol.blossom_duals[k].members;
        touched.clear();
        for (int32_t v : mem) {
            int32_t c = cur[v];
            if (c >= 0) {
                if (child_cnt[c] == 0) {
                    touched.push_back(c);
                }
                ++child_cnt[c];
            }
        }
        for (int32_t c : touched) {
            if (child_cnt[c] != static_cast<int64_t>(sol.blossom_duals[c].members.size())) {
                rep.Fail("blossom sets " + std::to_string(c) + " and " + std::to_string(k) +
                         " cross");
            } else {
                parent[c] = k;
            }
            child_cnt[c] = 0;
        }
        for (int32_t v : mem) {
            if (cur[v] < 0) {
                deepest[v] = k;
            }
            cur[v] = k;
        }
    }
    // children precede parents in by_size order, so a reverse pass fills
    // depths and root-directed dual prefix sums
    std::vector<int32_t> depth_set(nb, 0);
    std::vector<Weight> up_sum(nb, 0);
    for (auto it = by_size.rbegin(); it != by_size.rend(); ++it) {
        int32_t k = *it;
        Weight above = parent[k] >= 0 ? up_sum[parent[k]] : 0;
        depth_set[k] = parent[k] >= 0 ? depth_set[parent[k]] + 1 : 0;
        up_sum[k] = above + sol.blossom_duals[k].value;
    }
    // sum of duals over sets containing exactly one endpoint: both chains up
    // to their common ancestor
    auto chain_term = [&](int32_t u, int32_t v) -> Weight {
        int32_t a = deepest[u], b = deepest[v];
        if (a == b) {
            return 0;
        }
        Weight sum_a = a >= 0 ? up_sum[a] : 0;
        Weight sum_b = b >= 0 ? up_sum[b] : 0;
        int32_t da = a >= 0 ? depth_set[a] : -1;
        int32_t db = b >= 0 ? depth_set[b] : -1;
        while (da > db) {
            a = parent[a];
            --da;
        }
        while (db > da) {
            b = parent[b];
            --db;
        }
        while (a != b) {
            a = a >= 0 ? parent[a] : a;
            b = b >= 0 ? parent[b] : b;
        }
        Weight meet = a >= 0 ? up_sum[a] : 0;
        return sum_a + sum_b - 2 * meet;
    };

    // per-edge slack in the scaled domain
    bool any_negative = false;
    for (const auto &e : inst.edges) {
        Weight slack =
            scale * e.w - sol.node_duals[e.u] - sol.node_duals[e.v] - chain_term(e.u, e.v);
        if (slack < 0 && !any_negative) {
            any_negative = true;
            rep.Fail("edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) +
                     ") has negative slack " + std::to_string(slack));
        }
    }

    // matched pairs are tight, and a positive-dual set has exactly one
    // matched edge on its boundary; the boundary sets of a pair are the two
    // chains strictly below the common ancestor
    std::vector<Weight> boundary_matched(nb, 0);
    bool any_tight_violation = false;
    for (const auto &[u, v] : sol.matching) {
        Weight w = pair_weight(u, v);
        if (w == kInfWeight) {
            continue;  // already failed above
        }
        Weight slack = scale * w - sol.node_duals[u] - sol.node_duals[v] - chain_term(u, v);
        if (slack != 0 && !any_tight_violation) {
            any_tight_violation = true;
            rep.Fail("matched edge (" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                     ") has slack " + std::to_string(slack));
        }
        int32_t a = deepest[u], b = deepest[v];
        int32_t da = a >= 0 ? depth_set[a] : -1;
        int32_t db = b >= 0 ? depth_set[b] : -1;
        while (da > db) {
            ++boundary_matched[a];
            a = parent[a];
            --da;
        }
        while (db > da) {
            ++boundary_matched[b];
            b = parent[b];
            --db;
        }
        while (a != b) {
            ++boundary_matched[a];
            ++boundary_matched[b];
            a = parent[a];
            b = parent[b];
        }
    }
    for (int32_t i = 0; i < nb; ++i) {
        if (sol.blossom_duals[i].value > 0 && boundary_matched[i] != 1) {
            rep.Fail("blossom set " + std::to_string(i) + " with positive dual has " +
                     std::to_string(boundary_matched[i]) + " matched boundary edges");
        }
    }

    // strong duality in the scaled domain
    Weight dual_obj = 0;
    for (Weight y : sol.node_duals) {
        dual_obj += y;
    }
    for (const auto &bd : sol.blossom_duals) {
        dual_obj += bd.value;
    }
    if (scale * primal != dual_obj) {
        rep.Fail("primal " + std::to_string(scale * primal) + " != dual objective " +
                 std::to_string(dual_obj) + " (scaled domain)");
    }
    return rep;
}

}  // namespace cherry
