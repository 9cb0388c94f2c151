#include "DualLp.h"

#include <algorithm>
#include <deque>

namespace cherry {

DeltaResult SolveDeltasComponents(const DeltaProblem &p) {
    DeltaResult res;
    res.delta.assign(p.k, 0);

    // constraint entries indexed by the trees they can upper-bound
    std::vector<std::vector<int32_t>> b_at(p.k);
    for (size_t idx = 0; idx < p.b.size(); ++idx) {
        b_at[p.b[idx].i].push_back(static_cast<int32_t>(idx));
        b_at[p.b[idx].j].push_back(static_cast<int32_t>(idx));
    }
    std::vector<std::vector<int32_t>> c_at(p.k);
    for (size_t idx = 0; idx < p.c.size(); ++idx) {
        c_at[p.c[idx].i].push_back(static_cast<int32_t>(idx));
    }

    std::vector<std::vector<int32_t>> zero_adj(p.k);
    for (const auto &pc : p.c) {
        if (pc.cap == 0) {
            zero_adj[pc.i].push_back(pc.j);
            zero_adj[pc.j].push_back(pc.i);
        }
    }
    std::vector<int32_t> comp(p.k, -1);
    std::vector<std::vector<int32_t>> members;
    std::deque<int32_t> queue;
    for (int32_t s = 0; s < p.k; ++s) {
        if (comp[s] >= 0) {
            continue;
        }
        int32_t id = static_cast<int32_t>(members.size());
        members.emplace_back();
        comp[s] = id;
        queue = {s};
        while (!queue.empty()) {
            int32_t t = queue.front();
            queue.pop_front();
            members[id].push_back(t);
            for (int32_t o : zero_adj[t]) {
                if (comp[o] < 0) {
                    comp[o] = id;
                    queue.push_back(o);
                }
            }
        }
    }

    // greedy raise in discovery order; an already processed neighbour
    // component contributes its final delta, an unprocessed one contributes 0,
    // which only tightens the bound and keeps the result feasible
    for (const auto &group : members) {
        Weight bound = kInfWeight;
        for (int32_t t : group) {
            bound = std::min(bound, p.a[t]);
            for (int32_t idx : b_at[t]) {
                const auto &pc = p.b[idx];
                int32_t other = pc.i == t ? pc.j : pc.i;
                if (comp[other] == comp[t]) {
                    Require(pc.cap % 2 == 0, "odd plus-plus cap inside a component");
                    bound = std::min(bound, pc.cap / 2);
                } else {
                    bound = std::min(bound, pc.cap - res.delta[other]);
                }
            }
            for (int32_t idx : c_at[t]) {
                const auto &pc = p.c[idx];
                if (comp[pc.j] != comp[t]) {
                    bound = std::min(bound, pc.cap + res.delta[pc.j]);
                }
            }
        }
        if (bound == kInfWeight) {
            res.bounded = false;
            return res;
        }
        for (int32_t t : group) {
            res.delta[t] = bound;
        }
    }
    return res;
}

namespace {

struct FlowNet {
    struct Arc {
        int32_t to;
        Weight cap;
        Weight cost;
    };
    std::vector<Arc> arcs;  // paired: arc 2i and its reverse 2i+1
    std::vector<std::vector<int32_t>> out;

    explicit FlowNet(int32_t n) : out(n) {}

    void Add(int32_t u, int32_t v, Weight cap, Weight cost) {
        out[u].push_back(static_cast<int32_t>(arcs.size()));
        arcs.push_back({v, cap, cost});
        out[v].push_back(static_cast<int32_t>(arcs.size()));
        arcs.push_back({u, 0, -cost});
    }
};

}  // namespace

DeltaResult SolveDeltasFlow(const DeltaProblem &p) {
    DeltaResult res;
    res.delta.assign(p.k, 0);
    // node layout: i = x_i_plus, k + i = x_i_minus, then source and sink
    int32_t n = 2 * p.k + 2;
    int32_t src = 2 * p.k;
    int32_t snk = 2 * p.k + 1;
    FlowNet net(n);
    for (int32_t i = 0; i < p.k; ++i) {
        net.Add(src, i, 1, 0);
        net.Add(p.k + i, snk, 1, 0);
        // delta_i >= 0 is x_minus - x_plus <= 0
        net.Add(p.k + i, i, kInfWeight, 0);
        if (p.a[i] != kInfWeight) {
            // delta_i <= a is x_plus - x_minus <= 2a
            net.Add(i, p.k + i, kInfWeight, 2 * p.a[i]);
        }
    }
    for (const auto &pc : p.b) {
        // delta_i + delta_j <= cap splits into two differences
        net.Add(pc.i, p.k + pc.j, kInfWeight, pc.cap);
        net.Add(pc.j, p.k + pc.i, kInfWeight, pc.cap);
    }
    for (const auto &pc : p.c) {
        net.Add(pc.i, pc.j, kInfWeight, pc.cap);
        net.Add(p.k + pc.j, p.k + pc.i, kInfWeight, pc.cap);
    }

    std::vector<Weight> pot(n, 0);
    std::vector<Weight> dist(n);
    std::vector<int32_t> par_arc(n);
    std::vector<uint8_t> in_queue(n);
    std::deque<int32_t> queue;
    for (int32_t unit = 0; unit < p.k; ++unit) {
        dist.assign(n, kInfWeight);
        par_arc.assign(n, kNullIndex);
        in_queue.assign(n, 0);
        dist[src] = 0;
        queue = {src};
        while (!queue.empty()) {
            int32_t u = queue.front();
            queue.pop_front();
            in_queue[u] = 0;
            for (int32_t ai : net.out[u]) {
                const auto &arc = net.arcs[ai];
                if (arc.cap <= 0) {
                    continue;
                }
                Weight nd = dist[u] + arc.cost + pot[u] - pot[arc.to];
                if (nd < dist[arc.to]) {
                    dist[arc.to] = nd;
                    par_arc[arc.to] = ai;
                    if (!in_queue[arc.to]) {
                        in_queue[arc.to] = 1;
                        queue.push_back(arc.to);
                    }
                }
            }
        }
        if (dist[snk] == kInfWeight) {
            // some tree cannot be capped at all: the dual is unbounded
            res.bounded = false;
            return res;
        }
        for (int32_t u = 0; u < n; ++u) {
            pot[u] += std::min(dist[u], dist[snk]);
        }
        for (int32_t u = snk; u != src;) {
            int32_t ai = par_arc[u];
            net.arcs[ai].cap -= 1;
            net.arcs[ai ^ 1].cap += 1;
            u = net.arcs[ai ^ 1].to;
        }
    }

    // every infinite-capacity arc stays residual, so the final potentials
    // satisfy every difference constraint with x = -pot; saturated unit arcs
    // pin the optimum
    for (int32_t i = 0; i < p.k; ++i) {
        Weight doubled = pot[p.k + i] - pot[i];
        Require(doubled >= 0, "negative doubled delta from flow potentials");
        res.fractional_total_x2 += doubled;
        res.delta[i] = doubled / 2;
    }
    return res;
}

bool DeltasFeasible(const DeltaProblem &p, const std::vector<Weight> &delta) {
    for (int32_t i = 0; i < p.k; ++i) {
        if (delta[i] < 0 || delta[i] > p.a[i]) {
            return false;
        }
    }
    for (const auto &pc : p.b) {
        if (delta[pc.i] + delta[pc.j] > pc.cap) {
            return false;
        }
    }
    for (const auto &pc : p.c) {
        if (delta[pc.i] - delta[pc.j] > pc.cap) {
            return false;
        }
    }
    return true;
}

}  // namespace cherry
