#include <algorithm>

#include "Solver.h"

namespace cherry {

// Initialization pipeline. Duals start even (quadrupled domain) and stay even
// through every step here, so the blossom phase inherits an integral basis.

bool Solver::InitDuals() {
    for (int32_t v = 0; v < g_.original_n; ++v) {
        if (g_.Degree(NodeId(v)) == 0) {
            return false;
        }
        Weight best = kInfWeight;
        g_.ForEachIncident(NodeId(v), [&](EdgeId e) {
            best = std::min(best, g_.edge(e).w4);
        });
        g_.nodes[v].lazy_dual = best / 2;
    }
    return true;
}

void Solver::GreedyRaise() {
    // sequential: raising v only lowers v's own slacks, by exactly their
    // minimum, so feasibility is preserved and v gains a tight edge
    for (int32_t v = 0; v < g_.original_n; ++v) {
        Weight slack_min = kInfWeight;
        g_.ForEachIncident(NodeId(v), [&](EdgeId e) {
            const Edge &ed = g_.edge(e);
            Weight s = ed.w4 - g_.nodes[ed.end_u].lazy_dual -
                       g_.nodes[ed.end_v].lazy_dual;
            slack_min = std::min(slack_min, s);
        });
        g_.nodes[v].lazy_dual += slack_min;
    }
}

void Solver::GreedyMatch() {
    for (int32_t v = 0; v < g_.original_n; ++v) {
        if (g_.nodes[v].matched_edge) {
            continue;
        }
        g_.ForEachIncident(NodeId(v), [&](EdgeId e) {
            if (g_.nodes[v].matched_edge) {
                return;
            }
            Edge &ed = g_.edge(e);
            int32_t o = ed.end_u == v ? ed.end_v : ed.end_u;
            if (g_.nodes[o].matched_edge) {
                return;
            }
            Weight s = ed.w4 - g_.nodes[ed.end_u].lazy_dual -
                       g_.nodes[ed.end_v].lazy_dual;
            if (s != 0) {
                return;
            }
            ed.matched = true;
            g_.nodes[v].matched_edge = e;
            g_.nodes[o].matched_edge = e;
        });
    }
}

// Fractional warm start. Each uncovered node roots a Hungarian-style
// alternating tree over tight edges; odd tight cycles are parked as
// half-integral "half cycles" instead of being shrunk. Every matched edge and
// every tree arc stays tight throughout, which keeps all plus duals of one
// tree congruent mod 4 and hence every halved plus-plus step even.
void Solver::FractionalInit(int32_t threshold) {
    struct HalfCycle {
        std::vector<NodeId> nodes;  // cyclic; edges[i] joins nodes[i], nodes[i+1]
        std::vector<EdgeId> edges;  // edges.back() closes back to nodes.front()
        bool live = true;
    };
    const int32_t n = g_.original_n;
    std::vector<HalfCycle> cycles;
    std::vector<int32_t> cycle_id(n, kNullIndex);
    std::vector<uint32_t> mark(n, 0);  // in-tree when equal to the current gen
    std::vector<char> plus_side(n, 0);
    std::vector<EdgeId> parent(n);  // tree arc toward the root, null at the root
    std::vector<NodeId> plus_nodes;
    std::vector<NodeId> minus_nodes;
    uint32_t gen = 0;

    auto slack = [&](const Edge &ed) {
        return ed.w4 - g_.nodes[ed.end_u].lazy_dual - g_.nodes[ed.end_v].lazy_dual;
    };
    auto other = [&](EdgeId e, NodeId x) {
        const Edge &ed = g_.edge(e);
        return NodeId(ed.end_u == x.v ? ed.end_v : ed.end_u);
    };

    // moves the exposed node of the current tree from the root down to plus
    // node u; every arc on the way is tight, so matched-arc tightness survives
    auto flip_up = [&](NodeId u) {
        std::vector<NodeId> path{u};
        std::vector<EdgeId> arcs;
        NodeId cur = u;
        while (parent[cur.v]) {
            arcs.push_back(parent[cur.v]);
            cur = other(parent[cur.v], cur);
            path.push_back(cur);
        }
        Require(arcs.size() % 2 == 0, "odd alternating path above a plus node");
        for (EdgeId a : arcs) {
            g_.edge(a).matched = false;
        }
        for (NodeId x : path) {
            g_.node(x).matched_edge = EdgeId();
        }
        for (size_t i = 1; i < arcs.size(); i += 2) {
            Edge &ed = g_.edge(arcs[i]);
            ed.matched = true;
            g_.nodes[ed.end_u].matched_edge = arcs[i];
            g_.nodes[ed.end_v].matched_edge = arcs[i];
        }
    };

    // rounds a live half cycle to the matching that leaves only expose open
    auto rematch = [&](HalfCycle &hc, NodeId expose) {
        const int32_t len = static_cast<int32_t>(hc.nodes.size());
        int32_t k = 0;
        while (hc.nodes[k] != expose) {
            ++k;
        }
        for (int32_t j = 0; j + 2 < len; j += 2) {
            EdgeId e = hc.edges[(k + 1 + j) % len];
            Edge &ed = g_.edge(e);
            ed.matched = true;
            g_.nodes[ed.end_u].matched_edge = e;
            g_.nodes[ed.end_v].matched_edge = e;
        }
        for (NodeId x : hc.nodes) {
            cycle_id[x.v] = kNullIndex;
        }
        hc.live = false;
    };

    // tight in-tree plus-plus edge: park the enclosed odd cycle; the meet of
    // the two root paths is a plus node because branches diverge only there
    auto make_cycle = [&](NodeId u, EdgeId bridge, NodeId o) {
        int32_t s = g_.fresh_stamp();
        for (NodeId c = u;;) {
            g_.node(c).stamp = s;
            if (!parent[c.v]) {
                break;
            }
            c = other(parent[c.v], c);
        }
        NodeId lca = o;
        while (g_.node(lca).stamp != s) {
            Require(bool(parent[lca.v]), "root paths that never meet");
            lca = other(parent[lca.v], lca);
        }
        Require(plus_side[lca.v], "cycle meeting at a minus node");
        flip_up(lca);
        std::vector<NodeId> ns;
        std::vector<EdgeId> es;
        for (NodeId c = u; c != lca; c = other(parent[c.v], c)) {
            ns.push_back(c);
            es.push_back(parent[c.v]);
        }
        ns.push_back(lca);
        std::reverse(ns.begin(), ns.end());
        std::reverse(es.begin(), es.end());
        es.push_back(bridge);
        for (NodeId c = o; c != lca; c = other(parent[c.v], c)) {
            ns.push_back(c);
            es.push_back(parent[c.v]);
        }
        Require(ns.size() % 2 == 1, "even alternating cycle");
        int32_t cid = static_cast<int32_t>(cycles.size());
        for (EdgeId e : es) {
            g_.edge(e).matched = false;
        }
        for (NodeId x : ns) {
            g_.node(x).matched_edge = EdgeId();
            cycle_id[x.v] = cid;
        }
        cycles.push_back(HalfCycle{std::move(ns), std::move(es), true});
    };

    for (int32_t r = 0; r < n; ++r) {
        if (g_.nodes[r].matched_edge || cycle_id[r] != kNullIndex) {
            continue;
        }
        ++gen;
        plus_nodes.assign(1, NodeId(r));
        minus_nodes.clear();
        mark[r] = gen;
        plus_side[r] = 1;
        parent[r] = EdgeId();
        bool done = false;
        while (!done) {
            // expansion pass: duals are fixed, so tightness is static and one
            // growing sweep over the plus nodes catches every tight action
            bool terminal = false;
            for (size_t i = 0; i < plus_nodes.size() && !terminal; ++i) {
                NodeId u = plus_nodes[i];
                g_.ForEachIncident(u, [&](EdgeId e) {
                    if (terminal) {
                        return;
                    }
                    Edge &ed = g_.edge(e);
                    NodeId o = other(e, u);
                    if (slack(ed) != 0) {
                        return;
                    }
                    if (mark[o.v] == gen) {
                        if (plus_side[o.v]) {
                            make_cycle(u, e, o);
                            terminal = done = true;
                        }
                        return;
                    }
                    if (cycle_id[o.v] != kNullIndex) {
                        rematch(cycles[cycle_id[o.v]], o);
                    }
                    if (!g_.node(o).matched_edge) {
                        flip_up(u);
                        ed.matched = true;
                        g_.node(u).matched_edge = e;
                        g_.node(o).matched_edge = e;
                        terminal = done = true;
                        return;
                    }
                    EdgeId me = g_.node(o).matched_edge;
                    NodeId p = other(me, o);
                    Require(mark[p.v] != gen, "matched partner inside the tree");
                    mark[o.v] = gen;
                    plus_side[o.v] = 0;
                    parent[o.v] = e;
                    mark[p.v] = gen;
                    plus_side[p.v] = 1;
                    parent[p.v] = me;
                    minus_nodes.push_back(o);
                    plus_nodes.push_back(p);
                });
                if (!terminal &&
                    static_cast<int32_t>(plus_nodes.size() + minus_nodes.size()) >
                        threshold) {
                    done = true;  // abandon; the blossom phase takes over
                    terminal = true;
                }
            }
            if (done) {
                break;
            }
            Weight step = kInfWeight;
            for (NodeId u : plus_nodes) {
                g_.ForEachIncident(u, [&](EdgeId e) {
                    NodeId o = other(e, u);
                    Weight s = slack(g_.edge(e));
                    if (mark[o.v] == gen) {
                        if (plus_side[o.v] && o != u) {
                            Require(s % 4 == 0, "uneven plus-plus tree slack");
                            step = std::min(step, s / 2);
                        }
                        return;
                    }
                    step = std::min(step, s);
                });
            }
            if (step >= kInfWeight) {
                break;  // abandon; infeasibility is decided later
            }
            Require(step > 0 && step % 2 == 0, "stalled or odd dual step");
            for (NodeId u : plus_nodes) {
                g_.node(u).lazy_dual += step;
            }
            for (NodeId o : minus_nodes) {
                g_.node(o).lazy_dual -= step;
            }
        }
    }

    // leftover half cycles round to near-perfect matchings; the lowest id
    // stays open and roots a tree in the blossom phase
    for (HalfCycle &hc : cycles) {
        if (hc.live) {
            rematch(hc, *std::min_element(hc.nodes.begin(), hc.nodes.end(),
                                          [](NodeId a, NodeId b) { return a.v < b.v; }));
        }
    }
}

void Solver::BuildTrees() {
    for (int32_t v = 0; v < g_.original_n; ++v) {
        Node &nd = g_.nodes[v];
        if (nd.matched_edge) {
            continue;
        }
        TreeId t(static_cast<int32_t>(trees_.size()));
        Tree tr;
        tr.root = NodeId(v);
        tr.minus_nodes = node_heaps_.NewHeap();
        tr.plus_empty = edge_heaps_.NewHeap();
        tr.pp_internal = edge_heaps_.NewHeap();
        tr.vertex_list.push_back(NodeId(v));
        tr.active.push_back(NodeId(v));
        tr.queued = true;
        drain_work_.push_back(t);
        trees_.push_back(std::move(tr));
        g_.tree_duals.push_back(0);
        nd.label = Label::kPlus;
        nd.tree = t;
    }
    live_trees_ = static_cast<int32_t>(trees_.size());
    // tree duals are all zero here, so raw slacks already sit in the eagerly
    // rebased basis of the labeled tops
    for (int32_t ei = 0; ei < g_.original_m; ++ei) {
        Edge &ed = g_.edges[ei];
        Weight stored =
            ed.w4 - g_.nodes[ed.end_u].lazy_dual - g_.nodes[ed.end_v].lazy_dual;
        Require(stored >= 0, "negative slack after initialization");
        Require(!ed.matched || stored == 0, "matched edge left slack");
        ed.lazy_slack = stored;
        ed.maybe_zero = stored == 0;
        HeapId home = HomeFor(NodeId(ed.end_u), NodeId(ed.end_v));
        if (home) {
            edge_heaps_.Insert(home, ei);
        }
    }
}

}  // namespace cherry
