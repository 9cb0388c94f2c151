#include <algorithm>
#include <unordered_set>
#include <vector>

#include "Solver.h"

namespace cherry {

// From-scratch consistency checks used by tests at phase boundaries. Nothing
// here feeds the regular data flow of the solver.

void Solver::AuditInterior(NodeId b) {
    const Node &B = g_.node(b);
    Require(B.is_supernode, "interior audit of an elementary node");
    size_t k = B.children.size();
    Require(k >= 3 && k % 2 == 1, "supernode without an odd child count");
    bool root_seen = false;
    for (NodeId c : B.children) {
        const Node &cn = g_.node(c);
        Require(cn.alive, "dead child inside a supernode");
        Require(cn.blossom_parent == b, "child not parented by its supernode");
        root_seen = root_seen || c == B.interior_root;
    }
    Require(root_seen, "interior root is not a child");
    Require(!g_.node(B.interior_root).matched_edge, "interior root kept a matched arc");
    for (NodeId c : B.children) {
        if (c == B.interior_root) {
            continue;
        }
        EdgeId me = g_.node(c).matched_edge;
        Require(bool(me), "unmatched non-root child");
        Require(g_.edge(me).matched, "interior matched arc lost its flag");
        NodeId o = InteriorOther(b, me, c);
        Require(o != c && o != B.interior_root, "interior matched arc out of place");
        Require(g_.node(o).matched_edge == me, "interior matched arc not mutual");
        EdgeId ep = g_.node(c).minus_parent;
        Require(bool(ep), "non-root child without a parent arc");
        Require(!g_.edge(ep).matched, "matched arc used as a parent arc");
        InteriorOther(b, ep, c);  // the arc must stay interior
    }
    // the alternating walk from every child ends at the interior root, stays
    // interior, and visits no child twice
    for (NodeId c : B.children) {
        int32_t gen = g_.fresh_stamp();
        g_.node(c).stamp = gen;
        NodeId cur = c;
        size_t steps = 0;
        while (cur != B.interior_root) {
            Require(++steps <= 2 * k + 2, "interior walk runaway");
            EdgeId em = g_.node(cur).matched_edge;
            Require(bool(em), "interior walk missing a matched arc");
            NodeId nx = InteriorOther(b, em, cur);
            Require(nx != B.interior_root,
                    "interior walk reached the root at odd parity");
            Require(g_.node(nx).stamp != gen, "interior walk revisited a child");
            g_.node(nx).stamp = gen;
            EdgeId ep = g_.node(nx).minus_parent;
            Require(bool(ep), "interior walk missing a parent arc");
            NodeId nx2 = InteriorOther(b, ep, nx);
            Require(nx2 == B.interior_root || g_.node(nx2).stamp != gen,
                    "interior walk revisited a child");
            g_.node(nx2).stamp = gen;
            cur = nx2;
        }
    }
}

void Solver::AuditForest() {
    // slacks recomputed from the dual definition
    for (int32_t ei = 0; ei < g_.original_m; ++ei) {
        EdgeId e(ei);
        Weight audit = g_.AuditSlack(e);
        auto [a, b] = g_.ResolveEnds(e);
        Require(audit >= 0, "negative slack");
        Require(!g_.edge(e).matched || audit == 0, "matched edge kept slack");
        if (a == b) {
            NodeId meet = g_.MeetSupernode(e);
            Require(bool(meet), "loop without a meet supernode");
            Require(audit == g_.LoopSlack(e, meet), "frozen loop slack drifted");
        } else {
            Require(audit == g_.TrueSlack(e), "stored slack drifted");
            if (!g_.edge(e).maybe_zero) {
                Require(audit > 0, "tight edge flagged as positive");
            }
        }
    }
    // supernode duals and interior structure
    for (size_t id = 0; id < g_.nodes.size(); ++id) {
        NodeId v(static_cast<int32_t>(id));
        if (!g_.nodes[id].alive || !g_.nodes[id].is_supernode) {
            continue;
        }
        Require(g_.TrueDual(v) >= 0, "negative supernode dual");
        AuditInterior(v);
    }
    // tree anchors
    int32_t live_count = 0;
    for (size_t ti = 0; ti < trees_.size(); ++ti) {
        if (!trees_[ti].alive) {
            continue;
        }
        ++live_count;
        const Tree &T = trees_[ti];
        const Node &rn = g_.node(T.root);
        Require(rn.alive && !rn.blossom_parent, "tree root absorbed");
        Require(rn.tree == TreeId(static_cast<int32_t>(ti)), "tree root in the wrong tree");
        Require(rn.label == Label::kPlus, "tree root not plus");
        Require(!rn.matched_edge, "matched tree root");
        Require(!rn.minus_parent, "tree root with a parent arc");
    }
    Require(live_count == live_trees_, "live tree count drifted");
    // per node labels, pairing, and the alternating walks to the root
    auto root_walk = [&](NodeId from, bool matched_first) {
        NodeId root = tree(g_.node(from).tree).root;
        NodeId rcls = FindReceptacle(from);
        bool rcls_seen = from == rcls;
        int32_t gen = g_.fresh_stamp();
        g_.node(from).stamp = gen;
        NodeId cur = from;
        size_t arcs = 0;
        while (cur != root) {
            bool want_matched = (arcs % 2 == 0) == matched_first;
            EdgeId arc = want_matched ? g_.node(cur).matched_edge
                                      : g_.node(cur).minus_parent;
            Require(bool(arc), "root walk missing an arc");
            Require(g_.edge(arc).matched == want_matched, "root walk arc parity broken");
            Require(g_.TrueSlack(arc) == 0, "root walk over a slack arc");
            NodeId nx = g_.OtherTop(arc, cur);
            Require(nx != cur, "root walk arc resolves to a loop");
            Require(g_.node(nx).stamp != gen, "root walk revisited a node");
            g_.node(nx).stamp = gen;
            Require(++arcs <= g_.nodes.size() + 1, "root walk runaway");
            if (!rcls_seen) {
                // strictly between a converted top and its receptacle the
                // walk stays inside the class
                if (nx == rcls) {
                    rcls_seen = true;
                } else {
                    Require(g_.node(nx).label == Label::kPlusMinus,
                            "class walk left the class early");
                    Require(FindReceptacle(nx) == rcls, "class walk crossed classes");
                }
            }
            cur = nx;
        }
        Require(rcls_seen, "receptacle not on the root walk");
        Require((arcs % 2 == 0) == matched_first, "root walk parity wrong");
    };
    for (size_t id = 0; id < g_.nodes.size(); ++id) {
        NodeId v(static_cast<int32_t>(id));
        const Node &nd = g_.nodes[id];
        if (!nd.alive) {
            continue;
        }
        if (nd.blossom_parent) {
            Require(!nd.tree, "interior node kept a tree");
            continue;
        }
        if (nd.matched_edge) {
            Require(g_.edge(nd.matched_edge).matched, "matched arc lost its flag");
            NodeId o = g_.OtherTop(nd.matched_edge, v);
            Require(o != v, "matched arc resolves to a loop");
            Require(g_.node(o).matched_edge == nd.matched_edge, "matched arc not mutual");
        }
        switch (nd.label) {
            case Label::kFree:
                Require(!nd.tree, "free top kept a tree");
                Require(!nd.minus_parent, "free top kept a parent arc");
                Require(bool(nd.matched_edge), "free top unmatched");
                Require(FindReceptacle(v) == v, "free top inside a class");
                break;
            case Label::kPlus: {
                Require(bool(nd.tree) && tree(nd.tree).alive,
                        "plus top outside a live tree");
                Require(!nd.minus_parent, "plus top with a parent arc");
                Require(FindReceptacle(v) == v, "plus top inside a class");
                bool is_root = tree(nd.tree).root == v;
                Require(is_root == !nd.matched_edge, "root and matched arc disagree");
                root_walk(v, true);
                break;
            }
            case Label::kMinus:
                Require(bool(nd.tree) && tree(nd.tree).alive,
                        "minus top outside a live tree");
                Require(bool(nd.minus_parent), "minus top without a parent arc");
                Require(bool(nd.matched_edge), "minus top without a matched arc");
                Require(FindReceptacle(v) == v, "minus top inside a class");
                root_walk(v, false);
                break;
            case Label::kPlusMinus: {
                Require(bool(nd.tree) && tree(nd.tree).alive,
                        "converted top outside a live tree");
                Require(bool(nd.minus_parent), "converted top without a parent arc");
                Require(bool(nd.matched_edge), "converted top without a matched arc");
                NodeId r = FindReceptacle(v);
                Require(r != v, "converted top is its own receptacle");
                const Node &rn = g_.node(r);
                Require(rn.alive && !rn.blossom_parent, "receptacle absorbed");
                Require(rn.label == Label::kPlus, "receptacle not plus");
                Require(rn.tree == nd.tree, "receptacle in another tree");
                root_walk(v, true);
                root_walk(v, false);
                break;
            }
        }
    }
    // forward heap placement: every edge sits where its endpoint classes put it
    std::unordered_set<int32_t> internal_heaps;
    for (size_t ti = 0; ti < trees_.size(); ++ti) {
        if (trees_[ti].alive) {
            internal_heaps.insert(edge_heaps_.Resolve(trees_[ti].pp_internal).v);
        }
    }
    for (int32_t ei = 0; ei < g_.original_m; ++ei) {
        EdgeId e(ei);
        const HeapLinks &l = g_.edges[ei].heap;
        HeapId at;
        if (l.heap && !edge_heaps_.IsRetired(l.heap)) {
            at = edge_heaps_.Resolve(l.heap);
        }
        auto [a, b] = g_.ResolveEnds(e);
        if (a == b) {
            Require(!at || internal_heaps.count(at.v) > 0,
                    "loop edge outside an internal queue");
            continue;
        }
        HeapId want = HomeFor(a, b);
        if (want) {
            Require(at == edge_heaps_.Resolve(want), "edge away from its home queue");
        } else {
            Require(!at, "edge kept a queue it no longer belongs to");
        }
    }
    // backward heap contents
    for (size_t ti = 0; ti < trees_.size(); ++ti) {
        Tree &T = trees_[ti];
        if (!T.alive) {
            continue;
        }
        TreeId t(static_cast<int32_t>(ti));
        node_heaps_.DebugValidate(T.minus_nodes);
        edge_heaps_.DebugValidate(T.plus_empty);
        edge_heaps_.DebugValidate(T.pp_internal);
        int32_t minus_supers = 0;
        for (size_t id = 0; id < g_.nodes.size(); ++id) {
            const Node &nd = g_.nodes[id];
            if (nd.alive && !nd.blossom_parent && nd.tree == t &&
                nd.label == Label::kMinus && nd.is_supernode) {
                ++minus_supers;
                Require(bool(nd.heap.heap) && !node_heaps_.IsRetired(nd.heap.heap) &&
                            node_heaps_.Resolve(nd.heap.heap) ==
                                node_heaps_.Resolve(T.minus_nodes),
                        "minus supernode missing from the expand queue");
            }
        }
        Require(static_cast<int32_t>(node_heaps_.CollectItems(T.minus_nodes).size()) ==
                    minus_supers,
                "expand queue out of sync");
        for (int32_t item : edge_heaps_.CollectItems(T.plus_empty)) {
            auto [a, b] = g_.ResolveEnds(EdgeId(item));
            Require(a != b, "loop edge in a boundary queue");
            const Node &na = g_.node(a);
            const Node &nb = g_.node(b);
            bool ok = (IsPlusish(na.label) && na.tree == t &&
                       nb.label == Label::kFree) ||
                      (IsPlusish(nb.label) && nb.tree == t &&
                       na.label == Label::kFree);
            Require(ok, "boundary queue holds a foreign edge");
        }
        for (int32_t item : edge_heaps_.CollectItems(T.pp_internal)) {
            auto [a, b] = g_.ResolveEnds(EdgeId(item));
            if (a == b) {
                continue;  // frozen loop awaiting its lazy purge
            }
            const Node &na = g_.node(a);
            const Node &nb = g_.node(b);
            Require(IsPlusish(na.label) && IsPlusish(nb.label) && na.tree == t &&
                        nb.tree == t,
                    "internal queue holds a foreign edge");
        }
    }
    for (const PairRec &pr : pair_recs_) {
        if (!pr.alive) {
            continue;
        }
        Require(tree(pr.a).alive && tree(pr.b).alive, "pair record outliving a tree");
        auto side_ok = [&](NodeId z, TreeId want_tree, bool want_plus) {
            const Node &zn = g_.node(z);
            if (zn.tree != want_tree) {
                return false;
            }
            return want_plus ? IsPlusish(zn.label) : zn.label == Label::kMinus;
        };
        auto check = [&](HeapId h, bool lo_plus, bool hi_plus) {
            edge_heaps_.DebugValidate(h);
            for (int32_t item : edge_heaps_.CollectItems(h)) {
                auto [x, y] = g_.ResolveEnds(EdgeId(item));
                bool ok = (side_ok(x, pr.a, lo_plus) && side_ok(y, pr.b, hi_plus)) ||
                          (side_ok(y, pr.a, lo_plus) && side_ok(x, pr.b, hi_plus));
                Require(ok, "pair queue holds a foreign edge");
            }
        };
        check(pr.pp, true, true);
        check(pr.pm, true, false);
        check(pr.mp, false, true);
    }
    // vertex list coverage
    for (size_t ti = 0; ti < trees_.size(); ++ti) {
        Tree &T = trees_[ti];
        if (!T.alive) {
            continue;
        }
        TreeId t(static_cast<int32_t>(ti));
        int32_t gen = g_.fresh_stamp();
        for (NodeId v : T.vertex_list) {
            const Node &nd = g_.node(v);
            if (nd.alive && !nd.blossom_parent && nd.tree == t) {
                g_.node(v).stamp = gen;
            }
        }
        for (size_t id = 0; id < g_.nodes.size(); ++id) {
            const Node &nd = g_.nodes[id];
            if (nd.alive && !nd.blossom_parent && nd.tree == t) {
                Require(nd.stamp == gen, "tree top missing from its vertex list");
            }
        }
    }
}

}  // namespace cherry
