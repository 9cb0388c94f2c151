#include <algorithm>

#include "Solver.h"

namespace cherry {

// Primal operations. Label changes and structural moves keep every true slack
// and true dual unchanged; only dual rounds move them, so heap keys stay
// comparable between rounds.

void Solver::ExpandDrain() {
    for (size_t ti = 0; ti < trees_.size(); ++ti) {
        Tree &T = trees_[ti];
        if (!T.alive) {
            continue;
        }
        Weight yt = g_.tree_duals[ti];
        while (true) {
            int32_t top = node_heaps_.PeekMin(T.minus_nodes);
            if (top == kNullIndex) {
                break;
            }
            Weight d = g_.nodes[top].lazy_dual - yt;
            Require(d >= 0, "negative supernode dual in the expand queue");
            if (d != 0) {
                break;
            }
            node_heaps_.PopMin(T.minus_nodes);
            Expand(NodeId(top));
        }
    }
}

void Solver::DrainQueues() {
    // round-robin over queued trees: one node per visit keeps the live trees
    // growing evenly without rescanning trees whose queues are empty
    int32_t steps = 0;
    while (!drain_work_.empty()) {
        if ((++steps & 1023) == 0) {
            CheckDeadline();
        }
        TreeId t = drain_work_.front();
        drain_work_.pop_front();
        if (!tree(t).alive) {
            tree(t).queued = false;
            continue;
        }
        bool worked = false;
        while (!tree(t).active.empty()) {
            NodeId v = tree(t).active.front();
            tree(t).active.pop_front();
            const Node &nd = g_.node(v);
            if (!nd.alive || nd.blossom_parent || nd.tree != t ||
                !IsPlusish(nd.label)) {
                continue;  // stale queue entry
            }
            worked = true;
            ProcessNode(t, v);
            break;
        }
        // ProcessNode may have augmented this tree away, so re-test liveness
        Tree &T = tree(t);
        if (worked && T.alive && !T.active.empty()) {
            drain_work_.push_back(t);
        } else {
            T.queued = false;
        }
    }
}

bool Solver::ProcessNode(TreeId t, NodeId v) {
    scan_ins_.clear();
    scan_outs_.clear();
    EdgeId e_aug;
    NodeId aug_other;
    g_.ForEachIncident(v, [&](EdgeId e) {
        if (e_aug) {
            return;
        }
        Edge &ed = g_.edge(e);
        if (!ed.maybe_zero) {
            return;
        }
        auto [a, b] = g_.ResolveEnds(e);
        NodeId o = a == v ? b : a;
        Weight s = ed.lazy_slack - g_.Offset(a) - g_.Offset(b);
        Require(s >= 0, "negative slack during a node scan");
        if (s != 0) {
            ed.maybe_zero = false;
            return;
        }
        const Node &on = g_.node(o);
        if (on.label == Label::kFree) {
            scan_outs_.push_back(e);
            return;
        }
        if (!IsPlusish(on.label)) {
            return;  // tight into a minus top, not actionable
        }
        if (on.tree != t) {
            Require(tree(on.tree).alive, "tight edge into a dead tree");
            e_aug = e;
            aug_other = o;
            return;
        }
        if (FindReceptacle(o) != FindReceptacle(v)) {
            scan_ins_.push_back(e);
        }
    });
    if (e_aug) {
        Augment(v, aug_other, e_aug);
        return true;
    }
    // candidates are collected first; every action below rewires the tree, so
    // each one is revalidated against the state it actually runs on
    for (EdgeId e : scan_ins_) {
        auto [a, b] = g_.ResolveEnds(e);
        if (FindReceptacle(a) != FindReceptacle(b)) {
            GrowIn(a, b, e);
        }
    }
    for (EdgeId e : scan_outs_) {
        NodeId o = g_.OtherTop(e, v);
        if (g_.node(o).label == Label::kFree) {
            GrowOut(v, e);
        }
    }
    return false;
}

void Solver::GrowOut(NodeId v, EdgeId e) {
    TreeId t = g_.node(v).tree;
    NodeId x = g_.OtherTop(e, v);
    // free supernodes at zero dual are opened up first, so every node that
    // turns minus here keeps a strictly positive dual
    while (g_.node(x).label == Label::kFree && g_.node(x).is_supernode &&
           g_.node(x).lazy_dual == 0) {
        ExpandFree(x);
        x = g_.OtherTop(e, v);
    }
    if (g_.node(x).label != Label::kFree) {
        return;  // claimed by an earlier action in this scan
    }
    EdgeId me = g_.node(x).matched_edge;
    Require(bool(me), "free top without a matched edge");
    NodeId y = g_.OtherTop(me, x);
    Require(g_.node(y).label == Label::kFree, "matched partner of a free top in a tree");
    Relabel(x, Label::kMinus, t);
    g_.node(x).minus_parent = e;
    g_.node(x).receptacle = x;
    if (g_.node(x).is_supernode) {
        node_heaps_.Insert(tree(t).minus_nodes, x.v);
    }
    Relabel(y, Label::kPlus, t);
    g_.node(y).minus_parent = EdgeId();
    g_.node(y).receptacle = y;
    Tree &T = tree(t);
    T.vertex_list.push_back(x);
    T.vertex_list.push_back(y);
    T.active.push_back(y);
    ++stats_.grow_outs;
}

void Solver::GrowIn(NodeId u, NodeId v, EdgeId e) {
    int32_t gen = g_.fresh_stamp();
    CollectTreePath(u, path_nodes_[0], path_arcs_[0]);
    for (EdgeId arc : path_arcs_[0]) {
        g_.edge(arc).stamp = gen;
    }
    // the new cherry closes at the first arc of the u side path that the v
    // side path touches; with no such arc the paths only meet at the root
    NodeId anchor;
    NodeId cur = v;
    size_t steps = 0;
    while (true) {
        Require(++steps <= g_.nodes.size() + 1, "anchor walk runaway");
        EdgeId em = g_.node(cur).matched_edge;
        if (!em) {
            anchor = cur;
            break;
        }
        if (g_.edge(em).stamp == gen) {
            anchor = cur;
            break;
        }
        NodeId nxt = g_.OtherTop(em, cur);
        EdgeId ep = g_.node(nxt).minus_parent;
        Require(bool(ep), "anchor walk missing a parent arc");
        if (g_.edge(ep).stamp == gen) {
            anchor = nxt;
            break;
        }
        cur = g_.OtherTop(ep, nxt);
    }
    NodeId rcls = FindReceptacle(anchor);
    ConvertPath(u, e, rcls);
    ConvertPath(v, e, rcls);
    ++stats_.grow_ins;
}

void Solver::ConvertPath(NodeId w, EdgeId bridge, NodeId target_class) {
    if (FindReceptacle(w) == target_class) {
        return;
    }
    ConvertOne(w, bridge, target_class);
    NodeId cur = w;
    size_t steps = 0;
    while (true) {
        Require(++steps <= g_.nodes.size() + 1, "conversion walk runaway");
        EdgeId em = g_.node(cur).matched_edge;
        Require(bool(em), "conversion walk ran past the root");
        NodeId nxt = g_.OtherTop(em, cur);
        Require(FindReceptacle(nxt) != target_class,
                "matched partner inside the target class");
        ConvertOne(nxt, EdgeId(), target_class);
        EdgeId ep = g_.node(nxt).minus_parent;
        Require(bool(ep), "conversion walk missing a parent arc");
        NodeId up = g_.OtherTop(ep, nxt);
        if (FindReceptacle(up) == target_class) {
            break;
        }
        ConvertOne(up, ep, target_class);
        cur = up;
    }
}

void Solver::ConvertOne(NodeId z, EdgeId new_minus_parent, NodeId target_class) {
    if (g_.node(z).label == Label::kMinus) {
        if (g_.node(z).is_supernode) {
            node_heaps_.Remove(z.v);
        }
        Relabel(z, Label::kPlusMinus, g_.node(z).tree);
    } else {
        // plus and converted tops share the offset and the heap classes, so
        // the incident edges need no updates at all
        Require(IsPlusish(g_.node(z).label), "conversion of a node outside the tree");
        g_.node(z).label = Label::kPlusMinus;
    }
    g_.node(z).receptacle = target_class;
    if (new_minus_parent) {
        g_.node(z).minus_parent = new_minus_parent;
    }
    converted_.push_back(z);
    ActivateNode(z);
}

void Solver::Augment(NodeId u, NodeId v, EdgeId e) {
    TreeId tu = g_.node(u).tree;
    TreeId tv = g_.node(v).tree;
    CollectTreePath(u, path_nodes_[0], path_arcs_[0]);
    CollectTreePath(v, path_nodes_[1], path_arcs_[1]);
    for (int side = 0; side < 2; ++side) {
        const auto &nodes = path_nodes_[side];
        const auto &arcs = path_arcs_[side];
        Require(arcs.size() % 2 == 0, "odd alternating path to the root");
        for (size_t i = 0; i < arcs.size(); ++i) {
            g_.edge(arcs[i]).matched = !g_.edge(arcs[i]).matched;
        }
        for (size_t i = 1; i < arcs.size(); i += 2) {
            g_.node(nodes[i]).matched_edge = arcs[i];
            g_.node(nodes[i + 1]).matched_edge = arcs[i];
        }
    }
    g_.edge(e).matched = true;
    g_.node(u).matched_edge = e;
    g_.node(v).matched_edge = e;
    ++stats_.augments;
    DestroyTrees(tu, tv);
}

void Solver::CollectTreePath(NodeId from, std::vector<NodeId> &nodes,
                             std::vector<EdgeId> &arcs) {
    nodes.clear();
    arcs.clear();
    nodes.push_back(from);
    NodeId root = tree(g_.node(from).tree).root;
    NodeId cur = from;
    while (cur != root) {
        EdgeId arc = arcs.size() % 2 == 0 ? g_.node(cur).matched_edge
                                          : g_.node(cur).minus_parent;
        Require(bool(arc), "missing parent arc on the root path");
        Require(nodes.size() <= g_.nodes.size() + 1, "root path runaway");
        cur = g_.OtherTop(arc, cur);
        arcs.push_back(arc);
        nodes.push_back(cur);
    }
}

void Solver::DestroyTrees(TreeId t1, TreeId t2) {
    Require(t1 != t2, "augmentation within one tree");
    const TreeId dying[2] = {t1, t2};
    for (TreeId td : dying) {
        Tree &T = tree(td);
        // retired first: every queue removal below is then a plain unlink
        node_heaps_.Retire(T.minus_nodes);
        edge_heaps_.Retire(T.plus_empty);
        edge_heaps_.Retire(T.pp_internal);
        int32_t gen = g_.fresh_stamp();
        for (NodeId v : T.vertex_list) {
            Node &nd = g_.node(v);
            if (!nd.alive || nd.blossom_parent || nd.tree != td) {
                continue;  // stale entry
            }
            if (nd.stamp == gen) {
                continue;  // re-added by a shrink and a later expand
            }
            nd.stamp = gen;
            if (nd.label == Label::kMinus && nd.is_supernode) {
                node_heaps_.Remove(v.v);
            }
            Weight off = g_.Offset(v);
            nd.label = Label::kFree;
            nd.tree = TreeId();
            nd.minus_parent = EdgeId();
            nd.receptacle = v;
            nd.lazy_dual += off;
            // the walk runs even at offset zero: freeing a minus end can make
            // a tight cross edge actionable without any slack change
            g_.ForEachIncident(v, [&](EdgeId e) {
                auto [a, b] = g_.ResolveEnds(e);
                if (a == b) {
                    return;
                }
                Edge &ed = g_.edge(e);
                ed.lazy_slack -= off;
                if (ed.lazy_slack - g_.Offset(a) - g_.Offset(b) == 0) {
                    ed.maybe_zero = true;
                    ActivateEdge(e);
                }
            });
        }
    }
    for (TreeId td : dying) {
        for (int32_t idx : tree(td).pairs) {
            PairRec &pr = pair_recs_[idx];
            if (!pr.alive) {
                continue;  // second visit of the pair joining the two trees
            }
            bool a_dies = pr.a == t1 || pr.a == t2;
            bool b_dies = pr.b == t1 || pr.b == t2;
            if (a_dies && b_dies) {
                edge_heaps_.Retire(pr.pp);
                edge_heaps_.Retire(pr.pm);
                edge_heaps_.Retire(pr.mp);
            } else if (a_dies) {
                // the a side ends are free now; the stored slacks already
                // dropped their offsets, so the keys line up with the target
                edge_heaps_.Meld(pr.pp, tree(pr.b).plus_empty);
                edge_heaps_.Meld(pr.mp, tree(pr.b).plus_empty);
                edge_heaps_.Retire(pr.pm);
            } else {
                edge_heaps_.Meld(pr.pp, tree(pr.a).plus_empty);
                edge_heaps_.Meld(pr.pm, tree(pr.a).plus_empty);
                edge_heaps_.Retire(pr.mp);
            }
            pair_index_.erase((int64_t(pr.a.v) << 32) | uint32_t(pr.b.v));
            pr.alive = false;
        }
    }
    for (TreeId td : dying) {
        Tree &T = tree(td);
        T.alive = false;
        T.active.clear();
        T.vertex_list.clear();
        T.pairs.clear();
        --live_trees_;
    }
}

void Solver::ShrinkAll() {
    if (converted_.empty()) {
        return;
    }
    int32_t gen = g_.fresh_stamp();
    std::vector<NodeId> recs;
    std::vector<std::vector<NodeId>> groups;
    for (NodeId z : converted_) {
        Node &zn = g_.node(z);
        if (!zn.alive || zn.blossom_parent || zn.label != Label::kPlusMinus) {
            continue;  // destroyed or absorbed since the conversion
        }
        if (zn.stamp == gen) {
            continue;  // converted more than once between shrinks
        }
        zn.stamp = gen;
        NodeId r = FindReceptacle(z);
        Node &rn = g_.node(r);
        if (rn.stamp != gen) {
            rn.stamp = gen;
            rn.scratch_dist = static_cast<Weight>(groups.size());
            recs.push_back(r);
            groups.emplace_back();
        }
        groups[static_cast<size_t>(rn.scratch_dist)].push_back(z);
    }
    converted_.clear();
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        NodeId r = recs[gi];
        {
            const Node &rn = g_.node(r);
            Require(rn.alive && !rn.blossom_parent, "receptacle lost its top position");
            Require(rn.label == Label::kPlus, "receptacle not plus at shrink");
            Require(bool(rn.tree) && tree(rn.tree).alive,
                    "receptacle outside a live tree");
        }
        TreeId t = g_.node(r).tree;
        Weight yt = ydual(t);
        NodeId S = g_.NewSupernode();
        depth_.push_back(0);
        {
            Node &sn = g_.node(S);
            sn.label = Label::kPlus;
            sn.tree = t;
            sn.lazy_dual = -yt;  // the true dual starts at zero under the plus offset
            sn.y_tree_at_birth = yt;
            sn.interior_root = r;
            sn.matched_edge = g_.node(r).matched_edge;
            sn.minus_parent = g_.node(r).minus_parent;
        }
        int32_t dmax = 0;
        auto absorb = [&](NodeId c) {
            Node &cn = g_.node(c);
            dmax = std::max(dmax, depth_[c.v]);
            cn.blossom_parent = S;
            cn.blossom_ancestor = S;
            cn.tree = TreeId();
            cn.lazy_dual += yt;  // freeze the true dual into the lazy field
            g_.node(S).children.push_back(c);
        };
        absorb(r);
        for (NodeId z : groups[gi]) {
            absorb(z);
        }
        g_.node(r).matched_edge = EdgeId();
        depth_[S.v] = dmax + 1;
        stats_.max_node_depth = std::max(stats_.max_node_depth, depth_[S.v]);
        Tree &T = tree(t);
        if (T.root == r) {
            T.root = S;
        }
        T.vertex_list.push_back(S);
        ++stats_.shrinks;
    }
}

void Solver::Expand(NodeId b) {
    TreeId t = g_.node(b).tree;
    Require(g_.node(b).label == Label::kMinus, "expand of a non-minus supernode");
    Require(g_.TrueDual(b) == 0, "expand at a positive dual");
    EdgeId e_match = g_.node(b).matched_edge;
    EdgeId e_mp = g_.node(b).minus_parent;
    Require(bool(e_match) && bool(e_mp), "expand of a detached supernode");
    NodeId x = g_.ChildUnder(b, InsideEnd(e_match, b));
    NodeId yc = g_.ChildUnder(b, InsideEnd(e_mp, b));
    RotateReceptacle(b, x);
    // interior walk from the parent arc child down to the matched arc child;
    // it becomes the tree path replacing b
    expand_path_.clear();
    expand_arcs_.clear();
    expand_path_.push_back(yc);
    int32_t wgen = g_.fresh_stamp();
    g_.node(yc).stamp = wgen;
    {
        size_t guard = 2 * g_.node(b).children.size() + 2;
        NodeId cur = yc;
        while (cur != x) {
            Require(expand_path_.size() <= guard, "interior expand walk runaway");
            EdgeId em = g_.node(cur).matched_edge;
            Require(bool(em), "interior walk missing a matched arc");
            NodeId nx = InteriorOther(b, em, cur);
            Require(nx != x, "interior walk reached the root at odd parity");
            Require(g_.node(nx).stamp != wgen, "interior walk revisited a child");
            g_.node(nx).stamp = wgen;
            expand_arcs_.push_back(em);
            expand_path_.push_back(nx);
            EdgeId ep = g_.node(nx).minus_parent;
            Require(bool(ep), "interior walk missing a parent arc");
            NodeId nx2 = InteriorOther(b, ep, nx);
            Require(nx2 == x || g_.node(nx2).stamp != wgen,
                    "interior walk revisited a child");
            g_.node(nx2).stamp = wgen;
            expand_arcs_.push_back(ep);
            expand_path_.push_back(nx2);
            cur = nx2;
        }
    }
    Weight yt = ydual(t);
    Tree &T = tree(t);
    ReleaseChildren(b);
    {
        Node &bn = g_.node(b);
        bn.alive = false;
        bn.cache_built = false;
        bn.neighbor_cache.clear();
        bn.neighbor_cache.shrink_to_fit();
    }
    for (size_t i = 0; i < expand_path_.size(); ++i) {
        Node &nd = g_.node(expand_path_[i]);
        nd.label = i % 2 == 0 ? Label::kMinus : Label::kPlus;
        nd.tree = t;
        nd.minus_parent = i % 2 == 0 ? (i == 0 ? e_mp : expand_arcs_[i - 1])
                                     : EdgeId();
        nd.lazy_dual -= g_.Offset(expand_path_[i]);
    }
    Require(!g_.node(x).matched_edge, "interior root kept a matched arc");
    g_.node(x).matched_edge = e_match;
    for (NodeId c : g_.node(b).children) {
        if (g_.node(c).stamp == wgen) {
            continue;  // on the path
        }
        Node &cn = g_.node(c);
        cn.label = Label::kFree;
        cn.tree = TreeId();
        cn.minus_parent = EdgeId();
    }
    for (size_t i = 0; i < expand_path_.size(); ++i) {
        NodeId p = expand_path_[i];
        T.vertex_list.push_back(p);
        if (i % 2 == 0) {
            if (g_.node(p).is_supernode) {
                node_heaps_.Insert(T.minus_nodes, p.v);
            }
        } else {
            T.active.push_back(p);
            if (!T.queued) {
                T.queued = true;
                drain_work_.push_back(t);
            }
        }
    }
    ExpandEdgePass(b, -yt);
    ++stats_.expands;
}

void Solver::ExpandFree(NodeId b) {
    Require(g_.node(b).is_supernode && g_.node(b).label == Label::kFree,
            "free expand of a tree node");
    Require(g_.node(b).lazy_dual == 0, "free expand at a positive dual");
    EdgeId e_match = g_.node(b).matched_edge;
    Require(bool(e_match), "free supernode without a matched edge");
    NodeId c = g_.ChildUnder(b, InsideEnd(e_match, b));
    RotateReceptacle(b, c);
    ReleaseChildren(b);
    {
        Node &bn = g_.node(b);
        bn.alive = false;
        bn.cache_built = false;
        bn.neighbor_cache.clear();
        bn.neighbor_cache.shrink_to_fit();
    }
    for (NodeId ch : g_.node(b).children) {
        Node &cn = g_.node(ch);
        cn.label = Label::kFree;
        cn.tree = TreeId();
        cn.minus_parent = EdgeId();
    }
    Require(!g_.node(c).matched_edge, "interior root kept a matched arc");
    g_.node(c).matched_edge = e_match;
    ExpandEdgePass(b, 0);
    ++stats_.expands;
}

void Solver::ReleaseChildren(NodeId b) {
    for (NodeId c : g_.node(b).children) {
        Node &cn = g_.node(c);
        cn.blossom_parent = NodeId();
        cn.blossom_ancestor = NodeId();
        cn.receptacle = c;
    }
}

void Solver::ExpandEdgePass(NodeId b, Weight off_b_old) {
    Weight y_birth2 = 2 * g_.node(b).y_tree_at_birth;
    int32_t gen = g_.fresh_stamp();
    for (NodeId c : g_.node(b).children) {
        g_.node(c).stamp = gen;
    }
    for (NodeId c : g_.node(b).children) {
        g_.ForEachIncident(c, [&](EdgeId e) {
            Edge &ed = g_.edge(e);
            if (ed.stamp == gen) {
                return;  // other side of an arc between two children
            }
            ed.stamp = gen;
            auto [a, o] = g_.ResolveEnds(e);
            if (a == o) {
                return;  // still a loop under a child, basis unchanged
            }
            bool a_in = g_.node(a).stamp == gen;
            bool o_in = g_.node(o).stamp == gen;
            Weight true_old;
            if (a_in && o_in) {
                // a loop of b until now, frozen at the shrink
                true_old = ed.lazy_slack - y_birth2;
            } else {
                NodeId outside = a_in ? o : a;
                true_old = ed.lazy_slack - g_.Offset(outside) - off_b_old;
            }
            Require(true_old >= 0, "negative slack released from a supernode");
            ed.lazy_slack = true_old + g_.Offset(a) + g_.Offset(o);
            ReHome(e);
            if (true_old == 0) {
                ed.maybe_zero = true;
                ActivateEdge(e);
            } else {
                ed.maybe_zero = false;
            }
        });
    }
}

// Re-roots the interior alternating structure of supernode b at target. Each
// pass closes the odd cycle made of the current root path and the even walk
// of its last off-root node, flips the matching around the cycle up to the
// anchor, and re-points the minus parents; the stamped distance of the new
// root strictly drops, which bounds the pass count.
void Solver::RotateReceptacle(NodeId b, NodeId target) {
    if (g_.node(b).interior_root == target) {
        return;
    }
    size_t guard = 2 * g_.node(b).children.size() + 2;
    int32_t gen = g_.fresh_stamp();
    Weight d_prev = 0;
    {
        NodeId cur = target;
        g_.node(cur).stamp = gen;
        g_.node(cur).scratch_dist = 0;
        size_t steps = 0;
        while (cur != g_.node(b).interior_root) {
            Require(++steps <= guard, "interior stamp walk runaway");
            EdgeId em = g_.node(cur).matched_edge;
            Require(bool(em), "interior walk missing a matched arc");
            NodeId nx = InteriorOther(b, em, cur);
            Require(nx != g_.node(b).interior_root,
                    "interior walk reached the root at odd parity");
            g_.node(nx).stamp = gen;
            g_.node(nx).scratch_dist = ++d_prev;
            EdgeId ep = g_.node(nx).minus_parent;
            Require(bool(ep), "interior walk missing a parent arc");
            NodeId nx2 = InteriorOther(b, ep, nx);
            g_.node(nx2).stamp = gen;
            g_.node(nx2).scratch_dist = ++d_prev;
            cur = nx2;
        }
    }
    size_t passes = 0;
    while (g_.node(b).interior_root != target) {
        Require(++passes <= g_.node(b).children.size() + 2, "rotation pass runaway");
        NodeId r0 = g_.node(b).interior_root;
        // the parent arc entering r0 on the walk from target closes an odd
        // cycle with the even walk of its bottom node
        NodeId xx;
        EdgeId closing;
        {
            NodeId cur = target;
            size_t steps = 0;
            while (true) {
                Require(++steps <= guard, "rotation closing walk runaway");
                EdgeId em = g_.node(cur).matched_edge;
                Require(bool(em), "interior walk missing a matched arc");
                NodeId nx = InteriorOther(b, em, cur);
                Require(nx != r0, "interior walk reached the root at odd parity");
                EdgeId ep = g_.node(nx).minus_parent;
                Require(bool(ep), "interior walk missing a parent arc");
                NodeId nx2 = InteriorOther(b, ep, nx);
                if (nx2 == r0) {
                    xx = nx;
                    closing = ep;
                    break;
                }
                cur = nx2;
            }
        }
        Require(!g_.edge(closing).matched, "matched arc closing the rotation cycle");
        rot_px_.clear();
        rot_ax_.clear();
        rot_px_.push_back(xx);
        {
            NodeId cur = xx;
            while (cur != r0) {
                Require(rot_px_.size() <= guard, "rotation cycle walk runaway");
                EdgeId em = g_.node(cur).matched_edge;
                Require(bool(em), "interior walk missing a matched arc");
                NodeId nx = InteriorOther(b, em, cur);
                Require(nx != r0, "interior walk reached the root at odd parity");
                rot_ax_.push_back(em);
                rot_px_.push_back(nx);
                EdgeId ep = g_.node(nx).minus_parent;
                Require(bool(ep), "interior walk missing a parent arc");
                NodeId nx2 = InteriorOther(b, ep, nx);
                rot_ax_.push_back(ep);
                rot_px_.push_back(nx2);
                cur = nx2;
            }
        }
        Weight best = kInfWeight;
        size_t upos = 0;
        for (size_t i = 0; i < rot_px_.size(); ++i) {
            const Node &pn = g_.node(rot_px_[i]);
            if (pn.stamp == gen && pn.scratch_dist < best) {
                best = pn.scratch_dist;
                upos = i;
            }
        }
        Require(best < d_prev, "rotation distance did not decrease");
        Require(upos % 2 == 1, "rotation anchor at an even position");
        NodeId u = rot_px_[upos];
        g_.edge(closing).matched = true;
        g_.node(xx).matched_edge = closing;
        g_.node(r0).matched_edge = closing;
        for (size_t j = 0; j < upos; ++j) {
            g_.edge(rot_ax_[j]).matched = j % 2 == 1;
            if (j % 2 == 1) {
                g_.node(rot_px_[j]).matched_edge = rot_ax_[j];
                g_.node(rot_px_[j + 1]).matched_edge = rot_ax_[j];
            }
        }
        g_.node(u).matched_edge = EdgeId();
        // every unmatched cycle arc is held as parent arc by both of its
        // endpoints except the new root, which the walks stop at
        auto point_at = [&](EdgeId arc, NodeId p, NodeId q) {
            if (g_.edge(arc).matched) {
                return;
            }
            if (p != u) {
                g_.node(p).minus_parent = arc;
            }
            if (q != u) {
                g_.node(q).minus_parent = arc;
            }
        };
        point_at(closing, xx, r0);
        for (size_t j = 0; j < rot_ax_.size(); ++j) {
            point_at(rot_ax_[j], rot_px_[j], rot_px_[j + 1]);
        }
        g_.node(b).interior_root = u;
        d_prev = best;
    }
}

// Interior matchings are settled lazily: a supernode matched from outside
// keeps its old interior pairing until it expands. The survivors need one
// top-down rotation pass before the elementary matched flags can be read.
void Solver::SettleInteriors() {
    std::vector<std::pair<NodeId, EdgeId>> work;
    for (size_t id = 0; id < g_.nodes.size(); ++id) {
        const Node &nd = g_.nodes[id];
        if (nd.alive && !nd.blossom_parent && nd.is_supernode) {
            Require(bool(nd.matched_edge), "unmatched supernode at extraction");
            work.emplace_back(NodeId(static_cast<int32_t>(id)), nd.matched_edge);
        }
    }
    while (!work.empty()) {
        auto [b, entry] = work.back();
        work.pop_back();
        NodeId x = g_.ChildUnder(b, InsideEnd(entry, b));
        RotateReceptacle(b, x);
        for (NodeId c : g_.node(b).children) {
            if (!g_.node(c).is_supernode) {
                continue;
            }
            work.emplace_back(c, c == x ? entry : g_.node(c).matched_edge);
        }
    }
}

NodeId Solver::InteriorOther(NodeId b, EdgeId e, NodeId child) {
    const Edge &ed = g_.edge(e);
    NodeId cu = g_.ChildUnder(b, ed.end_u);
    NodeId cv = g_.ChildUnder(b, ed.end_v);
    Require(cu == child || cv == child, "interior arc detached from its child");
    return cu == child ? cv : cu;
}

int32_t Solver::InsideEnd(EdgeId e, NodeId b) {
    const Edge &ed = g_.edge(e);
    for (NodeId cur = NodeId(ed.end_u); cur; cur = g_.node(cur).blossom_parent) {
        if (cur == b) {
            return ed.end_u;
        }
    }
    for (NodeId cur = NodeId(ed.end_v); cur; cur = g_.node(cur).blossom_parent) {
        if (cur == b) {
            return ed.end_v;
        }
    }
    Require(false, "edge has no endpoint inside the supernode");
    return kNullIndex;
}

}  // namespace cherry
