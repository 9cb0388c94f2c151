#include "Solver.h"

#include <algorithm>
#include <limits>

namespace cherry {

Solver::Solver(const Instance &inst, SolverConfig config)
    : config_(config),
      edge_heaps_(EdgeKeyAccess{&g_}),
      node_heaps_(NodeKeyAccess{&g_}) {
    g_.Load(inst);
    depth_.assign(g_.nodes.size(), 0);
}

Solution Solver::Run() {
    auto t_start = std::chrono::steady_clock::now();
    deadline_ = t_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(config_.timeout_seconds));
    auto since = [](std::chrono::steady_clock::time_point a,
                    std::chrono::steady_clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };
    auto finish = [&](Solution s) {
        stats_.total_seconds = since(t_start, std::chrono::steady_clock::now());
        s.stats = stats_;
        return s;
    };

    if (g_.original_n % 2 != 0 || !InitDuals()) {
        return finish(InfeasibleSolution());
    }
    GreedyRaise();
    GreedyMatch();
    if (config_.init != InitMode::kGreedy) {
        int32_t t = config_.init == InitMode::kFractional
                        ? std::numeric_limits<int32_t>::max()
                        : config_.init_threshold;
        FractionalInit(t);
    }
    BuildTrees();
    stats_.init_seconds = since(t_start, std::chrono::steady_clock::now());
    if (phase_hook) {
        phase_hook("init");
    }

    while (live_trees_ > 0) {
        CheckDeadline();
        auto t0 = std::chrono::steady_clock::now();
        ExpandDrain();
        if (phase_hook) {
            phase_hook("expand");
        }
        DrainQueues();
        if (phase_hook) {
            phase_hook("primal");
        }
        if (live_trees_ == 0) {
            stats_.primal_seconds += since(t0, std::chrono::steady_clock::now());
            break;
        }
        ShrinkAll();
        if (phase_hook) {
            phase_hook("shrink");
        }
        auto t1 = std::chrono::steady_clock::now();
        stats_.primal_seconds += since(t0, t1);
        bool bounded = DualRound();
        stats_.dual_seconds += since(t1, std::chrono::steady_clock::now());
        if (!bounded) {
            return finish(InfeasibleSolution());
        }
        if (phase_hook) {
            phase_hook("dual");
        }
    }
    return finish(Extract());
}

void Solver::Relabel(NodeId v, Label to, TreeId to_tree) {
    Weight off_old = g_.Offset(v);
    {
        Node &nd = g_.node(v);
        nd.label = to;
        nd.tree = to_tree;
    }
    Weight d = g_.Offset(v) - off_old;
    if (d != 0) {
        g_.node(v).lazy_dual -= d;
    }
    g_.ForEachIncident(v, [&](EdgeId e) {
        auto [a, b] = g_.ResolveEnds(e);
        if (a == b) {
            return;  // frozen loop, its cut set excludes this level
        }
        if (d != 0) {
            g_.edge(e).lazy_slack += d;
        }
        ReHome(e);
    });
}

void Solver::ReHome(EdgeId e) {
    auto [a, b] = g_.ResolveEnds(e);
    Require(a != b, "re-homing a loop edge");
    HeapId home = HomeFor(a, b);
    HeapLinks &l = g_.edge(e).heap;
    if (l.heap && home && !edge_heaps_.IsRetired(l.heap) &&
        edge_heaps_.Resolve(l.heap) == edge_heaps_.Resolve(home)) {
        return;
    }
    edge_heaps_.Remove(e.v);
    if (home) {
        edge_heaps_.Insert(home, e.v);
    }
}

HeapId Solver::HomeFor(NodeId a, NodeId b) {
    const Node &na = g_.node(a);
    const Node &nb = g_.node(b);
    bool pa = IsPlusish(na.label);
    bool pb = IsPlusish(nb.label);
    if (na.label == Label::kFree) {
        return pb ? tree(nb.tree).plus_empty : HeapId();
    }
    if (nb.label == Label::kFree) {
        return pa ? tree(na.tree).plus_empty : HeapId();
    }
    if (na.tree == nb.tree) {
        return pa && pb ? tree(na.tree).pp_internal : HeapId();
    }
    if (!pa && !pb) {
        return HeapId();
    }
    const PairRec &pr = pair_recs_[PairRecFor(na.tree, nb.tree)];
    bool lo_plus = pr.a == na.tree ? pa : pb;
    bool hi_plus = pr.a == na.tree ? pb : pa;
    if (lo_plus && hi_plus) {
        return pr.pp;
    }
    return lo_plus ? pr.pm : pr.mp;
}

int32_t Solver::PairRecFor(TreeId x, TreeId y) {
    int32_t lo = std::min(x.v, y.v);
    int32_t hi = std::max(x.v, y.v);
    int64_t key = (int64_t(lo) << 32) | uint32_t(hi);
    auto it = pair_index_.find(key);
    if (it != pair_index_.end()) {
        return it->second;
    }
    int32_t idx = static_cast<int32_t>(pair_recs_.size());
    PairRec pr;
    pr.a = TreeId(lo);
    pr.b = TreeId(hi);
    pr.pp = edge_heaps_.NewHeap();
    pr.pm = edge_heaps_.NewHeap();
    pr.mp = edge_heaps_.NewHeap();
    pair_recs_.push_back(pr);
    pair_index_.emplace(key, idx);
    tree(TreeId(lo)).pairs.push_back(idx);
    tree(TreeId(hi)).pairs.push_back(idx);
    return idx;
}

void Solver::ActivateNode(NodeId v) {
    const Node &nd = g_.node(v);
    if (nd.alive && !nd.blossom_parent && nd.tree && tree(nd.tree).alive &&
        IsPlusish(nd.label)) {
        Tree &T = tree(nd.tree);
        T.active.push_back(v);
        if (!T.queued) {
            T.queued = true;
            drain_work_.push_back(nd.tree);
        }
    }
}

void Solver::ActivateEdge(EdgeId e) {
    auto [a, b] = g_.ResolveEnds(e);
    if (a == b) {
        return;
    }
    ActivateNode(a);
    ActivateNode(b);
}

NodeId Solver::FindReceptacle(NodeId v) {
    NodeId root = v;
    while (g_.node(root).receptacle != root) {
        root = g_.node(root).receptacle;
    }
    NodeId cur = v;
    while (g_.node(cur).receptacle != root) {
        NodeId nxt = g_.node(cur).receptacle;
        g_.node(cur).receptacle = root;
        cur = nxt;
    }
    return root;
}

void Solver::CheckDeadline() {
    if (std::chrono::steady_clock::now() > deadline_) {
        throw TimeoutError("solve timeout exceeded");
    }
}

int32_t Solver::MatchedPairCount() {
    int32_t cnt = 0;
    for (int32_t ei = 0; ei < g_.original_m; ++ei) {
        cnt += g_.edges[ei].matched ? 1 : 0;
    }
    return cnt;
}

Solution Solver::InfeasibleSolution() {
    Solution s;
    s.infeasible = true;
    return s;
}

Solution Solver::Extract() {
    SettleInteriors();
    Solution s;
    int32_t n = g_.original_n;
    Weight total4 = 0;
    for (int32_t ei = 0; ei < g_.original_m; ++ei) {
        const Edge &ed = g_.edges[ei];
        if (!ed.matched) {
            continue;
        }
        s.matching.emplace_back(ed.end_u, ed.end_v);
        total4 += ed.w4;
    }
    Require(static_cast<int32_t>(s.matching.size()) * 2 == n,
            "termination without a perfect matching");
    Require(total4 % 4 == 0, "matched weight not integral in the input domain");
    s.total_weight = total4 / 4;
    s.node_duals4.reserve(n);
    for (int32_t v = 0; v < n; ++v) {
        Require(!g_.nodes[v].tree || g_.nodes[v].blossom_parent,
                "elementary node still in a tree at extraction");
        s.node_duals4.push_back(g_.nodes[v].lazy_dual);
    }
    std::vector<NodeId> stack;
    for (size_t id = static_cast<size_t>(n); id < g_.nodes.size(); ++id) {
        const Node &nd = g_.nodes[id];
        if (!nd.alive || nd.lazy_dual == 0) {
            continue;
        }
        Require(nd.lazy_dual > 0, "negative blossom dual at extraction");
        BlossomDualValue bd;
        bd.value4 = nd.lazy_dual;
        stack.assign(1, NodeId(static_cast<int32_t>(id)));
        while (!stack.empty()) {
            NodeId c = stack.back();
            stack.pop_back();
            if (c.v < n) {
                bd.members.push_back(c.v);
                continue;
            }
            for (NodeId ch : g_.node(c).children) {
                stack.push_back(ch);
            }
        }
        std::sort(bd.members.begin(), bd.members.end());
        s.blossom_duals4.push_back(std::move(bd));
    }
    return s;
}

SolutionFile MakeSolutionFile(const Solution &sol, bool emit_certificate) {
    SolutionFile f;
    f.infeasible = sol.infeasible;
    f.total_weight = sol.total_weight;
    f.matching = sol.matching;
    if (!emit_certificate || sol.infeasible) {
        return f;
    }
    f.has_duals = true;
    bool all4 = true;
    for (Weight y : sol.node_duals4) {
        all4 = all4 && y % 4 == 0;
    }
    for (const auto &b : sol.blossom_duals4) {
        all4 = all4 && b.value4 % 4 == 0;
    }
    f.dual_scale = all4 ? 1 : 4;
    Weight div = all4 ? 4 : 1;
    f.node_duals.reserve(sol.node_duals4.size());
    for (Weight y : sol.node_duals4) {
        f.node_duals.push_back(y / div);
    }
    for (const auto &b : sol.blossom_duals4) {
        f.blossom_duals.push_back({b.members, b.value4 / div});
    }
    return f;
}

}  // namespace cherry
