#include <algorithm>

#include "Solver.h"

namespace cherry {

// Dual rounds. Step caps come from per-class heap minima; applying the deltas
// changes true slacks only in the heap tracked classes, and every edge that
// reaches zero gets flagged and activated here.

bool Solver::DualRound() {
    std::vector<TreeId> live;
    live.reserve(trees_.size());
    for (size_t ti = 0; ti < trees_.size(); ++ti) {
        if (trees_[ti].alive) {
            live.push_back(TreeId(static_cast<int32_t>(ti)));
        }
    }
    Require(static_cast<int32_t>(live.size()) == live_trees_,
            "live tree count drifted");
    DeltaProblem p = CollectConstraints(live);
    DeltaResult r;
    if (config_.dual_mode == DualMode::kLp &&
        static_cast<int32_t>(live.size()) <= config_.lp_tree_threshold) {
        r = SolveDeltasFlow(p);
        if (r.bounded) {
            Weight total = 0;
            for (Weight d : r.delta) {
                total += d;
            }
            if (total == 0) {
                // the rounded optimum can sit still even when single trees
                // may move; the componentwise step breaks the stall
                r = SolveDeltasComponents(p);
            }
        }
    } else {
        r = SolveDeltasComponents(p);
    }
    if (!r.bounded) {
        return false;
    }
    ApplyAndDiscover(live, r.delta);
    ++stats_.dual_updates;
    Weight total = 0;
    for (Weight d : r.delta) {
        total += d;
    }
    if (total == 0) {
        bool pending = false;
        for (TreeId t : live) {
            Tree &T = tree(t);
            if (!T.active.empty()) {
                pending = true;
                break;
            }
            int32_t top = node_heaps_.PeekMin(T.minus_nodes);
            if (top != kNullIndex && g_.nodes[top].lazy_dual - ydual(t) == 0) {
                pending = true;
                break;
            }
        }
        Require(pending, "dual update stalled without pending primal work");
    }
    return true;
}

DeltaProblem Solver::CollectConstraints(const std::vector<TreeId> &live) {
    DeltaProblem p;
    p.k = static_cast<int32_t>(live.size());
    p.a.assign(p.k, kInfWeight);
    tree_ci_.assign(trees_.size(), kNullIndex);
    for (int32_t i = 0; i < p.k; ++i) {
        tree_ci_[live[i].v] = i;
    }
    for (int32_t i = 0; i < p.k; ++i) {
        Tree &T = tree(live[i]);
        Weight yt = ydual(live[i]);
        Weight cap = kInfWeight;
        int32_t mtop = node_heaps_.PeekMin(T.minus_nodes);
        if (mtop != kNullIndex) {
            cap = std::min(cap, g_.nodes[mtop].lazy_dual - yt);
        }
        int32_t etop = edge_heaps_.PeekMin(T.plus_empty);
        if (etop != kNullIndex) {
            cap = std::min(cap, g_.edges[etop].lazy_slack - yt);
        }
        while (true) {
            int32_t itop = edge_heaps_.PeekMin(T.pp_internal);
            if (itop == kNullIndex) {
                break;
            }
            if (g_.IsLoop(EdgeId(itop))) {
                edge_heaps_.Remove(itop);  // absorbed pair, frozen deeper now
                continue;
            }
            Weight s2 = g_.edges[itop].lazy_slack - 2 * yt;
            Require(s2 % 2 == 0, "odd internal plus-plus slack");
            cap = std::min(cap, s2 / 2);
            break;
        }
        Require(cap > 0, "undrained tight edge at dual collection");
        p.a[i] = cap;
    }
    for (TreeId t : live) {
        Tree &T = tree(t);
        size_t w = 0;
        for (size_t k = 0; k < T.pairs.size(); ++k) {
            if (pair_recs_[T.pairs[k]].alive) {
                T.pairs[w++] = T.pairs[k];
            }
        }
        T.pairs.resize(w);
        for (int32_t idx : T.pairs) {
            PairRec &pr = pair_recs_[idx];
            if (pr.a != t) {
                continue;  // each pair contributes from its low side once
            }
            int32_t i = tree_ci_[pr.a.v];
            int32_t j = tree_ci_[pr.b.v];
            Require(i != kNullIndex && j != kNullIndex, "pair record outliving its trees");
            Weight ya = ydual(pr.a);
            Weight yb = ydual(pr.b);
            int32_t e;
            if ((e = edge_heaps_.PeekMin(pr.pp)) != kNullIndex) {
                Weight cap = g_.edges[e].lazy_slack - ya - yb;
                Require(cap > 0, "undrained tight cross edge at dual collection");
                p.b.push_back({i, j, cap});
            }
            if ((e = edge_heaps_.PeekMin(pr.pm)) != kNullIndex) {
                Weight cap = g_.edges[e].lazy_slack - ya + yb;
                Require(cap >= 0, "negative cross slack");
                p.c.push_back({i, j, cap});
            }
            if ((e = edge_heaps_.PeekMin(pr.mp)) != kNullIndex) {
                Weight cap = g_.edges[e].lazy_slack + ya - yb;
                Require(cap >= 0, "negative cross slack");
                p.c.push_back({j, i, cap});
            }
        }
    }
    return p;
}

void Solver::ApplyAndDiscover(const std::vector<TreeId> &live,
                              const std::vector<Weight> &delta) {
    for (size_t i = 0; i < live.size(); ++i) {
        g_.tree_duals[live[i].v] += delta[i];
    }
    for (TreeId t : live) {
        Tree &T = tree(t);
        Weight yt = ydual(t);
        keyeq_scratch_.clear();
        edge_heaps_.ForEachKeyEq(T.plus_empty, yt, [&](int32_t e) {
            Require(g_.edges[e].lazy_slack == yt, "negative boundary slack");
            keyeq_scratch_.push_back(e);
        });
        for (int32_t e : keyeq_scratch_) {
            g_.edges[e].maybe_zero = true;
            ActivateEdge(EdgeId(e));
        }
        keyeq_scratch_.clear();
        edge_heaps_.ForEachKeyEq(T.pp_internal, 2 * yt, [&](int32_t e) {
            // frozen loops may sit below the target, so the slack check
            // waits until they are told apart
            keyeq_scratch_.push_back(e);
        });
        for (int32_t e : keyeq_scratch_) {
            if (g_.IsLoop(EdgeId(e))) {
                edge_heaps_.Remove(e);
                continue;
            }
            Require(g_.edges[e].lazy_slack == 2 * yt, "negative internal slack");
            g_.edges[e].maybe_zero = true;
            ActivateEdge(EdgeId(e));
        }
    }
    for (TreeId t : live) {
        for (int32_t idx : tree(t).pairs) {
            PairRec &pr = pair_recs_[idx];
            if (!pr.alive || pr.a != t) {
                continue;
            }
            Weight ya = ydual(pr.a);
            Weight yb = ydual(pr.b);
            keyeq_scratch_.clear();
            edge_heaps_.ForEachKeyEq(pr.pp, ya + yb, [&](int32_t e) {
                Require(g_.edges[e].lazy_slack == ya + yb, "negative cross slack");
                keyeq_scratch_.push_back(e);
            });
            for (int32_t e : keyeq_scratch_) {
                g_.edges[e].maybe_zero = true;
                ActivateEdge(EdgeId(e));
            }
            // cross plus-minus edges are not actionable, but their tight
            // flags must be refreshed for later conversions to see
            edge_heaps_.ForEachKeyEq(pr.pm, ya - yb, [&](int32_t e) {
                g_.edges[e].maybe_zero = true;
            });
            edge_heaps_.ForEachKeyEq(pr.mp, yb - ya, [&](int32_t e) {
                g_.edges[e].maybe_zero = true;
            });
        }
    }
}

}  // namespace cherry
