#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "Instance.h"
#include "PairingHeap.h"
#include "Types.h"

namespace cherry {

// All weights and duals below live in the quadrupled domain: input weights are
// multiplied by 4 at load so that fractional-init halves and dual-update
// halves stay integral.
struct Edge {
    int32_t end_u = kNullIndex;  // elementary endpoints, fixed
    int32_t end_v = kNullIndex;
    int32_t lazy_u = kNullIndex;  // last resolved top endpoints, may be stale
    int32_t lazy_v = kNullIndex;
    Weight w4 = 0;
    // w4 minus the lazy duals of every node on both endpoint chains; true
    // slack of a non-loop edge is this minus the tree offsets of the two tops
    Weight lazy_slack = 0;
    bool matched = false;
    // false implies the true slack is positive; true promises nothing
    bool maybe_zero = true;
    int32_t stamp = 0;  // generation-stamped scratch (path marking, dedup)
    HeapLinks heap;
};

struct Node {
    Weight lazy_dual = 0;  // excludes the tree offset determined by the label
    Label label = Label::kFree;
    bool is_supernode = false;
    bool alive = true;
    bool cache_built = false;
    TreeId tree;
    EdgeId matched_edge;
    EdgeId minus_parent;      // unmatched arc toward the root; plus-parent is
                              // the matched edge and is not stored separately
    NodeId blossom_parent;
    NodeId blossom_ancestor;  // path-compression cache, skipped when stale
    NodeId receptacle;        // class pointer for ±-nodes, self when top
    NodeId interior_root;     // supernodes: the unmatched interior child
    Weight y_tree_at_birth = 0;  // supernodes: owning tree's dual at shrink
    std::vector<NodeId> children;         // supernodes, shrink order
    std::vector<EdgeId> neighbor_cache;   // supernodes, materialized lazily
    int32_t stamp = 0;                    // generation-stamped scratch
    Weight scratch_dist = 0;              // rotation distance map
    HeapLinks heap;                       // minus-supernode heap membership
};

class Graph {
  public:
    void Load(const Instance &inst);

    Node &node(NodeId v) { return nodes[v.v]; }
    const Node &node(NodeId v) const { return nodes[v.v]; }
    Edge &edge(EdgeId e) { return edges[e.v]; }
    const Edge &edge(EdgeId e) const { return edges[e.v]; }

    // root of the blossom-parent chain, with path compression through the
    // blossom_ancestor cache; dead caches left by expands are skipped
    NodeId TopNode(NodeId v);

    // resolved top endpoints; repoints the lazy endpoint fields
    std::pair<NodeId, NodeId> ResolveEnds(EdgeId e);

    bool IsLoop(EdgeId e) {
        auto [a, b] = ResolveEnds(e);
        return a == b;
    }

    // other top endpoint of a non-loop edge relative to top node v
    NodeId OtherTop(EdgeId e, NodeId v) {
        auto [a, b] = ResolveEnds(e);
        return a == v ? b : a;
    }

    // visits every non-loop incident edge of top node v exactly once;
    // materializes and reuses supernode caches
    template <class F>
    void ForEachIncident(NodeId v, F &&f) {
        if (!node(v).is_supernode) {
            for (int32_t i = adj_offset[v.v]; i < adj_offset[v.v + 1]; ++i) {
                f(EdgeId(adj_edges[i]));
            }
            return;
        }
        EnsureCache(v);
        // indexed loop: f may resolve endpoints but never edits the cache
        const auto &cache = node(v).neighbor_cache;
        for (size_t i = 0; i < cache.size(); ++i) {
            f(cache[i]);
        }
    }

    int32_t Degree(NodeId v) const {
        return adj_offset[v.v + 1] - adj_offset[v.v];
    }

    // tree offset of a top node: +y_T for plus and ± labels, -y_T for minus,
    // 0 for free tops and interior nodes
    Weight Offset(NodeId v) const {
        const Node &nd = node(v);
        if (!nd.tree || nd.blossom_parent) {
            return 0;
        }
        if (nd.label == Label::kMinus) {
            return -tree_duals[nd.tree.v];
        }
        if (IsPlusish(nd.label)) {
            return tree_duals[nd.tree.v];
        }
        return 0;
    }

    Weight TrueDual(NodeId v) const { return node(v).lazy_dual + Offset(v); }

    // true slack of a non-loop edge
    Weight TrueSlack(EdgeId e) {
        auto [a, b] = ResolveEnds(e);
        Require(a != b, "slack of a loop edge");
        return edge(e).lazy_slack - Offset(a) - Offset(b);
    }

    // loops keep a frozen slack: their cut set excludes every blossom from the
    // meet supernode upward, and interior duals never move
    Weight LoopSlack(EdgeId e, NodeId meet) {
        return edge(e).lazy_slack - 2 * node(meet).y_tree_at_birth;
    }

    // lowest common supernode of the two elementary endpoints
    NodeId MeetSupernode(EdgeId e);

    // ancestor's child on elementary node elem's blossom-parent chain
    NodeId ChildUnder(NodeId ancestor, int32_t elem);

    // brute-force slack straight from the dual definition: expands every
    // enclosing-set dual from scratch; audit-only, independent of lazy
    // bookkeeping
    Weight AuditSlack(EdgeId e);

    NodeId NewSupernode();

    int32_t fresh_stamp() { return ++stamp_counter; }

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<Weight> tree_duals;  // indexed by TreeId, grows as trees form
    int32_t original_n = 0;
    int32_t original_m = 0;

  private:
    void EnsureCache(NodeId v);

    std::vector<int32_t> adj_offset;
    std::vector<int32_t> adj_edges;
    std::vector<NodeId> top_path_;
    int32_t stamp_counter = 0;
};

}  // namespace cherry
