#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "DimacsIO.h"
#include "DualLp.h"
#include "Graph.h"
#include "Instance.h"
#include "PairingHeap.h"
#include "Types.h"

namespace cherry {

enum class InitMode : uint8_t {
    kGreedy,
    kFractional,
    kFractionalThresholded,
};

enum class DualMode : uint8_t {
    kComponents,
    kLp,
};

struct SolverConfig {
    InitMode init = InitMode::kFractionalThresholded;
    int32_t init_threshold = 100;  // fractional-init tree size cap
    DualMode dual_mode = DualMode::kComponents;
    int32_t lp_tree_threshold = 100;  // LP dual rounds only below this many live trees
    double timeout_seconds = 500.0;
};

struct RunStats {
    int64_t grow_outs = 0;
    int64_t grow_ins = 0;
    int64_t augments = 0;
    int64_t shrinks = 0;  // supernodes created
    int64_t expands = 0;
    int64_t dual_updates = 0;
    int32_t max_node_depth = 0;  // deepest blossom nesting ever built
    double init_seconds = 0.0;
    double primal_seconds = 0.0;
    double dual_seconds = 0.0;
    double total_seconds = 0.0;
};

struct BlossomDualValue {
    std::vector<int32_t> members;  // elementary ids, 0-based
    Weight value4 = 0;             // quadrupled domain, > 0
};

// Result in the original weight domain except for the dual values, which stay
// quadrupled; node_duals4 is empty when infeasible.
struct Solution {
    bool infeasible = false;
    Weight total_weight = 0;
    std::vector<std::pair<int32_t, int32_t>> matching;  // 0-based
    std::vector<Weight> node_duals4;
    std::vector<BlossomDualValue> blossom_duals4;
    RunStats stats;
};

// Certificate values are emitted in the original domain with scale 1 when
// every dual is divisible by 4, otherwise quadrupled with scale 4.
SolutionFile MakeSolutionFile(const Solution &sol, bool emit_certificate);

class Solver {
  public:
    Solver(const Instance &inst, SolverConfig config = {});

    // single-shot; throws TimeoutError past the configured deadline
    Solution Run();

    // called with a phase name after every main-loop phase; tests install
    // an AuditForest call here
    std::function<void(const char *)> phase_hook;

    // full structural audit from scratch: slacks, labels, alternating paths,
    // blossom interiors, heap contents; throws SolverError on violation
    void AuditForest();

    // top-level matched pair count; audit and phase instrumentation
    int32_t MatchedPairCount();

    const Graph &graph() const { return g_; }

  private:
    struct EdgeKeyAccess {
        Graph *g = nullptr;
        HeapLinks &Links(int32_t e) { return g->edges[e].heap; }
        Weight Key(int32_t e) const { return g->edges[e].lazy_slack; }
    };
    struct NodeKeyAccess {
        Graph *g = nullptr;
        HeapLinks &Links(int32_t v) { return g->nodes[v].heap; }
        Weight Key(int32_t v) const { return g->nodes[v].lazy_dual; }
    };

    // cross-tree edge heaps for one unordered tree pair; a has the smaller id
    struct PairRec {
        TreeId a;
        TreeId b;
        HeapId pp;  // plus(a) x plus(b)
        HeapId pm;  // plus(a) x minus(b)
        HeapId mp;  // minus(a) x plus(b)
        bool alive = true;
    };

    struct Tree {
        NodeId root;
        bool alive = true;
        bool queued = false;  // true iff this tree sits in drain_work_
        HeapId minus_nodes;   // node heap: minus supernode tops, key lazy_dual
        HeapId plus_empty;    // (plusish here, free) boundary edges
        HeapId pp_internal;   // (plusish, plusish) inside this tree, plus loops
        std::vector<NodeId> vertex_list;  // tops ever added, stale entries skipped
        std::vector<int32_t> pairs;       // PairRec indices, dead entries swept
        std::deque<NodeId> active;        // FIFO of nodes to scan
    };

    // init pipeline
    bool InitDuals();
    void GreedyRaise();
    void GreedyMatch();
    void FractionalInit(int32_t threshold);
    void BuildTrees();

    // primal operations
    void ExpandDrain();
    void DrainQueues();
    bool ProcessNode(TreeId t, NodeId v);
    void GrowOut(NodeId v, EdgeId e);
    void GrowIn(NodeId u, NodeId v, EdgeId e);
    void ConvertPath(NodeId w, EdgeId bridge, NodeId target_class);
    void ConvertOne(NodeId z, EdgeId new_minus_parent, NodeId target_class);
    void Augment(NodeId u, NodeId v, EdgeId e);
    void CollectTreePath(NodeId from, std::vector<NodeId> &nodes,
                         std::vector<EdgeId> &arcs);
    void DestroyTrees(TreeId t1, TreeId t2);
    void ShrinkAll();
    void Expand(NodeId b);
    void ExpandFree(NodeId b);
    void ReleaseChildren(NodeId b);
    void ExpandEdgePass(NodeId b, Weight off_b_old);
    void RotateReceptacle(NodeId b, NodeId target);
    void SettleInteriors();
    NodeId FindReceptacle(NodeId v);
    NodeId InteriorOther(NodeId b, EdgeId e, NodeId child);
    int32_t InsideEnd(EdgeId e, NodeId b);
    void AuditInterior(NodeId b);

    // dual rounds
    bool DualRound();
    DeltaProblem CollectConstraints(const std::vector<TreeId> &live);
    void ApplyAndDiscover(const std::vector<TreeId> &live,
                          const std::vector<Weight> &delta);

    // shared plumbing
    Tree &tree(TreeId t) { return trees_[t.v]; }
    Weight &ydual(TreeId t) { return g_.tree_duals[t.v]; }
    void Relabel(NodeId v, Label to, TreeId to_tree);
    void ReHome(EdgeId e);
    HeapId HomeFor(NodeId a, NodeId b);
    int32_t PairRecFor(TreeId x, TreeId y);
    void ActivateEdge(EdgeId e);
    void ActivateNode(NodeId v);
    void CheckDeadline();
    Solution Extract();
    Solution InfeasibleSolution();

    Graph g_;
    SolverConfig config_;
    HeapArena<EdgeKeyAccess> edge_heaps_;
    HeapArena<NodeKeyAccess> node_heaps_;
    std::vector<Tree> trees_;
    std::vector<PairRec> pair_recs_;
    std::deque<TreeId> drain_work_;  // trees with non-empty active queues
    std::unordered_map<int64_t, int32_t> pair_index_;
    std::vector<NodeId> converted_;   // ± conversions since the last shrink
    std::vector<int32_t> depth_;      // blossom nesting depth per node id
    std::vector<int32_t> tree_ci_;    // live-tree compression scratch
    int32_t live_trees_ = 0;
    RunStats stats_;
    std::chrono::steady_clock::time_point deadline_;

    std::vector<NodeId> path_nodes_[2];  // augment scratch
    std::vector<EdgeId> path_arcs_[2];
    std::vector<EdgeId> scan_ins_;        // node-scan candidate scratch
    std::vector<EdgeId> scan_outs_;
    std::vector<NodeId> expand_path_;     // interior path scratch
    std::vector<EdgeId> expand_arcs_;
    std::vector<NodeId> rot_px_;          // rotation scratch
    std::vector<EdgeId> rot_ax_;
    std::vector<int32_t> keyeq_scratch_;  // discovery scratch
};

}  // namespace cherry
