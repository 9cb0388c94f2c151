#include "Graph.h"

#include <algorithm>

namespace cherry {

void Graph::Load(const Instance &inst) {
    original_n = inst.n;
    original_m = static_cast<int32_t>(inst.edges.size());
    nodes.clear();
    edges.clear();
    tree_duals.clear();
    // sized for the common case; repeated shrink/expand churn may still grow
    // the vector, so node references do not survive NewSupernode
    nodes.reserve(static_cast<size_t>(original_n) + original_n / 2 + 16);
    nodes.resize(original_n);
    for (int32_t i = 0; i < original_n; ++i) {
        nodes[i].receptacle = NodeId(i);
    }
    edges.resize(inst.edges.size());
    for (size_t i = 0; i < inst.edges.size(); ++i) {
        const auto &in = inst.edges[i];
        Edge &e = edges[i];
        e.end_u = in.u;
        e.end_v = in.v;
        e.lazy_u = in.u;
        e.lazy_v = in.v;
        e.w4 = in.w * 4;
        e.lazy_slack = e.w4;
    }
    adj_offset.assign(original_n + 1, 0);
    for (const auto &e : edges) {
        ++adj_offset[e.end_u + 1];
        ++adj_offset[e.end_v + 1];
    }
    for (int32_t i = 0; i < original_n; ++i) {
        adj_offset[i + 1] += adj_offset[i];
    }
    adj_edges.resize(edges.size() * 2);
    std::vector<int32_t> cursor(adj_offset.begin(), adj_offset.end() - 1);
    for (size_t i = 0; i < edges.size(); ++i) {
        adj_edges[cursor[edges[i].end_u]++] = static_cast<int32_t>(i);
        adj_edges[cursor[edges[i].end_v]++] = static_cast<int32_t>(i);
    }
}

NodeId Graph::TopNode(NodeId v) {
    if (!node(v).blossom_parent) {
        return v;
    }
    top_path_.clear();
    NodeId cur = v;
    while (true) {
        Node &nd = node(cur);
        if (!nd.blossom_parent) {
            break;
        }
        top_path_.push_back(cur);
        // a cache entry left behind by an expand points at a dead node
        if (nd.blossom_ancestor && node(nd.blossom_ancestor).alive) {
            cur = nd.blossom_ancestor;
        } else {
            cur = nd.blossom_parent;
        }
    }
    for (NodeId w : top_path_) {
        node(w).blossom_ancestor = cur;
    }
    return cur;
}

std::pair<NodeId, NodeId> Graph::ResolveEnds(EdgeId e) {
    Edge &ed = edge(e);
    // lazy endpoints may reference expanded supernodes; fall back to the
    // elementary endpoints, whose parent chains are always live
    NodeId a = TopNode(nodes[ed.lazy_u].alive ? NodeId(ed.lazy_u) : NodeId(ed.end_u));
    NodeId b = TopNode(nodes[ed.lazy_v].alive ? NodeId(ed.lazy_v) : NodeId(ed.end_v));
    ed.lazy_u = a.v;
    ed.lazy_v = b.v;
    return {a, b};
}

NodeId Graph::MeetSupernode(EdgeId e) {
    int32_t gen = fresh_stamp();
    for (NodeId x = NodeId(edge(e).end_u); x; x = node(x).blossom_parent) {
        node(x).stamp = gen;
    }
    for (NodeId x = NodeId(edge(e).end_v); x; x = node(x).blossom_parent) {
        if (node(x).stamp == gen) {
            return x;
        }
    }
    return NodeId();
}

NodeId Graph::ChildUnder(NodeId ancestor, int32_t elem) {
    NodeId cur(elem);
    while (cur && node(cur).blossom_parent != ancestor) {
        cur = node(cur).blossom_parent;
    }
    Require(bool(cur), "node is not under the claimed ancestor");
    return cur;
}

Weight Graph::AuditSlack(EdgeId e) {
    std::vector<NodeId> chain_u;
    std::vector<NodeId> chain_v;
    for (NodeId x = NodeId(edge(e).end_u); x; x = node(x).blossom_parent) {
        chain_u.push_back(x);
    }
    for (NodeId x = NodeId(edge(e).end_v); x; x = node(x).blossom_parent) {
        chain_v.push_back(x);
    }
    auto contains = [](const std::vector<NodeId> &chain, NodeId x) {
        return std::find(chain.begin(), chain.end(), x) != chain.end();
    };
    Weight sum = 0;
    for (NodeId x : chain_u) {
        if (!contains(chain_v, x)) {
            sum += node(x).lazy_dual;
        }
    }
    for (NodeId x : chain_v) {
        if (!contains(chain_u, x)) {
            sum += node(x).lazy_dual;
        }
    }
    Weight slack = edge(e).w4 - sum;
    NodeId top_u = chain_u.back();
    NodeId top_v = chain_v.back();
    if (top_u != top_v) {
        slack -= Offset(top_u) + Offset(top_v);
    }
    return slack;
}

NodeId Graph::NewSupernode() {
    NodeId id(static_cast<int32_t>(nodes.size()));
    nodes.emplace_back();
    Node &nd = nodes.back();
    nd.is_supernode = true;
    nd.receptacle = id;
    return id;
}

void Graph::EnsureCache(NodeId v) {
    Node &nd = node(v);
    if (nd.cache_built) {
        return;
    }
    nd.cache_built = true;  // set first: children cannot recurse back into v
    std::vector<EdgeId> gathered;
    for (NodeId c : nd.children) {
        ForEachIncident(c, [&](EdgeId e) {
            auto [a, b] = ResolveEnds(e);
            if (a != b) {
                gathered.push_back(e);
            }
        });
    }
    node(v).neighbor_cache = std::move(gathered);
}

}  // namespace cherry
