#include "dfsim/sim_graph.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace dfsim {

namespace {

constexpr std::array<std::string_view, 6> kNodeNames = {"start", "task_start", "task_end",
                                                         "fifo_write", "fifo_read", "marker"};
constexpr std::array<std::string_view, 4> kEdgeNames = {"seq", "data", "capacity", "call"};

}  // namespace

std::string_view to_string(NodeKind k) { return kNodeNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(EdgeKind k) { return kEdgeNames[static_cast<std::size_t>(k)]; }

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kNodeNames.size(); ++i) {
        if (kNodeNames[i] == s) return static_cast<NodeKind>(i);
    }
    return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kEdgeNames.size(); ++i) {
        if (kEdgeNames[i] == s) return static_cast<EdgeKind>(i);
    }
    return std::nullopt;
}

SimulationGraph::SimulationGraph() {
    EventNode s;
    s.kind = NodeKind::Start;
    nodes_.push_back(s);
}

std::size_t SimulationGraph::edge_count() const {
    std::size_t n = extra_.size();
    for (const auto& x : nodes_) n += x.first_edge.src != kNoNode ? 1 : 0;
    return n;
}

NodeId SimulationGraph::add_node(NodeKind kind, std::int32_t module, NodeId pred, std::int64_t seq_weight,
                                 std::int32_t fifo, std::int64_t ordinal) {
    if (pred < 0 || static_cast<std::size_t>(pred) >= nodes_.size()) {
        throw std::out_of_range("add_node: unknown predecessor " + std::to_string(pred));
    }
    EventNode n;
    n.kind = kind;
    n.module = module;
    n.fifo = fifo;
    n.ordinal = ordinal;
    n.first_edge = Edge{pred, EdgeKind::Seq, seq_weight, -1};
    n.cycle = nodes_[static_cast<std::size_t>(pred)].cycle + seq_weight;
    nodes_.push_back(n);
    return static_cast<NodeId>(nodes_.size() - 1);
}

std::int64_t SimulationGraph::add_edge(NodeId src, NodeId dst, EdgeKind kind, std::int64_t weight) {
    if (src < 0 || dst < 0 || static_cast<std::size_t>(src) >= nodes_.size() ||
        static_cast<std::size_t>(dst) >= nodes_.size()) {
        throw std::out_of_range("add_edge: unknown node");
    }
    if (src == dst) throw GraphCycleError("add_edge: self loop on node " + std::to_string(src));
    EventNode& d = nodes_[static_cast<std::size_t>(dst)];
    Edge e{src, kind, weight, -1};
    if (d.first_edge.src == kNoNode) {
        d.first_edge = e;
    } else {
        // Append at the tail so iteration order matches insertion order.
        e.next = -1;
        extra_.push_back(e);
        auto idx = static_cast<std::int32_t>(extra_.size() - 1);
        if (d.extra < 0) {
            d.extra = idx;
        } else {
            std::int32_t t = d.extra;
            while (extra_[static_cast<std::size_t>(t)].next >= 0) t = extra_[static_cast<std::size_t>(t)].next;
            extra_[static_cast<std::size_t>(t)].next = idx;
        }
    }
    d.cycle = std::max(d.cycle, nodes_[static_cast<std::size_t>(src)].cycle + weight);
    return d.cycle;
}

void SimulationGraph::unknown_node(NodeId id) { throw std::out_of_range("unknown node " + std::to_string(id)); }

// Longest paths by an iterative depth-first walk over incoming edges. A
// node's cycle accumulates as each predecessor closes; an edge whose source
// is still unvisited is revisited after that source is done.
void SimulationGraph::recompute() {
    const std::size_t n = nodes_.size();
    // Per-node DFS state: the next overflow edge to visit (>= 0) or one of these.
    constexpr std::int32_t kDone = -1;
    constexpr std::int32_t kInline = -3;
    constexpr std::int32_t kClosed = -4;
    constexpr std::int32_t kUnseen = -5;
    std::vector<std::int32_t> pos(n, kUnseen);
    std::vector<NodeId> stack;
    stack.reserve(64);
    for (std::size_t root = 0; root < n; ++root) {
        if (pos[root] != kUnseen) continue;
        pos[root] = kInline;
        nodes_[root].cycle = 0;
        stack.push_back(static_cast<NodeId>(root));
        while (!stack.empty()) {
            auto v = static_cast<std::size_t>(stack.back());
            EventNode& node = nodes_[v];
            const Edge* e = nullptr;
            std::int32_t after = kDone;
            if (pos[v] == kInline) {
                if (node.first_edge.src != kNoNode) {
                    e = &node.first_edge;
                    after = node.extra;
                } else {
                    pos[v] = node.extra;
                }
            }
            if (!e && pos[v] >= 0) {
                e = &extra_[static_cast<std::size_t>(pos[v])];
                after = e->next;
            }
            if (!e) {
                pos[v] = kClosed;
                stack.pop_back();
                continue;
            }
            auto p = static_cast<std::size_t>(e->src);
            if (pos[p] == kClosed) {
                node.cycle = std::max(node.cycle, nodes_[p].cycle + e->weight);
                pos[v] = after;
                continue;
            }
            if (pos[p] != kUnseen) throw GraphCycleError("simulation graph contains a cycle");
            pos[p] = kInline;
            nodes_[p].cycle = 0;
            stack.push_back(static_cast<NodeId>(p));
        }
    }
}

void SimulationGraph::remove_edges(EdgeKind kind) {
    std::vector<Edge> kept;
    kept.reserve(extra_.size());
    for (auto& node : nodes_) {
        std::int32_t e = node.extra;
        node.extra = -1;
        if (node.first_edge.src != kNoNode && node.first_edge.kind == kind) node.first_edge = Edge{};
        std::int32_t tail = -1;
        for (; e >= 0; e = extra_[static_cast<std::size_t>(e)].next) {
            Edge x = extra_[static_cast<std::size_t>(e)];
            if (x.kind == kind) continue;
            x.next = -1;
            if (node.first_edge.src == kNoNode) {
                node.first_edge = x;
                continue;
            }
            auto idx = static_cast<std::int32_t>(kept.size());
            kept.push_back(x);
            if (tail < 0) {
                node.extra = idx;
            } else {
                kept[static_cast<std::size_t>(tail)].next = idx;
            }
            tail = idx;
        }
    }
    extra_ = std::move(kept);
}

AccessIndex SimulationGraph::access_index(std::size_t fifo_count) const {
    AccessIndex idx;
    idx.writes.resize(fifo_count);
    idx.reads.resize(fifo_count);
    std::vector<std::size_t> nw(fifo_count, 0);
    std::vector<std::size_t> nr(fifo_count, 0);
    for (const auto& n : nodes_) {
        if (n.kind != NodeKind::FifoWrite && n.kind != NodeKind::FifoRead) continue;
        auto& count = (n.kind == NodeKind::FifoWrite ? nw : nr)[static_cast<std::size_t>(n.fifo)];
        count = std::max(count, static_cast<std::size_t>(n.ordinal));
    }
    for (std::size_t f = 0; f < fifo_count; ++f) {
        idx.writes[f].assign(nw[f], kNoNode);
        idx.reads[f].assign(nr[f], kNoNode);
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        const auto& n = nodes_[v];
        if (n.kind != NodeKind::FifoWrite && n.kind != NodeKind::FifoRead) continue;
        auto& list = (n.kind == NodeKind::FifoWrite ? idx.writes : idx.reads)[static_cast<std::size_t>(n.fifo)];
        list[static_cast<std::size_t>(n.ordinal - 1)] = static_cast<NodeId>(v);
    }
    return idx;
}

std::optional<std::int64_t> SimulationGraph::finalize(const std::vector<std::int64_t>& depths) {
    return finalize(depths, access_index(depths.size()));
}

std::optional<std::int64_t> SimulationGraph::finalize(const std::vector<std::int64_t>& depths, const AccessIndex& idx) {
    remove_edges(EdgeKind::Capacity);
    for (std::size_t f = 0; f < depths.size(); ++f) {
        const auto& writes = idx.writes[f];
        const auto& reads = idx.reads[f];
        const std::int64_t s = depths[f];
        for (std::int64_t w = s + 1; w <= static_cast<std::int64_t>(writes.size()); ++w) {
            auto r = static_cast<std::size_t>(w - s - 1);
            if (r >= reads.size() || reads[r] == kNoNode) return std::nullopt;
            add_edge(reads[r], writes[static_cast<std::size_t>(w - 1)], EdgeKind::Capacity, 1);
        }
    }
    try {
        recompute();
    } catch (const GraphCycleError&) {
        return std::nullopt;
    }
    return total_latency();
}

std::int64_t SimulationGraph::total_latency() const {
    std::int64_t m = 0;
    for (const auto& n : nodes_) m = std::max(m, n.cycle);
    return m + 1;
}

bool SimulationGraph::satisfies_longest_path() const {
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        std::int64_t c = 0;
        for_each_in_edge(static_cast<NodeId>(v), [&](const Edge& e) {
            c = std::max(c, nodes_[static_cast<std::size_t>(e.src)].cycle + e.weight);
        });
        if (c != nodes_[v].cycle) return false;
    }
    return true;
}

SimulationGraph SimulationGraph::renumbered(const std::vector<NodeId>& order) const {
    if (order.size() != nodes_.size()) throw std::invalid_argument("renumbered: order has wrong size");
    std::vector<NodeId> inverse(order.size(), kNoNode);
    for (std::size_t old = 0; old < order.size(); ++old) {
        auto nw = static_cast<std::size_t>(order[old]);
        if (nw >= order.size() || inverse[nw] != kNoNode) throw std::invalid_argument("renumbered: not a permutation");
        inverse[nw] = static_cast<NodeId>(old);
    }
    SimulationGraph g;
    g.nodes_.clear();
    for (std::size_t nw = 0; nw < inverse.size(); ++nw) {
        EventNode n = nodes_[static_cast<std::size_t>(inverse[nw])];
        n.first_edge = Edge{};
        n.extra = -1;
        g.nodes_.push_back(n);
    }
    for (std::size_t nw = 0; nw < inverse.size(); ++nw) {
        auto old = inverse[nw];
        std::int64_t keep = g.nodes_[nw].cycle;
        for_each_in_edge(old, [&](const Edge& e) {
            g.add_edge(order[static_cast<std::size_t>(e.src)], static_cast<NodeId>(nw), e.kind, e.weight);
        });
        g.nodes_[nw].cycle = keep;
    }
    return g;
}

bool operator==(const SimulationGraph& a, const SimulationGraph& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t v = 0; v < a.nodes_.size(); ++v) {
        const auto& x = a.nodes_[v];
        const auto& y = b.nodes_[v];
        if (x.kind != y.kind || x.module != y.module || x.fifo != y.fifo || x.ordinal != y.ordinal ||
            x.cycle != y.cycle) {
            return false;
        }
        std::vector<Edge> ex;
        std::vector<Edge> ey;
        a.for_each_in_edge(static_cast<NodeId>(v), [&](const Edge& e) { ex.push_back(e); });
        b.for_each_in_edge(static_cast<NodeId>(v), [&](const Edge& e) { ey.push_back(e); });
        if (ex != ey) return false;
    }
    return true;
}

}  // namespace dfsim
