#ifndef DFSIM_SIM_GRAPH_HPP
#define DFSIM_SIM_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace dfsim {

using NodeId = std::int32_t;
constexpr NodeId kNoNode = -1;

enum class NodeKind : std::uint8_t { Start, TaskStart, TaskEnd, FifoWrite, FifoRead, Marker };
enum class EdgeKind : std::uint8_t { Seq, Data, Capacity, Call };

std::string_view to_string(NodeKind k);
std::string_view to_string(EdgeKind k);
std::optional<NodeKind> node_kind_from_string(std::string_view s);
std::optional<EdgeKind> edge_kind_from_string(std::string_view s);

struct Edge {
    NodeId src = kNoNode;
    EdgeKind kind = EdgeKind::Seq;
    std::int64_t weight = 0;
    std::int32_t next = -1;  // next overflow edge of the same destination

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.src == b.src && a.kind == b.kind && a.weight == b.weight;
    }
};

struct EventNode {
    NodeKind kind = NodeKind::Marker;
    std::int32_t module = -1;
    std::int32_t fifo = -1;
    std::int64_t ordinal = 0;  // 1-based access ordinal for FIFO nodes
    std::int64_t cycle = 0;
    Edge first_edge;           // inline predecessor slot; src == kNoNode when unused
    std::int32_t extra = -1;   // head of the overflow list
};

class GraphCycleError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Per-FIFO node ids of committed writes and reads, indexed by ordinal - 1.
struct AccessIndex {
    std::vector<std::vector<NodeId>> writes;
    std::vector<std::vector<NodeId>> reads;
};

// Append-only DAG of timing events. A node's cycle is the longest path to
// it from the start node. Each node keeps its first incoming edge inline and
// the rest in a shared overflow list.
class SimulationGraph {
public:
    SimulationGraph();

    NodeId start() const { return 0; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t edge_count() const;

    // Appends a node reached from `pred` by a seq edge of `seq_weight`.
    NodeId add_node(NodeKind kind, std::int32_t module, NodeId pred, std::int64_t seq_weight,
                    std::int32_t fifo = -1, std::int64_t ordinal = 0);

    // Adds an edge and raises the cycle of `dst` if needed. Successors of
    // `dst` are not updated; call recompute() for that.
    std::int64_t add_edge(NodeId src, NodeId dst, EdgeKind kind, std::int64_t weight = 1);

    std::int64_t node_cycle(NodeId id) const { return node(id).cycle; }
    const EventNode& node(NodeId id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) unknown_node(id);
        return nodes_[static_cast<std::size_t>(id)];
    }

    template <typename F>
    void for_each_in_edge(NodeId id, F&& f) const {
        const EventNode& n = nodes_[static_cast<std::size_t>(id)];
        if (n.first_edge.src != kNoNode) f(n.first_edge);
        for (std::int32_t e = n.extra; e >= 0; e = extra_[static_cast<std::size_t>(e)].next) {
            f(extra_[static_cast<std::size_t>(e)]);
        }
    }

    // Recomputes every cycle in topological order. Throws GraphCycleError.
    void recompute();

    void remove_edges(EdgeKind kind);

    AccessIndex access_index(std::size_t fifo_count) const;

    // Replaces all capacity edges with those implied by `depths`: for every
    // write ordinal w > S an edge from read (w - S) to write w, then
    // recomputes. Returns the total latency (max cycle + 1), or nullopt when
    // a required read does not exist or the edges close a cycle.
    std::optional<std::int64_t> finalize(const std::vector<std::int64_t>& depths);
    std::optional<std::int64_t> finalize(const std::vector<std::int64_t>& depths, const AccessIndex& idx);

    std::int64_t total_latency() const;

    // True when every node's cycle equals the longest-path equation.
    bool satisfies_longest_path() const;

    // Returns a copy with nodes renumbered so that new id = order[old id].
    // `order` must be a permutation that keeps edges pointing forward.
    SimulationGraph renumbered(const std::vector<NodeId>& order) const;

    friend bool operator==(const SimulationGraph& a, const SimulationGraph& b);

private:
    [[noreturn]] static void unknown_node(NodeId id);

    std::vector<EventNode> nodes_;
    std::vector<Edge> extra_;
};

}  // namespace dfsim

#endif  // DFSIM_SIM_GRAPH_HPP
