#ifndef DFSIM_ENGINE_HPP
#define DFSIM_ENGINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfsim/elaborate.hpp"
#include "dfsim/oracle.hpp"
#include "dfsim/sim_graph.hpp"

namespace dfsim {

enum class QueryKind : std::uint8_t { NbWrite, NbRead, CanRead, CanWrite };

std::string_view to_string(QueryKind k);
std::optional<QueryKind> query_kind_from_string(std::string_view s);

// Write-side queries compare against read (ordinal - S); read-side queries
// against write (ordinal). The target is derived from the depth at
// evaluation time, so the same constraint can be checked under new depths.
inline bool is_write_side(QueryKind k) { return k == QueryKind::NbWrite || k == QueryKind::CanWrite; }

// The recorded outcome of one resolved query. The source cycle is the cycle
// of `anchor` (the module's previous event) plus `offset`.
struct Constraint {
    QueryKind kind = QueryKind::NbWrite;
    std::int32_t module = -1;
    std::int64_t sequence = 0;  // per-module query counter
    std::int32_t fifo = -1;
    std::int64_t ordinal = 0;
    NodeId anchor = kNoNode;
    std::int64_t offset = 0;
    bool outcome = false;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Evaluates the query condition under the graph's current cycles. A target
// access that never happened counts as "not yet", i.e. false.
bool evaluate_constraint(const Constraint& c, const SimulationGraph& g, const AccessIndex& idx, const Depths& depths);

enum class ScheduleMode { Threaded, Cooperative };

struct EngineOptions {
    std::int64_t max_events = 100'000'000;  // committed events + resolved queries
    std::int64_t max_cycles = 1'000'000'000;
    ScheduleMode mode = ScheduleMode::Threaded;
    std::optional<std::uint64_t> jitter_seed;
    bool trace = false;
};

struct EngineResult {
    Status status = Status::Ok;
    std::int64_t total_cycles = 0;  // 0 unless status is Ok
    std::map<std::string, std::int64_t> outputs;
    std::vector<std::string> blocked;
    std::vector<Constraint> constraints;
    std::vector<std::size_t> violated;  // indices into constraints
    SimulationGraph graph;
    Depths depths;
    std::vector<std::string> trace;
    double engine_ms = 0;
    double finalize_ms = 0;
};

// Runs the interleaved simulation: one functional agent per module, one
// coordinator owning the graph, FIFO tables and query pool. Throws
// SimulationError for arithmetic faults inside a module.
EngineResult run_simulation(const ElaboratedDesign& d, const Depths& depths, const EngineOptions& options = {});

// Statements executed by functional agents since process start.
std::uint64_t agent_statement_count();

}  // namespace dfsim

#endif  // DFSIM_ENGINE_HPP
