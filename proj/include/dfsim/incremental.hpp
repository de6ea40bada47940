#ifndef DFSIM_INCREMENTAL_HPP
#define DFSIM_INCREMENTAL_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dfsim/engine.hpp"

namespace dfsim {

struct Refinalized {
    SimulationGraph graph;
    std::int64_t total_cycles = 0;
};

// Copies the graph, swaps its capacity edges for those implied by
// `new_depths` and recomputes cycles. nullopt when the new depths would make
// a write wait for a read that never happened, or close a cycle.
std::optional<Refinalized> re_finalize(const SimulationGraph& g, const Depths& new_depths);

// Indices of constraints whose outcome differs under the graph's cycles.
std::vector<std::size_t> validate_constraints(const std::vector<Constraint>& ledger, const SimulationGraph& g,
                                              const Depths& depths);
std::vector<std::size_t> validate_constraints(const std::vector<Constraint>& ledger, const SimulationGraph& g,
                                              const AccessIndex& idx, const Depths& depths);

struct NeedsFullResimulation {
    std::vector<std::size_t> violated;
    std::string reason;
};

using IncrementalResult = std::variant<EngineResult, NeedsFullResimulation>;

// Reuses a completed run under new depths without executing any module.
IncrementalResult incremental_run(const EngineResult& prior, const Depths& new_depths);

}  // namespace dfsim

#endif  // DFSIM_INCREMENTAL_HPP
