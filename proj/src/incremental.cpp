#include "dfsim/incremental.hpp"

namespace dfsim {

namespace {

std::optional<Refinalized> re_finalize(const SimulationGraph& g, const AccessIndex& idx, const Depths& new_depths) {
    Refinalized out{g, 0};
    auto total = out.graph.finalize(new_depths, idx);
    if (!total) return std::nullopt;
    out.total_cycles = *total;
    return out;
}

}  // namespace

std::optional<Refinalized> re_finalize(const SimulationGraph& g, const Depths& new_depths) {
    return re_finalize(g, g.access_index(new_depths.size()), new_depths);
}

std::vector<std::size_t> validate_constraints(const std::vector<Constraint>& ledger, const SimulationGraph& g,
                                              const Depths& depths) {
    return validate_constraints(ledger, g, g.access_index(depths.size()), depths);
}

std::vector<std::size_t> validate_constraints(const std::vector<Constraint>& ledger, const SimulationGraph& g,
                                              const AccessIndex& idx, const Depths& depths) {
    std::vector<std::size_t> violated;
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        if (evaluate_constraint(ledger[i], g, idx, depths) != ledger[i].outcome) violated.push_back(i);
    }
    return violated;
}

IncrementalResult incremental_run(const EngineResult& prior, const Depths& new_depths) {
    if (prior.status != Status::Ok) {
        return NeedsFullResimulation{{}, "prior run did not complete (status " + std::string(to_string(prior.status)) + ")"};
    }
    if (new_depths.size() != prior.depths.size()) {
        return NeedsFullResimulation{{}, "depths do not match the prior run's FIFOs"};
    }
    for (auto s : new_depths) {
        if (s < 1) return NeedsFullResimulation{{}, "FIFO depths must be >= 1"};
    }
    // Node ids and access ordinals do not change, so one index serves both
    // the capacity edges and the constraint targets.
    AccessIndex idx = prior.graph.access_index(new_depths.size());
    auto fin = re_finalize(prior.graph, idx, new_depths);
    if (!fin) return NeedsFullResimulation{{}, "new depths stall a write on a read that never happens"};
    auto violated = validate_constraints(prior.constraints, fin->graph, idx, new_depths);
    if (!violated.empty()) {
        return NeedsFullResimulation{std::move(violated), "query outcomes change under the new depths"};
    }
    EngineResult r;
    r.status = Status::Ok;
    r.total_cycles = fin->total_cycles;
    r.outputs = prior.outputs;
    r.constraints = prior.constraints;
    r.graph = std::move(fin->graph);
    r.depths = new_depths;
    return r;
}

}  // namespace dfsim
