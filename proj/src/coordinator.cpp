#include <algorithm>
#include <chrono>

#include "engine_internal.hpp"

namespace dfsim::detail {

Coordinator::Coordinator(const ElaboratedDesign& d, const Depths& depths, const EngineOptions& options,
                         ReplyFn reply)
    : design_(&d),
      depths_(depths),
      options_(options),
      reply_(std::move(reply)),
      agents_(d.modules.size()),
      outputs_(d.outputs.size(), 0),
      output_set_(d.outputs.size(), false) {
    tables_.reserve(depths.size());
    for (auto s : depths) tables_.emplace_back(s);
}

bool Coordinator::all_finished() const {
    return std::all_of(agents_.begin(), agents_.end(), [](const AgentState& a) { return a.finished; });
}

void Coordinator::count_progress() {
    if (++progress_ > options_.max_events) budget_hit_ = true;
}

void Coordinator::accept(Request r) {
    if (r.kind == RequestKind::TraceBlock) {
        trace_.push_back(std::move(r.message));
        return;
    }
    auto a = r.agent;
    agents_[static_cast<std::size_t>(a)].pending.push_back(std::move(r));
    worklist_.push_back(a);
    while (!worklist_.empty() && !stopped()) {
        auto x = worklist_.back();
        worklist_.pop_back();
        drain(x);
    }
}

void Coordinator::drain(std::int32_t agent) {
    auto& st = agents_[static_cast<std::size_t>(agent)];
    while (!st.pending.empty() && !stopped()) {
        if (!handle(agent, st.pending.front())) return;
        st.pending.pop_front();
    }
}

// Returns false when the request must wait for another module's access.
bool Coordinator::handle(std::int32_t agent, Request& r) {
    auto& st = agents_[static_cast<std::size_t>(agent)];
    auto f = static_cast<std::size_t>(r.fifo);
    switch (r.kind) {
        case RequestKind::StartTask:
            st.last = graph_.add_node(NodeKind::TaskStart, agent, graph_.start(), 0);
            return true;
        case RequestKind::FifoWrite: {
            auto& t = tables_[f];
            std::int64_t w = t.write_count() + 1;
            std::optional<NodeId> cap;
            if (w > depths_[f]) {
                cap = t.nth_read(w - depths_[f]);
                if (!cap) return false;
            }
            NodeId n = graph_.add_node(NodeKind::FifoWrite, agent, st.last, r.offset, r.fifo, w);
            if (cap) graph_.add_edge(*cap, n, EdgeKind::Capacity, 1);
            t.record_write(n, r.value);
            st.last = n;
            count_progress();
            if (int reader = design_->fifo_reader[f]; reader >= 0) worklist_.push_back(reader);
            return true;
        }
        case RequestKind::FifoRead: {
            auto& t = tables_[f];
            std::int64_t k = t.read_count() + 1;
            auto src = t.nth_write(k);
            if (!src) return false;
            NodeId n = graph_.add_node(NodeKind::FifoRead, agent, st.last, r.offset, r.fifo, k);
            graph_.add_edge(*src, n, EdgeKind::Data, 1);
            auto value = t.record_read(n).second;
            st.last = n;
            count_progress();
            reply(agent, Reply{true, value, false});
            if (int writer = design_->fifo_writer[f]; writer >= 0) worklist_.push_back(writer);
            return true;
        }
        case RequestKind::FifoNbWrite:
        case RequestKind::FifoNbRead:
        case RequestKind::FifoCanRead:
        case RequestKind::FifoCanWrite: {
            Query q;
            q.kind = r.kind == RequestKind::FifoNbWrite  ? QueryKind::NbWrite
                     : r.kind == RequestKind::FifoNbRead ? QueryKind::NbRead
                     : r.kind == RequestKind::FifoCanRead ? QueryKind::CanRead
                                                          : QueryKind::CanWrite;
            q.agent = agent;
            q.sequence = st.queries++;
            q.fifo = r.fifo;
            q.ordinal = is_write_side(q.kind) ? tables_[f].write_count() + 1 : tables_[f].read_count() + 1;
            q.anchor = st.last;
            q.offset = r.offset;
            q.source_cycle = graph_.node_cycle(st.last) + r.offset;
            q.value = r.value;
            // An outcome that is already decided by committed accesses is
            // final, so it is answered at once rather than at quiescence.
            if (auto outcome = try_resolve(q)) {
                commit_query(q, *outcome);
            } else {
                pool_.push_back(q);
            }
            return true;
        }
        case RequestKind::Output:
            outputs_[static_cast<std::size_t>(r.output)] = r.value;
            output_set_[static_cast<std::size_t>(r.output)] = true;
            return true;
        case RequestKind::Fence:
            reply(agent, Reply{true, 0, false});
            return true;
        case RequestKind::TaskEnd:
            st.last = graph_.add_node(NodeKind::TaskEnd, agent, st.last, r.offset);
            st.finished = true;
            return true;
        case RequestKind::Fault:
            if (r.budget) {
                budget_hit_ = true;
            } else {
                fault_ = r.message;
            }
            return true;
        case RequestKind::TraceBlock:
            return true;
    }
    return true;
}

std::optional<bool> Coordinator::try_resolve(const Query& q) const {
    const auto f = static_cast<std::size_t>(q.fifo);
    const auto& t = tables_[f];
    std::optional<NodeId> target;
    if (is_write_side(q.kind)) {
        if (q.ordinal <= depths_[f]) return true;
        target = t.nth_read(q.ordinal - depths_[f]);
    } else {
        target = t.nth_write(q.ordinal);
    }
    if (!target) return std::nullopt;
    return graph_.node_cycle(*target) < q.source_cycle;
}

void Coordinator::commit_query(const Query& q, bool outcome) {
    ledger_.push_back(Constraint{q.kind, q.agent, q.sequence, q.fifo, q.ordinal, q.anchor, q.offset, outcome});
    count_progress();
    auto& st = agents_[static_cast<std::size_t>(q.agent)];
    const auto f = static_cast<std::size_t>(q.fifo);
    auto& t = tables_[f];
    if (outcome && q.kind == QueryKind::NbWrite) {
        NodeId n = graph_.add_node(NodeKind::FifoWrite, q.agent, q.anchor, q.offset, q.fifo, q.ordinal);
        if (q.ordinal > depths_[f]) graph_.add_edge(*t.nth_read(q.ordinal - depths_[f]), n, EdgeKind::Capacity, 1);
        t.record_write(n, q.value);
        st.last = n;
        count_progress();
        reply(q.agent, Reply{true, 0, false});
        if (int reader = design_->fifo_reader[f]; reader >= 0) worklist_.push_back(reader);
    } else if (outcome && q.kind == QueryKind::NbRead) {
        NodeId n = graph_.add_node(NodeKind::FifoRead, q.agent, q.anchor, q.offset, q.fifo, q.ordinal);
        graph_.add_edge(*t.nth_write(q.ordinal), n, EdgeKind::Data, 1);
        auto value = t.record_read(n).second;
        st.last = n;
        count_progress();
        reply(q.agent, Reply{true, value, false});
        if (int writer = design_->fifo_writer[f]; writer >= 0) worklist_.push_back(writer);
    } else {
        reply(q.agent, Reply{outcome, 0, false});
    }
}

Coordinator::Step Coordinator::quiesce() {
    if (all_finished()) return Step::Finished;
    std::sort(pool_.begin(), pool_.end(), [](const Query& a, const Query& b) {
        return std::tie(a.source_cycle, a.agent, a.sequence) < std::tie(b.source_cycle, b.agent, b.sequence);
    });
    std::vector<Query> pool;
    pool.swap(pool_);
    bool resolved = false;
    std::size_t i = 0;
    for (; i < pool.size() && !stopped(); ++i) {
        if (auto outcome = try_resolve(pool[i])) {
            commit_query(pool[i], *outcome);
            resolved = true;
            while (!worklist_.empty() && !stopped()) {
                auto x = worklist_.back();
                worklist_.pop_back();
                drain(x);
            }
        } else {
            pool_.push_back(pool[i]);
        }
    }
    for (; i < pool.size(); ++i) pool_.push_back(pool[i]);
    if (resolved || stopped()) return Step::Progress;
    if (pool_.empty()) {
        for (std::size_t a = 0; a < agents_.size(); ++a) {
            if (!agents_[a].finished) blocked_.push_back(design_->modules[a].name);
        }
        return Step::Deadlock;
    }
    // Nothing can be decided from committed accesses: every access still to
    // come happens no earlier than the earliest pending source cycle, so the
    // earliest query's target cannot precede it.
    Query q = pool_.front();
    pool_.erase(pool_.begin());
    commit_query(q, false);
    return Step::Progress;
}

EngineResult Coordinator::finish(Step last) {
    auto t0 = std::chrono::steady_clock::now();
    EngineResult res;
    res.depths = depths_;
    res.trace = std::move(trace_);
    for (std::size_t o = 0; o < outputs_.size(); ++o) {
        if (output_set_[o]) res.outputs[design_->outputs[o]] = outputs_[o];
    }
    if (budget_hit_) {
        res.status = Status::BudgetExhausted;
    } else if (last == Step::Deadlock) {
        res.status = Status::Deadlock;
        res.blocked = blocked_;
    } else {
        auto total = graph_.finalize(depths_);
        AccessIndex idx = graph_.access_index(depths_.size());
        for (std::size_t i = 0; i < ledger_.size(); ++i) {
            if (evaluate_constraint(ledger_[i], graph_, idx, depths_) != ledger_[i].outcome) res.violated.push_back(i);
        }
        if (!total || !res.violated.empty()) {
            res.status = Status::TimingInconsistency;
        } else {
            res.total_cycles = *total;
        }
    }

    // Canonical numbering: start, then each module's nodes in creation order.
    std::vector<std::size_t> per_module(agents_.size() + 1, 0);
    for (std::size_t v = 1; v < graph_.size(); ++v) {
        ++per_module[static_cast<std::size_t>(graph_.node(static_cast<NodeId>(v)).module) + 1];
    }
    std::vector<std::size_t> base(agents_.size(), 1);
    for (std::size_t m = 1; m < agents_.size(); ++m) base[m] = base[m - 1] + per_module[m];
    std::vector<NodeId> order(graph_.size(), 0);
    for (std::size_t v = 1; v < graph_.size(); ++v) {
        auto m = static_cast<std::size_t>(graph_.node(static_cast<NodeId>(v)).module);
        order[v] = static_cast<NodeId>(base[m]++);
    }
    res.graph = graph_.renumbered(order);
    for (auto& c : ledger_) c.anchor = order[static_cast<std::size_t>(c.anchor)];
    std::vector<std::size_t> position(ledger_.size());
    for (std::size_t i = 0; i < position.size(); ++i) position[i] = i;
    std::sort(position.begin(), position.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(ledger_[a].module, ledger_[a].sequence) < std::tie(ledger_[b].module, ledger_[b].sequence);
    });
    std::vector<std::size_t> rank(ledger_.size());
    for (std::size_t i = 0; i < position.size(); ++i) {
        res.constraints.push_back(ledger_[position[i]]);
        rank[position[i]] = i;
    }
    for (auto& v : res.violated) v = rank[v];
    std::sort(res.violated.begin(), res.violated.end());
    res.finalize_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace dfsim::detail
