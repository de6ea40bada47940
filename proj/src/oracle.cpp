#include "dfsim/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace dfsim {

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::Deadlock: return "deadlock";
        case Status::BudgetExhausted: return "budget_exhausted";
        case Status::TimingInconsistency: return "timing_inconsistency";
    }
    return "?";
}

OracleState::OracleState(const ElaboratedDesign& d, Depths depths)
    : design_(&d),
      depths_(std::move(depths)),
      queues_(d.fifo_names.size()),
      occupancy_(d.fifo_names.size(), 0),
      outputs_(d.outputs.size(), 0),
      output_set_(d.outputs.size(), false),
      events_(d.modules.size()) {
    modules_.reserve(d.modules.size());
    for (const auto& code : d.modules) modules_.push_back(Module{Interpreter(code)});
    for (std::size_t m = 0; m < modules_.size(); ++m) advance(m, 0);
    if (std::all_of(modules_.begin(), modules_.end(), [](const Module& x) { return x.phase == Done; })) {
        status_ = Finished;
    }
}

// The module finished an instruction at cycle t (or started at t = 0): run
// ahead to the next instruction that occupies cycles.
void OracleState::advance(std::size_t m, std::int64_t t) {
    Module& mod = modules_[m];
    mod.last = t;
    for (;;) {
        const Instruction* i = mod.interp.settle();
        if (!i) {
            mod.phase = Done;
            return;
        }
        if (i->op == OpCode::Output && i->cost == 0) {
            auto o = static_cast<std::size_t>(i->output);
            outputs_[o] = mod.interp.evaluate();
            output_set_[o] = true;
            mod.interp.complete();
            continue;
        }
        mod.phase = Busy;
        mod.due = t + i->cost;
        return;
    }
}

bool OracleState::attempt(std::size_t m, std::int64_t t) {
    Interpreter& it = modules_[m].interp;
    const Instruction& i = it.current();
    auto f = static_cast<std::size_t>(i.fifo);
    switch (i.op) {
        case OpCode::Output: {
            auto o = static_cast<std::size_t>(i.output);
            outputs_[o] = it.evaluate();
            output_set_[o] = true;
            it.complete();
            return true;
        }
        case OpCode::Write:
        case OpCode::WriteNb: {
            bool room = static_cast<std::int64_t>(occupancy_[f]) < depths_[f];
            if (room) {
                pending_pushes_.emplace_back(i.fifo, it.evaluate());
                events_[m].push_back({OpCode::Write, i.fifo, t});
            }
            if (i.op == OpCode::Write) {
                if (!room) return false;
                it.complete();
            } else {
                it.complete_nonblocking(room);
            }
            return true;
        }
        case OpCode::Read:
        case OpCode::ReadNb: {
            bool data = occupancy_[f] > 0;
            std::int64_t v = 0;
            if (data) {
                v = queues_[f].front();
                queues_[f].pop_front();
                events_[m].push_back({OpCode::Read, i.fifo, t});
            }
            if (i.op == OpCode::Read) {
                if (!data) return false;
                it.complete_read(v);
            } else {
                it.complete_nonblocking(data, v);
            }
            return true;
        }
        case OpCode::Empty:
            it.complete_check(occupancy_[f] == 0);
            return true;
        case OpCode::Full:
            it.complete_check(static_cast<std::int64_t>(occupancy_[f]) >= depths_[f]);
            return true;
        default:
            it.complete();
            return true;
    }
}

void OracleState::step() {
    if (status_ != Running) return;
    const std::int64_t t = clock_ + 1;
    for (std::size_t f = 0; f < queues_.size(); ++f) occupancy_[f] = queues_[f].size();
    bool committed = false;
    for (std::size_t m = 0; m < modules_.size(); ++m) {
        Module& mod = modules_[m];
        if (mod.phase == Done) continue;
        if (mod.phase == Busy && mod.due != t) continue;
        std::size_t before = events_[m].size();
        if (attempt(m, t)) {
            committed = committed || events_[m].size() != before;
            advance(m, t);
        } else {
            mod.phase = Blocked;
        }
    }
    for (const auto& [f, v] : pending_pushes_) queues_[static_cast<std::size_t>(f)].push_back(v);
    pending_pushes_.clear();
    for (std::size_t f = 0; f < queues_.size(); ++f) {
        if (static_cast<std::int64_t>(queues_[f].size()) > depths_[f]) {
            throw std::logic_error("oracle: FIFO '" + design_->fifo_names[f] + "' exceeds its depth");
        }
    }
    clock_ = t;
    bool all_done = true;
    bool any_busy = false;
    for (const auto& mod : modules_) {
        all_done = all_done && mod.phase == Done;
        any_busy = any_busy || mod.phase == Busy;
    }
    if (all_done) {
        status_ = Finished;
    } else if (!any_busy && !committed) {
        status_ = Deadlocked;
    }
}

OracleResult OracleState::result() const {
    OracleResult r;
    r.status = status_ == Finished ? Status::Ok : status_ == Deadlocked ? Status::Deadlock : Status::BudgetExhausted;
    for (std::size_t o = 0; o < outputs_.size(); ++o) {
        if (output_set_[o]) r.outputs[design_->outputs[o]] = outputs_[o];
    }
    std::int64_t last = 0;
    for (std::size_t m = 0; m < modules_.size(); ++m) {
        if (modules_[m].phase == Done) {
            r.end_cycles.push_back(modules_[m].last);
            last = std::max(last, modules_[m].last);
        } else {
            r.end_cycles.push_back(-1);
            if (status_ == Deadlocked) r.blocked.push_back(design_->modules[m].name);
        }
    }
    if (r.status == Status::Ok) r.total_cycles = last + 1;
    r.events = events_;
    return r;
}

OracleResult oracle_run(const ElaboratedDesign& d, const Depths& depths, std::int64_t max_cycles) {
    if (max_cycles <= 0) throw std::invalid_argument("max_cycles must be positive");
    OracleState s(d, depths);
    while (s.running() && s.clock() < max_cycles) s.step();
    return s.result();
}

}  // namespace dfsim
