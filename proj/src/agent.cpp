#include <atomic>

#include "engine_internal.hpp"

namespace dfsim {

namespace {

std::atomic<std::uint64_t> g_agent_statements{0};

constexpr int kFenceInterval = 1024;

const char* op_name(OpCode op) {
    switch (op) {
        case OpCode::Assign: return "assign";
        case OpCode::Delay: return "delay";
        case OpCode::Skip: return "skip";
        case OpCode::Output: return "output";
        case OpCode::Write: return "write";
        case OpCode::Read: return "read";
        case OpCode::WriteNb: return "write_nb";
        case OpCode::ReadNb: return "read_nb";
        case OpCode::Empty: return "empty";
        case OpCode::Full: return "full";
        default: return "control";
    }
}

}  // namespace

std::uint64_t agent_statement_count() { return g_agent_statements.load(std::memory_order_relaxed); }

namespace detail {

void add_agent_statements(std::uint64_t n) { g_agent_statements.fetch_add(n, std::memory_order_relaxed); }

bool needs_reply(RequestKind k) {
    switch (k) {
        case RequestKind::FifoRead:
        case RequestKind::FifoCanRead:
        case RequestKind::FifoCanWrite:
        case RequestKind::FifoNbRead:
        case RequestKind::FifoNbWrite:
        case RequestKind::Fence:
            return true;
        default:
            return false;
    }
}

Agent::Agent(std::int32_t id, const ModuleCode& code, const EngineOptions& options)
    : id_(id), interp_(code), options_(&options) {}

// Submits a request. Returns true when the agent must now wait, either for
// the request's own reply or for a throttling fence.
bool Agent::send(RequestSink& sink, Request r) {
    r.agent = id_;
    if (needs_reply(r.kind)) {
        awaiting_kind_ = r.kind;
        add_agent_statements(uncounted_);
        uncounted_ = 0;
        sink.submit(std::move(r), true);
        return true;
    }
    sink.submit(std::move(r), false);
    if (++unacked_ >= kFenceInterval) {
        Request fence;
        fence.kind = RequestKind::Fence;
        return send(sink, std::move(fence));
    }
    return false;
}

Agent::Yield Agent::fault(RequestSink& sink, std::string message, bool budget) {
    add_agent_statements(uncounted_);
    uncounted_ = 0;
    Request r;
    r.kind = RequestKind::Fault;
    r.agent = id_;
    r.message = std::move(message);
    r.budget = budget;
    sink.submit(std::move(r), true);
    return Yield::Finished;
}

Agent::Yield Agent::run(RequestSink& sink) {
    try {
        if (!started_) {
            started_ = true;
            Request r;
            r.kind = RequestKind::StartTask;
            if (send(sink, std::move(r))) return Yield::NeedsReply;
        }
        for (;;) {
            if (abort_ && abort_->load(std::memory_order_relaxed)) return Yield::Finished;
            const Instruction* i = interp_.settle();
            if (!i) {
                add_agent_statements(uncounted_);
                uncounted_ = 0;
                Request r;
                r.kind = RequestKind::TaskEnd;
                r.agent = id_;
                r.offset = offset_;
                sink.submit(std::move(r), true);
                return Yield::Finished;
            }
            offset_ += i->cost;
            elapsed_ += i->cost;
            if (elapsed_ > options_->max_cycles) return fault(sink, "cycle budget exhausted", true);
            if (options_->trace) {
                Request t;
                t.kind = RequestKind::TraceBlock;
                t.message = interp_.code().name + " " + to_string(i->span) + " " + op_name(i->op);
                t.agent = id_;
                sink.submit(std::move(t), false);
            }
            Request r;
            r.fifo = i->fifo;
            r.offset = offset_;
            switch (i->op) {
                case OpCode::Output:
                    r.kind = RequestKind::Output;
                    r.output = i->output;
                    r.value = interp_.evaluate();
                    r.offset = 0;
                    interp_.complete();
                    ++uncounted_;
                    if (send(sink, std::move(r))) return Yield::NeedsReply;
                    continue;
                case OpCode::Write:
                    r.kind = RequestKind::FifoWrite;
                    r.value = interp_.evaluate();
                    interp_.complete();
                    ++uncounted_;
                    offset_ = 0;
                    if (send(sink, std::move(r))) return Yield::NeedsReply;
                    continue;
                case OpCode::Read:
                    r.kind = RequestKind::FifoRead;
                    send(sink, std::move(r));
                    return Yield::NeedsReply;
                case OpCode::WriteNb:
                    r.kind = RequestKind::FifoNbWrite;
                    r.value = interp_.evaluate();
                    send(sink, std::move(r));
                    return Yield::NeedsReply;
                case OpCode::ReadNb:
                    r.kind = RequestKind::FifoNbRead;
                    send(sink, std::move(r));
                    return Yield::NeedsReply;
                case OpCode::Empty:
                    r.kind = RequestKind::FifoCanRead;
                    send(sink, std::move(r));
                    return Yield::NeedsReply;
                case OpCode::Full:
                    r.kind = RequestKind::FifoCanWrite;
                    send(sink, std::move(r));
                    return Yield::NeedsReply;
                default:
                    interp_.complete();
                    ++uncounted_;
                    continue;
            }
        }
    } catch (const SimulationError& e) {
        return fault(sink, e.what(), false);
    }
}

void Agent::deliver(const Reply& r) {
    unacked_ = 0;
    switch (awaiting_kind_) {
        case RequestKind::FifoRead:
            interp_.complete_read(r.value);
            offset_ = 0;
            break;
        case RequestKind::FifoNbWrite:
        case RequestKind::FifoNbRead:
            interp_.complete_nonblocking(r.ok, r.value);
            if (r.ok) offset_ = 0;
            break;
        case RequestKind::FifoCanRead:
        case RequestKind::FifoCanWrite:
            interp_.complete_check(!r.ok);
            break;
        default:
            return;
    }
    ++uncounted_;
}

}  // namespace detail
}  // namespace dfsim
