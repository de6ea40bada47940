#ifndef DFSIM_ENGINE_INTERNAL_HPP
#define DFSIM_ENGINE_INTERNAL_HPP

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dfsim/engine.hpp"
#include "dfsim/fifo_table.hpp"

namespace dfsim::detail {

enum class RequestKind : std::uint8_t {
    TraceBlock,
    StartTask,
    FifoRead,
    FifoWrite,
    FifoCanRead,
    FifoCanWrite,
    FifoNbRead,
    FifoNbWrite,
    Output,
    Fence,
    TaskEnd,
    Fault,
};

bool needs_reply(RequestKind k);

struct Request {
    RequestKind kind = RequestKind::TraceBlock;
    std::int32_t agent = -1;
    std::int32_t fifo = -1;
    std::int32_t output = -1;
    std::int64_t offset = 0;  // cycles since the agent's previous event
    std::int64_t value = 0;
    std::string message;      // fault text or trace entry
    bool budget = false;      // fault caused by the cycle budget
};

struct Reply {
    bool ok = false;
    std::int64_t value = 0;
    bool abort = false;
};

// Transport from agents to the coordinator. `pause` marks the agent inactive
// in the same step as the request is queued.
class RequestSink {
public:
    virtual ~RequestSink() = default;
    virtual void submit(Request r, bool pause) = 0;
};

// Functional agent: interprets one module and emits requests.
class Agent {
public:
    Agent(std::int32_t id, const ModuleCode& code, const EngineOptions& options);

    enum class Yield { NeedsReply, Finished };

    // Runs until the agent has submitted a request that needs a reply, or
    // has finished (TaskEnd or Fault submitted).
    Yield run(RequestSink& sink);

    void deliver(const Reply& r);

    std::int32_t id() const { return id_; }
    void set_abort_flag(const std::atomic<bool>* flag) { abort_ = flag; }

private:
    bool send(RequestSink& sink, Request r);
    Yield fault(RequestSink& sink, std::string message, bool budget);

    std::int32_t id_;
    Interpreter interp_;
    const EngineOptions* options_;
    std::int64_t offset_ = 0;
    std::int64_t elapsed_ = 0;  // lower bound on the current cycle
    int unacked_ = 0;
    bool started_ = false;
    RequestKind awaiting_kind_ = RequestKind::Fence;
    std::uint64_t uncounted_ = 0;
    const std::atomic<bool>* abort_ = nullptr;
};

struct Query {
    QueryKind kind = QueryKind::NbWrite;
    std::int32_t agent = -1;
    std::int64_t sequence = 0;
    std::int32_t fifo = -1;
    std::int64_t ordinal = 0;
    NodeId anchor = kNoNode;
    std::int64_t offset = 0;
    std::int64_t source_cycle = 0;
    std::int64_t value = 0;  // payload of an NB write
};

// The performance agent. Owns the graph, the FIFO tables and the query pool.
// Not thread safe: the scheduler serialises all calls.
class Coordinator {
public:
    using ReplyFn = std::function<void(std::int32_t agent, const Reply&)>;

    Coordinator(const ElaboratedDesign& d, const Depths& depths, const EngineOptions& options, ReplyFn reply);

    void accept(Request r);

    enum class Step { Progress, Finished, Deadlock };

    // Called when every agent is paused or finished and no request is in
    // flight.
    Step quiesce();

    bool stopped() const { return budget_hit_ || fault_.has_value(); }
    bool all_finished() const;
    const std::optional<std::string>& fault() const { return fault_; }

    EngineResult finish(Step last);

private:
    struct AgentState {
        std::deque<Request> pending;
        NodeId last = kNoNode;
        bool finished = false;
        std::int64_t queries = 0;
    };

    void drain(std::int32_t agent);
    bool handle(std::int32_t agent, Request& r);
    std::optional<bool> try_resolve(const Query& q) const;
    void commit_query(const Query& q, bool outcome);
    void count_progress();
    void reply(std::int32_t agent, const Reply& r) { reply_(agent, r); }

    const ElaboratedDesign* design_;
    Depths depths_;
    EngineOptions options_;
    ReplyFn reply_;
    SimulationGraph graph_;
    std::vector<FifoTable> tables_;
    std::vector<AgentState> agents_;
    std::vector<Query> pool_;
    std::vector<Constraint> ledger_;
    std::vector<std::int64_t> outputs_;
    std::vector<bool> output_set_;
    std::vector<std::int32_t> worklist_;
    std::vector<std::string> trace_;
    std::int64_t progress_ = 0;
    bool budget_hit_ = false;
    std::optional<std::string> fault_;
    std::vector<std::string> blocked_;
};

void add_agent_statements(std::uint64_t n);

}  // namespace dfsim::detail

#endif  // DFSIM_ENGINE_INTERNAL_HPP
