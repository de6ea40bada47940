#ifndef DFSIM_ORACLE_HPP
#define DFSIM_ORACLE_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dfsim/elaborate.hpp"

namespace dfsim {

enum class Status { Ok, Deadlock, BudgetExhausted, TimingInconsistency };

std::string_view to_string(Status s);

// A committed FIFO access as seen by the module that performed it.
struct AccessEvent {
    OpCode op = OpCode::Write;  // Write or Read; NB successes are reported as such
    int fifo = -1;
    std::int64_t cycle = 0;

    friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

struct OracleResult {
    Status status = Status::Ok;
    std::int64_t total_cycles = 0;  // 0 unless status is Ok
    std::map<std::string, std::int64_t> outputs;
    std::vector<std::string> blocked;
    std::vector<std::vector<AccessEvent>> events;  // per module, in order
    std::vector<std::int64_t> end_cycles;          // per finished module
};

// Cycle-stepped reference simulator. Every module sees FIFO occupancy as of
// the start of the cycle; accesses commit at the end of the cycle.
class OracleState {
public:
    OracleState(const ElaboratedDesign& d, Depths depths);

    bool running() const { return status_ == Running; }
    bool deadlocked() const { return status_ == Deadlocked; }
    std::int64_t clock() const { return clock_; }

    // Advances exactly one cycle.
    void step();

    OracleResult result() const;

private:
    enum Phase { Busy, Blocked, Done };
    enum RunState { Running, Finished, Deadlocked };

    struct Module {
        Interpreter interp;
        Phase phase = Busy;
        std::int64_t due = 0;   // cycle at which the current instruction completes
        std::int64_t last = 0;  // cycle of the last completed instruction
    };

    void advance(std::size_t m, std::int64_t t);
    bool attempt(std::size_t m, std::int64_t t);

    const ElaboratedDesign* design_;
    Depths depths_;
    std::vector<Module> modules_;
    std::vector<std::deque<std::int64_t>> queues_;
    std::vector<std::size_t> occupancy_;  // snapshot at the start of the cycle
    std::vector<std::pair<int, std::int64_t>> pending_pushes_;
    std::vector<std::int64_t> outputs_;
    std::vector<bool> output_set_;
    std::vector<std::vector<AccessEvent>> events_;
    std::int64_t clock_ = 0;
    RunState status_ = Running;
};

OracleResult oracle_run(const ElaboratedDesign& d, const Depths& depths, std::int64_t max_cycles);

}  // namespace dfsim

#endif  // DFSIM_ORACLE_HPP
