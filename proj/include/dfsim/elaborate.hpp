#ifndef DFSIM_ELABORATE_HPP
#define DFSIM_ELABORATE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfsim/design.hpp"

namespace dfsim {

// Expressions compiled to a small stack machine over the register file.
// `&&` and `||` short-circuit through the two conditional jump ops, which
// leave the normalised result on the stack when they jump.
struct ExprCode {
    enum class Op : std::uint8_t { Push, Load, Neg, Not, BitNot, Bool, Binary, JumpIfZeroKeep, JumpIfNonZeroKeep };
    struct Insn {
        Op op = Op::Push;
        BinaryOp binary = BinaryOp::Add;
        std::int64_t operand = 0;
    };
    std::vector<Insn> code;

    bool empty() const { return code.empty(); }
};

enum class OpCode : std::uint8_t {
    Assign,
    Delay,
    Skip,
    Output,
    Write,
    Read,
    WriteNb,
    ReadNb,
    Empty,
    Full,
    Jump,
    JumpIfZero,
    Halt,
};

bool is_fifo_op(OpCode op);
bool is_query_op(OpCode op);

struct Instruction {
    OpCode op = OpCode::Halt;
    std::int64_t cost = 0;
    int reg = -1;     // destination register (assign, read value, check result)
    int flag = -1;    // success flag register of a non-blocking access
    int fifo = -1;
    int output = -1;
    int target = -1;  // jump target
    ExprCode expr;
    SourceSpan span;
};

struct ModuleCode {
    std::string name;
    std::vector<Instruction> code;
    std::vector<std::int64_t> initial_registers;
    std::vector<std::string> register_names;
};

using Depths = std::vector<std::int64_t>;

// A validated, pruned design lowered to per-module instruction streams.
// Modules appear in `top` order; FIFOs and outputs in declaration order.
struct ElaboratedDesign {
    Design design;
    DesignClass design_class = DesignClass::TypeA;
    std::vector<ModuleCode> modules;
    std::vector<std::string> fifo_names;
    Depths depths;
    std::vector<int> fifo_writer;  // module index or -1
    std::vector<int> fifo_reader;
    std::vector<std::string> outputs;

    int fifo_index(const std::string& name) const;
};

class ElaborationError : public std::runtime_error {
public:
    ElaborationError(const std::string& message, std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

// Validates, prunes unused status checks (unless disabled) and lowers the
// design. Throws ElaborationError when validation reports errors.
ElaboratedDesign elaborate(const Design& d, bool prune = true);

// Depths with per-FIFO overrides applied. Throws std::invalid_argument for
// unknown FIFO names or non-positive depths.
Depths resolve_depths(const ElaboratedDesign& d, const std::map<std::string, std::int64_t>& overrides);

// Runs one module in isolation and returns the cycle offset at which each of
// its first `max_events` costed statements completes, assuming every FIFO
// access succeeds immediately and reads yield 0.
std::vector<std::int64_t> stage_offsets(const ModuleCode& m, std::size_t max_events);

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Executes a module's instruction stream. Instructions with no cycle cost and
// no externally visible effect run inside settle(); everything else is handed
// to the caller, which decides when it completes.
class Interpreter {
public:
    explicit Interpreter(const ModuleCode& code);

    // Runs zero-cost local instructions. Returns the next instruction that
    // has a cost, produces an output or touches a FIFO; nullptr once halted.
    const Instruction* settle();

    const Instruction& current() const { return code_->code[pc_]; }
    bool halted() const { return code_->code[pc_].op == OpCode::Halt; }

    std::int64_t evaluate() const { return eval(current().expr); }

    void complete();  // Assign, Delay, Skip, Output, Write
    void complete_read(std::int64_t value);
    void complete_nonblocking(bool success, std::int64_t value = 0);
    void complete_check(bool result);

    std::int64_t reg(int i) const { return regs_[static_cast<std::size_t>(i)]; }
    const ModuleCode& code() const { return *code_; }
    std::uint64_t steps() const { return steps_; }

private:
    std::int64_t eval(const ExprCode& e) const;
    [[noreturn]] void fault(const std::string& what) const;

    const ModuleCode* code_;
    std::vector<std::int64_t> regs_;
    std::size_t pc_ = 0;
    std::uint64_t steps_ = 0;
    mutable std::vector<std::int64_t> stack_;
};

}  // namespace dfsim

#endif  // DFSIM_ELABORATE_HPP
