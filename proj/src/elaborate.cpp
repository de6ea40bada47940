#include "dfsim/elaborate.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace dfsim {

bool is_fifo_op(OpCode op) {
    switch (op) {
        case OpCode::Write:
        case OpCode::Read:
        case OpCode::WriteNb:
        case OpCode::ReadNb:
        case OpCode::Empty:
        case OpCode::Full:
            return true;
        default:
            return false;
    }
}

bool is_query_op(OpCode op) {
    return op == OpCode::WriteNb || op == OpCode::ReadNb || op == OpCode::Empty || op == OpCode::Full;
}

int ElaboratedDesign::fifo_index(const std::string& name) const {
    auto it = std::find(fifo_names.begin(), fifo_names.end(), name);
    return it == fifo_names.end() ? -1 : static_cast<int>(it - fifo_names.begin());
}

ElaborationError::ElaborationError(const std::string& message, std::vector<Diagnostic> diags)
    : std::runtime_error(message), diags_(std::move(diags)) {}

namespace {

class Lowering {
public:
    Lowering(const ModuleDecl& m, const ElaboratedDesign& ed) : module_(m), ed_(ed) {
        code_.name = m.name;
        for (const auto& r : m.program.locals) {
            regs_.emplace(r.name, static_cast<int>(code_.register_names.size()));
            code_.register_names.push_back(r.name);
            code_.initial_registers.push_back(r.init);
        }
    }

    ModuleCode run() {
        block(module_.program.statements);
        Instruction halt;
        halt.op = OpCode::Halt;
        halt.span = module_.span;
        code_.code.push_back(std::move(halt));
        return std::move(code_);
    }

private:
    int reg(const std::string& name) const { return regs_.at(name); }

    int hidden_register() {
        std::string name = "$lim" + std::to_string(hidden_++);
        int id = static_cast<int>(code_.register_names.size());
        code_.register_names.push_back(name);
        code_.initial_registers.push_back(0);
        return id;
    }

    void compile(const Expr& e, ExprCode& out) const {
        using Op = ExprCode::Op;
        switch (e.kind) {
            case Expr::Kind::Literal:
                out.code.push_back({Op::Push, BinaryOp::Add, e.value});
                return;
            case Expr::Kind::Register:
                out.code.push_back({Op::Load, BinaryOp::Add, reg(e.name)});
                return;
            case Expr::Kind::Unary:
                compile(*e.lhs, out);
                out.code.push_back({e.unary_op == UnaryOp::Neg   ? Op::Neg
                                    : e.unary_op == UnaryOp::Not ? Op::Not
                                                                 : Op::BitNot,
                                    BinaryOp::Add, 0});
                return;
            case Expr::Kind::Binary:
                if (e.binary_op == BinaryOp::LogicalAnd || e.binary_op == BinaryOp::LogicalOr) {
                    compile(*e.lhs, out);
                    std::size_t jump = out.code.size();
                    out.code.push_back(
                        {e.binary_op == BinaryOp::LogicalAnd ? Op::JumpIfZeroKeep : Op::JumpIfNonZeroKeep,
                         BinaryOp::Add, 0});
                    compile(*e.rhs, out);
                    out.code.push_back({Op::Bool, BinaryOp::Add, 0});
                    out.code[jump].operand = static_cast<std::int64_t>(out.code.size());
                    return;
                }
                compile(*e.lhs, out);
                compile(*e.rhs, out);
                out.code.push_back({Op::Binary, e.binary_op, 0});
                return;
        }
    }

    ExprCode compile(const ExprPtr& e) const {
        ExprCode out;
        if (e) compile(*e, out);
        return out;
    }

    std::size_t emit(Instruction i) {
        code_.code.push_back(std::move(i));
        return code_.code.size() - 1;
    }

    Instruction make(OpCode op, const Stmt& s) const {
        Instruction i;
        i.op = op;
        i.cost = s.cost;
        i.span = s.span;
        return i;
    }

    int here() const { return static_cast<int>(code_.code.size()); }

    void block(const std::vector<Stmt>& body) {
        for (const auto& s : body) stmt(s);
    }

    void stmt(const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Assign: {
                auto i = make(OpCode::Assign, s);
                i.reg = reg(s.target);
                i.expr = compile(s.expr);
                emit(std::move(i));
                return;
            }
            case StmtKind::Delay:
                emit(make(OpCode::Delay, s));
                return;
            case StmtKind::Skip:
                emit(make(OpCode::Skip, s));
                return;
            case StmtKind::Output: {
                auto i = make(OpCode::Output, s);
                auto it = std::find(ed_.outputs.begin(), ed_.outputs.end(), s.target);
                i.output = static_cast<int>(it - ed_.outputs.begin());
                i.expr = compile(s.expr);
                emit(std::move(i));
                return;
            }
            case StmtKind::FifoWrite: {
                bool nb = s.mode == AccessMode::NonBlocking;
                auto i = make(nb ? OpCode::WriteNb : OpCode::Write, s);
                i.fifo = ed_.fifo_index(s.fifo);
                i.expr = compile(s.expr);
                if (nb) i.flag = reg(s.flag);
                emit(std::move(i));
                return;
            }
            case StmtKind::FifoRead: {
                bool nb = s.mode == AccessMode::NonBlocking;
                auto i = make(nb ? OpCode::ReadNb : OpCode::Read, s);
                i.fifo = ed_.fifo_index(s.fifo);
                i.reg = reg(s.target);
                if (nb) i.flag = reg(s.flag);
                emit(std::move(i));
                return;
            }
            case StmtKind::FifoEmpty:
            case StmtKind::FifoFull: {
                auto i = make(s.kind == StmtKind::FifoEmpty ? OpCode::Empty : OpCode::Full, s);
                i.fifo = ed_.fifo_index(s.fifo);
                i.reg = reg(s.target);
                emit(std::move(i));
                return;
            }
            case StmtKind::If: {
                auto test = make(OpCode::JumpIfZero, s);
                test.cost = 0;
                test.expr = compile(s.expr);
                std::size_t at = emit(std::move(test));
                block(s.body);
                if (s.else_body.empty()) {
                    code_.code[at].target = here();
                    return;
                }
                Instruction skip;
                skip.op = OpCode::Jump;
                skip.span = s.span;
                std::size_t over = emit(std::move(skip));
                code_.code[at].target = here();
                block(s.else_body);
                code_.code[over].target = here();
                return;
            }
            case StmtKind::While: {
                int top = here();
                auto test = make(OpCode::JumpIfZero, s);
                test.cost = 0;
                test.expr = compile(s.expr);
                std::size_t at = emit(std::move(test));
                loop_body(s, top, {at});
                return;
            }
            case StmtKind::For: {
                int counter = reg(s.target);
                int limit = hidden_register();
                Instruction init;
                init.op = OpCode::Assign;
                init.span = s.span;
                init.reg = counter;
                init.expr.code.push_back({ExprCode::Op::Push, BinaryOp::Add, 0});
                emit(init);
                Instruction bound = init;
                bound.reg = limit;
                bound.expr = compile(s.expr);
                emit(std::move(bound));
                int top = here();
                Instruction test;
                test.op = OpCode::JumpIfZero;
                test.span = s.span;
                test.expr.code = {{ExprCode::Op::Load, BinaryOp::Add, counter},
                                  {ExprCode::Op::Load, BinaryOp::Add, limit},
                                  {ExprCode::Op::Binary, BinaryOp::Lt, 0}};
                std::size_t at = emit(std::move(test));
                Instruction step;
                step.op = OpCode::Assign;
                step.span = s.span;
                step.reg = counter;
                step.expr.code = {{ExprCode::Op::Load, BinaryOp::Add, counter},
                                  {ExprCode::Op::Push, BinaryOp::Add, 1},
                                  {ExprCode::Op::Binary, BinaryOp::Add, 0}};
                loop_body(s, top, {at}, &step);
                return;
            }
            case StmtKind::Loop:
                loop_body(s, here(), {});
                return;
            case StmtKind::Break: {
                Instruction j;
                j.op = OpCode::Jump;
                j.span = s.span;
                breaks_.back().push_back(emit(std::move(j)));
                return;
            }
        }
    }

    // Emits body, optional increment and the back edge; patches the exit
    // test and every break to the instruction after the loop.
    void loop_body(const Stmt& s, int top, std::vector<std::size_t> exits, const Instruction* step = nullptr) {
        breaks_.emplace_back();
        block(s.body);
        if (step) emit(*step);
        Instruction back;
        back.op = OpCode::Jump;
        back.span = s.span;
        back.target = top;
        emit(std::move(back));
        for (auto at : exits) code_.code[at].target = here();
        for (auto at : breaks_.back()) code_.code[at].target = here();
        breaks_.pop_back();
    }

    const ModuleDecl& module_;
    const ElaboratedDesign& ed_;
    ModuleCode code_;
    std::map<std::string, int> regs_;
    std::vector<std::vector<std::size_t>> breaks_;
    int hidden_ = 0;
};

}  // namespace

ElaboratedDesign elaborate(const Design& input, bool prune) {
    auto diags = validate_design(input);
    if (has_errors(diags)) {
        std::string msg = "design '" + input.name + "' is invalid";
        for (const auto& d : diags) {
            if (d.severity == Severity::Error) {
                msg += "\n  " + format_diagnostic(d);
            }
        }
        throw ElaborationError(msg, std::move(diags));
    }
    ElaboratedDesign ed;
    ed.design = prune ? prune_unused_checks(input) : input;
    ed.design_class = classify_design(input);
    ed.outputs = ed.design.outputs;
    for (const auto& f : ed.design.fifos) {
        ed.fifo_names.push_back(f.name);
        ed.depths.push_back(f.depth);
    }
    ed.fifo_writer.assign(ed.fifo_names.size(), -1);
    ed.fifo_reader.assign(ed.fifo_names.size(), -1);
    for (const auto& name : ed.design.top) {
        const ModuleDecl* m = ed.design.find_module(name);
        int index = static_cast<int>(ed.modules.size());
        for (const auto& f : m->writes) ed.fifo_writer[static_cast<std::size_t>(ed.fifo_index(f))] = index;
        for (const auto& f : m->reads) ed.fifo_reader[static_cast<std::size_t>(ed.fifo_index(f))] = index;
        ed.modules.push_back(Lowering(*m, ed).run());
    }
    return ed;
}

Depths resolve_depths(const ElaboratedDesign& d, const std::map<std::string, std::int64_t>& overrides) {
    Depths out = d.depths;
    for (const auto& [name, depth] : overrides) {
        int i = d.fifo_index(name);
        if (i < 0) throw std::invalid_argument("unknown FIFO '" + name + "'");
        if (depth < 1) throw std::invalid_argument("depth of FIFO '" + name + "' must be >= 1");
        out[static_cast<std::size_t>(i)] = depth;
    }
    return out;
}

std::vector<std::int64_t> stage_offsets(const ModuleCode& m, std::size_t max_events) {
    Interpreter it(m);
    std::vector<std::int64_t> out;
    std::int64_t t = 0;
    while (out.size() < max_events) {
        const Instruction* i = it.settle();
        if (!i) break;
        t += i->cost;
        if (i->cost > 0) out.push_back(t);
        switch (i->op) {
            case OpCode::Read: it.complete_read(0); break;
            case OpCode::ReadNb:
            case OpCode::WriteNb: it.complete_nonblocking(true, 0); break;
            case OpCode::Empty:
            case OpCode::Full: it.complete_check(false); break;
            default: it.complete(); break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Interpreter::Interpreter(const ModuleCode& code) : code_(&code), regs_(code.initial_registers) {
    stack_.reserve(16);
}

void Interpreter::fault(const std::string& what) const {
    throw SimulationError("module '" + code_->name + "' at " + to_string(current().span) + ": " + what);
}

namespace {

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

std::int64_t Interpreter::eval(const ExprCode& e) const {
    using Op = ExprCode::Op;
    stack_.clear();
    const auto n = e.code.size();
    for (std::size_t pc = 0; pc < n; ++pc) {
        const auto& x = e.code[pc];
        switch (x.op) {
            case Op::Push: stack_.push_back(x.operand); break;
            case Op::Load: stack_.push_back(regs_[static_cast<std::size_t>(x.operand)]); break;
            case Op::Neg: stack_.back() = wrap(0u - static_cast<std::uint64_t>(stack_.back())); break;
            case Op::Not: stack_.back() = stack_.back() == 0 ? 1 : 0; break;
            case Op::BitNot: stack_.back() = ~stack_.back(); break;
            case Op::Bool: stack_.back() = stack_.back() != 0 ? 1 : 0; break;
            case Op::JumpIfZeroKeep:
            case Op::JumpIfNonZeroKeep: {
                bool truth = stack_.back() != 0;
                if (truth == (x.op == Op::JumpIfNonZeroKeep)) {
                    stack_.back() = truth ? 1 : 0;
                    pc = static_cast<std::size_t>(x.operand) - 1;
                } else {
                    stack_.pop_back();
                }
                break;
            }
            case Op::Binary: {
                std::int64_t b = stack_.back();
                stack_.pop_back();
                std::int64_t a = stack_.back();
                auto ua = static_cast<std::uint64_t>(a);
                auto ub = static_cast<std::uint64_t>(b);
                std::int64_t r = 0;
                switch (x.binary) {
                    case BinaryOp::Add: r = wrap(ua + ub); break;
                    case BinaryOp::Sub: r = wrap(ua - ub); break;
                    case BinaryOp::Mul: r = wrap(ua * ub); break;
                    case BinaryOp::Div:
                    case BinaryOp::Mod:
                        if (b == 0) fault("division by zero");
                        if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
                            r = x.binary == BinaryOp::Div ? a : 0;
                        } else {
                            r = x.binary == BinaryOp::Div ? a / b : a % b;
                        }
                        break;
                    case BinaryOp::Shl: r = wrap(ua << (ub & 63u)); break;
                    case BinaryOp::Shr: r = a >> (ub & 63u); break;
                    case BinaryOp::Lt: r = a < b; break;
                    case BinaryOp::Le: r = a <= b; break;
                    case BinaryOp::Gt: r = a > b; break;
                    case BinaryOp::Ge: r = a >= b; break;
                    case BinaryOp::Eq: r = a == b; break;
                    case BinaryOp::Ne: r = a != b; break;
                    case BinaryOp::BitAnd: r = a & b; break;
                    case BinaryOp::BitXor: r = a ^ b; break;
                    case BinaryOp::BitOr: r = a | b; break;
                    case BinaryOp::LogicalAnd: r = (a != 0 && b != 0); break;
                    case BinaryOp::LogicalOr: r = (a != 0 || b != 0); break;
                }
                stack_.back() = r;
                break;
            }
        }
    }
    return stack_.empty() ? 0 : stack_.back();
}

const Instruction* Interpreter::settle() {
    constexpr std::uint64_t kZeroCostLimit = std::uint64_t{1} << 20;
    std::uint64_t zero_cost = 0;
    for (;;) {
        const Instruction& i = code_->code[pc_];
        switch (i.op) {
            case OpCode::Halt:
                return nullptr;
            case OpCode::Jump:
                pc_ = static_cast<std::size_t>(i.target);
                break;
            case OpCode::JumpIfZero:
                pc_ = eval(i.expr) == 0 ? static_cast<std::size_t>(i.target) : pc_ + 1;
                break;
            case OpCode::Assign:
            case OpCode::Delay:
            case OpCode::Skip:
                if (i.cost > 0) return &i;
                complete();
                break;
            default:
                return &i;
        }
        if (++zero_cost > kZeroCostLimit) fault("more than 2^20 consecutive zero-cycle steps");
    }
}

void Interpreter::complete() {
    const Instruction& i = current();
    if (i.op == OpCode::Assign) regs_[static_cast<std::size_t>(i.reg)] = eval(i.expr);
    ++steps_;
    ++pc_;
}

void Interpreter::complete_read(std::int64_t value) {
    regs_[static_cast<std::size_t>(current().reg)] = value;
    ++steps_;
    ++pc_;
}

void Interpreter::complete_nonblocking(bool success, std::int64_t value) {
    const Instruction& i = current();
    regs_[static_cast<std::size_t>(i.flag)] = success ? 1 : 0;
    if (success && i.op == OpCode::ReadNb) regs_[static_cast<std::size_t>(i.reg)] = value;
    ++steps_;
    ++pc_;
}

void Interpreter::complete_check(bool result) {
    regs_[static_cast<std::size_t>(current().reg)] = result ? 1 : 0;
    ++steps_;
    ++pc_;
}

}  // namespace dfsim
