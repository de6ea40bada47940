#ifndef DFSIM_DESIGN_HPP
#define DFSIM_DESIGN_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dfsim {

struct SourceSpan {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

std::string to_string(const SourceSpan& span);

// ---------------------------------------------------------------------------
// Expressions. Pure 64-bit integer arithmetic over registers and literals.
// Arithmetic wraps (two's complement).

enum class UnaryOp { Neg, Not, BitNot };

enum class BinaryOp {
    Mul, Div, Mod,
    Add, Sub,
    Shl, Shr,
    Lt, Le, Gt, Ge,
    Eq, Ne,
    BitAnd, BitXor, BitOr,
    LogicalAnd, LogicalOr,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Literal, Register, Unary, Binary };

    Kind kind = Kind::Literal;
    std::int64_t value = 0;
    std::string name;
    UnaryOp unary_op = UnaryOp::Neg;
    BinaryOp binary_op = BinaryOp::Add;
    ExprPtr lhs;
    ExprPtr rhs;
    SourceSpan span;

    static ExprPtr literal(std::int64_t v);
    static ExprPtr reg(std::string name);
    static ExprPtr unary(UnaryOp op, ExprPtr operand);
    static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
};

bool equal(const ExprPtr& a, const ExprPtr& b);

// Registers appearing anywhere inside the expression.
void collect_registers(const Expr& e, std::vector<std::string>& out);

// ---------------------------------------------------------------------------
// Statements

enum class StmtKind {
    Assign,     // target = expr
    Delay,      // delay k
    FifoWrite,  // fifo.write(expr) / flag = fifo.write_nb(expr)
    FifoRead,   // target = fifo.read() / flag = fifo.read_nb(target)
    FifoEmpty,  // target = fifo.empty()
    FifoFull,   // target = fifo.full()
    Skip,       // pruned status check, keeps its cycle cost
    If,
    While,
    For,        // for (target : expr) body  -- target counts 0 .. expr-1
    Loop,       // infinite loop
    Break,
    Output,     // output target = expr
};

enum class AccessMode { Blocking, NonBlocking };

struct Stmt {
    StmtKind kind = StmtKind::Assign;
    SourceSpan span;
    std::int64_t cost = 1;
    std::string target;
    std::string fifo;
    std::string flag;
    AccessMode mode = AccessMode::Blocking;
    ExprPtr expr;
    std::vector<Stmt> body;
    std::vector<Stmt> else_body;
};

std::int64_t default_cost(const Stmt& s);
bool is_control(StmtKind kind);
bool equal(const Stmt& a, const Stmt& b);

struct RegisterDecl {
    std::string name;
    std::int64_t init = 0;
    SourceSpan span;

    friend bool operator==(const RegisterDecl&, const RegisterDecl&) = default;
};

struct TaskProgram {
    std::vector<RegisterDecl> locals;
    std::vector<Stmt> statements;
};

struct FifoDecl {
    std::string name;
    std::int64_t depth = 1;
    int element_width = 32;
    SourceSpan span;

    friend bool operator==(const FifoDecl&, const FifoDecl&) = default;
};

struct ModuleDecl {
    std::string name;
    std::vector<std::string> reads;
    std::vector<std::string> writes;
    TaskProgram program;
    SourceSpan span;
};

struct Design {
    std::string name;
    std::vector<FifoDecl> fifos;
    std::vector<ModuleDecl> modules;
    std::vector<std::string> top;
    std::vector<std::string> outputs;
    bool expect_deadlock = false;

    const FifoDecl* find_fifo(std::string_view name) const;
    const ModuleDecl* find_module(std::string_view name) const;
    std::optional<std::size_t> fifo_index(std::string_view name) const;
};

bool equal(const Design& a, const Design& b);

// ---------------------------------------------------------------------------
// Parsing, printing, validation

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, const std::string& message);
    const SourceSpan& span() const noexcept { return span_; }

private:
    SourceSpan span_;
};

// Throws ParseError on syntax errors, duplicate identifiers, unresolved
// FIFO/register/module references and FIFOs with more than one writer or
// reader.
Design parse_design(std::string_view text);
Design load_design(const std::string& path);

// Canonical textual form. parse_design(print_design(d)) reproduces d.
std::string print_design(const Design& d);

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;
};

std::vector<Diagnostic> validate_design(const Design& d);
bool has_errors(const std::vector<Diagnostic>& diags);
std::string format_diagnostic(const Diagnostic& d);

// ---------------------------------------------------------------------------
// Static analyses

enum class DesignClass { TypeA, TypeB, TypeC };

std::string_view to_string(DesignClass c);

DesignClass classify_design(const Design& d);

// Replaces empty()/full() checks whose result register is never read with
// Skip markers of the same cost.
Design prune_unused_checks(const Design& d);

// Number of empty()/full() statements in the design (before pruning).
std::size_t count_status_checks(const Design& d);

}  // namespace dfsim

#endif  // DFSIM_DESIGN_HPP
