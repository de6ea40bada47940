#include "dfsim/design.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dfsim {

std::string to_string(const SourceSpan& span) {
    return std::to_string(span.line) + ":" + std::to_string(span.column);
}

ExprPtr Expr::literal(std::int64_t v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Literal;
    e->value = v;
    return e;
}

ExprPtr Expr::reg(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Register;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->unary_op = op;
    e->lhs = std::move(operand);
    return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->binary_op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Literal: return a->value == b->value;
        case Expr::Kind::Register: return a->name == b->name;
        case Expr::Kind::Unary: return a->unary_op == b->unary_op && equal(a->lhs, b->lhs);
        case Expr::Kind::Binary:
            return a->binary_op == b->binary_op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    return false;
}

void collect_registers(const Expr& e, std::vector<std::string>& out) {
    switch (e.kind) {
        case Expr::Kind::Literal: break;
        case Expr::Kind::Register: out.push_back(e.name); break;
        case Expr::Kind::Unary: collect_registers(*e.lhs, out); break;
        case Expr::Kind::Binary:
            collect_registers(*e.lhs, out);
            collect_registers(*e.rhs, out);
            break;
    }
}

bool is_control(StmtKind kind) {
    switch (kind) {
        case StmtKind::If:
        case StmtKind::While:
        case StmtKind::For:
        case StmtKind::Loop:
        case StmtKind::Break:
            return true;
        default:
            return false;
    }
}

std::int64_t default_cost(const Stmt& s) {
    if (is_control(s.kind)) return 0;
    return 1;
}

namespace {

bool equal_list(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!equal(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace

bool equal(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.cost == b.cost && a.target == b.target && a.fifo == b.fifo &&
           a.flag == b.flag && a.mode == b.mode && equal(a.expr, b.expr) &&
           equal_list(a.body, b.body) && equal_list(a.else_body, b.else_body);
}

const FifoDecl* Design::find_fifo(std::string_view n) const {
    auto it = std::find_if(fifos.begin(), fifos.end(), [&](const FifoDecl& f) { return f.name == n; });
    return it == fifos.end() ? nullptr : &*it;
}

const ModuleDecl* Design::find_module(std::string_view n) const {
    auto it = std::find_if(modules.begin(), modules.end(), [&](const ModuleDecl& m) { return m.name == n; });
    return it == modules.end() ? nullptr : &*it;
}

std::optional<std::size_t> Design::fifo_index(std::string_view n) const {
    for (std::size_t i = 0; i < fifos.size(); ++i) {
        if (fifos[i].name == n) return i;
    }
    return std::nullopt;
}

bool equal(const Design& a, const Design& b) {
    if (a.name != b.name || a.top != b.top || a.outputs != b.outputs ||
        a.expect_deadlock != b.expect_deadlock || a.modules.size() != b.modules.size()) {
        return false;
    }
    if (a.fifos.size() != b.fifos.size()) return false;
    for (std::size_t i = 0; i < a.fifos.size(); ++i) {
        const auto& x = a.fifos[i];
        const auto& y = b.fifos[i];
        if (x.name != y.name || x.depth != y.depth || x.element_width != y.element_width) return false;
    }
    for (std::size_t i = 0; i < a.modules.size(); ++i) {
        const auto& x = a.modules[i];
        const auto& y = b.modules[i];
        if (x.name != y.name || x.reads != y.reads || x.writes != y.writes) return false;
        if (x.program.locals.size() != y.program.locals.size()) return false;
        for (std::size_t r = 0; r < x.program.locals.size(); ++r) {
            if (x.program.locals[r].name != y.program.locals[r].name ||
                x.program.locals[r].init != y.program.locals[r].init) {
                return false;
            }
        }
        if (!equal_list(x.program.statements, y.program.statements)) return false;
    }
    return true;
}

ParseError::ParseError(SourceSpan span, const std::string& message)
    : std::runtime_error(to_string(span) + ": " + message), span_(span) {}

Design load_design(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open design file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_design(ss.str());
}

std::string_view to_string(DesignClass c) {
    switch (c) {
        case DesignClass::TypeA: return "TypeA";
        case DesignClass::TypeB: return "TypeB";
        case DesignClass::TypeC: return "TypeC";
    }
    return "?";
}

}  // namespace dfsim
