#include <sstream>

#include "dfsim/design.hpp"

namespace dfsim {

namespace {

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::LogicalOr: return 1;
        case BinaryOp::LogicalAnd: return 2;
        case BinaryOp::BitOr: return 3;
        case BinaryOp::BitXor: return 4;
        case BinaryOp::BitAnd: return 5;
        case BinaryOp::Eq:
        case BinaryOp::Ne: return 6;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 7;
        case BinaryOp::Shl:
        case BinaryOp::Shr: return 8;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 9;
        case BinaryOp::Mul:
        case BinaryOp::Div:
        case BinaryOp::Mod: return 10;
    }
    return 0;
}

const char* spelling(BinaryOp op) {
    switch (op) {
        case BinaryOp::LogicalOr: return "||";
        case BinaryOp::LogicalAnd: return "&&";
        case BinaryOp::BitOr: return "|";
        case BinaryOp::BitXor: return "^";
        case BinaryOp::BitAnd: return "&";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Shl: return "<<";
        case BinaryOp::Shr: return ">>";
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
    }
    return "?";
}

void print_expr(std::ostream& os, const Expr& e);

void print_operand(std::ostream& os, const Expr& child, int parent_prec, bool right) {
    bool parens = false;
    if (child.kind == Expr::Kind::Binary) {
        int p = precedence(child.binary_op);
        parens = p < parent_prec || (right && p == parent_prec);
    }
    if (parens) os << '(';
    print_expr(os, child);
    if (parens) os << ')';
}

void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: os << e.value; break;
        case Expr::Kind::Register: os << e.name; break;
        case Expr::Kind::Unary: {
            os << (e.unary_op == UnaryOp::Neg ? "-" : e.unary_op == UnaryOp::Not ? "!" : "~");
            bool parens = e.lhs->kind == Expr::Kind::Binary;
            if (parens) os << '(';
            print_expr(os, *e.lhs);
            if (parens) os << ')';
            break;
        }
        case Expr::Kind::Binary: {
            int p = precedence(e.binary_op);
            print_operand(os, *e.lhs, p, false);
            os << ' ' << spelling(e.binary_op) << ' ';
            print_operand(os, *e.rhs, p, true);
            break;
        }
    }
}

class Printer {
public:
    explicit Printer(std::ostream& os) : os_(os) {}

    void block(const std::vector<Stmt>& stmts, int depth) {
        for (const auto& s : stmts) stmt(s, depth);
    }

    void stmt(const Stmt& s, int depth) {
        indent(depth);
        switch (s.kind) {
            case StmtKind::If:
                if_chain(s, depth);
                os_ << '\n';
                return;
            case StmtKind::While:
                os_ << "while (" << expr(s.expr) << ") {\n";
                block(s.body, depth + 1);
                close(depth);
                return;
            case StmtKind::For:
                os_ << "for (" << s.target << " : " << expr(s.expr) << ") {\n";
                block(s.body, depth + 1);
                close(depth);
                return;
            case StmtKind::Loop:
                os_ << "loop {\n";
                block(s.body, depth + 1);
                close(depth);
                return;
            case StmtKind::Break:
                os_ << "break;\n";
                return;
            case StmtKind::Delay:
                os_ << "delay " << s.cost << ";\n";
                return;
            case StmtKind::Assign:
                os_ << s.target << " = " << expr(s.expr);
                break;
            case StmtKind::Output:
                os_ << "output " << s.target << " = " << expr(s.expr);
                break;
            case StmtKind::Skip:
                os_ << "skip";
                break;
            case StmtKind::FifoWrite:
                if (s.mode == AccessMode::Blocking) {
                    os_ << s.fifo << ".write(" << expr(s.expr) << ")";
                } else {
                    os_ << s.flag << " = " << s.fifo << ".write_nb(" << expr(s.expr) << ")";
                }
                break;
            case StmtKind::FifoRead:
                if (s.mode == AccessMode::Blocking) {
                    os_ << s.target << " = " << s.fifo << ".read()";
                } else {
                    os_ << s.flag << " = " << s.fifo << ".read_nb(" << s.target << ")";
                }
                break;
            case StmtKind::FifoEmpty:
                os_ << s.target << " = " << s.fifo << ".empty()";
                break;
            case StmtKind::FifoFull:
                os_ << s.target << " = " << s.fifo << ".full()";
                break;
        }
        if (s.cost != default_cost(s)) os_ << " @" << s.cost;
        os_ << ";\n";
    }

private:
    void if_chain(const Stmt& s, int depth) {
        os_ << "if (" << expr(s.expr) << ") {\n";
        block(s.body, depth + 1);
        indent(depth);
        os_ << '}';
        if (s.else_body.empty()) return;
        if (s.else_body.size() == 1 && s.else_body[0].kind == StmtKind::If) {
            os_ << " else ";
            if_chain(s.else_body[0], depth);
            return;
        }
        os_ << " else {\n";
        block(s.else_body, depth + 1);
        indent(depth);
        os_ << '}';
    }

    void close(int depth) {
        indent(depth);
        os_ << "}\n";
    }

    void indent(int depth) {
        for (int i = 0; i < depth; ++i) os_ << "    ";
    }

    static std::string expr(const ExprPtr& e) {
        std::ostringstream ss;
        print_expr(ss, *e);
        return ss.str();
    }

    std::ostream& os_;
};

template <typename Range>
void join(std::ostream& os, const Range& items) {
    bool first = true;
    for (const auto& x : items) {
        if (!first) os << ", ";
        os << x;
        first = false;
    }
}

}  // namespace

std::string print_design(const Design& d) {
    std::ostringstream os;
    os << "design " << d.name << ";\n";
    if (d.expect_deadlock) os << "expect deadlock;\n";
    if (!d.fifos.empty()) os << '\n';
    for (const auto& f : d.fifos) {
        os << "fifo " << f.name << " depth " << f.depth;
        if (f.element_width != 32) os << " width " << f.element_width;
        os << ";\n";
    }
    if (!d.outputs.empty()) {
        os << "\noutput ";
        join(os, d.outputs);
        os << ";\n";
    }
    Printer p(os);
    for (const auto& m : d.modules) {
        os << "\nmodule " << m.name << '(';
        std::vector<std::string> ports;
        for (const auto& r : m.reads) ports.push_back("in " + r);
        for (const auto& w : m.writes) ports.push_back("out " + w);
        join(os, ports);
        os << ") {\n";
        if (!m.program.locals.empty()) {
            os << "    reg ";
            std::vector<std::string> regs;
            for (const auto& r : m.program.locals) {
                regs.push_back(r.init == 0 ? r.name : r.name + " = " + std::to_string(r.init));
            }
            join(os, regs);
            os << ";\n";
        }
        p.block(m.program.statements, 1);
        os << "}\n";
    }
    if (!d.top.empty()) {
        os << "\ntop ";
        join(os, d.top);
        os << ";\n";
    }
    return os.str();
}

}  // namespace dfsim
