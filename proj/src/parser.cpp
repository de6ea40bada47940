#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <set>

#include "dfsim/design.hpp"

namespace dfsim {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::uint64_t number = 0;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.span = {line_, col_};
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    advance();
                }
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(b, pos_ - b));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t b = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
                t.kind = Tok::Int;
                t.text = std::string(src_.substr(b, pos_ - b));
                auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
                if (ec != std::errc{} || t.number > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1) {
                    throw ParseError(t.span, "integer literal out of range");
                }
            } else {
                static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||", "<<", ">>"};
                t.kind = Tok::Punct;
                for (const char* op : two) {
                    if (src_.substr(pos_, 2) == op) {
                        t.text = op;
                        advance();
                        advance();
                        break;
                    }
                }
                if (t.text.empty()) {
                    static const std::string singles = ";,(){}=<>+-*/%&|^~!.:@";
                    if (singles.find(c) == std::string::npos) {
                        throw ParseError(t.span, std::string("unexpected character '") + c + "'");
                    }
                    t.text = std::string(1, c);
                    advance();
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct ModuleScope {
    std::set<std::string> registers;
    std::set<std::string> fifos;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Design parse() {
        Design d;
        expect_word("design");
        d.name = ident("design name");
        expect(";");
        std::vector<SourceSpan> top_spans;
        std::vector<SourceSpan> output_spans;
        bool seen_top = false;
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (is_word("fifo")) {
                d.fifos.push_back(parse_fifo());
            } else if (is_word("output")) {
                next();
                do {
                    output_spans.push_back(peek().span);
                    d.outputs.push_back(ident("output name"));
                } while (accept(","));
                expect(";");
            } else if (is_word("module")) {
                d.modules.push_back(parse_module_header_and_body());
            } else if (is_word("top")) {
                if (seen_top) throw ParseError(t.span, "duplicate top declaration");
                seen_top = true;
                next();
                do {
                    top_spans.push_back(peek().span);
                    d.top.push_back(ident("module name"));
                } while (accept(","));
                expect(";");
            } else if (is_word("expect")) {
                next();
                expect_word("deadlock");
                expect(";");
                d.expect_deadlock = true;
            } else {
                throw ParseError(t.span, "expected 'fifo', 'output', 'module', 'top' or 'expect', found '" +
                                             t.text + "'");
            }
        }
        resolve(d, top_spans, output_spans);
        return d;
    }

private:
    // ---- token helpers
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(idx_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() {
        const Token& t = toks_[idx_];
        if (idx_ + 1 < toks_.size()) ++idx_;
        return t;
    }
    bool is_word(std::string_view w, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Ident && t.text == w;
    }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Punct && t.text == p;
    }
    bool accept(std::string_view p) {
        if (is_punct(p)) {
            next();
            return true;
        }
        return false;
    }
    void expect(std::string_view p) {
        if (!accept(p)) {
            throw ParseError(peek().span, "expected '" + std::string(p) + "', found " + describe(peek()));
        }
    }
    void expect_word(std::string_view w) {
        if (!is_word(w)) {
            throw ParseError(peek().span, "expected '" + std::string(w) + "', found " + describe(peek()));
        }
        next();
    }
    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        return "'" + t.text + "'";
    }
    std::string ident(std::string_view what) {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) {
            throw ParseError(peek().span, "expected " + std::string(what) + ", found " + describe(peek()));
        }
        return next().text;
    }
    std::int64_t integer(bool allow_negative) {
        bool neg = false;
        if (allow_negative && accept("-")) neg = true;
        if (peek().kind != Tok::Int) throw ParseError(peek().span, "expected integer, found " + describe(peek()));
        const Token& t = next();
        if (!neg && t.number > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw ParseError(t.span, "integer literal out of range");
        }
        return neg ? static_cast<std::int64_t>(0 - t.number) : static_cast<std::int64_t>(t.number);
    }
    static bool is_keyword(std::string_view w) {
        static const std::set<std::string_view> kw = {"design", "fifo",  "module", "top",    "reg",   "if",
                                                      "else",   "while", "for",    "loop",   "break", "delay",
                                                      "skip",   "output", "in",    "out",    "expect"};
        return kw.count(w) != 0;
    }

    // ---- declarations
    FifoDecl parse_fifo() {
        FifoDecl f;
        f.span = peek().span;
        expect_word("fifo");
        f.name = ident("FIFO name");
        expect_word("depth");
        f.depth = integer(false);
        if (is_word("width")) {
            next();
            f.element_width = static_cast<int>(integer(false));
        }
        expect(";");
        return f;
    }

    ModuleDecl parse_module_header_and_body() {
        ModuleDecl m;
        m.span = peek().span;
        expect_word("module");
        m.name = ident("module name");
        expect("(");
        if (!is_punct(")")) {
            do {
                if (is_word("in")) {
                    next();
                    m.reads.push_back(ident("FIFO name"));
                } else if (is_word("out")) {
                    next();
                    m.writes.push_back(ident("FIFO name"));
                } else {
                    throw ParseError(peek().span, "expected 'in' or 'out', found " + describe(peek()));
                }
            } while (accept(","));
        }
        expect(")");
        expect("{");
        scope_ = ModuleScope{};
        for (const auto& r : m.reads) scope_.fifos.insert(r);
        for (const auto& w : m.writes) scope_.fifos.insert(w);
        while (is_word("reg")) {
            next();
            do {
                RegisterDecl r;
                r.span = peek().span;
                r.name = ident("register name");
                if (accept("=")) r.init = integer(true);
                if (!scope_.registers.insert(r.name).second) {
                    throw ParseError(r.span, "duplicate identifier '" + r.name + "'");
                }
                m.program.locals.push_back(std::move(r));
            } while (accept(","));
            expect(";");
        }
        while (!is_punct("}")) {
            if (peek().kind == Tok::End) throw ParseError(peek().span, "unterminated module body");
            m.program.statements.push_back(parse_stmt());
        }
        expect("}");
        return m;
    }

    // ---- statements
    std::vector<Stmt> parse_block() {
        expect("{");
        std::vector<Stmt> out;
        while (!is_punct("}")) {
            if (peek().kind == Tok::End) throw ParseError(peek().span, "unterminated block");
            out.push_back(parse_stmt());
        }
        expect("}");
        return out;
    }

    void check_register(const std::string& name, SourceSpan span) const {
        if (!scope_.registers.count(name)) throw ParseError(span, "unknown register '" + name + "'");
    }

    void check_fifo(const std::string& name, SourceSpan span) {
        used_fifos_.push_back({name, span});
    }

    Stmt parse_stmt() {
        Stmt s;
        s.span = peek().span;
        if (is_word("if")) {
            next();
            s.kind = StmtKind::If;
            expect("(");
            s.expr = parse_expr();
            expect(")");
            s.body = parse_block();
            if (is_word("else")) {
                next();
                if (is_word("if")) {
                    s.else_body.push_back(parse_stmt());
                } else {
                    s.else_body = parse_block();
                }
            }
            s.cost = 0;
            return s;
        }
        if (is_word("while")) {
            next();
            s.kind = StmtKind::While;
            expect("(");
            s.expr = parse_expr();
            expect(")");
            s.body = parse_block();
            s.cost = 0;
            return s;
        }
        if (is_word("for")) {
            next();
            s.kind = StmtKind::For;
            expect("(");
            SourceSpan sp = peek().span;
            s.target = ident("loop register");
            check_register(s.target, sp);
            expect(":");
            s.expr = parse_expr();
            expect(")");
            s.body = parse_block();
            s.cost = 0;
            return s;
        }
        if (is_word("loop")) {
            next();
            s.kind = StmtKind::Loop;
            s.body = parse_block();
            s.cost = 0;
            return s;
        }
        if (is_word("break")) {
            next();
            s.kind = StmtKind::Break;
            s.cost = 0;
            expect(";");
            return s;
        }
        if (is_word("delay")) {
            next();
            s.kind = StmtKind::Delay;
            s.cost = integer(false);
            expect(";");
            return s;
        }
        if (is_word("skip")) {
            next();
            s.kind = StmtKind::Skip;
        } else if (is_word("output")) {
            next();
            s.kind = StmtKind::Output;
            s.target = ident("output name");
            expect("=");
            s.expr = parse_expr();
            output_refs_.push_back({s.target, s.span});
        } else if (peek().kind == Tok::Ident && is_punct(".", 1)) {
            // fifo.write(expr)
            SourceSpan fs = peek().span;
            s.fifo = ident("FIFO name");
            check_fifo(s.fifo, fs);
            expect(".");
            SourceSpan ms = peek().span;
            std::string method = ident("FIFO method");
            if (method != "write") throw ParseError(ms, "only 'write' may be used as a statement; '" + method + "' needs a result register");
            s.kind = StmtKind::FifoWrite;
            expect("(");
            s.expr = parse_expr();
            expect(")");
        } else if (peek().kind == Tok::Ident && is_punct("=", 1) && peek(2).kind == Tok::Ident &&
                   is_punct(".", 3)) {
            SourceSpan ts = peek().span;
            std::string lhs = ident("register");
            check_register(lhs, ts);
            expect("=");
            SourceSpan fs = peek().span;
            s.fifo = ident("FIFO name");
            check_fifo(s.fifo, fs);
            expect(".");
            SourceSpan ms = peek().span;
            std::string method = ident("FIFO method");
            expect("(");
            if (method == "read") {
                s.kind = StmtKind::FifoRead;
                s.target = lhs;
            } else if (method == "read_nb") {
                s.kind = StmtKind::FifoRead;
                s.mode = AccessMode::NonBlocking;
                s.flag = lhs;
                SourceSpan rs = peek().span;
                s.target = ident("register");
                check_register(s.target, rs);
            } else if (method == "write_nb") {
                s.kind = StmtKind::FifoWrite;
                s.mode = AccessMode::NonBlocking;
                s.flag = lhs;
                s.expr = parse_expr();
            } else if (method == "empty") {
                s.kind = StmtKind::FifoEmpty;
                s.target = lhs;
            } else if (method == "full") {
                s.kind = StmtKind::FifoFull;
                s.target = lhs;
            } else {
                throw ParseError(ms, "unknown FIFO method '" + method + "'");
            }
            expect(")");
        } else if (peek().kind == Tok::Ident && is_punct("=", 1)) {
            SourceSpan ts = peek().span;
            s.kind = StmtKind::Assign;
            s.target = ident("register");
            check_register(s.target, ts);
            expect("=");
            s.expr = parse_expr();
        } else {
            throw ParseError(peek().span, "expected statement, found " + describe(peek()));
        }
        s.cost = default_cost(s);
        if (accept("@")) s.cost = integer(false);
        expect(";");
        return s;
    }

    // ---- expressions (C precedence)
    ExprPtr parse_expr() { return parse_binary(0); }

    static int precedence(std::string_view op) {
        static const std::map<std::string_view, int> p = {
            {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6}, {"!=", 6},
            {"<", 7},  {"<=", 7}, {">", 7},  {">=", 7}, {"<<", 8}, {">>", 8}, {"+", 9},
            {"-", 9},  {"*", 10}, {"/", 10}, {"%", 10}};
        auto it = p.find(op);
        return it == p.end() ? -1 : it->second;
    }

    static BinaryOp binary_op(std::string_view op) {
        static const std::map<std::string_view, BinaryOp> m = {
            {"||", BinaryOp::LogicalOr}, {"&&", BinaryOp::LogicalAnd}, {"|", BinaryOp::BitOr},
            {"^", BinaryOp::BitXor},     {"&", BinaryOp::BitAnd},      {"==", BinaryOp::Eq},
            {"!=", BinaryOp::Ne},        {"<", BinaryOp::Lt},          {"<=", BinaryOp::Le},
            {">", BinaryOp::Gt},         {">=", BinaryOp::Ge},         {"<<", BinaryOp::Shl},
            {">>", BinaryOp::Shr},       {"+", BinaryOp::Add},         {"-", BinaryOp::Sub},
            {"*", BinaryOp::Mul},        {"/", BinaryOp::Div},         {"%", BinaryOp::Mod}};
        return m.at(op);
    }

    ExprPtr parse_binary(int min_prec) {
        ExprPtr lhs = parse_unary();
        for (;;) {
            const Token& t = peek();
            if (t.kind != Tok::Punct) break;
            int prec = precedence(t.text);
            if (prec < 0 || prec <= min_prec) break;
            SourceSpan sp = t.span;
            BinaryOp op = binary_op(next().text);
            ExprPtr rhs = parse_binary(prec);
            auto e = Expr::binary(op, std::move(lhs), std::move(rhs));
            const_cast<Expr&>(*e).span = sp;
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        SourceSpan sp = peek().span;
        ExprPtr e;
        if (accept("-")) {
            if (peek().kind == Tok::Int) {
                e = Expr::literal(static_cast<std::int64_t>(0 - next().number));
            } else {
                e = Expr::unary(UnaryOp::Neg, parse_unary());
            }
        } else if (accept("!")) {
            e = Expr::unary(UnaryOp::Not, parse_unary());
        } else if (accept("~")) {
            e = Expr::unary(UnaryOp::BitNot, parse_unary());
        } else if (accept("(")) {
            e = parse_expr();
            expect(")");
            return e;
        } else if (peek().kind == Tok::Int) {
            const Token& t = next();
            if (t.number > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
                throw ParseError(t.span, "integer literal out of range");
            }
            e = Expr::literal(static_cast<std::int64_t>(t.number));
        } else if (peek().kind == Tok::Ident && !is_keyword(peek().text)) {
            std::string name = next().text;
            check_register(name, sp);
            e = Expr::reg(std::move(name));
        } else {
            throw ParseError(sp, "expected expression, found " + describe(peek()));
        }
        const_cast<Expr&>(*e).span = sp;
        return e;
    }

    // ---- name resolution
    void resolve(const Design& d, const std::vector<SourceSpan>& top_spans,
                 const std::vector<SourceSpan>& output_spans) {
        std::map<std::string, SourceSpan> names;
        for (const auto& f : d.fifos) {
            if (!names.emplace(f.name, f.span).second) {
                throw ParseError(f.span, "duplicate identifier '" + f.name + "'");
            }
        }
        for (const auto& m : d.modules) {
            if (!names.emplace(m.name, m.span).second) {
                throw ParseError(m.span, "duplicate identifier '" + m.name + "'");
            }
        }
        std::set<std::string> outs;
        for (std::size_t i = 0; i < d.outputs.size(); ++i) {
            if (!outs.insert(d.outputs[i]).second) {
                throw ParseError(output_spans[i], "duplicate identifier '" + d.outputs[i] + "'");
            }
        }
        std::map<std::string, std::string> writer;
        std::map<std::string, std::string> reader;
        for (const auto& m : d.modules) {
            for (const auto& r : m.reads) {
                if (!d.find_fifo(r)) throw ParseError(m.span, "unresolved FIFO reference '" + r + "'");
                auto [it, fresh] = reader.emplace(r, m.name);
                if (!fresh && it->second != m.name) {
                    throw ParseError(m.span, "FIFO '" + r + "' has multiple readers ('" + it->second + "', '" + m.name + "')");
                }
            }
            for (const auto& w : m.writes) {
                if (!d.find_fifo(w)) throw ParseError(m.span, "unresolved FIFO reference '" + w + "'");
                auto [it, fresh] = writer.emplace(w, m.name);
                if (!fresh && it->second != m.name) {
                    throw ParseError(m.span, "FIFO '" + w + "' has multiple writers ('" + it->second + "', '" + m.name + "')");
                }
            }
        }
        for (const auto& [name, span] : used_fifos_) {
            if (!d.find_fifo(name)) throw ParseError(span, "unresolved FIFO reference '" + name + "'");
        }
        std::set<std::string> in_top;
        for (std::size_t i = 0; i < d.top.size(); ++i) {
            if (!d.find_module(d.top[i])) {
                throw ParseError(top_spans[i], "unresolved module reference '" + d.top[i] + "'");
            }
            if (!in_top.insert(d.top[i]).second) {
                throw ParseError(top_spans[i], "module '" + d.top[i] + "' listed twice in top");
            }
        }
        for (const auto& [name, span] : output_refs_) {
            if (!outs.count(name)) throw ParseError(span, "undeclared output '" + name + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
    ModuleScope scope_;
    std::vector<std::pair<std::string, SourceSpan>> used_fifos_;
    std::vector<std::pair<std::string, SourceSpan>> output_refs_;
};

}  // namespace

Design parse_design(std::string_view text) {
    Lexer lex(text);
    Parser p(lex.tokenize());
    return p.parse();
}

}  // namespace dfsim
