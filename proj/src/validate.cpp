#include <algorithm>
#include <map>
#include <set>

#include "dfsim/design.hpp"

namespace dfsim {

namespace {

bool is_fifo_access(StmtKind k) {
    return k == StmtKind::FifoWrite || k == StmtKind::FifoRead || k == StmtKind::FifoEmpty ||
           k == StmtKind::FifoFull;
}

bool contains(const std::vector<Stmt>& body, auto pred) {
    for (const auto& s : body) {
        if (pred(s)) return true;
        if (contains(s.body, pred) || contains(s.else_body, pred)) return true;
    }
    return false;
}

bool is_constant_true(const ExprPtr& e) {
    return e && e->kind == Expr::Kind::Literal && e->value != 0;
}

class ModuleChecker {
public:
    ModuleChecker(const ModuleDecl& m, std::vector<Diagnostic>& out) : module_(m), out_(out) {}

    void run() {
        walk(module_.program.statements, 0);
        for (const auto& r : module_.reads) {
            if (!read_used_.count(r)) {
                warn("unused-port", "module '" + module_.name + "' declares 'in " + r + "' but never reads it",
                     module_.span);
            }
        }
        for (const auto& w : module_.writes) {
            if (!write_used_.count(w)) {
                warn("unused-port", "module '" + module_.name + "' declares 'out " + w + "' but never writes it",
                     module_.span);
            }
        }
    }

private:
    void walk(const std::vector<Stmt>& body, int loop_depth) {
        for (const auto& s : body) {
            check(s, loop_depth);
            bool loop = s.kind == StmtKind::While || s.kind == StmtKind::For || s.kind == StmtKind::Loop;
            walk(s.body, loop ? loop_depth + 1 : loop_depth);
            walk(s.else_body, loop_depth);
        }
    }

    void check(const Stmt& s, int loop_depth) {
        auto has_port = [](const std::vector<std::string>& ports, const std::string& f) {
            return std::find(ports.begin(), ports.end(), f) != ports.end();
        };
        switch (s.kind) {
            case StmtKind::FifoWrite:
            case StmtKind::FifoFull:
                write_used_.insert(s.fifo);
                if (!has_port(module_.writes, s.fifo)) {
                    error("port-mismatch",
                          "module '" + module_.name + "' accesses '" + s.fifo + "' as a writer without declaring 'out " +
                              s.fifo + "'",
                          s.span);
                }
                break;
            case StmtKind::FifoRead:
            case StmtKind::FifoEmpty:
                read_used_.insert(s.fifo);
                if (!has_port(module_.reads, s.fifo)) {
                    error("port-mismatch",
                          "module '" + module_.name + "' accesses '" + s.fifo + "' as a reader without declaring 'in " +
                              s.fifo + "'",
                          s.span);
                }
                break;
            case StmtKind::Break:
                if (loop_depth == 0) error("break-outside-loop", "'break' outside of a loop", s.span);
                break;
            case StmtKind::While:
            case StmtKind::For:
            case StmtKind::Loop: {
                bool costs = contains(s.body, [](const Stmt& x) { return !is_control(x.kind) && x.cost > 0; });
                if (!costs) error("zero-cost-loop", "loop body contains no statement with a positive cycle cost", s.span);
                bool infinite = s.kind == StmtKind::Loop || (s.kind == StmtKind::While && is_constant_true(s.expr));
                if (infinite) {
                    bool progress = contains(s.body, [](const Stmt& x) {
                        return is_fifo_access(x.kind) || x.kind == StmtKind::Break;
                    });
                    if (!progress) {
                        error("spin-loop", "infinite loop without any FIFO operation or break", s.span);
                    }
                }
                break;
            }
            default:
                break;
        }
        if (is_fifo_access(s.kind) && s.cost < 1) {
            error("access-cost", "FIFO accesses and status checks must cost at least one cycle", s.span);
        }
        if (!is_control(s.kind) && s.cost < 0) error("negative-cost", "negative cycle cost", s.span);
    }

    void error(std::string code, std::string msg, SourceSpan span) {
        out_.push_back({Severity::Error, std::move(code), std::move(msg), span});
    }
    void warn(std::string code, std::string msg, SourceSpan span) {
        out_.push_back({Severity::Warning, std::move(code), std::move(msg), span});
    }

    const ModuleDecl& module_;
    std::vector<Diagnostic>& out_;
    std::set<std::string> read_used_;
    std::set<std::string> write_used_;
};

void collect_outputs(const std::vector<Stmt>& body, std::set<std::string>& out) {
    for (const auto& s : body) {
        if (s.kind == StmtKind::Output) out.insert(s.target);
        collect_outputs(s.body, out);
        collect_outputs(s.else_body, out);
    }
}

}  // namespace

std::vector<Diagnostic> validate_design(const Design& d) {
    std::vector<Diagnostic> out;
    for (const auto& f : d.fifos) {
        if (f.depth < 1) {
            out.push_back({Severity::Error, "depth-must-be-positive",
                           "FIFO '" + f.name + "' has depth " + std::to_string(f.depth) + "; depth must be >= 1", f.span});
        }
    }
    if (d.top.empty()) out.push_back({Severity::Error, "top-empty", "design has no top-level modules", {}});

    std::set<std::string> in_top(d.top.begin(), d.top.end());
    std::set<std::string> has_reader;
    std::set<std::string> has_writer;
    std::map<std::string, std::string> output_writer;
    std::set<std::string> assigned_outputs;
    for (const auto& m : d.modules) {
        if (!in_top.count(m.name)) {
            out.push_back({Severity::Warning, "module-not-in-top",
                           "module '" + m.name + "' is not instantiated in top", m.span});
            continue;
        }
        for (const auto& r : m.reads) has_reader.insert(r);
        for (const auto& w : m.writes) has_writer.insert(w);
        ModuleChecker(m, out).run();
        std::set<std::string> outs;
        collect_outputs(m.program.statements, outs);
        for (const auto& o : outs) {
            assigned_outputs.insert(o);
            auto [it, fresh] = output_writer.emplace(o, m.name);
            if (!fresh) {
                out.push_back({Severity::Error, "multiple-output-writers",
                               "output '" + o + "' is assigned by both '" + it->second + "' and '" + m.name + "'",
                               m.span});
            }
        }
    }
    for (const auto& f : d.fifos) {
        if (!has_reader.count(f.name)) {
            out.push_back({Severity::Warning, "dangling-reader", "FIFO '" + f.name + "' is never read", f.span});
        }
        if (!has_writer.count(f.name)) {
            out.push_back({Severity::Warning, "dangling-writer", "FIFO '" + f.name + "' is never written", f.span});
        }
    }
    for (const auto& o : d.outputs) {
        if (!assigned_outputs.count(o)) {
            out.push_back({Severity::Warning, "output-unassigned", "output '" + o + "' is never assigned", {}});
        }
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& d) {
    return to_string(d.span) + ": " + (d.severity == Severity::Error ? "error" : "warning") + " [" + d.code +
           "]: " + d.message;
}

}  // namespace dfsim
