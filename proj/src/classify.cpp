#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "dfsim/design.hpp"

// Static classification of a design into the A/B/C taxonomy.
//
// A register written by a non-blocking access (its success flag) or by a live
// empty()/full() check is a "probe". A probe is benign when the program's
// behaviour on failure is to do nothing or retry:
//   if (<success>) { ... }          no else branch
//   while (<failure>) { <probe ops, delay, skip> }
// Every other use (arithmetic, outputs, else branches, written values) lets
// the outcome of a timing-dependent access change what the module computes,
// which makes the design Type C. A non-blocking access whose flag is never
// read silently drops data or reads stale values, also Type C.

namespace dfsim {

namespace {

enum class ProbeKind { Flag, Empty, Full };

struct Probe {
    ProbeKind kind;
    bool read = false;
};

bool refers_to(const ExprPtr& e, const std::string& name) {
    std::vector<std::string> regs;
    collect_registers(*e, regs);
    return std::find(regs.begin(), regs.end(), name) != regs.end();
}

// Does `cond` evaluate to true exactly when the probe reports success?
// Returns nullopt when the condition is not a plain test of the probe.
std::optional<bool> success_polarity(const ExprPtr& cond, const std::string& reg, ProbeKind kind) {
    bool negated = false;
    const Expr* e = cond.get();
    if (e->kind == Expr::Kind::Unary && e->unary_op == UnaryOp::Not) {
        negated = true;
        e = e->lhs.get();
    }
    if (e->kind != Expr::Kind::Register || e->name != reg) return std::nullopt;
    bool truthy_is_success = kind == ProbeKind::Flag;
    return negated ? !truthy_is_success : truthy_is_success;
}

class ModuleClassifier {
public:
    explicit ModuleClassifier(const ModuleDecl& m) : module_(m) {}

    bool divergent() {
        collect_probes(module_.program.statements);
        used_.clear();
        scan(module_.program.statements);
        for (const auto& [reg, probe] : probes_) {
            if (probe.kind == ProbeKind::Flag && !used_.count(reg)) return true;
        }
        return divergent_;
    }

private:
    void collect_probes(const std::vector<Stmt>& body) {
        for (const auto& s : body) {
            if ((s.kind == StmtKind::FifoWrite || s.kind == StmtKind::FifoRead) && s.mode == AccessMode::NonBlocking) {
                probes_.emplace(s.flag, Probe{ProbeKind::Flag});
            } else if (s.kind == StmtKind::FifoEmpty) {
                probes_.emplace(s.target, Probe{ProbeKind::Empty});
            } else if (s.kind == StmtKind::FifoFull) {
                probes_.emplace(s.target, Probe{ProbeKind::Full});
            }
            collect_probes(s.body);
            collect_probes(s.else_body);
        }
    }

    void use_in_data(const ExprPtr& e) {
        if (!e) return;
        for (const auto& [reg, probe] : probes_) {
            if (refers_to(e, reg)) {
                used_.insert(reg);
                divergent_ = true;
            }
        }
    }

    static bool only_probe_ops(const std::vector<Stmt>& body, const std::string& reg) {
        for (const auto& s : body) {
            switch (s.kind) {
                case StmtKind::Delay:
                case StmtKind::Skip:
                    break;
                case StmtKind::FifoEmpty:
                case StmtKind::FifoFull:
                    if (s.target != reg) return false;
                    break;
                case StmtKind::FifoWrite:
                case StmtKind::FifoRead:
                    if (s.mode != AccessMode::NonBlocking || s.flag != reg) return false;
                    break;
                default:
                    return false;
            }
        }
        return true;
    }

    void scan(const std::vector<Stmt>& body) {
        for (const auto& s : body) {
            switch (s.kind) {
                case StmtKind::Assign:
                    if (!(probes_.count(s.target) && s.expr->kind == Expr::Kind::Literal)) use_in_data(s.expr);
                    break;
                case StmtKind::Output:
                case StmtKind::FifoWrite:
                case StmtKind::For:
                    use_in_data(s.expr);
                    break;
                case StmtKind::If:
                    for (const auto& [reg, probe] : probes_) {
                        if (!refers_to(s.expr, reg)) continue;
                        used_.insert(reg);
                        auto pol = success_polarity(s.expr, reg, probe.kind);
                        if (!pol || !*pol || !s.else_body.empty()) divergent_ = true;
                    }
                    break;
                case StmtKind::While:
                    for (const auto& [reg, probe] : probes_) {
                        if (!refers_to(s.expr, reg)) continue;
                        used_.insert(reg);
                        auto pol = success_polarity(s.expr, reg, probe.kind);
                        if (!pol || *pol || !only_probe_ops(s.body, reg)) divergent_ = true;
                    }
                    break;
                default:
                    break;
            }
            scan(s.body);
            scan(s.else_body);
        }
    }

    const ModuleDecl& module_;
    std::map<std::string, Probe> probes_;
    std::set<std::string> used_;
    bool divergent_ = false;
};

bool has_nonblocking(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
        if ((s.kind == StmtKind::FifoWrite || s.kind == StmtKind::FifoRead) && s.mode == AccessMode::NonBlocking) {
            return true;
        }
        if (s.kind == StmtKind::FifoEmpty || s.kind == StmtKind::FifoFull) return true;
        if (has_nonblocking(s.body) || has_nonblocking(s.else_body)) return true;
    }
    return false;
}

bool has_infinite_loop(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
        if (s.kind == StmtKind::Loop) return true;
        if (s.kind == StmtKind::While && s.expr->kind == Expr::Kind::Literal && s.expr->value != 0) return true;
        if (has_infinite_loop(s.body) || has_infinite_loop(s.else_body)) return true;
    }
    return false;
}

bool has_cycle(const Design& d) {
    std::map<std::string, std::set<std::string>> succ;
    std::set<std::string> in_top(d.top.begin(), d.top.end());
    for (const auto& f : d.fifos) {
        std::string writer;
        std::string reader;
        for (const auto& m : d.modules) {
            if (!in_top.count(m.name)) continue;
            if (std::count(m.writes.begin(), m.writes.end(), f.name)) writer = m.name;
            if (std::count(m.reads.begin(), m.reads.end(), f.name)) reader = m.name;
        }
        if (!writer.empty() && !reader.empty()) succ[writer].insert(reader);
    }
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
        state[n] = 1;
        for (const auto& s : succ[n]) {
            if (state[s] == 1) return true;
            if (state[s] == 0 && dfs(s)) return true;
        }
        state[n] = 2;
        return false;
    };
    for (const auto& m : d.top) {
        if (state[m] == 0 && dfs(m)) return true;
    }
    return false;
}

}  // namespace

DesignClass classify_design(const Design& input) {
    Design d = prune_unused_checks(input);
    std::set<std::string> in_top(d.top.begin(), d.top.end());
    bool nb = false;
    bool infinite = false;
    bool divergent = false;
    for (const auto& m : d.modules) {
        if (!in_top.count(m.name)) continue;
        nb = nb || has_nonblocking(m.program.statements);
        infinite = infinite || has_infinite_loop(m.program.statements);
        divergent = divergent || ModuleClassifier(m).divergent();
    }
    if (divergent) return DesignClass::TypeC;
    if (nb || infinite || has_cycle(d)) return DesignClass::TypeB;
    return DesignClass::TypeA;
}

}  // namespace dfsim
