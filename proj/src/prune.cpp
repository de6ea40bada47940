#include <set>

#include "dfsim/design.hpp"

namespace dfsim {

namespace {

void collect_reads(const std::vector<Stmt>& body, std::set<std::string>& out) {
    std::vector<std::string> regs;
    for (const auto& s : body) {
        if (s.expr) collect_registers(*s.expr, regs);
        collect_reads(s.body, out);
        collect_reads(s.else_body, out);
    }
    out.insert(regs.begin(), regs.end());
}

bool is_check(const Stmt& s) { return s.kind == StmtKind::FifoEmpty || s.kind == StmtKind::FifoFull; }

std::size_t replace_dead_checks(std::vector<Stmt>& body, const std::set<std::string>& live) {
    std::size_t n = 0;
    for (auto& s : body) {
        if (is_check(s) && !live.count(s.target)) {
            Stmt marker;
            marker.kind = StmtKind::Skip;
            marker.span = s.span;
            marker.cost = s.cost;
            s = std::move(marker);
            ++n;
            continue;
        }
        n += replace_dead_checks(s.body, live);
        n += replace_dead_checks(s.else_body, live);
    }
    return n;
}

std::size_t count_checks(const std::vector<Stmt>& body) {
    std::size_t n = 0;
    for (const auto& s : body) {
        if (is_check(s)) ++n;
        n += count_checks(s.body) + count_checks(s.else_body);
    }
    return n;
}

}  // namespace

Design prune_unused_checks(const Design& d) {
    Design out = d;
    for (auto& m : out.modules) {
        std::set<std::string> live;
        collect_reads(m.program.statements, live);
        replace_dead_checks(m.program.statements, live);
    }
    return out;
}

std::size_t count_status_checks(const Design& d) {
    std::size_t n = 0;
    for (const auto& m : d.modules) n += count_checks(m.program.statements);
    return n;
}

}  // namespace dfsim
