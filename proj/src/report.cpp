#include "dfsim/report.hpp"

#include <fstream>
#include <sstream>

namespace dfsim {

using nlohmann::json;

namespace {

Status status_from_string(const std::string& s) {
    for (auto st : {Status::Ok, Status::Deadlock, Status::BudgetExhausted, Status::TimingInconsistency}) {
        if (to_string(st) == s) return st;
    }
    throw ReportError("unknown status '" + s + "'");
}

DesignClass class_from_string(const std::string& s) {
    for (auto c : {DesignClass::TypeA, DesignClass::TypeB, DesignClass::TypeC}) {
        if (to_string(c) == s) return c;
    }
    throw ReportError("unknown design class '" + s + "'");
}

std::map<std::string, std::int64_t> named_depths(const ElaboratedDesign& d, const Depths& depths) {
    std::map<std::string, std::int64_t> out;
    for (std::size_t f = 0; f < d.fifo_names.size() && f < depths.size(); ++f) out[d.fifo_names[f]] = depths[f];
    return out;
}

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ReportError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ReportError(std::string("bad field '") + key + "': " + e.what());
    }
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ReportError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ReportError("cannot write " + p.string());
    out << text;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ReportError(what + ": " + e.what());
    }
}

}  // namespace

RunReport make_report(const ElaboratedDesign& d, const EngineResult& r) {
    RunReport rep;
    rep.design = d.design.name;
    rep.design_class = d.design_class;
    rep.depths = named_depths(d, r.depths);
    rep.status = r.status;
    rep.total_cycles = r.total_cycles;
    rep.outputs = r.outputs;
    rep.constraints = r.constraints.size();
    rep.blocked = r.blocked;
    return rep;
}

RunReport make_report(const ElaboratedDesign& d, const OracleResult& r, const Depths& depths) {
    RunReport rep;
    rep.design = d.design.name;
    rep.design_class = d.design_class;
    rep.depths = named_depths(d, depths);
    rep.status = r.status;
    rep.total_cycles = r.total_cycles;
    rep.outputs = r.outputs;
    rep.blocked = r.blocked;
    return rep;
}

json to_json(const RunReport& r) {
    json j;
    j["schema"] = kReportSchema;
    j["design"] = r.design;
    j["class"] = std::string(to_string(r.design_class));
    j["depths"] = r.depths;
    j["status"] = std::string(to_string(r.status));
    j["total_cycles"] = r.total_cycles;
    j["outputs"] = r.outputs;
    j["constraints"] = r.constraints;
    j["blocked"] = r.blocked;
    if (r.oracle_match) j["oracle_match"] = *r.oracle_match;
    if (r.timings) {
        j["timings"] = {{"parse_ms", r.timings->parse_ms},
                        {"elaborate_ms", r.timings->elaborate_ms},
                        {"engine_ms", r.timings->engine_ms},
                        {"finalize_ms", r.timings->finalize_ms}};
    }
    return j;
}

RunReport report_from_json(const json& j) {
    auto schema = field<std::string>(j, "schema");
    if (schema != kReportSchema) throw ReportError("unsupported report schema '" + schema + "'");
    RunReport r;
    r.design = field<std::string>(j, "design");
    r.design_class = class_from_string(field<std::string>(j, "class"));
    r.depths = field<std::map<std::string, std::int64_t>>(j, "depths");
    r.status = status_from_string(field<std::string>(j, "status"));
    r.total_cycles = field<std::int64_t>(j, "total_cycles");
    r.outputs = field<std::map<std::string, std::int64_t>>(j, "outputs");
    r.constraints = field<std::size_t>(j, "constraints");
    r.blocked = field<std::vector<std::string>>(j, "blocked");
    if (j.contains("oracle_match")) r.oracle_match = field<bool>(j, "oracle_match");
    if (j.contains("timings")) {
        const auto& t = j.at("timings");
        r.timings = PhaseTimings{field<double>(t, "parse_ms"), field<double>(t, "elaborate_ms"),
                                 field<double>(t, "engine_ms"), field<double>(t, "finalize_ms")};
    }
    return r;
}

std::string emit_report(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

RunReport parse_report(const std::string& text) { return report_from_json(parse_json(text, "report")); }

json graph_to_json(const SimulationGraph& g) {
    json nodes = json::array();
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& n = g.node(static_cast<NodeId>(v));
        json in = json::array();
        g.for_each_in_edge(static_cast<NodeId>(v), [&](const Edge& e) {
            in.push_back({{"src", e.src}, {"kind", std::string(to_string(e.kind))}, {"weight", e.weight}});
        });
        nodes.push_back({{"kind", std::string(to_string(n.kind))},
                         {"module", n.module},
                         {"fifo", n.fifo},
                         {"ordinal", n.ordinal},
                         {"cycle", n.cycle},
                         {"in", std::move(in)}});
    }
    return {{"nodes", std::move(nodes)}};
}

SimulationGraph graph_from_json(const json& j) {
    auto nodes = field<json>(j, "nodes");
    if (!nodes.is_array() || nodes.empty()) throw ReportError("graph has no nodes");
    if (field<std::string>(nodes[0], "kind") != "start") throw ReportError("graph must begin with the start node");

    struct Pending {
        NodeId src;
        EdgeKind kind;
        std::int64_t weight;
    };
    auto edge = [](const json& e) {
        auto kind = edge_kind_from_string(field<std::string>(e, "kind"));
        if (!kind) throw ReportError("unknown edge kind");
        return Pending{field<NodeId>(e, "src"), *kind, field<std::int64_t>(e, "weight")};
    };

    // Every node after the start is created from its seq predecessor, which
    // is always its first incoming edge; the remaining edges are added once
    // all nodes exist.
    SimulationGraph g;
    for (std::size_t v = 1; v < nodes.size(); ++v) {
        const auto& n = nodes[v];
        auto kind = node_kind_from_string(field<std::string>(n, "kind"));
        if (!kind) throw ReportError("unknown node kind");
        auto in = field<json>(n, "in");
        if (!in.is_array() || in.empty()) throw ReportError("node " + std::to_string(v) + " has no incoming edge");
        auto first = edge(in[0]);
        if (first.kind != EdgeKind::Seq || first.src < 0 || static_cast<std::size_t>(first.src) >= v) {
            throw ReportError("node " + std::to_string(v) + " must start with a seq edge from an earlier node");
        }
        g.add_node(*kind, field<std::int32_t>(n, "module"), first.src, first.weight, field<std::int32_t>(n, "fifo"),
                   field<std::int64_t>(n, "ordinal"));
    }
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        auto in = field<json>(nodes[v], "in");
        for (std::size_t k = (v == 0 ? 0 : 1); k < in.size(); ++k) {
            auto e = edge(in[k]);
            try {
                g.add_edge(e.src, static_cast<NodeId>(v), e.kind, e.weight);
            } catch (const std::exception& ex) {
                throw ReportError("bad edge into node " + std::to_string(v) + ": " + ex.what());
            }
        }
    }
    try {
        g.recompute();
    } catch (const GraphCycleError&) {
        throw ReportError("graph contains a cycle");
    }
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (g.node_cycle(static_cast<NodeId>(v)) != field<std::int64_t>(nodes[v], "cycle")) {
            throw ReportError("stored cycle of node " + std::to_string(v) + " disagrees with its edges");
        }
    }
    return g;
}

json ledger_to_json(const std::vector<Constraint>& ledger) {
    json out = json::array();
    for (const auto& c : ledger) {
        out.push_back({{"kind", std::string(to_string(c.kind))},
                       {"module", c.module},
                       {"sequence", c.sequence},
                       {"fifo", c.fifo},
                       {"ordinal", c.ordinal},
                       {"anchor", c.anchor},
                       {"offset", c.offset},
                       {"outcome", c.outcome}});
    }
    return out;
}

std::vector<Constraint> ledger_from_json(const json& j) {
    if (!j.is_array()) throw ReportError("ledger must be an array");
    std::vector<Constraint> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        auto kind = query_kind_from_string(field<std::string>(e, "kind"));
        if (!kind) throw ReportError("unknown query kind");
        Constraint c;
        c.kind = *kind;
        c.module = field<std::int32_t>(e, "module");
        c.sequence = field<std::int64_t>(e, "sequence");
        c.fifo = field<std::int32_t>(e, "fifo");
        c.ordinal = field<std::int64_t>(e, "ordinal");
        c.anchor = field<NodeId>(e, "anchor");
        c.offset = field<std::int64_t>(e, "offset");
        c.outcome = field<bool>(e, "outcome");
        out.push_back(c);
    }
    return out;
}

void save_artifacts(const std::filesystem::path& dir, const Artifacts& a) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ReportError("cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "report.json", emit_report(a.report));
    write_file(dir / "design.od", a.design_text);
    write_file(dir / "graph.json", graph_to_json(a.graph).dump() + "\n");
    write_file(dir / "ledger.json", ledger_to_json(a.ledger).dump(1) + "\n");
}

Artifacts load_artifacts(const std::filesystem::path& dir) {
    Artifacts a;
    a.report = parse_report(read_file(dir / "report.json"));
    a.design_text = read_file(dir / "design.od");
    a.graph = graph_from_json(parse_json(read_file(dir / "graph.json"), "graph"));
    a.ledger = ledger_from_json(parse_json(read_file(dir / "ledger.json"), "ledger"));
    return a;
}

EngineResult result_from_artifacts(const ElaboratedDesign& d, const Artifacts& a) {
    EngineResult r;
    r.status = a.report.status;
    r.total_cycles = a.report.total_cycles;
    r.outputs = a.report.outputs;
    r.blocked = a.report.blocked;
    r.constraints = a.ledger;
    r.graph = a.graph;
    for (const auto& name : d.fifo_names) {
        auto it = a.report.depths.find(name);
        if (it == a.report.depths.end()) throw ReportError("report has no depth for FIFO '" + name + "'");
        r.depths.push_back(it->second);
    }
    return r;
}

}  // namespace dfsim
