#ifndef DFSIM_REPORT_HPP
#define DFSIM_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfsim/engine.hpp"

namespace dfsim {

inline constexpr const char* kReportSchema = "dfsim-report/1";

struct PhaseTimings {
    double parse_ms = 0;
    double elaborate_ms = 0;
    double engine_ms = 0;
    double finalize_ms = 0;

    friend bool operator==(const PhaseTimings&, const PhaseTimings&) = default;
};

// Machine-readable summary of one run. Keys are emitted in sorted order and
// timings are optional so that reports of equal runs are byte-identical.
struct RunReport {
    std::string design;
    DesignClass design_class = DesignClass::TypeA;
    std::map<std::string, std::int64_t> depths;
    Status status = Status::Ok;
    std::int64_t total_cycles = 0;
    std::map<std::string, std::int64_t> outputs;
    std::size_t constraints = 0;
    std::vector<std::string> blocked;
    std::optional<bool> oracle_match;
    std::optional<PhaseTimings> timings;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunReport make_report(const ElaboratedDesign& d, const EngineResult& r);
RunReport make_report(const ElaboratedDesign& d, const OracleResult& r, const Depths& depths);

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);  // throws ReportError

// Pretty-printed JSON followed by a newline.
std::string emit_report(const RunReport& r);
RunReport parse_report(const std::string& text);

nlohmann::json graph_to_json(const SimulationGraph& g);
SimulationGraph graph_from_json(const nlohmann::json& j);

nlohmann::json ledger_to_json(const std::vector<Constraint>& ledger);
std::vector<Constraint> ledger_from_json(const nlohmann::json& j);

// Everything needed to re-finalize a finished run without re-executing it.
struct Artifacts {
    RunReport report;
    std::string design_text;  // canonical source of the unpruned design
    SimulationGraph graph;
    std::vector<Constraint> ledger;
};

// Writes report.json, design.od, graph.json and ledger.json into `dir`,
// creating it if needed.
void save_artifacts(const std::filesystem::path& dir, const Artifacts& a);
Artifacts load_artifacts(const std::filesystem::path& dir);

// Rebuilds the engine result an artifact set describes, with depths and
// FIFO order taken from `d`.
EngineResult result_from_artifacts(const ElaboratedDesign& d, const Artifacts& a);

}  // namespace dfsim

#endif  // DFSIM_REPORT_HPP
