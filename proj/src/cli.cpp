#include "dfsim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "dfsim/incremental.hpp"
#include "dfsim/report.hpp"

namespace dfsim {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// DFSIM_LOG: "quiet" (default), "info" or "debug".
int log_level() {
    const char* v = std::getenv("DFSIM_LOG");
    if (!v) return 0;
    std::string s(v);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::map<std::string, std::int64_t> parse_overrides(const std::vector<std::string>& specs) {
    std::map<std::string, std::int64_t> out;
    for (const auto& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--depth expects FIFO=N, got '" + s + "'");
        std::int64_t n = 0;
        std::size_t used = 0;
        try {
            n = std::stoll(s.substr(eq + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() - eq - 1) throw UsageError("--depth expects FIFO=N, got '" + s + "'");
        out[s.substr(0, eq)] = n;
    }
    return out;
}

int exit_for(Status s) {
    switch (s) {
        case Status::Ok: return kExitOk;
        case Status::Deadlock: return kExitDeadlock;
        case Status::BudgetExhausted: return kExitBudget;
        case Status::TimingInconsistency: return kExitTiming;
    }
    return kExitError;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

// Sends the report to `path`, or to stdout when no path was given.
void publish(const RunReport& rep, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << emit_report(rep);
    } else {
        write_text(path, emit_report(rep));
    }
}

bool same_behaviour(const EngineResult& e, const OracleResult& o) {
    return e.status == o.status && e.total_cycles == o.total_cycles && e.outputs == o.outputs &&
           e.blocked == o.blocked;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

std::string format_outputs(const std::map<std::string, std::int64_t>& outputs) {
    std::string s;
    for (const auto& [k, v] : outputs) s += (s.empty() ? "" : " ") + k + "=" + std::to_string(v);
    return s;
}

struct Loaded {
    Design source;
    ElaboratedDesign design;
    double parse_ms = 0;
    double elaborate_ms = 0;
};

Loaded load(const std::string& path, bool prune) {
    Loaded l;
    auto t0 = Clock::now();
    try {
        l.source = load_design(path);
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ":" + e.what());
    }
    l.parse_ms = ms_since(t0);
    t0 = Clock::now();
    l.design = elaborate(l.source, prune);
    l.elaborate_ms = ms_since(t0);
    return l;
}

struct RunArgs {
    std::string design;
    std::vector<std::string> depths;
    std::int64_t budget = EngineOptions{}.max_events;
    std::string report;
    bool oracle_check = false;
    std::optional<std::uint64_t> jitter;
    std::string mode = "threaded";
    std::string artifacts;
    bool timings = false;
    bool trace = false;
    bool no_prune = false;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    const int level = log_level();
    Loaded l = load(a.design, !a.no_prune);
    Depths depths = resolve_depths(l.design, parse_overrides(a.depths));

    EngineOptions opt;
    opt.max_events = a.budget;
    opt.mode = a.mode == "cooperative" ? ScheduleMode::Cooperative : ScheduleMode::Threaded;
    opt.jitter_seed = a.jitter;
    opt.trace = a.trace || level >= 2;
    EngineResult r = run_simulation(l.design, depths, opt);
    for (const auto& line : r.trace) err << "trace: " << line << "\n";

    RunReport rep = make_report(l.design, r);
    int code = exit_for(r.status);
    if (a.oracle_check) {
        OracleResult o = oracle_run(l.design, depths, std::max<std::int64_t>(a.budget, 1));
        rep.oracle_match = same_behaviour(r, o);
        if (!*rep.oracle_match) {
            err << "oracle mismatch: engine " << to_string(r.status) << " " << r.total_cycles << " ["
                << format_outputs(r.outputs) << "], oracle " << to_string(o.status) << " " << o.total_cycles << " ["
                << format_outputs(o.outputs) << "]\n";
            code = kExitMismatch;
        }
    }
    if (a.timings) rep.timings = PhaseTimings{l.parse_ms, l.elaborate_ms, r.engine_ms, r.finalize_ms};
    if (level >= 1) {
        err << "parse " << l.parse_ms << " ms, elaborate " << l.elaborate_ms << " ms, engine " << r.engine_ms
            << " ms, finalize " << r.finalize_ms << " ms, " << r.graph.size() << " nodes\n";
    }
    if (r.status == Status::Deadlock) err << "deadlock: blocked " << join(r.blocked, ", ") << "\n";
    if (r.status == Status::TimingInconsistency) {
        err << "timing inconsistency: " << r.violated.size() << " constraint(s) violated after finalization\n";
    }
    if (!a.artifacts.empty()) {
        save_artifacts(a.artifacts, Artifacts{rep, print_design(l.source), r.graph, r.constraints});
    }
    publish(rep, a.report, out);
    return code;
}

int cmd_oracle(const std::string& path, const std::vector<std::string>& overrides, std::int64_t budget,
               const std::string& report, std::ostream& out) {
    Loaded l = load(path, true);
    Depths depths = resolve_depths(l.design, parse_overrides(overrides));
    OracleResult o = oracle_run(l.design, depths, budget);
    publish(make_report(l.design, o, depths), report, out);
    return exit_for(o.status);
}

int cmd_incremental(const std::string& dir, const std::vector<std::string>& overrides, const std::string& report,
                    const std::string& save_to, std::ostream& out, std::ostream& err) {
    if (!fs::is_directory(dir)) throw std::runtime_error("no artifacts at '" + dir + "'");
    Artifacts a = load_artifacts(dir);
    Design source = parse_design(a.design_text);
    ElaboratedDesign d = elaborate(source);
    EngineResult prior = result_from_artifacts(d, a);

    auto changes = parse_overrides(overrides);
    std::map<std::string, std::int64_t> named = a.report.depths;
    for (const auto& [name, n] : changes) {
        if (!named.count(name)) throw std::invalid_argument("unknown FIFO '" + name + "'");
        named[name] = n;
    }
    Depths depths = resolve_depths(d, named);

    auto t0 = Clock::now();
    IncrementalResult inc = incremental_run(prior, depths);
    double inc_ms = ms_since(t0);
    EngineResult r;
    if (auto* ok = std::get_if<EngineResult>(&inc)) {
        r = std::move(*ok);
        bool unchanged = depths == prior.depths && r.total_cycles == prior.total_cycles;
        out << "reused" << (unchanged ? ", unchanged" : "") << "\n";
    } else {
        const auto& need = std::get<NeedsFullResimulation>(inc);
        if (log_level() >= 1) err << "resimulating: " << need.reason << "\n";
        r = run_simulation(d, depths);
        out << "resimulated (" << need.violated.size() << " violated constraint(s))\n";
    }
    if (log_level() >= 1) err << "incremental check " << inc_ms << " ms\n";
    out << "total_cycles " << prior.total_cycles << " -> " << r.total_cycles << "\n";

    RunReport rep = make_report(d, r);
    if (!report.empty()) write_text(report, emit_report(rep));
    if (!save_to.empty()) save_artifacts(save_to, Artifacts{rep, a.design_text, r.graph, r.constraints});
    return exit_for(r.status);
}

int cmd_bench(const std::string& dir, std::ostream& out, std::ostream& err) {
    if (!fs::is_directory(dir)) throw std::runtime_error("no corpus directory '" + dir + "'");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".od") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    int code = kExitOk;
    out << std::left << std::setw(14) << "design" << std::setw(7) << "class" << std::setw(22) << "status"
        << std::setw(9) << "cycles" << std::setw(10) << "engine_ms" << "verdict\n";
    for (const auto& f : files) {
        std::string name = f.stem().string();
        try {
            Loaded l = load(f.string(), true);
            auto t0 = Clock::now();
            EngineResult r = run_simulation(l.design, l.design.depths);
            double ms = ms_since(t0);
            OracleResult o = oracle_run(l.design, l.design.depths, 100'000'000);
            std::string verdict = same_behaviour(r, o) ? "pass" : "MISMATCH";
            if (verdict != "pass") code = kExitMismatch;
            bool deadlocked = r.status == Status::Deadlock;
            if (deadlocked && l.source.expect_deadlock) {
                verdict += " (expected-deadlock)";
            } else if (deadlocked != l.source.expect_deadlock) {
                verdict += deadlocked ? " (unexpected deadlock)" : " (missing expected deadlock)";
                code = kExitMismatch;
            }
            std::ostringstream cycles;
            cycles << r.total_cycles;
            std::ostringstream time;
            time << std::fixed << std::setprecision(2) << ms;
            out << std::setw(14) << name << std::setw(7) << to_string(l.design.design_class) << std::setw(22)
                << to_string(r.status) << std::setw(9) << cycles.str() << std::setw(10) << time.str() << verdict
                << "\n";
            if (!r.outputs.empty()) out << "  " << format_outputs(r.outputs) << "\n";
            if (deadlocked) out << "  blocked: " << join(r.blocked, ", ") << "\n";
        } catch (const std::exception& e) {
            err << f.string() << ": " << e.what() << "\n";
            out << std::setw(14) << name << "error\n";
            code = kExitError;
        }
    }
    return code;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cycle-accurate simulator for dataflow designs with bounded FIFOs", "dfsim"};
    app.require_subcommand(1);

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Simulate a design and emit a JSON report");
    run->add_option("design", ra.design, "Design file")->required();
    run->add_option("--depth", ra.depths, "FIFO depth override FIFO=N (repeatable)");
    run->add_option("--budget", ra.budget, "Maximum committed events plus resolved queries");
    run->add_option("--report", ra.report, "Write the report here instead of stdout");
    run->add_flag("--oracle-check", ra.oracle_check, "Cross-check against the cycle-stepping reference model");
    run->add_option("--jitter", ra.jitter, "Seed for randomized scheduling delays");
    run->add_option("--mode", ra.mode, "Agent scheduling")->check(CLI::IsMember({"threaded", "cooperative"}));
    run->add_option("--artifacts", ra.artifacts, "Save graph, ledger and design for incremental runs");
    run->add_flag("--timings", ra.timings, "Include per-phase wall times in the report");
    run->add_flag("--trace", ra.trace, "Log every coordinator request to stderr");
    run->add_flag("--no-prune", ra.no_prune, "Keep status checks whose result is unused");

    std::string path;
    std::vector<std::string> depths;
    std::int64_t oracle_budget = 100'000'000;
    std::string report;
    auto* oracle = app.add_subcommand("oracle", "Run the cycle-stepping reference model");
    oracle->add_option("design", path, "Design file")->required();
    oracle->add_option("--depth", depths, "FIFO depth override FIFO=N (repeatable)");
    oracle->add_option("--budget", oracle_budget, "Maximum simulated cycles");
    oracle->add_option("--report", report, "Write the report here instead of stdout");

    std::string save_to;
    auto* incremental = app.add_subcommand("incremental", "Re-time a saved run under new FIFO depths");
    incremental->add_option("dir", path, "Directory written by run --artifacts")->required();
    incremental->add_option("--depth", depths, "FIFO depth override FIFO=N (repeatable)");
    incremental->add_option("--report", report, "Write the new report here");
    incremental->add_option("--artifacts", save_to, "Save artifacts of the new result");

    auto* bench = app.add_subcommand("bench", "Run every design in a directory against the reference model");
    bench->add_option("corpus", path, "Directory of .od files")->required();

    auto* print = app.add_subcommand("print", "Print a design in canonical form");
    print->add_option("design", path, "Design file")->required();
    auto* classify = app.add_subcommand("classify", "Print a design's class");
    classify->add_option("design", path, "Design file")->required();
    auto* validate = app.add_subcommand("validate", "Report design diagnostics");
    validate->add_option("design", path, "Design file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) return cmd_run(ra, out, err);
        if (*oracle) return cmd_oracle(path, depths, oracle_budget, report, out);
        if (*incremental) return cmd_incremental(path, depths, report, save_to, out, err);
        if (*bench) return cmd_bench(path, out, err);
        Design d;
        try {
            d = load_design(path);
        } catch (const ParseError& e) {
            throw std::runtime_error(path + ":" + e.what());
        }
        if (*print) {
            out << print_design(d);
            return kExitOk;
        }
        if (*classify) {
            out << to_string(classify_design(d)) << "\n";
            return kExitOk;
        }
        auto diags = validate_design(d);
        for (const auto& diag : diags) out << path << ":" << format_diagnostic(diag) << "\n";
        return has_errors(diags) ? kExitError : kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitError;
}

}  // namespace dfsim
