#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dfsim/engine.hpp"
#include "support.hpp"

using namespace dfsim;
using namespace dfsim::test;

namespace {

constexpr std::int64_t kBudget = 100'000'000;

std::vector<AccessEvent> graph_events(const SimulationGraph& g, int module) {
    std::vector<AccessEvent> out;
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& n = g.node(static_cast<NodeId>(v));
        if (n.module != module) continue;
        if (n.kind == NodeKind::FifoWrite) out.push_back({OpCode::Write, n.fifo, n.cycle});
        if (n.kind == NodeKind::FifoRead) out.push_back({OpCode::Read, n.fifo, n.cycle});
    }
    return out;
}

}  // namespace

TEST_CASE("Fig. 5 top design takes five cycles") {
    auto d = corpus("fig5_top");
    auto r = oracle_run(d, d.depths, kBudget);
    CHECK(r.status == Status::Ok);
    CHECK(r.total_cycles == 5);
    CHECK(r.outputs == std::map<std::string, std::int64_t>{{"first", 1}, {"second", 2}});
}

TEST_CASE("a module with a single output statement takes two cycles") {
    auto d = from_text("design e; output v; module m() { output v = 3; } top m;");
    auto r = oracle_run(d, d.depths, kBudget);
    CHECK(r.status == Status::Ok);
    CHECK(r.total_cycles == 2);
    CHECK(r.outputs.at("v") == 3);
}

TEST_CASE("data written in a cycle is readable from the next one") {
    auto d = from_text(R"(
design registered;
fifo f depth 1;
module p(out f) { f.write(1); }
module c(in f) { reg v; v = f.read(); }
top p, c;
)");
    auto r = oracle_run(d, d.depths, kBudget);
    REQUIRE(r.events[0].size() == 1);
    REQUIRE(r.events[1].size() == 1);
    CHECK(r.events[0][0].cycle == 1);
    CHECK(r.events[1][0].cycle == 2);
    CHECK(r.total_cycles == 3);
}

TEST_CASE("a non-blocking write fails when the freeing read commits in the same cycle") {
    auto d = corpus("fig5_bottom");
    auto r = oracle_run(d, d.depths, kBudget);
    REQUIRE(r.status == Status::Ok);
    // P1 at 1; the attempt at cycle 2 (P2) fails; P3 at 3. C1 at 2, C2 at 4.
    CHECK(r.events[0] == std::vector<AccessEvent>{{OpCode::Write, 0, 1}, {OpCode::Write, 0, 3}});
    CHECK(r.events[1] == std::vector<AccessEvent>{{OpCode::Read, 0, 2}, {OpCode::Read, 0, 4}});
    CHECK(r.total_cycles == 5);
}

TEST_CASE("modules waiting on each other deadlock") {
    auto d = corpus("deadlock");
    auto r = oracle_run(d, d.depths, kBudget);
    CHECK(r.status == Status::Deadlock);
    CHECK(r.total_cycles == 0);
    CHECK(r.blocked == std::vector<std::string>{"a", "b"});
}

TEST_CASE("an endless design exhausts the cycle budget") {
    auto d = from_text(R"(
design forever;
fifo f depth 1;
module p(out f) { reg i; loop { f.write(i); i = i + 1; } }
module c(in f) { reg v; loop { v = f.read(); } }
top p, c;
)");
    auto r = oracle_run(d, d.depths, 1000);
    CHECK(r.status == Status::BudgetExhausted);
    CHECK(r.total_cycles == 0);
}

TEST_CASE("reference table") {
    for (const auto& e : reference_table()) {
        CAPTURE(e.design);
        CAPTURE(e.depth);
        auto d = corpus(e.design);
        auto r = oracle_run(d, uniform(d, e.depth), kBudget);
        CHECK(r.status == e.status);
        CHECK(r.total_cycles == e.total_cycles);
        CHECK(r.outputs == e.outputs);
    }
}

TEST_CASE("occupancy stays within depth at every cycle") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        auto d = corpus(name);
        for (std::int64_t s : {1, 2, 5}) {
            OracleState st(d, uniform(d, s));
            std::int64_t last = st.clock();
            while (st.running()) {
                CHECK_NOTHROW(st.step());
                CHECK(st.clock() == last + 1);
                last = st.clock();
            }
        }
    }
}

TEST_CASE("results are identical across repeated runs") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        auto d = corpus(name);
        auto a = oracle_run(d, d.depths, kBudget);
        auto b = oracle_run(d, d.depths, kBudget);
        CHECK(a.status == b.status);
        CHECK(a.total_cycles == b.total_cycles);
        CHECK(a.outputs == b.outputs);
        CHECK(a.events == b.events);
    }
}

TEST_CASE("module order within a cycle does not matter") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        Design src = load_design(corpus_path(name));
        auto base = oracle_run(elaborate(src), elaborate(src).depths, kBudget);
        Design rev = src;
        std::reverse(rev.top.begin(), rev.top.end());
        auto d = elaborate(rev);
        auto r = oracle_run(d, d.depths, kBudget);
        CHECK(r.status == base.status);
        CHECK(r.total_cycles == base.total_cycles);
        CHECK(r.outputs == base.outputs);
        auto sorted = [](std::vector<std::string> v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        CHECK(sorted(r.blocked) == sorted(base.blocked));
    }
}

TEST_CASE("access cycles match the longest paths of the simulation graph") {
    for (const auto& name : corpus_names()) {
        auto d = corpus(name);
        for (std::int64_t s : {1, 3}) {
            CAPTURE(name);
            CAPTURE(s);
            auto depths = uniform(d, s);
            auto o = oracle_run(d, depths, kBudget);
            if (o.status != Status::Ok) continue;
            EngineOptions opt;
            opt.mode = ScheduleMode::Cooperative;
            auto r = run_simulation(d, depths, opt);
            REQUIRE(r.status == Status::Ok);
            CHECK(r.graph.total_latency() == o.total_cycles);
            for (std::size_t m = 0; m < d.modules.size(); ++m) {
                CHECK(graph_events(r.graph, static_cast<int>(m)) == o.events[m]);
            }
        }
    }
}
