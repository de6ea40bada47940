#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dfsim/engine.hpp"
#include "support.hpp"

using namespace dfsim;
using namespace dfsim::test;

namespace {

constexpr std::int64_t kBudget = 100'000'000;

EngineOptions with_mode(ScheduleMode m, std::optional<std::uint64_t> seed = std::nullopt) {
    EngineOptions o;
    o.mode = m;
    o.jitter_seed = seed;
    return o;
}

const EventNode* nth_node(const SimulationGraph& g, NodeKind kind, int module, int n) {
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& x = g.node(static_cast<NodeId>(v));
        if (x.kind == kind && x.module == module && --n == 0) return &x;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("Fig. 5 bottom: P2 fails, P3 succeeds, C2 lands on cycle 4") {
    auto d = corpus("fig5_bottom");
    for (auto mode : {ScheduleMode::Threaded, ScheduleMode::Cooperative}) {
        auto r = run_simulation(d, d.depths, with_mode(mode));
        REQUIRE(r.status == Status::Ok);
        REQUIRE(r.constraints.size() == 2);
        CHECK(r.constraints[0].kind == QueryKind::NbWrite);
        CHECK(r.constraints[0].ordinal == 2);
        CHECK_FALSE(r.constraints[0].outcome);
        CHECK(r.constraints[1].ordinal == 2);
        CHECK(r.constraints[1].outcome);
        const EventNode* p3 = nth_node(r.graph, NodeKind::FifoWrite, 0, 2);
        const EventNode* c1 = nth_node(r.graph, NodeKind::FifoRead, 1, 1);
        const EventNode* c2 = nth_node(r.graph, NodeKind::FifoRead, 1, 2);
        REQUIRE(p3);
        REQUIRE(c1);
        REQUIRE(c2);
        CHECK(c1->cycle == 2);
        CHECK(p3->cycle == 3);
        CHECK(c2->cycle == 4);
        CHECK(r.total_cycles == 5);
        CHECK(r.outputs == std::map<std::string, std::int64_t>{{"first", 1}, {"second", 2}});
    }
}

TEST_CASE("Fig. 5 top: total of five cycles") {
    auto d = corpus("fig5_top");
    auto r = run_simulation(d, d.depths);
    CHECK(r.status == Status::Ok);
    CHECK(r.total_cycles == 5);
    CHECK(r.constraints.empty());
}

TEST_CASE("ex1 at depth 2 matches the reference") {
    auto d = corpus("ex1");
    auto r = run_simulation(d, uniform(d, 2));
    CHECK(r.status == Status::Ok);
    CHECK(r.total_cycles == 261);
    CHECK(r.outputs.at("sum") == 780256);
}

TEST_CASE("mutual blocking reads deadlock with both modules blocked") {
    auto d = corpus("deadlock");
    for (auto mode : {ScheduleMode::Threaded, ScheduleMode::Cooperative}) {
        auto r = run_simulation(d, d.depths, with_mode(mode));
        CHECK(r.status == Status::Deadlock);
        CHECK(r.blocked == std::vector<std::string>{"a", "b"});
        CHECK(r.total_cycles == 0);
    }
}

TEST_CASE("a first non-blocking write into an empty FIFO succeeds without waiting") {
    auto d = from_text(R"(
design nb;
fifo f depth 1;
output ok;
module p(out f) { reg s; s = f.write_nb(9); output ok = s; }
module c(in f) { reg v; delay 10; v = f.read(); }
top p, c;
)");
    auto r = run_simulation(d, d.depths);
    REQUIRE(r.status == Status::Ok);
    REQUIRE(r.constraints.size() == 1);
    CHECK(r.constraints[0].ordinal == 1);
    CHECK(r.constraints[0].outcome);
    CHECK(r.outputs.at("ok") == 1);
}

TEST_CASE("when every query waits on the unknown, the earliest resolves false") {
    auto d = from_text(R"(
design standoff;
fifo x depth 1;
fifo y depth 1;
output fa, fb;
module a(in x, out y) { reg ok, v; ok = x.read_nb(v); y.write(1); output fa = ok; }
module b(in y, out x) { reg ok, v; ok = y.read_nb(v); x.write(1); output fb = ok; }
top a, b;
)");
    auto o = oracle_run(d, d.depths, kBudget);
    for (auto mode : {ScheduleMode::Threaded, ScheduleMode::Cooperative}) {
        auto r = run_simulation(d, d.depths, with_mode(mode));
        REQUIRE(r.status == Status::Ok);
        CHECK(r.outputs == o.outputs);
        CHECK(r.total_cycles == o.total_cycles);
        REQUIRE(r.constraints.size() == 2);
        CHECK_FALSE(r.constraints[0].outcome);
        CHECK_FALSE(r.constraints[1].outcome);
    }
}

TEST_CASE("query conditions compare strictly") {
    // Writer: W1 at 1 and W2 at 4. Reader: R1 at 2.
    SimulationGraph g;
    NodeId w1 = g.add_node(NodeKind::FifoWrite, 0, g.start(), 1, 0, 1);
    g.add_node(NodeKind::FifoWrite, 0, w1, 3, 0, 2);
    NodeId r1 = g.add_node(NodeKind::FifoRead, 1, g.start(), 1, 0, 1);
    g.add_edge(w1, r1, EdgeKind::Data);
    AccessIndex idx = g.access_index(1);
    Depths s1{1};

    Constraint c;
    c.kind = QueryKind::NbWrite;
    c.fifo = 0;
    c.ordinal = 2;
    c.anchor = w1;
    c.offset = 1;  // source cycle 2, same as R1
    CHECK_FALSE(evaluate_constraint(c, g, idx, s1));
    c.offset = 2;  // source cycle 3
    CHECK(evaluate_constraint(c, g, idx, s1));
    c.ordinal = 1;  // w <= S
    c.offset = 0;
    CHECK(evaluate_constraint(c, g, idx, s1));

    Constraint r;
    r.kind = QueryKind::NbRead;
    r.fifo = 0;
    r.ordinal = 3;  // never written
    r.anchor = g.start();
    r.offset = 100;
    CHECK_FALSE(evaluate_constraint(r, g, idx, s1));
    r.ordinal = 2;
    CHECK(evaluate_constraint(r, g, idx, s1));
    r.offset = 4;
    CHECK_FALSE(evaluate_constraint(r, g, idx, s1));
}

TEST_CASE("engine equals the reference on every design and depth") {
    for (const auto& e : reference_table()) {
        auto d = corpus(e.design);
        for (auto mode : {ScheduleMode::Threaded, ScheduleMode::Cooperative}) {
            CAPTURE(e.design);
            CAPTURE(e.depth);
            CAPTURE(static_cast<int>(mode));
            auto r = run_simulation(d, uniform(d, e.depth), with_mode(mode));
            CHECK(r.status == e.status);
            CHECK(r.total_cycles == e.total_cycles);
            CHECK(r.outputs == e.outputs);
        }
    }
}

TEST_CASE("engine equals the oracle under mixed depths") {
    for (const auto& name : corpus_names()) {
        auto d = corpus(name);
        for (std::size_t f = 0; f < d.depths.size(); ++f) {
            Depths depths = uniform(d, 2);
            depths[f] = 5;
            CAPTURE(name);
            CAPTURE(f);
            auto o = oracle_run(d, depths, kBudget);
            auto r = run_simulation(d, depths);
            CHECK(r.status == o.status);
            CHECK(r.total_cycles == o.total_cycles);
            CHECK(r.outputs == o.outputs);
            CHECK(r.blocked == o.blocked);
        }
    }
}

TEST_CASE("results do not depend on scheduling") {
    for (const char* name : {"ex2", "ex4a", "ex4b_d", "timer", "branch", "multicore"}) {
        CAPTURE(name);
        auto d = corpus(name);
        auto base = run_simulation(d, d.depths, with_mode(ScheduleMode::Cooperative));
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto mode = seed % 2 ? ScheduleMode::Threaded : ScheduleMode::Cooperative;
            auto r = run_simulation(d, d.depths, with_mode(mode, seed));
            CHECK(r.status == base.status);
            CHECK(r.total_cycles == base.total_cycles);
            CHECK(r.outputs == base.outputs);
            CHECK(r.constraints == base.constraints);
            CHECK(r.graph == base.graph);
        }
    }
}

TEST_CASE("an ok result satisfies every recorded constraint") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        auto d = corpus(name);
        auto r = run_simulation(d, uniform(d, 1));
        if (r.status != Status::Ok) continue;
        CHECK(r.violated.empty());
        AccessIndex idx = r.graph.access_index(d.depths.size());
        for (const auto& c : r.constraints) CHECK(evaluate_constraint(c, r.graph, idx, r.depths) == c.outcome);
    }
}

TEST_CASE("pruning unused checks changes neither outputs nor cycles") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        auto pruned = corpus(name, true);
        auto full = corpus(name, false);
        for (std::int64_t s : {1, 3}) {
            auto a = run_simulation(pruned, uniform(pruned, s));
            auto b = run_simulation(full, uniform(full, s));
            CHECK(a.status == b.status);
            CHECK(a.total_cycles == b.total_cycles);
            CHECK(a.outputs == b.outputs);
        }
    }
}

TEST_CASE("an endless design runs out of budget instead of deadlocking") {
    auto d = from_text(R"(
design forever;
fifo f depth 1;
module p(out f) { reg i; loop { f.write(i); i = i + 1; } }
module c(in f) { reg v; loop { v = f.read(); } }
top p, c;
)");
    for (auto mode : {ScheduleMode::Threaded, ScheduleMode::Cooperative}) {
        EngineOptions opt = with_mode(mode);
        opt.max_events = 5000;
        auto r = run_simulation(d, d.depths, opt);
        CHECK(r.status == Status::BudgetExhausted);
        CHECK(r.total_cycles == 0);
    }
}

TEST_CASE("a spinning module with no FIFO traffic hits the cycle bound") {
    auto d = from_text("design spin; module m() { reg x; while (x >= 0) { x = x + 1; } } top m;");
    EngineOptions opt;
    opt.max_cycles = 10000;
    auto r = run_simulation(d, d.depths, opt);
    CHECK(r.status == Status::BudgetExhausted);
}

TEST_CASE("arithmetic faults abort with the module and location") {
    auto d = from_text(R"(
design fault;
output q;
module m() { reg z; output q = 1 / z; }
top m;
)");
    for (auto mode : {ScheduleMode::Threaded, ScheduleMode::Cooperative}) {
        try {
            run_simulation(d, d.depths, with_mode(mode));
            FAIL("expected a fault");
        } catch (const SimulationError& e) {
            std::string msg = e.what();
            CHECK(msg.find("module 'm'") != std::string::npos);
            CHECK(msg.find("division by zero") != std::string::npos);
        }
    }
}

TEST_CASE("depth vectors are checked") {
    auto d = corpus("ex3");
    CHECK_THROWS_AS(run_simulation(d, Depths{1}), std::invalid_argument);
    CHECK_THROWS_AS(run_simulation(d, Depths{1, 0}), std::invalid_argument);
}

TEST_CASE("tracing logs requests without changing results") {
    auto d = corpus("fig5_bottom");
    EngineOptions opt;
    opt.trace = true;
    auto traced = run_simulation(d, d.depths, opt);
    auto plain = run_simulation(d, d.depths);
    CHECK_FALSE(traced.trace.empty());
    CHECK(plain.trace.empty());
    CHECK(traced.graph == plain.graph);
}

TEST_CASE("agents count the statements they execute") {
    auto d = corpus("ex1");
    auto before = agent_statement_count();
    run_simulation(d, d.depths);
    CHECK(agent_statement_count() > before);
}
