#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dfsim/incremental.hpp"
#include "support.hpp"

using namespace dfsim;
using namespace dfsim::test;

namespace {

std::size_t capacity_edges(const SimulationGraph& g) {
    std::size_t n = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        g.for_each_in_edge(static_cast<NodeId>(v), [&](const Edge& e) { n += e.kind == EdgeKind::Capacity; });
    }
    return n;
}

std::vector<Depths> depth_grid(const ElaboratedDesign& d) {
    std::vector<Depths> grid;
    for (std::int64_t s : {1, 2, 4, 100}) grid.push_back(uniform(d, s));
    for (std::size_t f = 0; f < d.depths.size(); ++f) {
        Depths x = uniform(d, 2);
        x[f] = 1;
        grid.push_back(x);
        x[f] = 50;
        grid.push_back(x);
    }
    return grid;
}

}  // namespace

TEST_CASE("Ex. 5: deepening the second queue reuses, deepening the first does not") {
    auto d = corpus("ex5");
    auto prior = run_simulation(d, d.depths);
    REQUIRE(prior.status == Status::Ok);
    REQUIRE(d.depths == Depths{2, 2});

    auto ok = incremental_run(prior, {2, 100});
    REQUIRE(std::holds_alternative<EngineResult>(ok));
    const auto& r = std::get<EngineResult>(ok);
    auto full = run_simulation(d, {2, 100});
    CHECK(r.outputs == full.outputs);
    CHECK(r.total_cycles == full.total_cycles);
    CHECK(r.depths == Depths{2, 100});

    auto bad = incremental_run(prior, {100, 2});
    REQUIRE(std::holds_alternative<NeedsFullResimulation>(bad));
    CHECK_FALSE(std::get<NeedsFullResimulation>(bad).violated.empty());
    auto rerun = run_simulation(d, {100, 2});
    auto o = oracle_run(d, {100, 2}, 100'000'000);
    CHECK(rerun.outputs == o.outputs);
    CHECK(rerun.total_cycles == o.total_cycles);
    CHECK(rerun.outputs != prior.outputs);
}

TEST_CASE("a design without queries is always reusable") {
    auto d = corpus("ex3");
    auto prior = run_simulation(d, uniform(d, 1));
    REQUIRE(prior.constraints.empty());
    for (const auto& depths : depth_grid(d)) {
        CAPTURE(depths[0]);
        CHECK(validate_constraints(prior.constraints, prior.graph, depths).empty());
        auto inc = incremental_run(prior, depths);
        REQUIRE(std::holds_alternative<EngineResult>(inc));
        auto o = oracle_run(d, depths, 100'000'000);
        CHECK(std::get<EngineResult>(inc).total_cycles == o.total_cycles);
    }
}

TEST_CASE("re_finalize on the Fig. 5 top graph") {
    auto d = corpus("fig5_top");
    auto prior = run_simulation(d, d.depths);
    REQUIRE(capacity_edges(prior.graph) == 1);

    auto same = re_finalize(prior.graph, {1});
    REQUIRE(same);
    CHECK(same->graph == prior.graph);
    CHECK(same->total_cycles == prior.total_cycles);

    auto wide = re_finalize(prior.graph, {1'000'000});
    REQUIRE(wide);
    CHECK(capacity_edges(wide->graph) == 0);
    CHECK(wide->total_cycles == oracle_run(d, {1'000'000}, 1000).total_cycles);
    CHECK(wide->total_cycles == 5);

    auto two = re_finalize(prior.graph, {2});
    REQUIRE(two);
    CHECK(capacity_edges(two->graph) == 0);
}

TEST_CASE("identical depths give an identical result") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        auto d = corpus(name);
        auto prior = run_simulation(d, d.depths);
        if (prior.status != Status::Ok) continue;
        auto inc = incremental_run(prior, prior.depths);
        REQUIRE(std::holds_alternative<EngineResult>(inc));
        const auto& r = std::get<EngineResult>(inc);
        CHECK(r.status == prior.status);
        CHECK(r.total_cycles == prior.total_cycles);
        CHECK(r.outputs == prior.outputs);
        CHECK(r.constraints == prior.constraints);
        CHECK(r.graph == prior.graph);
    }
}

TEST_CASE("incremental results are sound across the depth grid") {
    std::size_t reused = 0;
    std::size_t rejected = 0;
    for (const auto& name : corpus_names()) {
        auto d = corpus(name);
        auto grid = depth_grid(d);
        std::vector<OracleResult> truth;
        std::vector<EngineResult> runs;
        for (const auto& depths : grid) {
            truth.push_back(oracle_run(d, depths, 100'000'000));
            runs.push_back(run_simulation(d, depths));
            CHECK(runs.back().total_cycles == truth.back().total_cycles);
            CHECK(runs.back().outputs == truth.back().outputs);
        }
        for (const auto& prior : runs) {
            if (prior.status != Status::Ok) continue;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                CAPTURE(name);
                CAPTURE(k);
                auto inc = incremental_run(prior, grid[k]);
                if (auto* r = std::get_if<EngineResult>(&inc)) {
                    ++reused;
                    CHECK(truth[k].status == Status::Ok);
                    CHECK(r->total_cycles == truth[k].total_cycles);
                    CHECK(r->outputs == truth[k].outputs);
                } else {
                    ++rejected;
                }
            }
        }
    }
    CHECK(reused > 0);
    CHECK(rejected > 0);
}

TEST_CASE("the reuse path runs no agent statements") {
    auto d = corpus("ex5");
    auto prior = run_simulation(d, d.depths);
    auto before = agent_statement_count();
    auto inc = incremental_run(prior, {2, 100});
    CHECK(std::holds_alternative<EngineResult>(inc));
    CHECK(agent_statement_count() == before);
}

TEST_CASE("a flipped outcome is always reported") {
    auto d = corpus("ex4b");
    auto prior = run_simulation(d, d.depths);
    REQUIRE(prior.constraints.size() > 3);
    for (std::size_t i : {std::size_t{0}, prior.constraints.size() / 2, prior.constraints.size() - 1}) {
        auto ledger = prior.constraints;
        ledger[i].outcome = !ledger[i].outcome;
        CHECK(validate_constraints(ledger, prior.graph, prior.depths) == std::vector<std::size_t>{i});
    }
}

TEST_CASE("unusable priors and depth vectors ask for a full run") {
    auto dl = corpus("deadlock");
    auto stuck = run_simulation(dl, dl.depths);
    CHECK(std::holds_alternative<NeedsFullResimulation>(incremental_run(stuck, dl.depths)));

    auto d = corpus("ex3");
    auto prior = run_simulation(d, d.depths);
    CHECK(std::holds_alternative<NeedsFullResimulation>(incremental_run(prior, {1})));
    CHECK(std::holds_alternative<NeedsFullResimulation>(incremental_run(prior, {1, 0})));
}
