#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dfsim/engine.hpp"
#include "dfsim/fifo_table.hpp"
#include "support.hpp"

using namespace dfsim;

TEST_CASE("writes get consecutive ordinals") {
    FifoTable t(2);
    CHECK(t.record_write(10, 5) == 1);
    CHECK(t.record_write(11, 6) == 2);
    CHECK(t.record_write(12, 7) == 3);
    CHECK(t.write_count() == 3);
    CHECK(t.in_flight() == 3);
}

TEST_CASE("reads return values in write order") {
    FifoTable t;
    t.record_write(1, 42);
    CHECK(t.record_read(2) == std::pair<std::int64_t, std::int64_t>{1, 42});

    FifoTable u;
    u.record_write(1, 7);
    u.record_write(2, 8);
    u.record_read(3);
    CHECK(u.record_read(4) == std::pair<std::int64_t, std::int64_t>{2, 8});
}

TEST_CASE("reading an empty table is an internal fault") {
    FifoTable t;
    CHECK_THROWS_AS(t.record_read(1), std::logic_error);
    t.record_write(1, 0);
    t.record_read(2);
    CHECK_THROWS_AS(t.record_read(3), std::logic_error);
}

TEST_CASE("nth lookups return the node or nothing") {
    FifoTable t(1);
    t.record_write(3, 1);
    t.record_write(5, 2);
    t.record_read(4);  // C1
    t.record_read(6);
    CHECK(t.nth_read(1) == NodeId{4});
    CHECK(t.nth_write(2) == NodeId{5});
    CHECK_FALSE(t.nth_read(5).has_value());
    CHECK_FALSE(t.nth_read(0).has_value());
}

TEST_CASE("random interleavings keep the table invariants") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        FifoTable t(3);
        std::deque<std::int64_t> model;
        NodeId next = 1;
        for (int k = 0; k < 200; ++k) {
            if (model.empty() || rng() % 2) {
                auto v = static_cast<std::int64_t>(rng() % 1000);
                std::int64_t ordinal = t.record_write(next++, v);
                CHECK(ordinal == t.write_count());
                model.push_back(v);
            } else {
                auto [ordinal, v] = t.record_read(next++);
                CHECK(ordinal == t.read_count());
                CHECK(v == model.front());
                model.pop_front();
            }
            CHECK(t.read_count() <= t.write_count());
            CHECK(t.in_flight() == static_cast<std::size_t>(t.write_count() - t.read_count()));
        }
        for (std::int64_t k = 1; k <= t.write_count(); ++k) CHECK(t.nth_write(k) == t.writes()[k - 1]);
    }
}

TEST_CASE("per-FIFO access order does not depend on scheduling") {
    for (const char* name : {"ex2", "ex4b", "ex5", "multicore"}) {
        CAPTURE(name);
        auto d = test::corpus(name);
        auto base = run_simulation(d, d.depths);
        AccessIndex ref = base.graph.access_index(d.depths.size());
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            EngineOptions opt;
            opt.jitter_seed = seed;
            opt.mode = seed % 2 ? ScheduleMode::Threaded : ScheduleMode::Cooperative;
            auto r = run_simulation(d, d.depths, opt);
            AccessIndex idx = r.graph.access_index(d.depths.size());
            CHECK(idx.writes == ref.writes);
            CHECK(idx.reads == ref.reads);
        }
    }
}
