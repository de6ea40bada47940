#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dfsim/elaborate.hpp"
#include "support.hpp"

using namespace dfsim;
using dfsim::test::corpus_path;

namespace {

const char* kMinimal = R"(
design minimal;
fifo link depth 2;
output got;
module producer(out link) {
    link.write(7);
}
module consumer(in link) {
    reg v;
    v = link.read();
    output got = v;
}
top producer, consumer;
)";

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

const Stmt* find_stmt(const std::vector<Stmt>& body, StmtKind kind) {
    for (const auto& s : body) {
        if (s.kind == kind) return &s;
        if (auto* x = find_stmt(s.body, kind)) return x;
        if (auto* x = find_stmt(s.else_body, kind)) return x;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("minimal producer/consumer parses to two modules and one FIFO") {
    Design d = parse_design(kMinimal);
    CHECK(d.name == "minimal");
    CHECK(d.modules.size() == 2);
    REQUIRE(d.fifos.size() == 1);
    CHECK(d.fifos[0].depth == 2);
    CHECK(d.top == std::vector<std::string>{"producer", "consumer"});
    CHECK(validate_design(d).empty());
}

TEST_CASE("controller and processor form a cycle over two FIFOs") {
    Design d = load_design(corpus_path("ex3"));
    const ModuleDecl* c = d.find_module("controller");
    const ModuleDecl* p = d.find_module("processor");
    REQUIRE(c);
    REQUIRE(p);
    CHECK(c->writes == std::vector<std::string>{"cmd"});
    CHECK(c->reads == std::vector<std::string>{"res"});
    CHECK(p->reads == std::vector<std::string>{"cmd"});
    CHECK(p->writes == std::vector<std::string>{"res"});
}

TEST_CASE("a FIFO with two writers is rejected") {
    const char* text = R"(
design two;
fifo f depth 1;
module a(out f) { f.write(1); }
module b(out f) { f.write(2); }
module c(in f) { reg x; x = f.read(); x = f.read(); }
top a, b, c;
)";
    try {
        parse_design(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("multiple writers") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_design("design x;\nfifo f depth 1\nmodule");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span().line == 3);
        CHECK(e.span().column == 1);
    }
}

TEST_CASE("validation") {
    SUBCASE("a corpus design is clean") { CHECK(validate_design(load_design(corpus_path("ex1"))).empty()); }
    SUBCASE("depth zero is an error") {
        std::string text = kMinimal;
        text.replace(text.find("depth 2"), 7, "depth 0");
        auto diags = validate_design(parse_design(text));
        CHECK(has_code(diags, "depth-must-be-positive"));
        CHECK(has_errors(diags));
    }
    SUBCASE("a FIFO nobody reads is a warning") {
        const char* text = R"(
design dangling;
fifo f depth 1;
module a(out f) { f.write(1); }
top a;
)";
        auto diags = validate_design(parse_design(text));
        CHECK(has_code(diags, "dangling-reader"));
        CHECK_FALSE(has_errors(diags));
    }
    SUBCASE("an infinite loop without any cost is rejected") {
        const char* text = R"(
design spin;
module a() { reg x; loop { x = x + 1 @0; } }
top a;
)";
        CHECK(has_errors(validate_design(parse_design(text))));
    }
}

TEST_CASE("classification") {
    CHECK(classify_design(load_design(corpus_path("ex1"))) == DesignClass::TypeA);
    CHECK(classify_design(load_design(corpus_path("ex2"))) == DesignClass::TypeB);
    CHECK(classify_design(load_design(corpus_path("ex4b"))) == DesignClass::TypeC);
    CHECK(classify_design(load_design(corpus_path("ex3"))) == DesignClass::TypeB);
    CHECK(classify_design(load_design(corpus_path("ex5"))) == DesignClass::TypeC);
    CHECK(classify_design(load_design(corpus_path("timer"))) == DesignClass::TypeC);
}

TEST_CASE("classification ignores reordering of independent statements") {
    const char* a = R"(
design order;
fifo f depth 1;
output n;
module p(out f) { reg ok, x, y; x = 1; y = 2; ok = f.write_nb(x + y); output n = ok; }
module c(in f) { reg v; v = f.read(); }
top p, c;
)";
    const char* b = R"(
design order;
fifo f depth 1;
output n;
module p(out f) { reg ok, x, y; y = 2; x = 1; ok = f.write_nb(x + y); output n = ok; }
module c(in f) { reg v; v = f.read(); }
top p, c;
)";
    CHECK(classify_design(parse_design(a)) == DesignClass::TypeC);
    CHECK(classify_design(parse_design(b)) == classify_design(parse_design(a)));
}

TEST_CASE("pruning unused status checks") {
    SUBCASE("a dead full() becomes a skip of the same cost") {
        const char* text = R"(
design prune;
fifo f depth 1;
module p(out f) { reg t; t = f.full() @3; f.write(1); }
module c(in f) { reg v; v = f.read(); }
top p, c;
)";
        Design pruned = prune_unused_checks(parse_design(text));
        const auto& body = pruned.find_module("p")->program.statements;
        CHECK(find_stmt(body, StmtKind::FifoFull) == nullptr);
        const Stmt* skip = find_stmt(body, StmtKind::Skip);
        REQUIRE(skip);
        CHECK(skip->cost == 3);
    }
    SUBCASE("a live empty() is kept") {
        const char* text = R"(
design keep;
fifo f depth 1;
module p(out f) { f.write(1); }
module c(in f) { reg t, v; t = f.empty(); if (!t) { v = f.read(); } }
top p, c;
)";
        Design d = parse_design(text);
        CHECK(equal(prune_unused_checks(d), d));
    }
    SUBCASE("a design without checks is unchanged") {
        Design d = load_design(corpus_path("ex1"));
        CHECK(count_status_checks(d) == 0);
        CHECK(equal(prune_unused_checks(d), d));
    }
}

TEST_CASE("print and parse round-trip every corpus design") {
    for (const auto& name : dfsim::test::corpus_names()) {
        CAPTURE(name);
        Design d = load_design(corpus_path(name));
        std::string text = print_design(d);
        Design again = parse_design(text);
        CHECK(equal(again, d));
        CHECK(print_design(again) == text);
    }
}

TEST_CASE("stage offsets accumulate statement costs") {
    SUBCASE("three unit statements") {
        auto ed = dfsim::test::from_text(R"(
design s;
module m() { reg x; x = 1; x = 2; x = 3; }
top m;
)");
        CHECK(stage_offsets(ed.modules[0], 10) == std::vector<std::int64_t>{1, 2, 3});
    }
    SUBCASE("a unit loop body executed four times") {
        auto ed = dfsim::test::from_text(R"(
design s;
module m() { reg i, x; for (i : 4) { x = x + i; } }
top m;
)");
        CHECK(stage_offsets(ed.modules[0], 10) == std::vector<std::int64_t>{1, 2, 3, 4});
    }
    SUBCASE("delay then write") {
        auto ed = dfsim::test::from_text(R"(
design s;
fifo f depth 1;
module m(out f) { delay 5; f.write(1); }
module c(in f) { reg v; v = f.read(); }
top m, c;
)");
        CHECK(stage_offsets(ed.modules[0], 10) == std::vector<std::int64_t>{5, 6});
    }
}

TEST_CASE("resolve_depths applies overrides and rejects bad ones") {
    auto ed = dfsim::test::corpus("ex3");
    CHECK(resolve_depths(ed, {{"res", 7}}) == Depths{2, 7});
    CHECK_THROWS_AS(resolve_depths(ed, {{"nope", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_depths(ed, {{"cmd", 0}}), std::invalid_argument);
}

TEST_CASE("elaboration rejects invalid designs with diagnostics") {
    std::string text = kMinimal;
    text.replace(text.find("depth 2"), 7, "depth 0");
    try {
        elaborate(parse_design(text));
        FAIL("expected an elaboration error");
    } catch (const ElaborationError& e) {
        CHECK(has_code(e.diagnostics(), "depth-must-be-positive"));
    }
}

TEST_CASE("interpreter arithmetic wraps and reports division by zero") {
    auto ed = dfsim::test::from_text(R"(
design arith;
output big, q;
module m() {
    reg x, z;
    x = 9223372036854775807;
    x = x + 1;
    output big = x;
    output q = 5 / z;
}
top m;
)");
    Interpreter in(ed.modules[0]);
    const Instruction* i = in.settle();
    REQUIRE(i);
    while (i && i->op == OpCode::Assign) {
        in.complete();
        i = in.settle();
    }
    REQUIRE(i);
    CHECK(i->op == OpCode::Output);
    CHECK(in.evaluate() == INT64_MIN);
    in.complete();
    i = in.settle();
    REQUIRE(i);
    try {
        in.evaluate();
        FAIL("expected a fault");
    } catch (const SimulationError& e) {
        CHECK(std::string(e.what()).find("division by zero") != std::string::npos);
        CHECK(std::string(e.what()).find("module 'm'") != std::string::npos);
    }
}
