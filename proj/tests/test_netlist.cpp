#include <doctest.h>

#include <set>

#include "ffr/error.hpp"
#include "ffr/gen.hpp"
#include "ffr/graph.hpp"
#include "ffr/netlist.hpp"
#include "ffr/rng.hpp"
#include "ffr/textio.hpp"

using namespace ffr;

namespace {
std::string fixture(const char* name) {
    return read_file(std::string(FFR_FIXTURES_DIR) + "/" + name);
}
} // namespace

TEST_CASE("minimal BUF netlist") {
    Netlist n = parse_bench("INPUT(a)\nOUTPUT(z)\nz = BUF(a)");
    CHECK(n.cells.size() == 3);
    CHECK(n.primary_inputs.size() == 1);
    CHECK(n.primary_outputs.size() == 1);
    CHECK(n.po_signal_name(n.primary_outputs[0]) == "z");
}

TEST_CASE("DFF feedback through AND is legal") {
    Netlist n = parse_bench(fixture("dff5.bench"));
    CHECK(n.cells.size() == 5);
    CHECK(n.dff_cells().size() == 1);
}

TEST_CASE("combinational self-dependence is rejected") {
    CHECK_THROWS_AS(parse_bench("INPUT(b)\na = AND(a, b)"), ParseError);
    CHECK_THROWS_AS(parse_bench("INPUT(c)\na = AND(b, c)\nb = BUF(a)"), ParseError);
}

TEST_CASE("parser diagnoses malformed input with a location") {
    try {
        parse_bench("INPUT(a)\nz = FROB(a)\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("FROB") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nINPUT(a)"), ParseError);       // duplicate
    CHECK_THROWS_AS(parse_bench("z = BUF(missing)"), ParseError);         // unresolved
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nz = BUF(a, a)"), ParseError);  // arity
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nz = AND(a)"), ParseError);     // arity
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nz == BUF(a)"), ParseError);    // syntax
    CHECK_THROWS_AS(parse_bench("OUTPUT(nothing)"), ParseError);          // dangling PO
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nz = INPUT(a)"), ParseError);   // not assignable
}

TEST_CASE("kinds are case-insensitive, comments and blanks skipped") {
    Netlist n = parse_bench("# a comment\n\ninput(a)\n  z = buf( a ) # tail\noutput(z)\n");
    CHECK(n.cells.size() == 3);
    CHECK(n.cells[1].kind == GateKind::Buf);
}

TEST_CASE("empty netlist") {
    Netlist n = parse_bench("");
    CHECK(n.cells.empty());
    CircuitGraph g = build_graph(n);
    CHECK(g.nodes.empty());
    CHECK(g.edges.empty());
}

TEST_CASE("graph of the 5-cell fixture") {
    Netlist n = parse_bench(fixture("dff5.bench"));
    CircuitGraph g = build_graph(n);
    CHECK(g.nodes.size() == 5);
    // declaration order: a, q, d, z$po, z
    std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
    std::set<std::pair<int, int>> expected = {{2, 1}, {0, 2}, {1, 2}, {4, 3}, {1, 4}};
    CHECK(edges == expected);

    std::size_t arity_sum = 0;
    for (const auto& cell : n.cells) arity_sum += cell.fanin.size();
    CHECK(g.edges.size() == arity_sum);
}

TEST_CASE("edge count equals total fan-in arity on generated circuits") {
    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
        Netlist n = parse_bench(gen_circuit(6, 25, seed));
        CircuitGraph g = build_graph(n);
        std::size_t arity_sum = 0;
        for (const auto& cell : n.cells) arity_sum += cell.fanin.size();
        CHECK(g.edges.size() == arity_sum);
    }
}

TEST_CASE("node features of the 5-cell fixture") {
    Netlist n = parse_bench(fixture("dff5.bench"));
    CircuitGraph g = build_graph(n);
    FeatureMatrix x = node_features(g);
    REQUIRE(x.rows == 5);
    REQUIRE(x.cols == kFeatureColumns);

    // one-hot block sums to exactly 1 on every row
    for (std::size_t r = 0; r < x.rows; ++r) {
        double sum = 0;
        for (int c = 0; c < kGateKindCount; ++c) sum += x.at(r, c);
        CHECK(sum == 1.0);
    }

    // d = AND(a, q): 2 fan-ins, 1 fan-out, level 1 of max 2
    const std::size_t d = 2;
    CHECK(x.at(d, static_cast<int>(GateKind::And)) == 1.0);
    CHECK(x.at(d, kGateKindCount + 0) == 2.0);
    CHECK(x.at(d, kGateKindCount + 1) == 1.0);
    CHECK(x.at(d, kGateKindCount + 2) == 0.5);
    CHECK(x.at(d, kGateKindCount + 3) == 0.0);

    // q is the only sequential cell, level 0
    const std::size_t q = 1;
    CHECK(x.at(q, kGateKindCount + 2) == 0.0);
    CHECK(x.at(q, kGateKindCount + 3) == 1.0);
}

TEST_CASE("isolated input node features") {
    Netlist n = parse_bench("INPUT(a)");
    FeatureMatrix x = node_features(build_graph(n));
    CHECK(x.at(0, static_cast<int>(GateKind::Input)) == 1.0);
    CHECK(x.at(0, kGateKindCount + 0) == 0.0);
    CHECK(x.at(0, kGateKindCount + 2) == 0.0);
}

TEST_CASE("node_features is deterministic") {
    Netlist n = parse_bench(fixture("dff5.bench"));
    CircuitGraph g = build_graph(n);
    FeatureMatrix a = node_features(g);
    FeatureMatrix b = node_features(g);
    CHECK(a.data == b.data);
}

TEST_CASE("fuzzed inputs never crash the parser") {
    SplitMix64 rng(0xf22);
    const std::string valid = fixture("dff5.bench");
    int parsed = 0, rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        std::string input;
        if (i % 3 == 0) {
            // random bytes
            std::size_t len = rng.uniform_below(200);
            for (std::size_t b = 0; b < len; ++b)
                input.push_back(static_cast<char>(rng.uniform_below(256)));
        } else if (i % 3 == 1) {
            // mutated valid netlist
            input = valid;
            for (int m = 0; m < 4; ++m)
                input[rng.uniform_below(input.size())] = static_cast<char>(rng.uniform_below(128));
        } else {
            // token soup
            static const char* toks[] = {"INPUT", "OUTPUT", "AND", "DFF", "(", ")",
                                         "=",     ",",      "a",   "z",   "\n", " "};
            for (int t = 0; t < 30; ++t) input += toks[rng.uniform_below(std::size(toks))];
        }
        try {
            parse_bench(input);
            ++parsed;
        } catch (const ParseError&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 1000);
}
