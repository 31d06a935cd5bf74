#include <doctest.h>

#include "ffr/error.hpp"
#include "ffr/gen.hpp"
#include "ffr/gml.hpp"
#include "ffr/netlist.hpp"
#include "ffr/textio.hpp"

using namespace ffr;

namespace {

std::string fixture(const char* name) {
    return read_file(std::string(FFR_FIXTURES_DIR) + "/" + name);
}

bool same_graph(const CircuitGraph& a, const CircuitGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
        if (a.nodes[i].name != b.nodes[i].name || a.nodes[i].kind != b.nodes[i].kind) return false;
    return a.edges == b.edges;
}

} // namespace

TEST_CASE("empty graph GML") {
    CircuitGraph g;
    CHECK(export_gml(g) == "graph [\n  directed 1\n]\n");
}

TEST_CASE("buf3 export matches the committed golden file") {
    CircuitGraph g = build_graph(parse_bench(fixture("buf3.bench")));
    CHECK(export_gml(g) == fixture("buf3.gml"));
}

TEST_CASE("round-trip identity on fixtures and generated circuits") {
    const char* fixtures[] = {"buf3.bench", "dff5.bench", "dffbuf.bench",
                              "and_mask.bench", "xor_obs.bench", "dead_ff.bench"};
    for (const char* f : fixtures) {
        CircuitGraph g = build_graph(parse_bench(fixture(f)));
        CHECK(same_graph(import_gml(export_gml(g)), g));
    }
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        CircuitGraph g = build_graph(parse_bench(gen_circuit(5, 20, seed)));
        CHECK(same_graph(import_gml(export_gml(g)), g));
    }
}

TEST_CASE("import is whitespace tolerant") {
    CircuitGraph g = import_gml(
        "graph [ directed 1 node [ id 0 label \"a\" kind \"INPUT\" ] "
        "node [ id 1 label \"z\" kind \"BUF\" ] edge [ source 0 target 1 ] ]");
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.nodes[1].kind == GateKind::Buf);
}

TEST_CASE("import rejects malformed documents") {
    CHECK_THROWS_AS(import_gml("graph ["), ParseError);
    CHECK_THROWS_AS(import_gml("graph [ node [ id 0 label \"a\" ] ]"), ParseError); // missing kind
    CHECK_THROWS_AS(import_gml("graph [ node [ label \"a\" kind \"AND\" ] ]"), ParseError);
    CHECK_THROWS_AS(
        import_gml("graph [ node [ id 0 label \"a\" kind \"INPUT\" ] edge [ source 0 target 7 ] ]"),
        ParseError); // dangling endpoint
    CHECK_THROWS_AS(import_gml("graph [ edge [ source 0 ] ]"), ParseError); // missing target
    CHECK_THROWS_AS(import_gml("graph [ directed 1 ] trailing"), ParseError);
    CHECK_THROWS_AS(import_gml("graph [ node [ id 0 label \"a\" kind \"WAT\" ] ]"), ParseError);
}
