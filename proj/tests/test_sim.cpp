#include <doctest.h>

#include "ffr/error.hpp"
#include "ffr/gen.hpp"
#include "ffr/netlist.hpp"
#include "ffr/rng.hpp"
#include "ffr/sim.hpp"
#include "ffr/textio.hpp"
#include "support/naive_sim.hpp"

using namespace ffr;

namespace {

std::string fixture(const char* name) {
    return read_file(std::string(FFR_FIXTURES_DIR) + "/" + name);
}

Stimulus bits(std::vector<std::string> inputs, std::vector<std::string> rows) {
    Stimulus s;
    s.input_names = std::move(inputs);
    for (const auto& row : rows) {
        std::vector<std::uint8_t> v;
        for (char c : row) v.push_back(c == '1');
        s.vectors.push_back(std::move(v));
    }
    return s;
}

std::vector<std::uint8_t> po_column(const GoldenTrace& t, std::size_t po = 0) {
    std::vector<std::uint8_t> out;
    for (std::size_t c = 0; c < t.cycles(); ++c) out.push_back(t.at(c, po));
    return out;
}

} // namespace

TEST_CASE("BUF passes the input through, same cycle") {
    Netlist n = parse_bench(fixture("buf3.bench"));
    GoldenTrace t = simulate_golden(n, bits({"a"}, {"0", "1", "1"}));
    CHECK(po_column(t) == std::vector<std::uint8_t>{0, 1, 1});
}

TEST_CASE("DFF delays by one cycle") {
    Netlist n = parse_bench(fixture("dffbuf.bench"));
    GoldenTrace t = simulate_golden(n, bits({"a"}, {"1", "0"}));
    CHECK(po_column(t) == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("AND-feedback fixture holds zero") {
    Netlist n = parse_bench(fixture("dff5.bench"));
    GoldenTrace t = simulate_golden(n, bits({"a"}, {"1", "1", "1", "1"}));
    CHECK(po_column(t) == std::vector<std::uint8_t>{0, 0, 0, 0});
}

TEST_CASE("initial state is honored") {
    Netlist n = parse_bench(fixture("dffbuf.bench"));
    Stimulus s = bits({"a"}, {"0", "0"});
    s.initial_state["q"] = 1;
    GoldenTrace t = simulate_golden(n, s);
    CHECK(po_column(t) == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("stimulus validation") {
    Netlist n = parse_bench(fixture("and_mask.bench"));
    CHECK_THROWS_AS(simulate_golden(n, bits({"a"}, {"0"})), DataError);         // missing b
    CHECK_THROWS_AS(simulate_golden(n, bits({"a", "b", "c"}, {"000"})), DataError); // unknown c
    Stimulus s = bits({"a", "b"}, {"00"});
    s.initial_state["nope"] = 1;
    CHECK_THROWS_AS(simulate_golden(n, s), DataError);
    Stimulus s2 = bits({"a", "b"}, {"00"});
    s2.observe = std::vector<std::string>{"nope"};
    CHECK_THROWS_AS(simulate_golden(n, s2), DataError);
    CHECK_THROWS_AS(simulate_golden(n, bits({"a", "b"}, {})), DataError); // zero cycles
}

TEST_CASE("SEU on an unobservable flip-flop leaves the trace unchanged") {
    Netlist n = parse_bench(fixture("dead_ff.bench"));
    Stimulus s = bits({"a"}, {"1", "0", "1", "1"});
    GoldenTrace golden = simulate_golden(n, s);
    GoldenTrace faulty = simulate_with_seu(n, s, {n.cell_index("q"), 1});
    CHECK(golden.bits == faulty.bits);
    CHECK(classify_outcome(golden, faulty) == Outcome::Masked);
}

TEST_CASE("SEU through a buffer differs exactly at the injection cycle") {
    Netlist n = parse_bench(fixture("dffbuf.bench"));
    Stimulus s = bits({"a"}, {"0", "0", "0", "0"});
    GoldenTrace golden = simulate_golden(n, s);
    for (int c = 0; c < 4; ++c) {
        GoldenTrace faulty = simulate_with_seu(n, s, {n.cell_index("q"), c});
        for (int t = 0; t < 4; ++t) CHECK(faulty.at(t, 0) == (t == c ? 1 : 0));
        CHECK(classify_outcome(golden, faulty) == Outcome::Failure);
    }
}

TEST_CASE("injection at the last cycle touches only the final vector") {
    Netlist n = parse_bench(fixture("dffbuf.bench"));
    Stimulus s = bits({"a"}, {"1", "1", "0"});
    GoldenTrace golden = simulate_golden(n, s);
    GoldenTrace faulty = simulate_with_seu(n, s, {n.cell_index("q"), 2});
    CHECK(golden.at(0, 0) == faulty.at(0, 0));
    CHECK(golden.at(1, 0) == faulty.at(1, 0));
    CHECK(golden.at(2, 0) != faulty.at(2, 0));
}

TEST_CASE("injection spec validation") {
    Netlist n = parse_bench(fixture("dffbuf.bench"));
    Stimulus s = bits({"a"}, {"1"});
    CHECK_THROWS_AS(simulate_with_seu(n, s, {n.cell_index("a"), 0}), DataError); // not a DFF
    CHECK_THROWS_AS(simulate_with_seu(n, s, {n.cell_index("q"), 5}), DataError); // cycle range
}

TEST_CASE("classify_outcome") {
    GoldenTrace a{1, {0, 1, 0}};
    GoldenTrace b{1, {0, 1, 0}};
    CHECK(classify_outcome(a, b) == Outcome::Masked);
    GoldenTrace c{1, {0, 1, 1}};
    CHECK(classify_outcome(a, c) == Outcome::Failure);
    GoldenTrace d{1, {1, 0, 1}};
    CHECK(classify_outcome(a, d) == Outcome::Failure);
    GoldenTrace e{1, {0, 1}};
    CHECK_THROWS_AS(classify_outcome(a, e), DataError);
    GoldenTrace f{3, {0, 1, 0}};
    CHECK_THROWS_AS(classify_outcome(a, f), DataError);
}

TEST_CASE("determinism and injection locality on generated circuits") {
    for (std::uint64_t seed : {11ULL, 12ULL}) {
        Netlist n = parse_bench(gen_circuit(6, 24, seed));
        Stimulus s = random_stimulus(n, 16, seed + 1);
        GoldenTrace golden = simulate_golden(n, s);
        CHECK(golden.bits == simulate_golden(n, s).bits);

        SplitMix64 rng(seed);
        auto dffs = n.dff_cells();
        for (int trial = 0; trial < 8; ++trial) {
            InjectionSpec inj{dffs[rng.uniform_below(dffs.size())],
                              static_cast<int>(rng.uniform_below(16))};
            GoldenTrace faulty = simulate_with_seu(n, s, inj);
            CHECK(faulty.bits == simulate_with_seu(n, s, inj).bits);
            for (int t = 0; t < inj.cycle; ++t)
                for (std::size_t p = 0; p < golden.width; ++p)
                    CHECK(golden.at(t, p) == faulty.at(t, p));
        }
    }
}

TEST_CASE("library simulator agrees with the naive reference") {
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
        Netlist n = parse_bench(gen_circuit(5, 18, seed));
        Stimulus s = random_stimulus(n, 12, seed * 3);
        GoldenTrace fast = simulate_golden(n, s);
        auto slow = naive::simulate(n, s);
        REQUIRE(slow.size() == fast.cycles());
        for (std::size_t t = 0; t < slow.size(); ++t)
            for (std::size_t p = 0; p < fast.width; ++p) CHECK(slow[t][p] == fast.at(t, p));
    }
}

TEST_CASE("stimulus JSON round-trip") {
    Stimulus s = bits({"a", "b"}, {"01", "10", "11"});
    s.initial_state["q"] = 1;
    s.observe = std::vector<std::string>{"z"};
    Stimulus back = stimulus_from_json(stimulus_to_json(s));
    CHECK(back.input_names == s.input_names);
    CHECK(back.vectors == s.vectors);
    CHECK(back.initial_state == s.initial_state);
    CHECK(back.observe == s.observe);

    CHECK_THROWS_AS(stimulus_from_json("{"), ParseError);
    CHECK_THROWS_AS(stimulus_from_json("{\"inputs\":[\"a\"],\"vectors\":[\"01\"]}"), DataError);
    CHECK_THROWS_AS(stimulus_from_json("{\"inputs\":[\"a\"],\"vectors\":[]}"), DataError);
}
