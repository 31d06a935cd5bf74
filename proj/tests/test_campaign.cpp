#include <doctest.h>

#include "ffr/campaign.hpp"
#include "ffr/derating.hpp"
#include "ffr/error.hpp"
#include "ffr/gen.hpp"
#include "ffr/netlist.hpp"
#include "ffr/textio.hpp"
#include "support/naive_sim.hpp"

using namespace ffr;

namespace {

std::string fixture(const char* name) {
    return read_file(std::string(FFR_FIXTURES_DIR) + "/" + name);
}

void check_against_naive(const Netlist& n, const Stimulus& s) {
    CampaignResult fast = run_campaign(n, s);
    naive::CampaignCounts slow = naive::run_campaign_naive(n, s);
    REQUIRE(fast.per_ff.size() == slow.failure_counts.size());
    for (std::size_t i = 0; i < fast.per_ff.size(); ++i) {
        CHECK(fast.per_ff[i].name == slow.failure_counts[i].first);
        CHECK(fast.per_ff[i].failure_count == slow.failure_counts[i].second);
    }
}

} // namespace

TEST_CASE("fully observed flip-flop has ffr exactly 1") {
    Netlist n = parse_bench(fixture("dffbuf.bench"));
    CampaignResult r = run_campaign(n, random_stimulus(n, 32, 5));
    REQUIRE(r.per_ff.size() == 1);
    CHECK(r.per_ff[0].failure_count == 32);
    CHECK(r.per_ff[0].ffr == 1.0);
    CHECK(r.aggregate_ffr == 1.0);
}

TEST_CASE("unobservable flip-flop has ffr exactly 0") {
    Netlist n = parse_bench(fixture("dead_ff.bench"));
    CampaignResult r = run_campaign(n, random_stimulus(n, 32, 5));
    REQUIRE(r.per_ff.size() == 1);
    CHECK(r.per_ff[0].failure_count == 0);
    CHECK(r.per_ff[0].ffr == 0.0);
}

TEST_CASE("campaign matches the naive oracle on the AND-feedback fixture") {
    Netlist n = parse_bench(fixture("dff5.bench"));
    Stimulus s;
    s.input_names = {"a"};
    for (int i = 0; i < 4; ++i) s.vectors.push_back({1});
    check_against_naive(n, s);
}

TEST_CASE("campaign matches the naive oracle on generated circuits") {
    for (std::uint64_t seed : {31ULL, 32ULL, 33ULL}) {
        Netlist n = parse_bench(gen_circuit(6, 24, seed));
        check_against_naive(n, random_stimulus(n, 24, seed + 100));
    }
}

TEST_CASE("result does not depend on worker count") {
    Netlist n = parse_bench(gen_circuit(8, 30, 77));
    Stimulus s = random_stimulus(n, 32, 78);
    CampaignOptions serial{1}, parallel{4};
    CampaignResult a = run_campaign(n, s, {}, 1.0, serial);
    CampaignResult b = run_campaign(n, s, {}, 1.0, parallel);
    REQUIRE(a.per_ff.size() == b.per_ff.size());
    for (std::size_t i = 0; i < a.per_ff.size(); ++i) {
        CHECK(a.per_ff[i].failure_count == b.per_ff[i].failure_count);
        CHECK(a.per_ff[i].ffr == b.per_ff[i].ffr);
    }
}

TEST_CASE("FIT scaling is linear and leaves counts unchanged") {
    Netlist n = parse_bench(fixture("and_mask.bench"));
    Stimulus s = random_stimulus(n, 40, 9);
    CampaignResult base = run_campaign(n, s);
    CampaignResult scaled = run_campaign(n, s, {{"q", 2.5}});
    CHECK(scaled.per_ff[0].failure_count == base.per_ff[0].failure_count);
    CHECK(scaled.per_ff[0].ffr == doctest::Approx(2.5 * base.per_ff[0].ffr).epsilon(1e-15));
    CHECK_THROWS_AS(run_campaign(n, s, {{"ghost", 1.0}}), DataError);
}

TEST_CASE("campaign requires a flip-flop") {
    Netlist n = parse_bench(fixture("buf3.bench"));
    CHECK_THROWS_AS(run_campaign(n, random_stimulus(n, 4, 1)), DataError);
}

TEST_CASE("observe mask restricts failure classification") {
    // z1 sees the flip-flop, z2 only the input
    Netlist n = parse_bench(
        "INPUT(a)\nq = DFF(a)\nz1 = BUF(q)\nz2 = BUF(a)\nOUTPUT(z1)\nOUTPUT(z2)\n");
    Stimulus s = random_stimulus(n, 16, 3);
    CampaignResult all = run_campaign(n, s);
    CHECK(all.per_ff[0].ffr == 1.0);
    s.observe = std::vector<std::string>{"z2"};
    CampaignResult masked = run_campaign(n, s);
    CHECK(masked.per_ff[0].ffr == 0.0);
}

TEST_CASE("aggregate is the sum of per-ff ffr") {
    CampaignResult r;
    CHECK(aggregate_ffr(r) == 0.0);
    r.per_ff.push_back({0, "x", 1, 4, 1.0, 0.25});
    r.per_ff.push_back({1, "y", 3, 4, 1.0, 0.75});
    CHECK(aggregate_ffr(r) == 1.0);
}

TEST_CASE("campaign CSV round-trip with TOTAL row") {
    Netlist n = parse_bench(gen_circuit(5, 20, 41));
    CampaignResult r = run_campaign(n, random_stimulus(n, 16, 42), {}, 1.0);
    std::string csv = campaign_to_csv(r);
    CHECK(csv == campaign_to_csv(r)); // byte-stable
    CampaignResult back = campaign_from_csv(csv);
    REQUIRE(back.per_ff.size() == r.per_ff.size());
    for (std::size_t i = 0; i < r.per_ff.size(); ++i) {
        CHECK(back.per_ff[i].name == r.per_ff[i].name);
        CHECK(back.per_ff[i].failure_count == r.per_ff[i].failure_count);
        CHECK(back.per_ff[i].ffr == r.per_ff[i].ffr);
    }
    CHECK(back.aggregate_ffr == r.aggregate_ffr);
    CHECK(back.cycles == r.cycles);
    CHECK_THROWS_AS(campaign_from_csv("ff_name,failure_count,cycles,fit,ffr\n"), ParseError);
    CHECK_THROWS_AS(campaign_from_csv("bogus\n"), ParseError);
}
