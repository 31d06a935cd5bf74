#ifndef FFR_TESTS_NAIVE_SIM_HPP
#define FFR_TESTS_NAIVE_SIM_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ffr/netlist.hpp"
#include "ffr/sim.hpp"

// Independent reference implementation for oracle-equivalence checks:
// memoized recursive evaluation straight off the Netlist, a fresh
// simulation from cycle 0 for every injection, no shared state with the
// library's topological fast path.
namespace ffr::naive {

/// Full primary-output history; [cycle][po]. flip_ff < 0 means fault-free.
std::vector<std::vector<std::uint8_t>> simulate(const Netlist& netlist, const Stimulus& stimulus,
                                                int flip_ff = -1, int flip_cycle = 0);

struct CampaignCounts {
    std::vector<std::pair<std::string, std::uint64_t>> failure_counts; // DFF declaration order
    std::uint64_t cycles = 0;
};

/// Exhaustive campaign, one fresh simulation per (ff, cycle) pair.
CampaignCounts run_campaign_naive(const Netlist& netlist, const Stimulus& stimulus);

} // namespace ffr::naive

#endif
