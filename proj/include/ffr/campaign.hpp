#ifndef FFR_CAMPAIGN_HPP
#define FFR_CAMPAIGN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ffr/sim.hpp"

namespace ffr {

struct FfResult {
    int ff = -1;               // cell/node id
    std::string name;
    std::uint64_t failure_count = 0;
    std::uint64_t injections = 0; // == cycles
    double fit = 1.0;
    double ffr = 0.0;          // fit * failure_count / injections
};

struct CampaignResult {
    std::vector<FfResult> per_ff; // DFF declaration order
    std::uint64_t cycles = 0;
    double aggregate_ffr = 0.0;   // sum of per-ff ffr
};

struct CampaignOptions {
    int jobs = 0; // 0 = runtime default thread count
};

/// Exhaustive SEU campaign: one injection per (flip-flop, cycle) pair,
/// classified against the golden run (restricted to `observe` outputs
/// when the stimulus carries a mask). Parallel map over injections with
/// a slot-indexed reduction, so the result is independent of scheduling.
/// Each non-failing injection is simulated to end-of-stimulus.
CampaignResult run_campaign(const Netlist& netlist, const Stimulus& stimulus,
                            const std::map<std::string, double>& fit_overrides = {},
                            double default_fit = 1.0, const CampaignOptions& options = {});

double aggregate_ffr(const CampaignResult& result);

/// CSV `ff_name,failure_count,cycles,fit,ffr` plus a TOTAL row.
std::string campaign_to_csv(const CampaignResult& result);
CampaignResult campaign_from_csv(const std::string& text);

} // namespace ffr

#endif
