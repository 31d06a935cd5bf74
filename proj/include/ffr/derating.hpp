#ifndef FFR_DERATING_HPP
#define FFR_DERATING_HPP

#include <cstdint>
#include <vector>

#include "ffr/netlist.hpp"

namespace ffr {

/// Single-cycle combinational cone of a flip-flop: the primary outputs it
/// can reach without crossing a state element, and the independent
/// sources (PIs and other DFF outputs) feeding those cones.
struct ConeAnalysis {
    std::vector<int> reachable_pos; // Output port cells
    std::vector<int> support;       // source cells, excluding the ff itself
};

ConeAnalysis analyze_cone(const Netlist& netlist, int ff);

/// True iff inverting the flip-flop's output changes at least one primary
/// output under the given full source assignment (one bit per PI and per
/// DFF, in declaration order of those cells).
bool seu_visible_now(const Netlist& netlist, int ff,
                     const std::vector<std::uint8_t>& pi_bits,
                     const std::vector<std::uint8_t>& dff_bits);

/// Exact logical derating of a flip-flop: the fraction of assignments to
/// the cone's other sources for which inverting the ff's output changes a
/// primary output of the single-cycle combinational evaluation. Full
/// enumeration; throws DataError when the support exceeds
/// `max_support_inputs`.
double logical_derating_bruteforce(const Netlist& netlist, int ff, int max_support_inputs = 20);

} // namespace ffr

#endif
