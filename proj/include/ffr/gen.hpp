#ifndef FFR_GEN_HPP
#define FFR_GEN_HPP

#include <cstdint>
#include <string>

namespace ffr {

/// Deterministic random `.bench` netlist with n_ffs flip-flops and
/// n_gates combinational gates (n_gates >= n_ffs). By construction the
/// combinational subgraph is acyclic, every flip-flop loads through a
/// cone that reaches a primary input, and at least 80% of the flip-flops
/// have a structural path to a primary output: two fifths feed an XOR
/// observation chain (fully transparent), two fifths a masking AND/OR
/// chain (partially transparent), and the rest drive nothing.
std::string gen_circuit(int n_ffs, int n_gates, std::uint64_t seed);

} // namespace ffr

#endif
