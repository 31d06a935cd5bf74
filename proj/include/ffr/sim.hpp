#ifndef FFR_SIM_HPP
#define FFR_SIM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffr/netlist.hpp"

namespace ffr {

/// Per-cycle primary-input assignment plus the initial flip-flop state.
/// Missing initial_state entries default to 0. `observe` optionally
/// restricts failure classification to a subset of primary outputs
/// (named by the driven signal).
struct Stimulus {
    std::vector<std::string> input_names;        // column order of `vectors`
    std::vector<std::vector<std::uint8_t>> vectors; // [cycle][input]
    std::map<std::string, std::uint8_t> initial_state;
    std::optional<std::vector<std::string>> observe;

    std::size_t cycles() const { return vectors.size(); }
};

/// Stimulus JSON: {"inputs":[...], "vectors":["0101",...],
/// "initial_state":{"q":1}, "observe":["z"]}.
Stimulus stimulus_from_json(const std::string& text);
std::string stimulus_to_json(const Stimulus& stimulus);

/// Seeded uniform random vectors over the netlist's primary inputs,
/// all-zero initial state, no observe mask.
Stimulus random_stimulus(const Netlist& netlist, std::size_t cycles, std::uint64_t seed);

/// Primary-output history, row-major [cycle][output]; column order is the
/// OUTPUT declaration order.
struct GoldenTrace {
    std::size_t width = 0;
    std::vector<std::uint8_t> bits;

    std::size_t cycles() const { return width == 0 ? 0 : bits.size() / width; }
    std::uint8_t at(std::size_t cycle, std::size_t po) const { return bits[cycle * width + po]; }
    const std::uint8_t* row(std::size_t cycle) const { return bits.data() + cycle * width; }
};

struct InjectionSpec {
    int ff;    // cell/node id of a DFF
    int cycle; // in [0, cycles)
};

/// Netlist compiled to flat arrays for repeated cycle evaluation: a fixed
/// combinational topological order plus index maps for PIs, POs and DFFs.
struct SimModel {
    const Netlist* netlist = nullptr;
    std::vector<int> topo_comb;     // combinational cells in evaluation order
    std::vector<int> dffs;          // DFF cell ids, declaration order
    std::vector<int> pos;           // Output port cell ids, declaration order
    std::vector<int> pis;           // Input cell ids, declaration order
    std::vector<int> stim_column;   // per pi index -> column in Stimulus.vectors
    std::vector<std::uint8_t> init_state; // per dff index

    std::size_t num_cells() const { return netlist->cells.size(); }

    /// Evaluates one cycle: writes PI bits and DFF state into `values`,
    /// evaluates combinational cells, then returns via out-params the PO
    /// bits and the next state (fan-in of each DFF).
    void eval_cycle(const std::vector<std::uint8_t>& pi_bits,
                    const std::vector<std::uint8_t>& state,
                    std::vector<std::uint8_t>& values,
                    std::uint8_t* po_out,
                    std::vector<std::uint8_t>* next_state) const;
};

/// Validates the stimulus against the netlist and resolves name maps.
/// Throws DataError on width mismatch, unknown PI/DFF/PO names, or
/// missing PI assignments.
SimModel compile_sim(const Netlist& netlist, const Stimulus& stimulus);

GoldenTrace simulate_golden(const Netlist& netlist, const Stimulus& stimulus);

/// Same as the golden run except the stored bit of `inj.ff` is inverted
/// immediately after the state-load boundary entering cycle `inj.cycle`.
GoldenTrace simulate_with_seu(const Netlist& netlist, const Stimulus& stimulus, InjectionSpec inj);

enum class Outcome : std::uint8_t { Masked, Failure };

/// Failure iff any cycle's output vector differs.
Outcome classify_outcome(const GoldenTrace& golden, const GoldenTrace& faulty);

} // namespace ffr

#endif
