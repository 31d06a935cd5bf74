#ifndef FFR_GRAPH_HPP
#define FFR_GRAPH_HPP

#include <string>
#include <utility>
#include <vector>

#include "ffr/linalg.hpp"
#include "ffr/netlist.hpp"

namespace ffr {

/// Directed circuit graph: one node per cell, one driver->reader edge per
/// (fan-in, cell) pair. Node numbering is the cell declaration order.
struct CircuitGraph {
    struct Node {
        std::string name;
        GateKind kind;
    };

    std::vector<Node> nodes;
    std::vector<std::pair<int, int>> edges; // (driver, reader), deterministic order
    std::vector<std::vector<int>> fanin;    // per node, driver ids in edge order
    std::vector<std::vector<int>> fanout;   // per node, reader ids in edge order

    void rebuild_adjacency();
};

CircuitGraph build_graph(const Netlist& netlist);

using FeatureMatrix = Mat;

inline constexpr std::size_t kFeatureColumns = kGateKindCount + 4;

/// Longest combinational distance of each node from any primary input or
/// DFF output (both are level-0 sources; a DFF's own data path does not
/// contribute to its level).
std::vector<int> topo_levels(const CircuitGraph& graph);

/// Structural per-node features: one-hot kind (11) + in-degree +
/// out-degree + topological level normalized by max(level, 1) +
/// is-sequential flag.
FeatureMatrix node_features(const CircuitGraph& graph);

} // namespace ffr

#endif
