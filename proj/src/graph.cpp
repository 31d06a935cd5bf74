#include "ffr/graph.hpp"

#include <algorithm>

namespace ffr {

void CircuitGraph::rebuild_adjacency() {
    fanin.assign(nodes.size(), {});
    fanout.assign(nodes.size(), {});
    for (auto [driver, reader] : edges) {
        fanin[reader].push_back(driver);
        fanout[driver].push_back(reader);
    }
}

CircuitGraph build_graph(const Netlist& netlist) {
    CircuitGraph g;
    g.nodes.reserve(netlist.cells.size());
    for (const auto& cell : netlist.cells) g.nodes.push_back({cell.name, cell.kind});
    for (int i = 0; i < static_cast<int>(netlist.cells.size()); ++i)
        for (int f : netlist.cells[i].fanin) g.edges.emplace_back(f, i);
    g.rebuild_adjacency();
    return g;
}

std::vector<int> topo_levels(const CircuitGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());

    // Kahn order over the combinational subgraph (edges leaving a DFF are
    // cut; the netlist invariant guarantees this subgraph is acyclic).
    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v)
        for (int d : graph.fanin[v])
            if (graph.nodes[d].kind != GateKind::Dff) ++indeg[v];

    std::vector<int> order;
    order.reserve(n);
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) order.push_back(v);

    for (std::size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        if (graph.nodes[v].kind == GateKind::Dff) continue;
        for (int r : graph.fanout[v])
            if (--indeg[r] == 0) order.push_back(r);
    }

    // PIs and DFF outputs are the level-0 sources; every combinational
    // cell (including DFF-driven ones) sits one step past its deepest
    // fan-in, where a DFF fan-in counts as depth 0.
    std::vector<int> level(n, 0);
    for (int v : order) {
        GateKind kind = graph.nodes[v].kind;
        if (kind == GateKind::Input || kind == GateKind::Dff) continue;
        int deepest = 0;
        for (int d : graph.fanin[v])
            deepest = std::max(deepest, graph.nodes[d].kind == GateKind::Dff ? 0 : level[d]);
        level[v] = deepest + 1;
    }
    return level;
}

FeatureMatrix node_features(const CircuitGraph& graph) {
    const std::size_t n = graph.nodes.size();
    FeatureMatrix x(n, kFeatureColumns);

    std::vector<int> levels = topo_levels(graph);
    int max_level = 1;
    for (int l : levels) max_level = std::max(max_level, l);

    for (std::size_t v = 0; v < n; ++v) {
        double* row = x.row(v);
        row[static_cast<int>(graph.nodes[v].kind)] = 1.0;
        row[kGateKindCount + 0] = static_cast<double>(graph.fanin[v].size());
        row[kGateKindCount + 1] = static_cast<double>(graph.fanout[v].size());
        row[kGateKindCount + 2] = static_cast<double>(levels[v]) / max_level;
        row[kGateKindCount + 3] = graph.nodes[v].kind == GateKind::Dff ? 1.0 : 0.0;
    }
    return x;
}

} // namespace ffr
