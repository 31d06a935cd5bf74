#include "ffr/derating.hpp"

#include <algorithm>

#include "ffr/error.hpp"

namespace ffr {

namespace {

std::vector<int> comb_topo_order(const Netlist& netlist) {
    const int n = static_cast<int>(netlist.cells.size());
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> readers(n);
    for (int i = 0; i < n; ++i)
        for (int f : netlist.cells[i].fanin)
            if (netlist.cells[f].kind != GateKind::Dff) {
                ++indeg[i];
                readers[f].push_back(i);
            }
    std::vector<int> queue;
    queue.reserve(n);
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(i);
    std::vector<int> order;
    order.reserve(n);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        GateKind kind = netlist.cells[v].kind;
        if (kind != GateKind::Input && kind != GateKind::Dff) order.push_back(v);
        for (int r : readers[v])
            if (--indeg[r] == 0) queue.push_back(r);
    }
    return order;
}

void eval_comb(const Netlist& netlist, const std::vector<int>& topo,
               std::vector<std::uint8_t>& values) {
    std::uint8_t scratch[64];
    for (int c : topo) {
        const Cell& cell = netlist.cells[c];
        const std::size_t n = cell.fanin.size();
        if (n <= 64) {
            for (std::size_t i = 0; i < n; ++i) scratch[i] = values[cell.fanin[i]];
            values[c] = eval_gate(cell.kind, scratch, n);
        } else {
            std::vector<std::uint8_t> wide(n);
            for (std::size_t i = 0; i < n; ++i) wide[i] = values[cell.fanin[i]];
            values[c] = eval_gate(cell.kind, wide.data(), n);
        }
    }
}

} // namespace

ConeAnalysis analyze_cone(const Netlist& netlist, int ff) {
    if (ff < 0 || ff >= static_cast<int>(netlist.cells.size()) ||
        netlist.cells[ff].kind != GateKind::Dff)
        throw DataError("cone analysis target is not a flip-flop");

    const int n = static_cast<int>(netlist.cells.size());
    std::vector<std::vector<int>> readers(n);
    for (int i = 0; i < n; ++i)
        for (int f : netlist.cells[i].fanin) readers[f].push_back(i);

    // forward over combinational cells only; a DFF reader is a
    // next-cycle effect and ends the single-cycle cone
    std::vector<char> fwd(n, 0);
    std::vector<int> stack{ff};
    fwd[ff] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int r : readers[v]) {
            if (fwd[r] || netlist.cells[r].kind == GateKind::Dff) continue;
            fwd[r] = 1;
            stack.push_back(r);
        }
    }

    ConeAnalysis cone;
    for (int po : netlist.primary_outputs)
        if (fwd[po]) cone.reachable_pos.push_back(po);

    // backward from the reachable outputs down to sources
    std::vector<char> bwd(n, 0);
    for (int po : cone.reachable_pos) {
        bwd[po] = 1;
        stack.push_back(po);
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        GateKind kind = netlist.cells[v].kind;
        if (kind == GateKind::Input || kind == GateKind::Dff) continue;
        for (int f : netlist.cells[v].fanin)
            if (!bwd[f]) {
                bwd[f] = 1;
                stack.push_back(f);
            }
    }
    for (int i = 0; i < n; ++i) {
        GateKind kind = netlist.cells[i].kind;
        if (bwd[i] && i != ff && (kind == GateKind::Input || kind == GateKind::Dff))
            cone.support.push_back(i);
    }
    return cone;
}

bool seu_visible_now(const Netlist& netlist, int ff,
                     const std::vector<std::uint8_t>& pi_bits,
                     const std::vector<std::uint8_t>& dff_bits) {
    if (ff < 0 || netlist.cells[ff].kind != GateKind::Dff)
        throw DataError("injection target is not a flip-flop");
    std::vector<int> dffs = netlist.dff_cells();
    if (pi_bits.size() != netlist.primary_inputs.size() || dff_bits.size() != dffs.size())
        throw DataError("source assignment width mismatch");

    std::vector<int> topo = comb_topo_order(netlist);
    std::vector<std::uint8_t> base(netlist.cells.size(), 0);
    for (std::size_t i = 0; i < pi_bits.size(); ++i) base[netlist.primary_inputs[i]] = pi_bits[i];
    for (std::size_t i = 0; i < dffs.size(); ++i) base[dffs[i]] = dff_bits[i];

    std::vector<std::uint8_t> flipped = base;
    flipped[ff] ^= 1;
    eval_comb(netlist, topo, base);
    eval_comb(netlist, topo, flipped);
    for (int po : netlist.primary_outputs)
        if (base[po] != flipped[po]) return true;
    return false;
}

double logical_derating_bruteforce(const Netlist& netlist, int ff, int max_support_inputs) {
    ConeAnalysis cone = analyze_cone(netlist, ff);
    if (cone.reachable_pos.empty()) return 0.0;
    if (static_cast<int>(cone.support.size()) > max_support_inputs)
        throw DataError("cone of '" + netlist.cells[ff].name + "' has " +
                        std::to_string(cone.support.size()) + " support inputs, enumeration bound is " +
                        std::to_string(max_support_inputs));

    std::vector<int> topo = comb_topo_order(netlist);
    const std::size_t bits = cone.support.size();
    const std::uint64_t combos = 1ULL << bits;

    std::vector<std::uint8_t> values(netlist.cells.size(), 0);
    std::vector<std::uint8_t> flipped(netlist.cells.size(), 0);
    std::uint64_t propagated = 0;
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        std::fill(values.begin(), values.end(), 0);
        for (std::size_t b = 0; b < bits; ++b)
            values[cone.support[b]] = static_cast<std::uint8_t>((mask >> b) & 1);
        flipped = values;
        values[ff] = 0;
        flipped[ff] = 1;
        eval_comb(netlist, topo, values);
        eval_comb(netlist, topo, flipped);
        for (int po : cone.reachable_pos)
            if (values[po] != flipped[po]) {
                ++propagated;
                break;
            }
    }
    return static_cast<double>(propagated) / static_cast<double>(combos);
}

} // namespace ffr
