#include "ffr/sim.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "ffr/error.hpp"
#include "ffr/rng.hpp"

namespace ffr {

using nlohmann::json;

Stimulus stimulus_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("stimulus JSON: ") + e.what());
    }
    if (!j.is_object()) throw DataError("stimulus JSON root must be an object");
    Stimulus s;
    if (!j.contains("inputs") || !j["inputs"].is_array())
        throw DataError("stimulus JSON needs an 'inputs' array");
    for (const auto& v : j["inputs"]) s.input_names.push_back(v.get<std::string>());

    if (!j.contains("vectors") || !j["vectors"].is_array())
        throw DataError("stimulus JSON needs a 'vectors' array");
    for (const auto& v : j["vectors"]) {
        std::string bits = v.get<std::string>();
        if (bits.size() != s.input_names.size())
            throw DataError("stimulus vector '" + bits + "' has " + std::to_string(bits.size()) +
                            " bits, expected " + std::to_string(s.input_names.size()));
        std::vector<std::uint8_t> row;
        row.reserve(bits.size());
        for (char c : bits) {
            if (c != '0' && c != '1') throw DataError("stimulus vectors must be 0/1 strings");
            row.push_back(c == '1');
        }
        s.vectors.push_back(std::move(row));
    }
    if (s.vectors.empty()) throw DataError("stimulus needs at least one cycle");

    if (j.contains("initial_state")) {
        for (auto it = j["initial_state"].begin(); it != j["initial_state"].end(); ++it) {
            int b = it.value().get<int>();
            if (b != 0 && b != 1) throw DataError("initial_state bits must be 0 or 1");
            s.initial_state[it.key()] = static_cast<std::uint8_t>(b);
        }
    }
    if (j.contains("observe")) {
        std::vector<std::string> obs;
        for (const auto& v : j["observe"]) obs.push_back(v.get<std::string>());
        s.observe = std::move(obs);
    }
    return s;
}

std::string stimulus_to_json(const Stimulus& stimulus) {
    json j;
    j["inputs"] = stimulus.input_names;
    std::vector<std::string> vecs;
    vecs.reserve(stimulus.vectors.size());
    for (const auto& row : stimulus.vectors) {
        std::string bits(row.size(), '0');
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i]) bits[i] = '1';
        vecs.push_back(std::move(bits));
    }
    j["vectors"] = vecs;
    if (!stimulus.initial_state.empty()) {
        json st = json::object();
        for (const auto& [name, bit] : stimulus.initial_state) st[name] = static_cast<int>(bit);
        j["initial_state"] = st;
    }
    if (stimulus.observe) j["observe"] = *stimulus.observe;
    return j.dump(2) + "\n";
}

Stimulus random_stimulus(const Netlist& netlist, std::size_t cycles, std::uint64_t seed) {
    if (cycles == 0) throw DataError("stimulus needs at least one cycle");
    Stimulus s;
    for (int pi : netlist.primary_inputs) s.input_names.push_back(netlist.cells[pi].name);
    SplitMix64 rng(seed);
    s.vectors.resize(cycles);
    for (auto& row : s.vectors) {
        row.resize(s.input_names.size());
        for (auto& b : row) b = static_cast<std::uint8_t>(rng.next() & 1);
    }
    return s;
}

void SimModel::eval_cycle(const std::vector<std::uint8_t>& pi_bits,
                          const std::vector<std::uint8_t>& state,
                          std::vector<std::uint8_t>& values,
                          std::uint8_t* po_out,
                          std::vector<std::uint8_t>* next_state) const {
    const auto& cells = netlist->cells;
    for (std::size_t i = 0; i < pis.size(); ++i) values[pis[i]] = pi_bits[i];
    for (std::size_t i = 0; i < dffs.size(); ++i) values[dffs[i]] = state[i];

    std::uint8_t scratch[64];
    for (int c : topo_comb) {
        const Cell& cell = cells[c];
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
    if (po_out)
        for (std::size_t i = 0; i < pos.size(); ++i) po_out[i] = values[pos[i]];
    if (next_state)
        for (std::size_t i = 0; i < dffs.size(); ++i)
            (*next_state)[i] = values[netlist->cells[dffs[i]].fanin[0]];
}

SimModel compile_sim(const Netlist& netlist, const Stimulus& stimulus) {
    SimModel m;
    m.netlist = &netlist;
    m.pis = netlist.primary_inputs;
    m.pos = netlist.primary_outputs;
    m.dffs = netlist.dff_cells();

    if (stimulus.cycles() == 0) throw DataError("stimulus has zero cycles");

    // stimulus columns must cover the primary inputs exactly
    std::map<std::string, int> column;
    for (std::size_t i = 0; i < stimulus.input_names.size(); ++i) {
        if (!column.emplace(stimulus.input_names[i], static_cast<int>(i)).second)
            throw DataError("stimulus lists input '" + stimulus.input_names[i] + "' twice");
    }
    m.stim_column.reserve(m.pis.size());
    for (int pi : m.pis) {
        auto it = column.find(netlist.cells[pi].name);
        if (it == column.end())
            throw DataError("stimulus does not assign primary input '" + netlist.cells[pi].name + "'");
        m.stim_column.push_back(it->second);
    }
    if (column.size() != m.pis.size()) {
        for (const auto& [name, idx] : column) {
            int ci = netlist.cell_index(name);
            if (ci < 0 || netlist.cells[ci].kind != GateKind::Input)
                throw DataError("stimulus input '" + name + "' is not a primary input");
        }
    }

    m.init_state.assign(m.dffs.size(), 0);
    for (const auto& [name, bit] : stimulus.initial_state) {
        int ci = netlist.cell_index(name);
        if (ci < 0 || netlist.cells[ci].kind != GateKind::Dff)
            throw DataError("initial_state names unknown flip-flop '" + name + "'");
        auto it = std::find(m.dffs.begin(), m.dffs.end(), ci);
        m.init_state[static_cast<std::size_t>(it - m.dffs.begin())] = bit;
    }

    if (stimulus.observe) {
        std::set<std::string> po_names;
        for (int po : m.pos) po_names.insert(netlist.po_signal_name(po));
        for (const auto& name : *stimulus.observe)
            if (!po_names.count(name))
                throw DataError("observe names unknown primary output '" + name + "'");
    }

    // combinational topological order (edges leaving DFFs are cut)
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
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        GateKind kind = netlist.cells[v].kind;
        if (kind != GateKind::Input && kind != GateKind::Dff) m.topo_comb.push_back(v);
        for (int r : readers[v])
            if (--indeg[r] == 0) queue.push_back(r);
    }
    return m;
}

namespace {

GoldenTrace run_trace(const SimModel& m, const Stimulus& stimulus, int flip_ff, int flip_cycle) {
    const std::size_t T = stimulus.cycles();
    GoldenTrace trace;
    trace.width = m.pos.size();
    trace.bits.assign(T * trace.width, 0);

    std::vector<std::uint8_t> state = m.init_state;
    std::vector<std::uint8_t> next_state(state.size());
    std::vector<std::uint8_t> values(m.num_cells(), 0);
    std::vector<std::uint8_t> pi_bits(m.pis.size(), 0);

    for (std::size_t t = 0; t < T; ++t) {
        if (flip_ff >= 0 && t == static_cast<std::size_t>(flip_cycle)) {
            auto it = std::find(m.dffs.begin(), m.dffs.end(), flip_ff);
            state[static_cast<std::size_t>(it - m.dffs.begin())] ^= 1;
        }
        const auto& stim_row = stimulus.vectors[t];
        for (std::size_t i = 0; i < m.pis.size(); ++i) pi_bits[i] = stim_row[m.stim_column[i]];
        m.eval_cycle(pi_bits, state, values, trace.bits.data() + t * trace.width, &next_state);
        state.swap(next_state);
    }
    return trace;
}

} // namespace

GoldenTrace simulate_golden(const Netlist& netlist, const Stimulus& stimulus) {
    SimModel m = compile_sim(netlist, stimulus);
    return run_trace(m, stimulus, -1, 0);
}

GoldenTrace simulate_with_seu(const Netlist& netlist, const Stimulus& stimulus, InjectionSpec inj) {
    SimModel m = compile_sim(netlist, stimulus);
    if (inj.ff < 0 || inj.ff >= static_cast<int>(netlist.cells.size()) ||
        netlist.cells[inj.ff].kind != GateKind::Dff)
        throw DataError("injection target is not a flip-flop");
    if (inj.cycle < 0 || static_cast<std::size_t>(inj.cycle) >= stimulus.cycles())
        throw DataError("injection cycle out of range");
    return run_trace(m, stimulus, inj.ff, inj.cycle);
}

Outcome classify_outcome(const GoldenTrace& golden, const GoldenTrace& faulty) {
    if (golden.width != faulty.width || golden.bits.size() != faulty.bits.size())
        throw DataError("trace shape mismatch");
    return golden.bits == faulty.bits ? Outcome::Masked : Outcome::Failure;
}

} // namespace ffr
