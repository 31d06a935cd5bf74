#include "ffr/gen.hpp"

#include <algorithm>
#include <vector>

#include "ffr/error.hpp"
#include "ffr/netlist.hpp"
#include "ffr/rng.hpp"

namespace ffr {

namespace {

struct GenSignal {
    std::string name;
    bool pi_tainted; // has a combinational path from a primary input
};

} // namespace

std::string gen_circuit(int n_ffs, int n_gates, std::uint64_t seed) {
    if (n_ffs < 1) throw DataError("generator needs at least one flip-flop");
    if (n_gates < n_ffs) throw DataError("generator needs n_gates >= n_ffs");

    SplitMix64 rng(seed);
    const int n_pi = std::clamp(2 + n_gates / 8, 2, 16);

    // flip-flop observation groups (fixed proportion by index)
    std::vector<int> xor_ffs, mask_ffs;
    for (int i = 0; i < n_ffs; ++i) {
        switch (i % 5) {
            case 0:
            case 1: xor_ffs.push_back(i); break;
            case 2:
            case 3: mask_ffs.push_back(i); break;
            default: break; // unobserved
        }
    }
    const int chain_gates = static_cast<int>(mask_ffs.size()) +
                            std::max(0, static_cast<int>(xor_ffs.size()) - 1);
    const int filler_gates = n_gates - chain_gates;
    if (filler_gates < 0) throw DataError("gate budget too small for observation chains");

    std::vector<GenSignal> pool; // legal gate fan-in sources
    std::vector<std::string> tainted;
    for (int i = 0; i < n_pi; ++i) {
        pool.push_back({"pi" + std::to_string(i), true});
        tainted.push_back(pool.back().name);
    }
    // observed flip-flop outputs participate in random logic; unobserved
    // ones must stay sink-free so their FFR is structurally zero
    for (int i : xor_ffs) pool.push_back({"ff" + std::to_string(i), false});
    for (int i : mask_ffs) pool.push_back({"ff" + std::to_string(i), false});

    std::string text;
    text.reserve(static_cast<std::size_t>(n_gates + n_ffs + n_pi) * 24);
    for (int i = 0; i < n_pi; ++i) text += "INPUT(pi" + std::to_string(i) + ")\n";

    static const GateKind kFillerKinds[] = {
        GateKind::And, GateKind::And,  GateKind::Or,   GateKind::Or,  GateKind::Nand,
        GateKind::Nor, GateKind::Xor,  GateKind::Xnor, GateKind::Not, GateKind::Buf,
    };
    int gate_id = 0;
    auto fresh_gate = [&gate_id]() { return "g" + std::to_string(gate_id++); };

    for (int i = 0; i < filler_gates; ++i) {
        GateKind kind = kFillerKinds[rng.uniform_below(std::size(kFillerKinds))];
        int arity = (kind == GateKind::Not || kind == GateKind::Buf)
                        ? 1
                        : 2 + static_cast<int>(rng.uniform_below(2));
        std::string name = fresh_gate();
        std::string line = name + " = " + to_string(kind) + "(";
        bool is_tainted = false;
        for (int a = 0; a < arity; ++a) {
            const GenSignal& pick = pool[rng.uniform_below(pool.size())];
            if (a) line += ", ";
            line += pick.name;
            is_tainted = is_tainted || pick.pi_tainted;
        }
        line += ")\n";
        text += line;
        pool.push_back({name, is_tainted});
        if (is_tainted) tainted.push_back(name);
    }

    // masking chain: ffr grows with proximity to the output
    std::string mask_tail;
    if (!mask_ffs.empty()) {
        static const GateKind kMaskKinds[] = {GateKind::And, GateKind::Or, GateKind::Nand,
                                              GateKind::Nor};
        std::string prev = pool[rng.uniform_below(pool.size())].name;
        for (int ff : mask_ffs) {
            GateKind kind = kMaskKinds[rng.uniform_below(std::size(kMaskKinds))];
            std::string name = fresh_gate();
            text += name + " = " + std::string(to_string(kind)) + "(" + prev + ", ff" +
                    std::to_string(ff) + ")\n";
            prev = name;
        }
        mask_tail = prev;
    }

    // XOR chain: every member flip propagates to the tail unconditionally
    std::string xor_tail;
    if (!xor_ffs.empty()) {
        xor_tail = "ff" + std::to_string(xor_ffs[0]);
        for (std::size_t i = 1; i < xor_ffs.size(); ++i) {
            std::string name = fresh_gate();
            text += name + " = XOR(" + xor_tail + ", ff" + std::to_string(xor_ffs[i]) + ")\n";
            xor_tail = name;
        }
    }

    // flip-flop state inputs: always a PI-tainted cone
    for (int i = 0; i < n_ffs; ++i) {
        const std::string& data = tainted[rng.uniform_below(tainted.size())];
        text += "ff" + std::to_string(i) + " = DFF(" + data + ")\n";
    }

    if (!xor_tail.empty()) text += "OUTPUT(" + xor_tail + ")\n";
    if (!mask_tail.empty()) text += "OUTPUT(" + mask_tail + ")\n";
    return text;
}

} // namespace ffr
