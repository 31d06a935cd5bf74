#ifndef FFR_NETLIST_HPP
#define FFR_NETLIST_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ffr {

enum class GateKind : std::uint8_t {
    Input,
    Output,
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    Dff,
};

inline constexpr int kGateKindCount = 11;

const char* to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view s); // case-insensitive

/// Two-valued evaluation of a combinational kind over its fan-in bits.
/// Input/Dff are state sources and must not be passed here.
std::uint8_t eval_gate(GateKind kind, const std::uint8_t* fanin_values, std::size_t n);

struct Cell {
    std::string name;
    GateKind kind;
    std::vector<int> fanin; // resolved cell indices, declaration order
    int line = 0;           // declaration line, for diagnostics
};

/// Parsed gate-level netlist. Cells appear in declaration order; an
/// OUTPUT(x) declaration materializes a dedicated port cell named "x$po"
/// whose single fan-in is x ('$' cannot occur in source identifiers, so
/// port cells never collide with user cells).
struct Netlist {
    std::vector<Cell> cells;
    std::vector<int> primary_inputs;  // indices of Input cells
    std::vector<int> primary_outputs; // indices of Output port cells

    int cell_index(std::string_view name) const {
        auto it = index_.find(std::string(name));
        return it == index_.end() ? -1 : it->second;
    }

    /// User-facing name of primary output `po` (the driven signal, not
    /// the internal "$po" port cell).
    const std::string& po_signal_name(int po_cell) const {
        return cells[cells[po_cell].fanin[0]].name;
    }

    std::vector<int> dff_cells() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(cells.size()); ++i)
            if (cells[i].kind == GateKind::Dff) out.push_back(i);
        return out;
    }

    void rebuild_index(); // called by the parser / builders

private:
    std::unordered_map<std::string, int> index_;
};

/// Parses the `.bench` dialect: one statement per line, `#' comments,
/// INPUT(name), OUTPUT(name) and name = KIND(arg, ...). Kinds are matched
/// case-insensitively. Every violation raises ParseError with a location;
/// semantic violations (duplicate names, unresolved fan-ins, arity,
/// combinational cycles) point at the offending declaration.
Netlist parse_bench(std::string_view text);

} // namespace ffr

#endif
