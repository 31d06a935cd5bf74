#include "ffr/netlist.hpp"

#include <algorithm>
#include <cctype>

#include "ffr/error.hpp"

namespace ffr {

const char* to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Input: return "INPUT";
        case GateKind::Output: return "OUTPUT";
        case GateKind::And: return "AND";
        case GateKind::Nand: return "NAND";
        case GateKind::Or: return "OR";
        case GateKind::Nor: return "NOR";
        case GateKind::Xor: return "XOR";
        case GateKind::Xnor: return "XNOR";
        case GateKind::Not: return "NOT";
        case GateKind::Buf: return "BUF";
        case GateKind::Dff: return "DFF";
    }
    return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view s) {
    std::string up(s);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (int k = 0; k < kGateKindCount; ++k) {
        GateKind kind = static_cast<GateKind>(k);
        if (up == to_string(kind)) return kind;
    }
    return std::nullopt;
}

std::uint8_t eval_gate(GateKind kind, const std::uint8_t* v, std::size_t n) {
    switch (kind) {
        case GateKind::And:
        case GateKind::Nand: {
            std::uint8_t acc = 1;
            for (std::size_t i = 0; i < n; ++i) acc &= v[i];
            return kind == GateKind::And ? acc : static_cast<std::uint8_t>(acc ^ 1);
        }
        case GateKind::Or:
        case GateKind::Nor: {
            std::uint8_t acc = 0;
            for (std::size_t i = 0; i < n; ++i) acc |= v[i];
            return kind == GateKind::Or ? acc : static_cast<std::uint8_t>(acc ^ 1);
        }
        case GateKind::Xor:
        case GateKind::Xnor: {
            std::uint8_t acc = 0;
            for (std::size_t i = 0; i < n; ++i) acc ^= v[i];
            return kind == GateKind::Xor ? acc : static_cast<std::uint8_t>(acc ^ 1);
        }
        case GateKind::Not: return v[0] ^ 1;
        case GateKind::Buf:
        case GateKind::Output: return v[0];
        default: return 0; // Input/Dff are sources, never evaluated
    }
}

void Netlist::rebuild_index() {
    index_.clear();
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) index_[cells[i].name] = i;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct LineScanner {
    std::string_view text;
    int line;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool eol() {
        skip_ws();
        return pos >= text.size();
    }
    int col() const { return static_cast<int>(pos) + 1; }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col()); }

    std::string_view ident() {
        skip_ws();
        if (pos >= text.size() || !ident_start(text[pos])) fail("expected identifier");
        std::size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }
    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

struct RawCell {
    std::string name;
    GateKind kind;
    std::vector<std::string> fanin_names;
    int line;
    int col;
};

void check_arity(const RawCell& rc) {
    std::size_t n = rc.fanin_names.size();
    switch (rc.kind) {
        case GateKind::Input:
            if (n != 0) throw ParseError("INPUT takes no fan-in", rc.line, rc.col);
            break;
        case GateKind::Output:
        case GateKind::Not:
        case GateKind::Buf:
        case GateKind::Dff:
            if (n != 1)
                throw ParseError(std::string(to_string(rc.kind)) + " takes exactly one fan-in, got " +
                                     std::to_string(n),
                                 rc.line, rc.col);
            break;
        default:
            if (n < 2)
                throw ParseError(std::string(to_string(rc.kind)) + " needs at least two fan-ins, got " +
                                     std::to_string(n),
                                 rc.line, rc.col);
            break;
    }
}

} // namespace

Netlist parse_bench(std::string_view text) {
    std::vector<RawCell> raw;

    int line_no = 0;
    std::size_t cursor = 0;
    while (cursor <= text.size()) {
        std::size_t nl = text.find('\n', cursor);
        std::string_view line = text.substr(cursor, nl == std::string_view::npos ? text.size() - cursor
                                                                                 : nl - cursor);
        cursor = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        LineScanner sc{line, line_no};
        if (sc.eol()) continue;

        std::size_t first_tok_pos = sc.pos;
        std::string_view first = sc.ident();

        if (sc.accept('(')) {
            // INPUT(name) / OUTPUT(name) declaration
            auto kw = gate_kind_from_string(first);
            if (kw != GateKind::Input && kw != GateKind::Output)
                throw ParseError("unknown declaration '" + std::string(first) + "'", line_no,
                                 static_cast<int>(first_tok_pos) + 1);
            std::string_view name = sc.ident();
            sc.expect(')');
            if (!sc.eol()) sc.fail("trailing characters");
            if (*kw == GateKind::Input) {
                raw.push_back({std::string(name), GateKind::Input, {}, line_no,
                               static_cast<int>(first_tok_pos) + 1});
            } else {
                raw.push_back({std::string(name) + "$po", GateKind::Output,
                               {std::string(name)}, line_no, static_cast<int>(first_tok_pos) + 1});
            }
            continue;
        }

        // name = KIND(arg, ...)
        sc.expect('=');
        sc.skip_ws();
        int kind_col = sc.col();
        std::string_view kind_tok = sc.ident();
        auto kind = gate_kind_from_string(kind_tok);
        if (!kind) throw ParseError("unknown gate kind '" + std::string(kind_tok) + "'", line_no, kind_col);
        if (*kind == GateKind::Input || *kind == GateKind::Output)
            throw ParseError(std::string(to_string(*kind)) + " is not assignable", line_no, kind_col);
        sc.expect('(');
        RawCell rc{std::string(first), *kind, {}, line_no, kind_col};
        if (!sc.accept(')')) {
            for (;;) {
                rc.fanin_names.emplace_back(sc.ident());
                if (sc.accept(')')) break;
                sc.expect(',');
            }
        }
        if (!sc.eol()) sc.fail("trailing characters");
        check_arity(rc);
        raw.push_back(std::move(rc));
    }

    Netlist net;
    net.cells.reserve(raw.size());
    for (auto& rc : raw) {
        net.cells.push_back({rc.name, rc.kind, {}, rc.line});
    }
    net.rebuild_index();

    // duplicate detection: the index maps to the *last* occurrence, so scan
    for (int i = 0; i < static_cast<int>(net.cells.size()); ++i) {
        if (net.cell_index(net.cells[i].name) != i)
            throw ParseError("duplicate cell name '" + net.cells[i].name + "'",
                             raw[std::max(i, net.cell_index(net.cells[i].name))].line);
    }

    for (int i = 0; i < static_cast<int>(raw.size()); ++i) {
        for (const auto& fn : raw[i].fanin_names) {
            int idx = net.cell_index(fn);
            if (idx < 0)
                throw ParseError("unresolved fan-in '" + fn + "' of cell '" + net.cells[i].name + "'",
                                 raw[i].line);
            net.cells[i].fanin.push_back(idx);
        }
        if (raw[i].kind == GateKind::Input) net.primary_inputs.push_back(i);
        if (raw[i].kind == GateKind::Output) net.primary_outputs.push_back(i);
    }

    // combinational acyclicity: drop every edge whose driver is a DFF
    // (its stored value breaks the loop), then Kahn.
    const int n = static_cast<int>(net.cells.size());
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int f : net.cells[i].fanin)
            if (net.cells[f].kind != GateKind::Dff) ++indeg[i];

    std::vector<int> queue;
    queue.reserve(n);
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(i);

    std::vector<std::vector<int>> readers(n);
    for (int i = 0; i < n; ++i)
        for (int f : net.cells[i].fanin)
            if (net.cells[f].kind != GateKind::Dff) readers[f].push_back(i);

    int processed = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        ++processed;
        for (int r : readers[v])
            if (--indeg[r] == 0) queue.push_back(r);
    }
    if (processed != n) {
        for (int i = 0; i < n; ++i)
            if (indeg[i] > 0)
                throw ParseError("combinational cycle through cell '" + net.cells[i].name + "'",
                                 net.cells[i].line);
    }

    return net;
}

} // namespace ffr
