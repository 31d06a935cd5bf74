#include "ffr/gml.hpp"

#include <cctype>
#include <optional>

#include "ffr/error.hpp"

namespace ffr {

std::string export_gml(const CircuitGraph& graph) {
    std::string out;
    out.reserve(64 + graph.nodes.size() * 64 + graph.edges.size() * 48);
    out += "graph [\n";
    out += "  directed 1\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        out += "  node [\n";
        out += "    id " + std::to_string(i) + "\n";
        out += "    label \"" + graph.nodes[i].name + "\"\n";
        out += "    kind \"" + std::string(to_string(graph.nodes[i].kind)) + "\"\n";
        out += "  ]\n";
    }
    for (const auto& [src, dst] : graph.edges) {
        out += "  edge [\n";
        out += "    source " + std::to_string(src) + "\n";
        out += "    target " + std::to_string(dst) + "\n";
        out += "  ]\n";
    }
    out += "]\n";
    return out;
}

namespace {

struct Token {
    enum class Type { Word, Int, String, Open, Close, End };
    Type type;
    std::string text;
    long long value = 0;
    int line = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        if (pos_ >= text_.size()) return {Token::Type::End, "", 0, line_};
        char c = text_[pos_];
        int line = line_;
        if (c == '[') {
            ++pos_;
            return {Token::Type::Open, "[", 0, line};
        }
        if (c == ']') {
            ++pos_;
            return {Token::Type::Close, "]", 0, line};
        }
        if (c == '"') {
            ++pos_;
            std::string s;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\n') ++line_;
                s.push_back(text_[pos_++]);
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated string", line);
            ++pos_;
            return {Token::Type::String, s, 0, line};
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            if (c == '-') ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string s(text_.substr(start, pos_ - start));
            if (s == "-") throw ParseError("stray '-'", line);
            return {Token::Type::Int, s, std::stoll(s), line};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return {Token::Type::Word, std::string(text_.substr(start, pos_ - start)), 0, line};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

struct NodeRec {
    long long id = -1;
    std::optional<std::string> label;
    std::optional<std::string> kind;
    bool has_id = false;
};

struct EdgeRec {
    long long source = -1, target = -1;
    bool has_source = false, has_target = false;
};

} // namespace

CircuitGraph import_gml(std::string_view text) {
    Lexer lex(text);

    auto expect = [&](Token::Type type, const char* what) {
        Token t = lex.next();
        if (t.type != type) throw ParseError(std::string("expected ") + what, t.line);
        return t;
    };

    Token t = expect(Token::Type::Word, "'graph'");
    if (t.text != "graph") throw ParseError("expected 'graph'", t.line);
    expect(Token::Type::Open, "'['");

    std::vector<NodeRec> nodes;
    std::vector<EdgeRec> edges;

    for (;;) {
        Token key = lex.next();
        if (key.type == Token::Type::Close) break;
        if (key.type != Token::Type::Word)
            throw ParseError("expected key or ']'", key.line);

        if (key.text == "directed") {
            expect(Token::Type::Int, "integer after 'directed'");
        } else if (key.text == "node") {
            expect(Token::Type::Open, "'[' after 'node'");
            NodeRec rec;
            for (;;) {
                Token k = lex.next();
                if (k.type == Token::Type::Close) break;
                if (k.type != Token::Type::Word) throw ParseError("expected node key", k.line);
                if (k.text == "id") {
                    Token v = expect(Token::Type::Int, "integer id");
                    rec.id = v.value;
                    rec.has_id = true;
                } else if (k.text == "label") {
                    rec.label = expect(Token::Type::String, "quoted label").text;
                } else if (k.text == "kind") {
                    rec.kind = expect(Token::Type::String, "quoted kind").text;
                } else {
                    throw ParseError("unknown node key '" + k.text + "'", k.line);
                }
            }
            if (!rec.has_id) throw ParseError("node missing required key 'id'", key.line);
            if (!rec.label) throw ParseError("node missing required key 'label'", key.line);
            if (!rec.kind) throw ParseError("node missing required key 'kind'", key.line);
            nodes.push_back(std::move(rec));
        } else if (key.text == "edge") {
            expect(Token::Type::Open, "'[' after 'edge'");
            EdgeRec rec;
            for (;;) {
                Token k = lex.next();
                if (k.type == Token::Type::Close) break;
                if (k.type != Token::Type::Word) throw ParseError("expected edge key", k.line);
                if (k.text == "source") {
                    rec.source = expect(Token::Type::Int, "integer source").value;
                    rec.has_source = true;
                } else if (k.text == "target") {
                    rec.target = expect(Token::Type::Int, "integer target").value;
                    rec.has_target = true;
                } else {
                    throw ParseError("unknown edge key '" + k.text + "'", k.line);
                }
            }
            if (!rec.has_source) throw ParseError("edge missing required key 'source'", key.line);
            if (!rec.has_target) throw ParseError("edge missing required key 'target'", key.line);
            edges.push_back(rec);
        } else {
            throw ParseError("unknown key '" + key.text + "'", key.line);
        }
    }
    Token tail = lex.next();
    if (tail.type != Token::Type::End) throw ParseError("trailing content after 'graph' block", tail.line);

    CircuitGraph g;
    g.nodes.resize(nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    for (const auto& rec : nodes) {
        if (rec.id < 0 || rec.id >= static_cast<long long>(nodes.size()))
            throw ParseError("node id " + std::to_string(rec.id) + " out of range [0," +
                             std::to_string(nodes.size()) + ")");
        if (seen[static_cast<std::size_t>(rec.id)])
            throw ParseError("duplicate node id " + std::to_string(rec.id));
        seen[static_cast<std::size_t>(rec.id)] = true;
        auto kind = gate_kind_from_string(*rec.kind);
        if (!kind) throw ParseError("unknown gate kind '" + *rec.kind + "'");
        g.nodes[static_cast<std::size_t>(rec.id)] = {*rec.label, *kind};
    }
    for (const auto& rec : edges) {
        if (rec.source < 0 || rec.source >= static_cast<long long>(nodes.size()) ||
            rec.target < 0 || rec.target >= static_cast<long long>(nodes.size()))
            throw ParseError("dangling edge endpoint " + std::to_string(rec.source) + " -> " +
                             std::to_string(rec.target));
        g.edges.emplace_back(static_cast<int>(rec.source), static_cast<int>(rec.target));
    }
    g.rebuild_adjacency();
    return g;
}

} // namespace ffr
