#include "softnet/newick.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace softnet {

std::string ParseError::to_string() const {
    return "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
           ": " + reason;
}

namespace {

// Sort key for deterministic output: the sorted list of leaf names reachable
// from a node (through both reticulation parents).
std::vector<std::vector<std::string>> node_keys(const Network& n, const TaxonUniverse& taxa) {
    std::vector<std::set<std::string>> acc(static_cast<std::size_t>(n.node_count()));
    for (int v : n.reverse_topo()) {
        int lbl = n.label[static_cast<std::size_t>(v)];
        if (lbl >= 0) {
            acc[static_cast<std::size_t>(v)].insert(taxa.name(lbl));
        } else {
            for (int w : n.kids[static_cast<std::size_t>(v)]) {
                if (w >= 0) {
                    acc[static_cast<std::size_t>(v)].insert(acc[static_cast<std::size_t>(w)].begin(),
                                                            acc[static_cast<std::size_t>(w)].end());
                }
            }
        }
    }
    std::vector<std::vector<std::string>> keys;
    keys.reserve(acc.size());
    for (auto& s : acc) keys.emplace_back(s.begin(), s.end());
    return keys;
}

} // namespace

std::string to_enewick(const Network& n, const TaxonUniverse& taxa) {
    auto keys = node_keys(n, taxa);
    auto indeg = n.indegrees();

    // Number reticulations in a deterministic topological order (Kahn,
    // smallest key first).
    std::map<int, int> hnum;
    {
        auto remaining = indeg;
        std::vector<int> avail{n.root};
        int next = 1;
        auto better = [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; };
        while (!avail.empty()) {
            auto it = std::min_element(avail.begin(), avail.end(), better);
            int v = *it;
            avail.erase(it);
            if (indeg[static_cast<std::size_t>(v)] == 2) hnum[v] = next++;
            for (int w : n.kids[static_cast<std::size_t>(v)]) {
                if (w >= 0 && --remaining[static_cast<std::size_t>(w)] == 0) avail.push_back(w);
            }
        }
    }

    std::set<int> written;
    auto rec = [&](auto&& self, int v) -> std::string {
        int lbl = n.label[static_cast<std::size_t>(v)];
        bool retic = indeg[static_cast<std::size_t>(v)] == 2;
        if (retic && written.count(v)) return "#H" + std::to_string(hnum.at(v));
        if (retic) written.insert(v);
        std::string body;
        if (lbl >= 0) {
            body = taxa.name(lbl);
        } else {
            std::vector<int> ch;
            for (int w : n.kids[static_cast<std::size_t>(v)]) {
                if (w >= 0) ch.push_back(w);
            }
            std::sort(ch.begin(), ch.end(), [&](int a, int b) {
                if (keys[static_cast<std::size_t>(a)] != keys[static_cast<std::size_t>(b)]) {
                    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
                }
                int ha = hnum.count(a) ? hnum.at(a) : 0;
                int hb = hnum.count(b) ? hnum.at(b) : 0;
                return ha < hb;
            });
            body = "(";
            for (std::size_t i = 0; i < ch.size(); ++i) {
                if (i) body += ",";
                body += self(self, ch[i]);
            }
            body += ")";
        }
        if (retic) body += "#H" + std::to_string(hnum.at(v));
        return body;
    };
    return rec(rec, n.root) + ";";
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1, col = 1;

    [[noreturn]] void fail(const std::string& why) const { throw parse_exception({line, col, why}); }
    bool eof() const { return pos >= s.size(); }
    char peek() const { return eof() ? '\0' : s[pos]; }
    char get() {
        char c = peek();
        if (eof()) fail("unexpected end of input");
        ++pos;
        if (c == '\n') { ++line; col = 1; } else { ++col; }
        return c;
    }
    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) get();
    }
};

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' ||
           c == '+' || c == '@' || c == '\'';
}

struct RawNode {
    std::vector<int> children;
    std::string name;   // leaf or internal label (internal labels ignored)
    int hybrid = 0;     // #Hk tag, 0 = none
};

struct RawParser {
    Cursor cur;
    std::vector<RawNode> nodes;

    int parse_subtree() {
        cur.skip_ws();
        RawNode node;
        if (cur.peek() == '(') {
            cur.get();
            node.children.push_back(parse_subtree());
            cur.skip_ws();
            while (cur.peek() == ',') {
                cur.get();
                node.children.push_back(parse_subtree());
                cur.skip_ws();
            }
            if (cur.peek() != ')') cur.fail("expected ',' or ')'");
            cur.get();
        }
        cur.skip_ws();
        while (!cur.eof() && is_name_char(cur.peek())) node.name += cur.get();
        if (cur.peek() == '#') {
            cur.get();
            if (cur.peek() == 'H' || cur.peek() == 'h') cur.get();
            std::string num;
            while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) num += cur.get();
            if (num.empty()) cur.fail("expected a number after '#H'");
            node.hybrid = std::stoi(num);
        }
        if (cur.peek() == ':') { // branch length: accepted and ignored
            cur.get();
            while (!cur.eof() && (std::isdigit(static_cast<unsigned char>(cur.peek())) ||
                                  cur.peek() == '.' || cur.peek() == 'e' || cur.peek() == 'E' ||
                                  cur.peek() == '-' || cur.peek() == '+')) {
                cur.get();
            }
        }
        if (node.children.empty() && node.name.empty() && node.hybrid == 0) {
            cur.fail("expected a subtree or a label");
        }
        nodes.push_back(std::move(node));
        return static_cast<int>(nodes.size()) - 1;
    }
};

ParsedNetwork assemble(const std::vector<RawNode>& raw, int root, const Cursor& at) {
    // Merge #H occurrences: the occurrence with children (or the first one)
    // defines the node.
    std::map<int, int> hybrid_node; // tag -> merged raw id
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& r = raw[i];
        if (r.hybrid) {
            auto it = hybrid_node.find(r.hybrid);
            if (it == hybrid_node.end()) {
                hybrid_node[r.hybrid] = static_cast<int>(i);
            } else if (!r.children.empty() || !r.name.empty()) {
                const auto& prev = raw[static_cast<std::size_t>(it->second)];
                if (!prev.children.empty() || !prev.name.empty()) {
                    throw parse_exception({at.line, at.col, "#H" + std::to_string(r.hybrid) +
                                                                " defined more than once"});
                }
                it->second = static_cast<int>(i);
            }
        }
    }
    auto canon = [&](int i) {
        int h = raw[static_cast<std::size_t>(i)].hybrid;
        return h ? hybrid_node.at(h) : i;
    };

    std::vector<std::string> leaf_names;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (canon(static_cast<int>(i)) == static_cast<int>(i) && raw[i].children.empty() && !raw[i].name.empty()) {
            leaf_names.push_back(raw[i].name);
        }
    }
    if (leaf_names.empty()) throw parse_exception({at.line, at.col, "no labeled leaves"});
    std::sort(leaf_names.begin(), leaf_names.end());
    if (std::adjacent_find(leaf_names.begin(), leaf_names.end()) != leaf_names.end()) {
        throw parse_exception({at.line, at.col, "duplicate leaf label"});
    }
    auto uni = std::make_shared<TaxonUniverse>(leaf_names);

    NetworkBuilder b;
    std::map<int, int> built;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (canon(static_cast<int>(i)) != static_cast<int>(i)) continue;
        int lbl = -1;
        if (raw[i].children.empty()) {
            if (raw[i].name.empty()) {
                throw parse_exception({at.line, at.col, "#H node without a definition"});
            }
            lbl = uni->id_of(raw[i].name);
        }
        built[static_cast<int>(i)] = b.add_node(lbl);
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (canon(static_cast<int>(i)) != static_cast<int>(i)) continue;
        for (int c : raw[i].children) {
            b.add_edge(built.at(static_cast<int>(i)), built.at(canon(c)));
        }
    }
    b.set_root(built.at(canon(root)));
    Network n;
    try {
        n = b.build(false);
    } catch (const std::exception& e) {
        throw parse_exception({at.line, at.col, e.what()});
    }
    return ParsedNetwork{std::move(n), std::move(uni)};
}

} // namespace

ParsedNetwork parse_enewick(const std::string& text) {
    RawParser p{Cursor{text}, {}};
    int root = p.parse_subtree();
    p.cur.skip_ws();
    if (p.cur.peek() != ';') p.cur.fail("expected ';'");
    p.cur.get();
    p.cur.skip_ws();
    if (!p.cur.eof()) p.cur.fail("trailing characters after ';'");
    return assemble(p.nodes, root, p.cur);
}

std::vector<ParsedNetwork> parse_enewick_list(const std::string& text) {
    std::vector<ParsedNetwork> out;
    RawParser p{Cursor{text}, {}};
    p.cur.skip_ws();
    while (!p.cur.eof()) {
        p.nodes.clear();
        int root = p.parse_subtree();
        p.cur.skip_ws();
        if (p.cur.peek() != ';') p.cur.fail("expected ';'");
        p.cur.get();
        out.push_back(assemble(p.nodes, root, p.cur));
        p.cur.skip_ws();
    }
    if (out.empty()) {
        Cursor c{text};
        c.fail("no trees in input");
    }
    return out;
}

std::string to_dot(const Network& n, const TaxonUniverse& taxa) {
    auto indeg = n.indegrees();
    std::string out = "digraph network {\n  rankdir=TB;\n";
    for (int v = 0; v < n.node_count(); ++v) {
        int lbl = n.label[static_cast<std::size_t>(v)];
        out += "  n" + std::to_string(v);
        if (lbl >= 0) {
            out += " [label=\"" + taxa.name(lbl) + "\", shape=plaintext]";
        } else if (indeg[static_cast<std::size_t>(v)] >= 2) {
            out += " [label=\"\", shape=doublecircle, width=0.15]";
        } else {
            out += " [label=\"\", shape=point]";
        }
        out += ";\n";
    }
    for (const auto& [u, v] : n.edges()) {
        out += "  n" + std::to_string(u) + " -> n" + std::to_string(v) + ";\n";
    }
    out += "}\n";
    return out;
}

std::string to_network_json(const Network& n, const TaxonUniverse& taxa) {
    nlohmann::json j;
    j["format"] = "softnet-network";
    j["version"] = 1;
    j["nodes"] = n.node_count();
    j["root"] = n.root;
    auto es = n.edges();
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [u, v] : es) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    nlohmann::json labels = nlohmann::json::object();
    for (int v = 0; v < n.node_count(); ++v) {
        if (n.label[static_cast<std::size_t>(v)] >= 0) {
            labels[taxa.name(n.label[static_cast<std::size_t>(v)])] = v;
        }
    }
    j["labels"] = std::move(labels);
    return j.dump(2) + "\n";
}

ParsedNetwork parse_network_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_exception({1, 1, e.what()});
    }
    try {
        if (j.at("format") != "softnet-network") throw std::runtime_error("not a softnet-network file");
        int nn = j.at("nodes").get<int>();
        std::vector<std::string> names;
        for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) names.push_back(it.key());
        auto uni = std::make_shared<TaxonUniverse>(names);
        NetworkBuilder b;
        std::vector<int> label(static_cast<std::size_t>(nn), -1);
        for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) {
            label.at(it.value().get<std::size_t>()) = uni->id_of(it.key());
        }
        for (int v = 0; v < nn; ++v) b.add_node(label[static_cast<std::size_t>(v)]);
        for (const auto& e : j.at("edges")) b.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
        b.set_root(j.at("root").get<int>());
        return ParsedNetwork{b.build(false), std::move(uni)};
    } catch (const parse_exception&) {
        throw;
    } catch (const std::exception& e) {
        throw parse_exception({1, 1, e.what()});
    }
}

} // namespace softnet
