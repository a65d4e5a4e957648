#include "softnet/network.hpp"
#include "softnet/cluster_set.hpp"
#include "softnet/detail/mutgraph.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace softnet {

std::vector<std::pair<int, int>> Network::edges() const {
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < node_count(); ++v) {
        for (int slot = 0; slot < 2; ++slot) {
            int w = kids[static_cast<std::size_t>(v)][static_cast<std::size_t>(slot)];
            if (w >= 0) es.emplace_back(v, w);
        }
    }
    return es;
}

int Network::edge_count() const {
    int c = 0;
    for (int v = 0; v < node_count(); ++v) c += outdeg(v);
    return c;
}

std::vector<int> Network::indegrees() const {
    std::vector<int> d(static_cast<std::size_t>(node_count()), 0);
    for (const auto& [u, v] : edges()) {
        (void)u;
        ++d[static_cast<std::size_t>(v)];
    }
    return d;
}

std::vector<std::array<int, 2>> Network::parents() const {
    std::vector<std::array<int, 2>> p(static_cast<std::size_t>(node_count()), {-1, -1});
    for (const auto& [u, v] : edges()) {
        auto& slots = p[static_cast<std::size_t>(v)];
        if (slots[0] < 0) slots[0] = u;
        else if (slots[1] < 0) slots[1] = u;
        else throw std::logic_error("node with indegree > 2");
    }
    return p;
}

TaxonSet Network::leaf_set() const {
    TaxonSet s;
    for (int v = 0; v < node_count(); ++v) {
        if (label[static_cast<std::size_t>(v)] >= 0) s.add(label[static_cast<std::size_t>(v)]);
    }
    return s;
}

std::vector<int> Network::reverse_topo() const {
    const int n = node_count();
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<int> state(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (state[static_cast<std::size_t>(s)]) continue;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            if (state[static_cast<std::size_t>(v)] == 0) {
                state[static_cast<std::size_t>(v)] = 1;
                for (int w : kids[static_cast<std::size_t>(v)]) {
                    if (w >= 0 && state[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
                }
            } else {
                stack.pop_back();
                if (state[static_cast<std::size_t>(v)] == 1) {
                    state[static_cast<std::size_t>(v)] = 2;
                    order.push_back(v);
                }
            }
        }
    }
    return order;
}

int NetworkBuilder::add_node(int label) {
    kids_.push_back({-1, -1});
    label_.push_back(label);
    return static_cast<int>(kids_.size()) - 1;
}

void NetworkBuilder::add_edge(int u, int v) {
    auto& k = kids_[static_cast<std::size_t>(u)];
    if (k[0] < 0) k[0] = v;
    else if (k[1] < 0) k[1] = v;
    else throw std::logic_error("node with outdegree > 2");
}

Network NetworkBuilder::build(bool require_binary) const {
    Network n;
    n.root = root_;
    n.kids = kids_;
    n.label = label_;
    validate_network(n, require_binary);
    return n;
}

void validate_network(const Network& n, bool require_binary) {
    const int nn = n.node_count();
    if (nn == 0) throw std::invalid_argument("empty network");
    auto indeg = n.indegrees();

    int roots = 0;
    for (int v = 0; v < nn; ++v) {
        if (indeg[static_cast<std::size_t>(v)] == 0) ++roots;
    }
    if (roots != 1) throw std::invalid_argument("network must have exactly one indegree-0 node");
    if (n.root < 0 || indeg[static_cast<std::size_t>(n.root)] != 0) {
        throw std::invalid_argument("root is not the indegree-0 node");
    }

    std::set<std::pair<int, int>> seen;
    for (const auto& e : n.edges()) {
        if (e.first == e.second) throw std::invalid_argument("self-loop");
        if (!seen.insert(e).second) throw std::invalid_argument("multi-edge in network");
    }

    // Acyclicity: reverse_topo must reach all nodes exactly once with every
    // node finishing after its children. Detect cycles via DFS colors.
    {
        std::vector<int> color(static_cast<std::size_t>(nn), 0);
        std::vector<std::pair<int, int>> stack{{n.root, 0}};
        color[static_cast<std::size_t>(n.root)] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < 2) {
                int w = n.kids[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
                ++i;
                if (w < 0) continue;
                if (color[static_cast<std::size_t>(w)] == 1) throw std::invalid_argument("cycle in network");
                if (color[static_cast<std::size_t>(w)] == 0) {
                    color[static_cast<std::size_t>(w)] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                color[static_cast<std::size_t>(v)] = 2;
                stack.pop_back();
            }
        }
        for (int v = 0; v < nn; ++v) {
            if (color[static_cast<std::size_t>(v)] != 2) {
                throw std::invalid_argument("node unreachable from root");
            }
        }
    }

    TaxonSet labels;
    for (int v = 0; v < nn; ++v) {
        int lbl = n.label[static_cast<std::size_t>(v)];
        int out = n.outdeg(v), in = indeg[static_cast<std::size_t>(v)];
        if (in == 1 && out == 1) throw std::invalid_argument("node with indegree and outdegree 1");
        if (out == 0) {
            if (lbl < 0) throw std::invalid_argument("unlabeled leaf");
            if (labels.contains(lbl)) throw std::invalid_argument("duplicate leaf label");
            labels.add(lbl);
        } else if (lbl >= 0) {
            throw std::invalid_argument("labeled internal node");
        }
        if (require_binary) {
            if (in >= 2) {
                if (in != 2 || out > 1) throw std::invalid_argument("non-binary reticulation");
            } else if (out != 0 && out != 2 && nn > 1) {
                throw std::invalid_argument("non-binary tree node");
            }
        }
    }
}

int reticulation_number(const Network& n) {
    int by_formula = n.edge_count() - n.node_count() + 1;
    int by_indeg = 0;
    for (int d : n.indegrees()) {
        if (d > 0) by_indeg += d - 1;
    }
    assert(by_formula == by_indeg);
    (void)by_indeg;
    return by_formula;
}

namespace {

// Undirected adjacency as (neighbor, edge id) pairs.
std::vector<std::vector<std::pair<int, int>>> undirected_adj(const Network& n) {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n.node_count()));
    auto es = n.edges();
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        auto [u, v] = es[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(u)].emplace_back(v, e);
        adj[static_cast<std::size_t>(v)].emplace_back(u, e);
    }
    return adj;
}

} // namespace

std::vector<std::vector<int>> biconnected_components(const Network& n) {
    const int nn = n.node_count();
    auto adj = undirected_adj(n);
    std::vector<int> disc(static_cast<std::size_t>(nn), -1), low(static_cast<std::size_t>(nn), 0);
    std::vector<int> estack;
    std::vector<std::vector<int>> comps;
    int timer = 0;

    // Iterative DFS; frames hold (node, parent edge, next adjacency index).
    struct Frame { int v, pe; std::size_t i; };
    for (int s = 0; s < nn; ++s) {
        if (disc[static_cast<std::size_t>(s)] >= 0) continue;
        std::vector<Frame> st{{s, -1, 0}};
        disc[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = timer++;
        while (!st.empty()) {
            auto& f = st.back();
            if (f.i < adj[static_cast<std::size_t>(f.v)].size()) {
                auto [w, e] = adj[static_cast<std::size_t>(f.v)][f.i++];
                if (e == f.pe) continue;
                if (disc[static_cast<std::size_t>(w)] < 0) {
                    estack.push_back(e);
                    disc[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = timer++;
                    st.push_back({w, e, 0});
                } else if (disc[static_cast<std::size_t>(w)] < disc[static_cast<std::size_t>(f.v)]) {
                    estack.push_back(e);
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], disc[static_cast<std::size_t>(w)]);
                }
            } else {
                int v = f.v, pe = f.pe;
                st.pop_back();
                if (st.empty()) continue;
                int u = st.back().v;
                low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], low[static_cast<std::size_t>(v)]);
                if (low[static_cast<std::size_t>(v)] >= disc[static_cast<std::size_t>(u)]) {
                    std::vector<int> comp;
                    while (true) {
                        int e = estack.back();
                        estack.pop_back();
                        comp.push_back(e);
                        if (e == pe) break;
                    }
                    comps.push_back(std::move(comp));
                }
            }
        }
    }
    return comps;
}

int level(const Network& n) {
    auto es = n.edges();
    int best = 0;
    for (const auto& comp : biconnected_components(n)) {
        std::set<int> nodes;
        for (int e : comp) {
            nodes.insert(es[static_cast<std::size_t>(e)].first);
            nodes.insert(es[static_cast<std::size_t>(e)].second);
        }
        best = std::max(best, static_cast<int>(comp.size()) - static_cast<int>(nodes.size()) + 1);
    }
    return best;
}

namespace {

// Count nontrivial (edge-containing) components of the undirected graph
// after removing a node or an edge.
int nontrivial_components_after_removal(const Network& n, int removed_node, int removed_edge) {
    const int nn = n.node_count();
    auto adj = undirected_adj(n);
    std::vector<int> comp(static_cast<std::size_t>(nn), -1);
    int count_nontrivial = 0;
    for (int s = 0; s < nn; ++s) {
        if (s == removed_node || comp[static_cast<std::size_t>(s)] >= 0) continue;
        bool has_edge = false;
        std::vector<int> stack{s};
        comp[static_cast<std::size_t>(s)] = s;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [w, e] : adj[static_cast<std::size_t>(v)]) {
                if (e == removed_edge || w == removed_node) continue;
                has_edge = true;
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = s;
                    stack.push_back(w);
                }
            }
        }
        if (has_edge) ++count_nontrivial;
    }
    return count_nontrivial;
}

} // namespace

bool is_simple(const Network& n) {
    const int nn = n.node_count();
    for (int v = 0; v < nn; ++v) {
        if (nontrivial_components_after_removal(n, v, -1) > 1) return false;
    }
    const int ne = n.edge_count();
    for (int e = 0; e < ne; ++e) {
        if (nontrivial_components_after_removal(n, -1, e) > 1) return false;
    }
    return true;
}

Network tree_from_hierarchy(const std::vector<TaxonSet>& clusters, const TaxonSet& taxa) {
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (!clusters[i].subset_of(taxa)) throw std::invalid_argument("cluster outside taxa");
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            if (!compatible(clusters[i], clusters[j])) {
                throw std::invalid_argument("tree_from_hierarchy: incompatible clusters");
            }
        }
    }

    // Internal nodes: the non-singleton proper subsets, largest first.
    std::vector<TaxonSet> internal;
    for (const auto& c : clusters) {
        if (c.count() >= 2 && !(c == taxa)) internal.push_back(c);
    }
    std::sort(internal.begin(), internal.end());
    internal.erase(std::unique(internal.begin(), internal.end()), internal.end());
    std::stable_sort(internal.begin(), internal.end(),
                     [](const TaxonSet& a, const TaxonSet& b) { return a.count() > b.count(); });

    struct ProtoNode {
        TaxonSet span;
        std::vector<int> children; // proto ids
        int leaf_taxon = -1;
    };
    std::vector<ProtoNode> proto;
    proto.push_back({taxa, {}, -1}); // 0 = root
    // Parent of each internal cluster: the smallest strictly containing one.
    for (const auto& c : internal) {
        int parent = 0;
        for (std::size_t i = 1; i < proto.size(); ++i) {
            const auto& span = proto[i].span;
            if (c.subset_of(span) && !(c == span) &&
                span.subset_of(proto[static_cast<std::size_t>(parent)].span)) {
                // among containing nodes pick the smallest (processed largest
                // first, so simply the latest container)
                parent = static_cast<int>(i);
            }
        }
        proto.push_back({c, {}, -1});
        proto[static_cast<std::size_t>(parent)].children.push_back(static_cast<int>(proto.size()) - 1);
    }
    // Leaves: each taxon under the smallest cluster containing it.
    for (int t : taxa.members()) {
        int parent = 0;
        for (std::size_t i = 1; i < proto.size(); ++i) {
            if (proto[i].leaf_taxon >= 0) continue;
            if (proto[i].span.contains(t) && proto[i].span.subset_of(proto[static_cast<std::size_t>(parent)].span)) {
                parent = static_cast<int>(i);
            }
        }
        proto.push_back({TaxonSet::single(t), {}, t});
        proto[static_cast<std::size_t>(parent)].children.push_back(static_cast<int>(proto.size()) - 1);
    }

    // Emit binary network, refining polytomies left-to-right over children
    // ordered by span.
    NetworkBuilder b;
    std::vector<int> built(proto.size(), -1);
    // Build bottom-up over proto ids in reverse creation order (children are
    // always created after parents, so reverse order works).
    for (int pi = static_cast<int>(proto.size()) - 1; pi >= 0; --pi) {
        auto& p = proto[static_cast<std::size_t>(pi)];
        if (p.leaf_taxon >= 0) {
            built[static_cast<std::size_t>(pi)] = b.add_leaf(p.leaf_taxon);
            continue;
        }
        std::vector<int> ch = p.children;
        std::sort(ch.begin(), ch.end(), [&](int x, int y) {
            return proto[static_cast<std::size_t>(x)].span < proto[static_cast<std::size_t>(y)].span;
        });
        if (ch.size() == 1) {
            // A cluster node with one child can only be the root over a
            // single internal cluster plus nothing, which cannot happen for
            // proper subsets; defensive.
            built[static_cast<std::size_t>(pi)] = built[static_cast<std::size_t>(ch[0])];
            continue;
        }
        int cur = built[static_cast<std::size_t>(ch[0])];
        for (std::size_t i = 1; i < ch.size(); ++i) {
            int join = b.add_node();
            b.add_edge(join, cur);
            b.add_edge(join, built[static_cast<std::size_t>(ch[i])]);
            cur = join;
        }
        built[static_cast<std::size_t>(pi)] = cur;
    }
    b.set_root(built[0]);
    Network n = b.build(true);

    // Flag refinement edges: any edge whose head's descendant span is not an
    // input cluster, not a singleton and not the full set.
    std::set<TaxonSet> input(clusters.begin(), clusters.end());
    auto order = n.reverse_topo();
    std::vector<TaxonSet> span(static_cast<std::size_t>(n.node_count()));
    for (int v : order) {
        if (n.label[static_cast<std::size_t>(v)] >= 0) {
            span[static_cast<std::size_t>(v)] = TaxonSet::single(n.label[static_cast<std::size_t>(v)]);
        } else {
            for (int w : n.kids[static_cast<std::size_t>(v)]) {
                if (w >= 0) span[static_cast<std::size_t>(v)] |= span[static_cast<std::size_t>(w)];
            }
        }
    }
    auto es = n.edges();
    n.edge_refined.assign(es.size(), 0);
    for (std::size_t e = 0; e < es.size(); ++e) {
        const TaxonSet& s = span[static_cast<std::size_t>(es[e].second)];
        if (s.count() >= 2 && !input.count(s)) n.edge_refined[e] = 1;
    }
    return n;
}

Network replace_leaf(const Network& host, int taxon, const Network& sub) {
    int leaf = -1;
    for (int v = 0; v < host.node_count(); ++v) {
        if (host.label[static_cast<std::size_t>(v)] == taxon) leaf = v;
    }
    if (leaf < 0) throw std::invalid_argument("replace_leaf: taxon not found");
    if (host.node_count() == 1) return sub;

    const int offset = host.node_count();
    detail::MutGraph g;
    for (int v = 0; v < host.node_count(); ++v) {
        g.add_node(v == leaf ? -1 : host.label[static_cast<std::size_t>(v)]);
    }
    for (int v = 0; v < sub.node_count(); ++v) g.add_node(sub.label[static_cast<std::size_t>(v)]);
    for (const auto& [u, v] : host.edges()) {
        g.add_edge(u, v == leaf ? (sub.root + offset) : v);
    }
    for (const auto& [u, v] : sub.edges()) g.add_edge(u + offset, v + offset);
    g.set_root(host.root);
    g.kill_node(leaf);
    Network out = g.to_network(false);
    validate_network(out, false);
    return out;
}

Network relabel_leaves(const Network& n, const std::vector<int>& map) {
    Network out = n;
    for (auto& l : out.label) {
        if (l >= 0) {
            int m = map.at(static_cast<std::size_t>(l));
            if (m < 0) throw std::invalid_argument("relabel_leaves: unmapped taxon");
            l = m;
        }
    }
    validate_network(out, false);
    return out;
}

} // namespace softnet
