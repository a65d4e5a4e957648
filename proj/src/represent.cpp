#include "softnet/network.hpp"
#include "softnet/detail/mutgraph.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace softnet {

namespace detail {

MutGraph MutGraph::from_network(const Network& n) {
    MutGraph g;
    for (int v = 0; v < n.node_count(); ++v) g.add_node(n.label[static_cast<std::size_t>(v)]);
    auto es = n.edges();
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        g.add_edge(es[static_cast<std::size_t>(e)].first, es[static_cast<std::size_t>(e)].second, {e});
    }
    g.set_root(n.root);
    return g;
}

int MutGraph::add_node(int label) {
    label_.push_back(label);
    alive_.push_back(true);
    out_.emplace_back();
    in_.emplace_back();
    return static_cast<int>(label_.size()) - 1;
}

int MutGraph::add_edge(int u, int v, std::vector<int> origin) {
    int id = static_cast<int>(edges_.size());
    edges_.push_back(Edge{u, v, true, std::move(origin)});
    out_[static_cast<std::size_t>(u)].push_back(id);
    in_[static_cast<std::size_t>(v)].push_back(id);
    return id;
}

void MutGraph::detach(int e) {
    auto& ed = edges_[static_cast<std::size_t>(e)];
    auto& o = out_[static_cast<std::size_t>(ed.tail)];
    o.erase(std::find(o.begin(), o.end(), e));
    auto& i = in_[static_cast<std::size_t>(ed.head)];
    i.erase(std::find(i.begin(), i.end(), e));
    ed.alive = false;
}

void MutGraph::kill_edge(int e) {
    if (edges_[static_cast<std::size_t>(e)].alive) detach(e);
}

void MutGraph::kill_node(int v) {
    if (!alive_[static_cast<std::size_t>(v)]) return;
    auto outs = out_[static_cast<std::size_t>(v)];
    for (int e : outs) detach(e);
    auto ins = in_[static_cast<std::size_t>(v)];
    for (int e : ins) detach(e);
    alive_[static_cast<std::size_t>(v)] = false;
}

void MutGraph::tidy(bool drop_parallel) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < static_cast<int>(label_.size()); ++v) {
            if (!alive_[static_cast<std::size_t>(v)]) continue;
            if (v != root_ && outdeg(v) == 0 && label_[static_cast<std::size_t>(v)] < 0) {
                kill_node(v);
                changed = true;
            } else if (indeg(v) == 1 && outdeg(v) == 1) {
                int ein = in_[static_cast<std::size_t>(v)][0];
                int eout = out_[static_cast<std::size_t>(v)][0];
                int p = edges_[static_cast<std::size_t>(ein)].tail;
                int c = edges_[static_cast<std::size_t>(eout)].head;
                std::vector<int> origin = edges_[static_cast<std::size_t>(ein)].origin;
                origin.insert(origin.end(), edges_[static_cast<std::size_t>(eout)].origin.begin(),
                              edges_[static_cast<std::size_t>(eout)].origin.end());
                kill_edge(ein);
                kill_edge(eout);
                alive_[static_cast<std::size_t>(v)] = false;
                add_edge(p, c, std::move(origin));
                changed = true;
            }
        }
        if (root_ >= 0 && alive_[static_cast<std::size_t>(root_)]) {
            if (outdeg(root_) == 0 && label_[static_cast<std::size_t>(root_)] < 0) {
                // Fully emptied graph; leave the bare root for the caller.
            } else if (outdeg(root_) == 1 && indeg(root_) == 0 &&
                       label_[static_cast<std::size_t>(root_)] < 0) {
                int e = out_[static_cast<std::size_t>(root_)][0];
                int c = edges_[static_cast<std::size_t>(e)].head;
                kill_node(root_);
                root_ = c;
                changed = true;
            }
        }
        if (drop_parallel && !changed) {
            for (int v = 0; v < static_cast<int>(label_.size()) && !changed; ++v) {
                if (!alive_[static_cast<std::size_t>(v)]) continue;
                const auto& outs = out_[static_cast<std::size_t>(v)];
                for (std::size_t a = 0; a < outs.size() && !changed; ++a) {
                    for (std::size_t bi = a + 1; bi < outs.size() && !changed; ++bi) {
                        if (edges_[static_cast<std::size_t>(outs[a])].head ==
                            edges_[static_cast<std::size_t>(outs[bi])].head) {
                            kill_edge(outs[bi]);
                            changed = true;
                        }
                    }
                }
            }
        }
    }
}

Network MutGraph::to_network(bool require_binary, std::vector<std::vector<int>>* edge_origin) const {
    std::vector<int> map(label_.size(), -1);
    NetworkBuilder b;
    for (int v = 0; v < static_cast<int>(label_.size()); ++v) {
        if (alive_[static_cast<std::size_t>(v)]) {
            map[static_cast<std::size_t>(v)] = b.add_node(label_[static_cast<std::size_t>(v)]);
        }
    }
    if (root_ < 0 || !alive_[static_cast<std::size_t>(root_)]) {
        throw std::logic_error("MutGraph: no live root");
    }
    b.set_root(map[static_cast<std::size_t>(root_)]);
    for (const auto& e : edges_) {
        if (e.alive) {
            b.add_edge(map[static_cast<std::size_t>(e.tail)], map[static_cast<std::size_t>(e.head)]);
        }
    }
    Network n = b.build(require_binary);
    if (edge_origin) {
        // Recover per-output-edge origins by matching the deterministic edge
        // order of Network::edges().
        std::unordered_map<long long, std::vector<const Edge*>> by_pair;
        for (const auto& e : edges_) {
            if (!e.alive) continue;
            long long key = static_cast<long long>(map[static_cast<std::size_t>(e.tail)]) * 1000000 +
                            map[static_cast<std::size_t>(e.head)];
            by_pair[key].push_back(&e);
        }
        edge_origin->clear();
        for (const auto& [u, v] : n.edges()) {
            long long key = static_cast<long long>(u) * 1000000 + v;
            auto& bucket = by_pair[key];
            assert(!bucket.empty());
            edge_origin->push_back(bucket.back()->origin);
            bucket.pop_back();
        }
    }
    return n;
}

} // namespace detail

namespace {

struct SwitchingScan {
    const Network& net;
    std::vector<int> order;                  // reverse topological
    std::vector<int> retics;                 // nodes with indegree 2
    std::vector<std::array<int, 2>> pars;
    explicit SwitchingScan(const Network& n) : net(n), order(n.reverse_topo()), pars(n.parents()) {
        auto indeg = n.indegrees();
        for (int v = 0; v < n.node_count(); ++v) {
            if (indeg[static_cast<std::size_t>(v)] == 2) retics.push_back(v);
        }
    }

    // Calls fn(v, desc) for every non-root node v with nonempty switched
    // descendant set, for every switching.
    template <typename Fn>
    void scan(Fn&& fn) const {
        const std::size_t r = retics.size();
        std::vector<int> chosen(static_cast<std::size_t>(net.node_count()), -1);
        std::vector<TaxonSet> desc(static_cast<std::size_t>(net.node_count()));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
            for (std::size_t i = 0; i < r; ++i) {
                chosen[static_cast<std::size_t>(retics[i])] =
                    pars[static_cast<std::size_t>(retics[i])][(mask >> i) & 1];
            }
            for (int v : order) {
                TaxonSet d;
                int lbl = net.label[static_cast<std::size_t>(v)];
                if (lbl >= 0) {
                    d = TaxonSet::single(lbl);
                } else {
                    for (int w : net.kids[static_cast<std::size_t>(v)]) {
                        if (w < 0) continue;
                        if (chosen[static_cast<std::size_t>(w)] >= 0 &&
                            chosen[static_cast<std::size_t>(w)] != v) {
                            continue; // reticulation edge switched off
                        }
                        d |= desc[static_cast<std::size_t>(w)];
                    }
                }
                desc[static_cast<std::size_t>(v)] = d;
            }
            bool stop = false;
            for (int v : order) {
                if (v == net.root) continue;
                const TaxonSet& d = desc[static_cast<std::size_t>(v)];
                if (d.empty()) continue;
                if (fn(v, d)) { stop = true; break; }
            }
            if (stop) return;
        }
    }
};

void check_reticulation_cap(const Network& n, int cap) {
    int r = reticulation_number(n);
    if (r > cap) {
        throw std::invalid_argument("reticulation number " + std::to_string(r) +
                                    " exceeds switching enumeration cap " + std::to_string(cap));
    }
}

} // namespace

void for_each_displayed_tree(const Network& n, const std::function<void(const DisplayedTree&)>& fn,
                             int max_reticulations) {
    check_reticulation_cap(n, max_reticulations);
    auto pars = n.parents();
    auto indeg = n.indegrees();
    std::vector<int> retics;
    for (int v = 0; v < n.node_count(); ++v) {
        if (indeg[static_cast<std::size_t>(v)] == 2) retics.push_back(v);
    }
    const std::size_t r = retics.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
        detail::MutGraph g = detail::MutGraph::from_network(n);
        for (std::size_t i = 0; i < r; ++i) {
            int v = retics[i];
            int keep = pars[static_cast<std::size_t>(v)][(mask >> i) & 1];
            auto ins = g.in_edges(v);
            for (int e : ins) {
                if (g.edge(e).tail != keep) g.kill_edge(e);
            }
        }
        g.tidy(false);
        DisplayedTree dt;
        dt.tree = g.to_network(false, &dt.edge_origin);
        fn(dt);
    }
}

std::vector<DisplayedTree> displayed_trees(const Network& n, int max_reticulations) {
    std::vector<DisplayedTree> out;
    for_each_displayed_tree(n, [&](const DisplayedTree& t) { out.push_back(t); }, max_reticulations);
    return out;
}

std::vector<TaxonSet> softwired_clusters(const Network& n, int max_reticulations) {
    check_reticulation_cap(n, max_reticulations);
    const TaxonSet all = n.leaf_set();
    std::set<TaxonSet> acc;
    SwitchingScan scan(n);
    scan.scan([&](int, const TaxonSet& d) {
        if (!(d == all)) acc.insert(d);
        return false;
    });
    return std::vector<TaxonSet>(acc.begin(), acc.end());
}

bool represents(const Network& n, const std::vector<TaxonSet>& targets, int max_reticulations) {
    const int r = reticulation_number(n);
    const int nl = n.leaf_count();
    // A network with r reticulations represents at most 2^{r+1}(n-1) clusters.
    if (r + 1 < 62) {
        const std::uint64_t bound = (std::uint64_t{1} << (r + 1)) * static_cast<std::uint64_t>(std::max(0, nl - 1));
        std::set<TaxonSet> distinct(targets.begin(), targets.end());
        if (distinct.size() > bound) return false;
    }
    check_reticulation_cap(n, max_reticulations);

    std::unordered_map<TaxonSet, int, TaxonSetHash> want;
    for (std::size_t i = 0; i < targets.size(); ++i) want.emplace(targets[i], -1);
    std::size_t remaining = want.size();
    if (remaining == 0) return true;

    const TaxonSet all = n.leaf_set();
    for (const auto& [t, unused] : want) {
        (void)unused;
        if (!t.subset_of(all) || t == all || t.empty()) return false;
    }

    SwitchingScan scan(n);
    scan.scan([&](int, const TaxonSet& d) {
        auto it = want.find(d);
        if (it != want.end() && it->second < 0) {
            it->second = 0;
            if (--remaining == 0) return true;
        }
        return false;
    });
    return remaining == 0;
}

std::vector<TaxonSet> unrepresented_clusters(const Network& n, const std::vector<TaxonSet>& targets,
                                             int max_reticulations) {
    auto sw = softwired_clusters(n, max_reticulations);
    std::vector<TaxonSet> missing;
    for (const auto& t : targets) {
        if (!std::binary_search(sw.begin(), sw.end(), t)) missing.push_back(t);
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    return missing;
}

} // namespace softnet
