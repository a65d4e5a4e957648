#include "softnet/cluster_set.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace softnet {

ClusterSet::ClusterSet(TaxonUniversePtr universe, std::vector<TaxonSet> clusters)
    : universe_(std::move(universe)) {
    if (!universe_) throw std::invalid_argument("null universe");
    const TaxonSet all = universe_->all();
    TaxonSet covered;
    for (const auto& c : clusters) {
        if (c.empty()) throw std::invalid_argument("empty cluster");
        if (!c.subset_of(all)) throw std::invalid_argument("cluster outside the universe");
        if (c == all) throw std::invalid_argument("cluster equals the full taxon set");
        covered |= c;
    }
    if (!(covered == all)) {
        throw std::invalid_argument("every taxon must occur in at least one cluster");
    }
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    clusters_ = std::move(clusters);
}

bool ClusterSet::contains(const TaxonSet& c) const {
    return std::binary_search(clusters_.begin(), clusters_.end(), c);
}

std::string ClusterSet::to_string() const {
    std::string out;
    for (const auto& c : clusters_) {
        if (!out.empty()) out += " ";
        out += universe_->render(c);
    }
    return out;
}

bool compatible(const TaxonSet& c1, const TaxonSet& c2) {
    return !c1.intersects(c2) || c1.subset_of(c2) || c2.subset_of(c1);
}

bool set_compatible_with(const std::vector<TaxonSet>& clusters, const TaxonSet& s) {
    for (const auto& c : clusters) {
        if (!compatible(c, s)) return false;
    }
    return true;
}

bool set_compatible_with(const ClusterSet& cs, const TaxonSet& s) {
    return set_compatible_with(cs.clusters(), s);
}

bool pairwise_compatible(const std::vector<TaxonSet>& clusters) {
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            if (!compatible(clusters[i], clusters[j])) return false;
        }
    }
    return true;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

} // namespace

IncompatibilityGraph incompatibility_graph(const ClusterSet& cs) {
    const auto& cl = cs.clusters();
    const int m = static_cast<int>(cl.size());
    IncompatibilityGraph g;
    std::vector<int> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (!compatible(cl[static_cast<std::size_t>(i)], cl[static_cast<std::size_t>(j)])) {
                g.edges.emplace_back(i, j);
                int a = find_root(parent, i), b = find_root(parent, j);
                if (a != b) parent[static_cast<std::size_t>(a)] = b;
            }
        }
    }
    g.component.assign(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        int r = find_root(parent, i);
        if (g.component[static_cast<std::size_t>(r)] < 0) {
            g.component[static_cast<std::size_t>(r)] = g.component_count++;
        }
        g.component[static_cast<std::size_t>(i)] = g.component[static_cast<std::size_t>(r)];
    }
    return g;
}

std::vector<std::vector<int>> IncompatibilityGraph::components_members() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(component_count));
    for (std::size_t i = 0; i < component.size(); ++i) {
        out[static_cast<std::size_t>(component[i])].push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<TaxonSet> backbone_clusters(const ClusterSet& cs) {
    const auto g = incompatibility_graph(cs);
    std::vector<TaxonSet> spans(static_cast<std::size_t>(g.component_count));
    for (std::size_t i = 0; i < cs.clusters().size(); ++i) {
        spans[static_cast<std::size_t>(g.component[i])] |= cs.clusters()[i];
    }
    std::sort(spans.begin(), spans.end());
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    return spans;
}

std::vector<TaxonSet> restrict_clusters(const std::vector<TaxonSet>& clusters, const TaxonSet& s) {
    std::vector<TaxonSet> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) {
        TaxonSet r = c & s;
        if (r.empty() || r == s) continue;
        out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool implies(int x, int y, const std::vector<TaxonSet>& clusters) {
    for (const auto& c : clusters) {
        if (c.count() <= 1) continue;
        if (c.contains(x) && !c.contains(y)) return false;
    }
    return true;
}

std::vector<TaxonSet> implication_closure(const std::vector<TaxonSet>& clusters,
                                          const TaxonSet& universe) {
    std::vector<TaxonSet> imp(TaxonSet::capacity, universe);
    for (const auto& c : clusters) {
        if (c.count() <= 1) continue;
        for (int x : c.members()) imp[static_cast<std::size_t>(x)] &= c;
    }
    return imp;
}

// Separating check: a compatible subset S >= {x,y} must absorb every cluster
// that straddles it, so the minimal compatible superset of each pair is the
// fixpoint of that absorption. C is separating iff every pair's fixpoint is
// the whole universe.
bool is_separating(const std::vector<TaxonSet>& clusters, const TaxonSet& universe) {
    const auto taxa = universe.members();
    const int n = static_cast<int>(taxa.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            TaxonSet s = TaxonSet::single(taxa[static_cast<std::size_t>(i)]);
            s.add(taxa[static_cast<std::size_t>(j)]);
            bool grew = true;
            while (grew) {
                grew = false;
                for (const auto& c : clusters) {
                    if (!compatible(c, s)) {
                        s |= c;
                        grew = true;
                    }
                }
            }
            if (!(s == universe)) return false; // s is a compatible proper subset, |s| >= 2
        }
    }
    return true;
}

bool is_separating(const ClusterSet& cs) {
    return is_separating(cs.clusters(), cs.universe().all());
}

ClusterSet make_cluster_set(const std::vector<std::string>& taxa,
                            const std::vector<std::vector<std::string>>& clusters) {
    auto uni = std::make_shared<TaxonUniverse>(taxa);
    std::vector<TaxonSet> sets;
    sets.reserve(clusters.size());
    for (const auto& c : clusters) {
        TaxonSet s;
        for (const auto& t : c) s.add(uni->id_of(t));
        sets.push_back(s);
    }
    return ClusterSet(std::move(uni), std::move(sets));
}

} // namespace softnet
