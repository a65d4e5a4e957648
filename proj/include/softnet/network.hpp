#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "softnet/taxon_set.hpp"

namespace softnet {

// Rooted binary phylogenetic network: a DAG with one indegree-0 node, no
// (1,1) nodes, no multi-edges, and outdegree-0 nodes (leaves) carrying
// distinct taxon ids. Immutable after construction.
struct Network {
    int root = -1;
    std::vector<std::array<int, 2>> kids; // -1 = unused slot
    std::vector<int> label;               // taxon id per node, -1 = internal
    std::vector<std::uint8_t> edge_refined; // set by tree_from_hierarchy: per-edge refinement flag

    int node_count() const { return static_cast<int>(kids.size()); }
    int outdeg(int v) const {
        return (kids[static_cast<std::size_t>(v)][0] >= 0 ? 1 : 0) +
               (kids[static_cast<std::size_t>(v)][1] >= 0 ? 1 : 0);
    }
    bool is_leaf(int v) const { return outdeg(v) == 0; }

    // Edges in deterministic order: per node, slot 0 then slot 1.
    std::vector<std::pair<int, int>> edges() const;
    int edge_count() const;
    std::vector<int> indegrees() const;
    std::vector<std::array<int, 2>> parents() const;

    TaxonSet leaf_set() const;
    int leaf_count() const { return leaf_set().count(); }

    // Reverse-topological node order (children before parents).
    std::vector<int> reverse_topo() const;
};

class NetworkBuilder {
public:
    int add_node(int label = -1);
    int add_leaf(int taxon) { return add_node(taxon); }
    void add_edge(int u, int v);
    void set_root(int r) { root_ = r; }

    // Validates the structural invariants and returns the network.
    Network build(bool require_binary = true) const;

private:
    std::vector<std::array<int, 2>> kids_;
    std::vector<int> label_;
    int root_ = -1;
};

// Throws std::invalid_argument on violation.
void validate_network(const Network& n, bool require_binary);

// r(N) = |E| - |V| + 1; asserted equal to the indegree-excess sum.
int reticulation_number(const Network& n);

// Edge partition into biconnected components of the undirected graph.
// Each component is a list of edge indices (into Network::edges()).
std::vector<std::vector<int>> biconnected_components(const Network& n);

// Max reticulation number over biconnected components, degrees counted
// within the component.
int level(const Network& n);

// Removing any cut-node or cut-edge leaves at most one nontrivial
// (edge-containing) component.
bool is_simple(const Network& n);

struct DisplayedTree {
    Network tree;
    // Per tree edge (indexing tree.edges()): the network edges it came from.
    std::vector<std::vector<int>> edge_origin;
};

// One displayed tree per switching (duplicates not removed). Throws if the
// reticulation count exceeds max_reticulations.
void for_each_displayed_tree(const Network& n, const std::function<void(const DisplayedTree&)>& fn,
                             int max_reticulations = 12);
std::vector<DisplayedTree> displayed_trees(const Network& n, int max_reticulations = 12);

// All clusters represented in the softwired sense, excluding the full leaf
// set; sorted. Throws if r(N) exceeds max_reticulations.
std::vector<TaxonSet> softwired_clusters(const Network& n, int max_reticulations = 12);

// True iff every target cluster appears among the softwired clusters.
// Short-circuits false when |targets| > 2^{r+1}(n-1).
bool represents(const Network& n, const std::vector<TaxonSet>& targets, int max_reticulations = 12);

// Missing clusters (those not represented), for reporting.
std::vector<TaxonSet> unrepresented_clusters(const Network& n, const std::vector<TaxonSet>& targets,
                                             int max_reticulations = 12);

// The unique tree representing a pairwise compatible cluster family over
// `taxa`, refined to binary form (refinement edges flagged in edge_refined).
// Throws if some pair is incompatible.
Network tree_from_hierarchy(const std::vector<TaxonSet>& clusters, const TaxonSet& taxa);

// Replace the leaf carrying `taxon` by the root of `sub` (node ids of `sub`
// are shifted). Label sets must stay disjoint.
Network replace_leaf(const Network& host, int taxon, const Network& sub);

// Rewrite leaf labels through `map` (indexed by old taxon id; -1 forbidden).
Network relabel_leaves(const Network& n, const std::vector<int>& map);

} // namespace softnet
