#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softnet/taxa.hpp"
#include "softnet/taxon_set.hpp"

namespace softnet {

// A cluster is a nonempty proper subset of the universe. A ClusterSet is a
// deduplicated collection of clusters in which every taxon of the universe
// occurs at least once. All types here are immutable after construction.
class ClusterSet {
public:
    ClusterSet(TaxonUniversePtr universe, std::vector<TaxonSet> clusters);

    const TaxonUniverse& universe() const { return *universe_; }
    TaxonUniversePtr universe_ptr() const { return universe_; }
    const std::vector<TaxonSet>& clusters() const { return clusters_; }
    int size() const { return static_cast<int>(clusters_.size()); }
    bool contains(const TaxonSet& c) const;

    std::string to_string() const;

private:
    TaxonUniversePtr universe_;
    std::vector<TaxonSet> clusters_; // sorted, unique
};

bool compatible(const TaxonSet& c1, const TaxonSet& c2);

// True iff every cluster of the set is compatible with s.
bool set_compatible_with(const ClusterSet& cs, const TaxonSet& s);
bool set_compatible_with(const std::vector<TaxonSet>& clusters, const TaxonSet& s);

bool pairwise_compatible(const std::vector<TaxonSet>& clusters);

struct IncompatibilityGraph {
    std::vector<std::pair<int, int>> edges;    // indices into the cluster list
    std::vector<int> component;                // per cluster: component id
    int component_count = 0;

    std::vector<std::vector<int>> components_members() const;
};

IncompatibilityGraph incompatibility_graph(const ClusterSet& cs);

// Per connected component of IG(C), the union of its taxa. Always a
// compatible family.
std::vector<TaxonSet> backbone_clusters(const ClusterSet& cs);

// Intersect every cluster with s; drop empty and full-set results, merge
// duplicates. The result lives on the sub-universe s (ids unchanged).
std::vector<TaxonSet> restrict_clusters(const std::vector<TaxonSet>& clusters, const TaxonSet& s);

// x ->_C y: every non-singleton cluster containing x also contains y.
bool implies(int x, int y, const std::vector<TaxonSet>& clusters);

// For each taxon x of `universe`, the intersection of all non-singleton
// clusters containing x (the whole universe when there are none). Then
// x ->_C y iff imp[x] contains y.
std::vector<TaxonSet> implication_closure(const std::vector<TaxonSet>& clusters,
                                          const TaxonSet& universe);

// A separating cluster set is incompatible with every proper taxon subset of
// size >= 2. Decided in polynomial time via pairwise closure growth.
bool is_separating(const ClusterSet& cs);
bool is_separating(const std::vector<TaxonSet>& clusters, const TaxonSet& universe);

struct STPartition {
    std::vector<TaxonSet> blocks; // disjoint, cover the universe
};

// S is an ST-set iff S is compatible with C and C|S is pairwise compatible.
bool is_st_set(const std::vector<TaxonSet>& clusters, const TaxonSet& s);

// The unique partition of the universe into maximal ST-sets. For a pairwise
// compatible input this is the single block X.
STPartition maximal_st_sets(const ClusterSet& cs);
STPartition maximal_st_sets(const std::vector<TaxonSet>& clusters, const TaxonSet& universe);

// One collapsed meta-taxon, remembering which taxa of the parent universe it
// stands for and which clusters live strictly inside it.
struct MetaExpansion {
    std::string meta_name;            // label of the meta-taxon in the collapsed universe
    TaxonSet block;                   // taxa of the parent universe it replaces
    std::vector<TaxonSet> inner;      // parent-universe clusters strictly inside the block
};

struct CollapseResult {
    ClusterSet collapsed;
    std::vector<MetaExpansion> expansions;
    // Per collapsed-universe taxon id: the parent-universe taxa it stands for
    // (a singleton for taxa that were not collapsed).
    std::vector<TaxonSet> expanded_of;
};

// Collapse every maximal ST-set of size >= 2 into a fresh meta-taxon. The
// output is ST-collapsed and represents the same instance (r is preserved).
CollapseResult st_collapse(const ClusterSet& cs);

// Make the cluster set of a single incompatibility component separating by
// collapsing its maximal ST-sets. Throws if the input has more than one
// nontrivial incompatibility component.
CollapseResult make_separating(const ClusterSet& component);

// Helpers for building cluster sets in tests and internal pipelines.
ClusterSet make_cluster_set(const std::vector<std::string>& taxa,
                            const std::vector<std::vector<std::string>>& clusters);

} // namespace softnet
