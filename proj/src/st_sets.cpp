#include "softnet/cluster_set.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace softnet {

bool is_st_set(const std::vector<TaxonSet>& clusters, const TaxonSet& s) {
    return set_compatible_with(clusters, s) && pairwise_compatible(restrict_clusters(clusters, s));
}

// Fixpoint merging: start from singletons, merge two blocks whenever their
// union is an ST-set. Uniqueness of the maximal partition makes the merge
// order irrelevant, and any refinement of a maximal ST-set always admits a
// further merge, so the fixpoint is the maximal partition itself.
STPartition maximal_st_sets(const std::vector<TaxonSet>& clusters, const TaxonSet& universe) {
    std::vector<TaxonSet> blocks;
    for (int t : universe.members()) blocks.push_back(TaxonSet::single(t));
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < blocks.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < blocks.size() && !merged; ++j) {
                TaxonSet u = blocks[i] | blocks[j];
                if (is_st_set(clusters, u)) {
                    blocks[i] = u;
                    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                }
            }
        }
    }
    std::sort(blocks.begin(), blocks.end());
    return STPartition{std::move(blocks)};
}

STPartition maximal_st_sets(const ClusterSet& cs) {
    return maximal_st_sets(cs.clusters(), cs.universe().all());
}

namespace {

CollapseResult collapse_blocks(const ClusterSet& cs, const STPartition& part) {
    const auto& uni = cs.universe();

    // Degenerate case: the whole universe is one ST-set (pairwise compatible
    // input). Collapsing it would leave a one-taxon instance; callers take
    // the level-0 path instead, so this is the identity.
    if (part.blocks.size() == 1 && part.blocks[0] == uni.all()) {
        CollapseResult r{cs, {}, {}};
        for (int i = 0; i < uni.size(); ++i) r.expanded_of.push_back(TaxonSet::single(i));
        return r;
    }

    std::vector<std::string> new_names;
    std::set<std::string> taken;
    std::vector<std::pair<TaxonSet, std::string>> meta_blocks; // block -> meta name
    for (const auto& b : part.blocks) {
        if (b.count() == 1) {
            const std::string& nm = uni.name(b.lowest());
            new_names.push_back(nm);
            taken.insert(nm);
        }
    }
    for (const auto& b : part.blocks) {
        if (b.count() < 2) continue;
        std::string nm = "@" + uni.name(b.lowest());
        while (taken.count(nm)) nm += "+";
        taken.insert(nm);
        new_names.push_back(nm);
        meta_blocks.emplace_back(b, nm);
    }

    auto new_uni = std::make_shared<TaxonUniverse>(new_names);

    // Old id -> new id for kept taxa; block -> new meta id.
    std::vector<int> kept_map(static_cast<std::size_t>(uni.size()), -1);
    for (const auto& b : part.blocks) {
        if (b.count() == 1) {
            int old = b.lowest();
            kept_map[static_cast<std::size_t>(old)] = new_uni->id_of(uni.name(old));
        }
    }

    std::vector<TaxonSet> mapped;
    for (const auto& c : cs.clusters()) {
        TaxonSet m;
        for (int t : c.members()) {
            if (kept_map[static_cast<std::size_t>(t)] >= 0) m.add(kept_map[static_cast<std::size_t>(t)]);
        }
        for (const auto& [block, name] : meta_blocks) {
            if (c.intersects(block)) m.add(new_uni->id_of(name));
        }
        assert(!(m == new_uni->all()));
        mapped.push_back(m);
    }

    CollapseResult r{ClusterSet(new_uni, std::move(mapped)), {}, {}};
    for (const auto& [block, name] : meta_blocks) {
        MetaExpansion e;
        e.meta_name = name;
        e.block = block;
        for (const auto& c : cs.clusters()) {
            if (c.subset_of(block) && !(c == block)) e.inner.push_back(c);
        }
        r.expansions.push_back(std::move(e));
    }
    for (int i = 0; i < new_uni->size(); ++i) {
        const std::string& nm = new_uni->name(i);
        auto it = std::find_if(meta_blocks.begin(), meta_blocks.end(),
                               [&](const auto& p) { return p.second == nm; });
        if (it != meta_blocks.end()) {
            r.expanded_of.push_back(it->first);
        } else {
            r.expanded_of.push_back(TaxonSet::single(uni.id_of(nm)));
        }
    }
    return r;
}

} // namespace

CollapseResult st_collapse(const ClusterSet& cs) {
    return collapse_blocks(cs, maximal_st_sets(cs));
}

CollapseResult make_separating(const ClusterSet& component) {
    const auto ig = incompatibility_graph(component);
    if (ig.component_count != 1) {
        throw std::invalid_argument("make_separating: input spans more than one incompatibility component");
    }
    CollapseResult r = st_collapse(component);
    if (!is_separating(r.collapsed)) {
        throw std::logic_error("make_separating: collapse did not produce a separating set");
    }
    return r;
}

} // namespace softnet
