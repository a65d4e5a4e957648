#pragma once

#include <random>
#include <string>
#include <vector>

#include "softnet/cluster_set.hpp"

namespace softnet::testing {

// ---- independent brute-force oracles (subset enumeration, n <= ~7) ----

inline bool bf_is_st_set(const std::vector<TaxonSet>& clusters, const TaxonSet& s) {
    for (const auto& c : clusters) {
        if (!compatible(c, s)) return false;
    }
    auto restricted = restrict_clusters(clusters, s);
    return pairwise_compatible(restricted);
}

// All maximal ST-sets by enumerating every subset of the universe.
inline std::vector<TaxonSet> bf_maximal_st_sets(const std::vector<TaxonSet>& clusters,
                                                const TaxonSet& universe) {
    auto taxa = universe.members();
    const int n = static_cast<int>(taxa.size());
    std::vector<TaxonSet> st;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        TaxonSet s;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) s.add(taxa[static_cast<std::size_t>(i)]);
        }
        if (bf_is_st_set(clusters, s)) st.push_back(s);
    }
    std::vector<TaxonSet> maximal;
    for (const auto& a : st) {
        bool strict_superset_exists = false;
        for (const auto& b : st) {
            if (a.subset_of(b) && !(a == b)) { strict_superset_exists = true; break; }
        }
        if (!strict_superset_exists) maximal.push_back(a);
    }
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
    return maximal;
}

inline bool bf_is_separating(const std::vector<TaxonSet>& clusters, const TaxonSet& universe) {
    auto taxa = universe.members();
    const int n = static_cast<int>(taxa.size());
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) { // proper nonempty subsets
        TaxonSet s;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) s.add(taxa[static_cast<std::size_t>(i)]);
        }
        if (s.count() < 2) continue;
        if (set_compatible_with(clusters, s)) return false;
    }
    return true;
}

// Random cluster set over n taxa (guarantees coverage and proper subsets).
inline ClusterSet random_cluster_set(std::mt19937_64& rng, int n, int max_clusters) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    std::uniform_int_distribution<int> csize(1, std::max(1, n - 1));
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> count(1, max_clusters);
    while (true) {
        std::vector<TaxonSet> sets;
        int m = count(rng);
        for (int i = 0; i < m; ++i) {
            TaxonSet s;
            int sz = csize(rng);
            for (int j = 0; j < sz; ++j) s.add(pick(rng));
            if (!s.empty() && s.count() < n) sets.push_back(s);
        }
        TaxonSet covered;
        for (const auto& s : sets) covered |= s;
        for (int i = 0; i < n; ++i) {
            if (!covered.contains(i)) sets.push_back(TaxonSet::single(i));
        }
        if (sets.empty()) continue;
        auto uni = std::make_shared<TaxonUniverse>(names);
        return ClusterSet(uni, sets);
    }
}

inline TaxonSet ts(const TaxonUniverse& u, const std::vector<std::string>& names) {
    TaxonSet s;
    for (const auto& n : names) s.add(u.id_of(n));
    return s;
}

// The running 13-cluster example instance on taxa a..i.
inline ClusterSet nine_taxon_instance() {
    return make_cluster_set({"a", "b", "c", "d", "e", "f", "g", "h", "i"},
                            {{"a", "b", "f", "g", "i"},
                             {"a", "b", "c", "f", "g", "i"},
                             {"a", "b", "f", "i"},
                             {"b", "c", "f", "i"},
                             {"c", "d", "e", "h"},
                             {"d", "e", "h"},
                             {"b", "c", "f", "h", "i"},
                             {"b", "c", "d", "f", "h", "i"},
                             {"b", "c", "i"},
                             {"a", "g"},
                             {"b", "i"},
                             {"c", "i"},
                             {"d", "h"}});
}

} // namespace softnet::testing
