#include "softnet/random_net.hpp"

#include <algorithm>
#include <cassert>

#include "softnet/generator.hpp"

namespace softnet {

namespace {

Network single_leaf(int taxon) {
    NetworkBuilder b;
    int v = b.add_leaf(taxon);
    b.set_root(v);
    return b.build(true);
}

Network join_under_root(const Network& a, const Network& bn) {
    NetworkBuilder b;
    int root = b.add_node();
    std::vector<int> ma(static_cast<std::size_t>(a.node_count()));
    for (int v = 0; v < a.node_count(); ++v) ma[static_cast<std::size_t>(v)] = b.add_node(a.label[static_cast<std::size_t>(v)]);
    std::vector<int> mb(static_cast<std::size_t>(bn.node_count()));
    for (int v = 0; v < bn.node_count(); ++v) mb[static_cast<std::size_t>(v)] = b.add_node(bn.label[static_cast<std::size_t>(v)]);
    for (const auto& [u, v] : a.edges()) b.add_edge(ma[static_cast<std::size_t>(u)], ma[static_cast<std::size_t>(v)]);
    for (const auto& [u, v] : bn.edges()) b.add_edge(mb[static_cast<std::size_t>(u)], mb[static_cast<std::size_t>(v)]);
    b.add_edge(root, ma[static_cast<std::size_t>(a.root)]);
    b.add_edge(root, mb[static_cast<std::size_t>(bn.root)]);
    b.set_root(root);
    return b.build(true);
}

struct Sampler {
    std::mt19937_64& rng;
    const RandomNetConfig& cfg;
    int retic_budget;

    int uniform(int lo, int hi) { // inclusive
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Network build(std::vector<int> taxa) {
        if (taxa.size() == 1) return single_leaf(taxa[0]);
        std::shuffle(taxa.begin(), taxa.end(), rng);
        bool try_blob = static_cast<int>(taxa.size()) >= 3 && retic_budget >= 1 && cfg.max_level >= 1 &&
                        std::uniform_real_distribution<double>(0, 1)(rng) < cfg.blob_probability;
        if (try_blob) {
            int kmax = std::min(cfg.max_level, retic_budget);
            int k = uniform(1, kmax);
            const auto& gens = enumerate_level_generators(k);
            const Generator& g = gens[static_cast<std::size_t>(uniform(0, static_cast<int>(gens.size()) - 1))];
            auto sd = sides(g);
            // part slots: every node side takes one, every parallel pair one
            std::vector<int> node_sides, edge_sides;
            std::vector<std::pair<int, int>> pairs; // side ids of parallel pairs
            for (const auto& s : sd) {
                if (s.is_node) node_sides.push_back(s.id);
                else edge_sides.push_back(s.id);
            }
            for (const auto& s : sd) {
                if (!s.is_node && s.parallel_index == 1) {
                    for (const auto& t : sd) {
                        if (!t.is_node && t.parallel_index == 0 && t.tail == s.tail && t.head == s.head) {
                            pairs.emplace_back(t.id, s.id);
                        }
                    }
                }
            }
            int min_parts = static_cast<int>(node_sides.size() + pairs.size());
            if (static_cast<int>(taxa.size()) >= std::max(min_parts, 1)) {
                retic_budget -= k;
                int t = uniform(std::max(min_parts, 1), static_cast<int>(taxa.size()));
                // random partition of taxa into t nonempty parts
                std::vector<std::vector<int>> parts(static_cast<std::size_t>(t));
                for (int i = 0; i < t; ++i) parts[static_cast<std::size_t>(i)].push_back(taxa[static_cast<std::size_t>(i)]);
                for (std::size_t i = static_cast<std::size_t>(t); i < taxa.size(); ++i) {
                    parts[static_cast<std::size_t>(uniform(0, t - 1))].push_back(taxa[i]);
                }
                // assign parts to side slots with temporary labels 64+i
                std::vector<std::vector<int>> seq(sd.size());
                int next = 0;
                for (int sid : node_sides) seq[static_cast<std::size_t>(sid)].push_back(64 + next++);
                for (auto [s0, s1] : pairs) {
                    seq[static_cast<std::size_t>(rng() % 2 ? s0 : s1)].push_back(64 + next++);
                }
                while (next < t) {
                    int sid = edge_sides[static_cast<std::size_t>(uniform(0, static_cast<int>(edge_sides.size()) - 1))];
                    seq[static_cast<std::size_t>(sid)].push_back(64 + next++);
                }
                Network host = complete_generator(g, sd, seq, false);
                for (int i = 0; i < t; ++i) {
                    host = replace_leaf(host, 64 + i, build(std::move(parts[static_cast<std::size_t>(i)])));
                }
                return host;
            }
        }
        int cut = uniform(1, static_cast<int>(taxa.size()) - 1);
        std::vector<int> left(taxa.begin(), taxa.begin() + cut);
        std::vector<int> right(taxa.begin() + cut, taxa.end());
        return join_under_root(build(std::move(left)), build(std::move(right)));
    }
};

} // namespace

Network random_network(std::mt19937_64& rng, const RandomNetConfig& cfg) {
    std::vector<int> taxa;
    for (int i = 0; i < cfg.n; ++i) taxa.push_back(i);
    Sampler s{rng, cfg, cfg.max_total_reticulations};
    Network n = s.build(std::move(taxa));
    validate_network(n, true);
    assert(level(n) <= cfg.max_level);
    return n;
}

TaxonUniversePtr default_universe(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        if (n <= 26) {
            names.push_back(std::string(1, static_cast<char>('a' + i)));
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "t%02d", i);
            names.push_back(buf);
        }
    }
    return std::make_shared<TaxonUniverse>(names);
}

ClusterSet clusters_of_network(const Network& net, TaxonUniversePtr uni, int max_reticulations) {
    auto sw = softwired_clusters(net, max_reticulations);
    return ClusterSet(std::move(uni), std::move(sw));
}

} // namespace softnet
