#include "softnet/oracle.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace softnet {

namespace {

struct CompletionEnum {
    const Generator& g;
    const std::vector<Side> sd;
    const std::vector<int>& taxa;
    std::vector<std::vector<int>> seq;
    int unfilled_nodes = 0;
    std::vector<std::pair<int, int>> pairs; // side-id pairs of parallel edges
    long long yielded = 0;

    CompletionEnum(const Generator& gen, const std::vector<int>& tx)
        : g(gen), sd(sides(gen)), taxa(tx), seq(sd.size()) {
        for (const auto& s : sd) {
            if (s.is_node) ++unfilled_nodes;
            if (!s.is_node && s.parallel_index == 1) {
                for (const auto& t : sd) {
                    if (!t.is_node && t.parallel_index == 0 && t.tail == s.tail && t.head == s.head) {
                        pairs.emplace_back(t.id, s.id);
                    }
                }
            }
        }
    }

    int pairs_both_empty() const {
        int c = 0;
        for (auto [a, b] : pairs) {
            if (seq[static_cast<std::size_t>(a)].empty() && seq[static_cast<std::size_t>(b)].empty()) ++c;
        }
        return c;
    }

    // fn(net) -> true to stop. Returns true if stopped.
    bool run(std::size_t idx, const std::function<bool(const Network&)>& fn) {
        int remaining = static_cast<int>(taxa.size() - idx);
        if (remaining < unfilled_nodes + pairs_both_empty()) return false;
        if (idx == taxa.size()) {
            ++yielded;
            Network n = complete_generator(g, sd, seq, false);
            return fn(n);
        }
        int t = taxa[idx];
        for (const auto& s : sd) {
            auto& q = seq[static_cast<std::size_t>(s.id)];
            if (s.is_node) {
                if (!q.empty()) continue;
                q.push_back(t);
                --unfilled_nodes;
                bool stop = run(idx + 1, fn);
                ++unfilled_nodes;
                q.pop_back();
                if (stop) return true;
            } else {
                for (std::size_t pos = 0; pos <= q.size(); ++pos) {
                    q.insert(q.begin() + static_cast<std::ptrdiff_t>(pos), t);
                    bool stop = run(idx + 1, fn);
                    q.erase(q.begin() + static_cast<std::ptrdiff_t>(pos));
                    if (stop) return true;
                }
            }
        }
        return false;
    }
};

} // namespace

long long enumerate_completions(const Generator& g, const std::vector<int>& taxa,
                                const std::function<bool(const Network&)>& fn) {
    if (taxa.empty()) throw std::invalid_argument("enumerate_completions: need at least one taxon");
    CompletionEnum e(g, taxa);
    e.run(0, fn);
    return e.yielded;
}

ScanOutcome scan_completions(const Generator& g, const std::vector<int>& taxa,
                             const std::vector<TaxonSet>& targets, int jobs,
                             int max_reticulations_check) {
    ScanOutcome out;
    auto check = [&](const Network& n) {
        return represents(n, targets, max_reticulations_check);
    };
    if (jobs <= 1) {
        CompletionEnum e(g, taxa);
        out.found = e.run(0, [&](const Network& n) { return check(n); });
        out.enumerated = e.yielded;
        return out;
    }
    // Split the first taxon's placement choices round-robin across workers.
    // Each choice is (side, position); for the first taxon every position is
    // 0, so choices = sides.
    std::atomic<bool> stop{false};
    std::atomic<long long> total{0};
    std::atomic<bool> found{false};
    const auto sd = sides(g);
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w) {
        threads.emplace_back([&, w] {
            CompletionEnum e(g, taxa);
            for (std::size_t first = static_cast<std::size_t>(w); first < sd.size();
                 first += static_cast<std::size_t>(jobs)) {
                if (stop.load(std::memory_order_relaxed)) break;
                const auto& s = sd[first];
                auto& q = e.seq[static_cast<std::size_t>(s.id)];
                q.push_back(taxa[0]);
                if (s.is_node) --e.unfilled_nodes;
                bool hit = e.run(1, [&](const Network& n) {
                    if (stop.load(std::memory_order_relaxed)) return true;
                    return check(n);
                });
                if (s.is_node) ++e.unfilled_nodes;
                q.pop_back();
                if (hit && !stop.exchange(true)) found = true;
            }
            total += e.yielded;
        });
    }
    for (auto& t : threads) t.join();
    out.found = found.load();
    out.enumerated = total.load();
    return out;
}

namespace {

void check_caps(int universe_size, const OracleConfig& cfg, const char* what) {
    if (universe_size > cfg.max_taxa_simple) {
        throw std::invalid_argument(std::string("oracle cap exceeded for ") + what + ": " +
                                    std::to_string(universe_size) + " taxa > " +
                                    std::to_string(cfg.max_taxa_simple));
    }
}

} // namespace

OracleResult oracle_min_level(const ClusterSet& cs, int kmax, const OracleConfig& cfg) {
    OracleResult res;
    if (pairwise_compatible(cs.clusters())) {
        res.minimum = 0;
        return res;
    }
    if (cs.universe().size() > 2 * cfg.max_taxa_simple) {
        throw std::invalid_argument("oracle cap exceeded: instance too large");
    }
    auto ig = incompatibility_graph(cs);
    auto members = ig.components_members();
    int overall = 0;
    for (const auto& comp : members) {
        if (comp.size() < 2) continue; // trivial component: a tree edge
        std::vector<TaxonSet> comp_clusters;
        TaxonSet span;
        for (int i : comp) {
            comp_clusters.push_back(cs.clusters()[static_cast<std::size_t>(i)]);
            span |= cs.clusters()[static_cast<std::size_t>(i)];
        }
        // component instance on its own universe
        std::vector<std::string> names;
        for (int t : span.members()) names.push_back(cs.universe().name(t));
        auto uni = std::make_shared<TaxonUniverse>(names);
        std::vector<TaxonSet> mapped;
        for (const auto& c : comp_clusters) {
            TaxonSet m;
            for (int t : c.members()) m.add(uni->id_of(cs.universe().name(t)));
            mapped.push_back(m);
        }
        auto separated = make_separating(ClusterSet(uni, std::move(mapped)));
        check_caps(separated.collapsed.universe().size(), cfg, "component");

        std::vector<int> taxa;
        for (int t = 0; t < separated.collapsed.universe().size(); ++t) taxa.push_back(t);
        int found_k = -1;
        for (int k = 1; k <= kmax && found_k < 0; ++k) {
            for (const auto& g : enumerate_level_generators(k, cfg.limits)) {
                auto sc = scan_completions(g, taxa, separated.collapsed.clusters(), cfg.jobs,
                                           cfg.max_reticulations_check);
                if (sc.found) {
                    found_k = k;
                    ++res.witnesses_found;
                    break;
                }
                res.enumerated += sc.enumerated;
            }
        }
        if (found_k < 0) return res; // no component witness within bound
        overall = std::max(overall, found_k);
    }
    res.minimum = overall;
    return res;
}

OracleResult oracle_min_reticulation(const ClusterSet& cs, int rmax, const OracleConfig& cfg) {
    OracleResult res;
    if (pairwise_compatible(cs.clusters())) {
        res.minimum = 0;
        return res;
    }
    auto collapsed = st_collapse(cs);
    check_caps(collapsed.collapsed.universe().size(), cfg, "collapsed instance");
    std::vector<int> taxa;
    for (int t = 0; t < collapsed.collapsed.universe().size(); ++t) taxa.push_back(t);
    for (int r = 1; r <= rmax; ++r) {
        for (const auto& g : enumerate_reticulation_generators(r, cfg.limits)) {
            auto sc = scan_completions(g, taxa, collapsed.collapsed.clusters(), cfg.jobs,
                                       cfg.max_reticulations_check);
            if (sc.found) {
                res.minimum = r;
                ++res.witnesses_found;
                return res;
            }
            res.enumerated += sc.enumerated;
        }
    }
    return res;
}

} // namespace softnet
