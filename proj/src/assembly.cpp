#include "softnet/assembly.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

namespace softnet {

namespace {

constexpr int graft_tag_base = 64; // placeholder leaf ids while splicing

struct GlobalNames {
    const TaxonUniverse* uni;
    std::string name(int id) const { return uni->name(id); }
};

// Local separated instance for one component: blocks of its ST partition
// become the local taxa.
DecompositionPlan::Component make_component(const std::vector<TaxonSet>& comp_clusters,
                                            const TaxonSet& span, const GlobalNames& names) {
    auto part = maximal_st_sets(comp_clusters, span);
    // local universe: singleton blocks keep their global name, bigger blocks
    // get a fresh meta name
    std::vector<std::string> local_names;
    std::set<std::string> taken;
    std::map<std::string, TaxonSet> block_by_name;
    for (const auto& b : part.blocks) {
        if (b.count() == 1) {
            std::string nm = names.name(b.lowest());
            local_names.push_back(nm);
            taken.insert(nm);
            block_by_name[nm] = b;
        }
    }
    for (const auto& b : part.blocks) {
        if (b.count() < 2) continue;
        std::string nm = "@" + names.name(b.lowest());
        while (taken.count(nm)) nm += "+";
        taken.insert(nm);
        local_names.push_back(nm);
        block_by_name[nm] = b;
    }
    auto local_uni = std::make_shared<TaxonUniverse>(local_names);

    std::vector<TaxonSet> mapped;
    for (const auto& c : comp_clusters) {
        TaxonSet m;
        for (int lid = 0; lid < local_uni->size(); ++lid) {
            if (c.intersects(block_by_name.at(local_uni->name(lid)))) m.add(lid);
        }
        mapped.push_back(m);
    }
    DecompositionPlan::Component comp{span, ClusterSet(local_uni, std::move(mapped)), {}, {}};
    if (!is_separating(comp.separated)) {
        throw std::logic_error("component collapse did not produce a separating instance");
    }
    comp.block_of_local.resize(static_cast<std::size_t>(local_uni->size()));
    comp.child_scope_of_local.assign(static_cast<std::size_t>(local_uni->size()), -1);
    for (int lid = 0; lid < local_uni->size(); ++lid) {
        comp.block_of_local[static_cast<std::size_t>(lid)] = block_by_name.at(local_uni->name(lid));
    }
    return comp;
}

int build_scope(DecompositionPlan& plan, TaxonSet taxa, std::vector<TaxonSet> clusters,
                const GlobalNames& names) {
    const int scope_idx = static_cast<int>(plan.scopes.size());
    plan.scopes.emplace_back();
    {
        auto& sc = plan.scopes.back();
        sc.taxa = taxa;
        sc.clusters = clusters;
    }

    if (pairwise_compatible(clusters)) {
        plan.scopes[static_cast<std::size_t>(scope_idx)].hierarchy_only = true;
        return scope_idx;
    }

    // incompatibility components over these clusters
    const int m = static_cast<int>(clusters.size());
    std::vector<int> comp_of(static_cast<std::size_t>(m), -1);
    int ncomp = 0;
    for (int i = 0; i < m; ++i) {
        if (comp_of[static_cast<std::size_t>(i)] >= 0) continue;
        std::vector<int> stack{i};
        comp_of[static_cast<std::size_t>(i)] = ncomp;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int j = 0; j < m; ++j) {
                if (comp_of[static_cast<std::size_t>(j)] >= 0) continue;
                if (!compatible(clusters[static_cast<std::size_t>(x)], clusters[static_cast<std::size_t>(j)])) {
                    comp_of[static_cast<std::size_t>(j)] = ncomp;
                    stack.push_back(j);
                }
            }
        }
        ++ncomp;
    }
    std::vector<std::vector<TaxonSet>> comp_clusters(static_cast<std::size_t>(ncomp));
    std::vector<TaxonSet> span(static_cast<std::size_t>(ncomp));
    for (int i = 0; i < m; ++i) {
        comp_clusters[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(i)])].push_back(
            clusters[static_cast<std::size_t>(i)]);
        span[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(i)])] |= clusters[static_cast<std::size_t>(i)];
    }

    // maximal spans among nontrivial components
    std::vector<int> nontrivial;
    for (int c = 0; c < ncomp; ++c) {
        if (comp_clusters[static_cast<std::size_t>(c)].size() >= 2) nontrivial.push_back(c);
    }
    std::vector<int> maximal;
    for (int c : nontrivial) {
        bool inside_other = false;
        for (int d : nontrivial) {
            if (c == d) continue;
            const auto& sc = span[static_cast<std::size_t>(c)];
            const auto& sd2 = span[static_cast<std::size_t>(d)];
            if (sc == sd2) throw std::logic_error("two nontrivial components with equal spans");
            if (sc.subset_of(sd2)) inside_other = true;
        }
        if (!inside_other) maximal.push_back(c);
    }
    // nested nontrivial components recurse through the ST blocks of their
    // enclosing maximal component; only maximal ones are solved at this
    // scope (and counted here; nested ones are counted by their own scope)
    plan.nontrivial_component_count += static_cast<int>(maximal.size());
    std::sort(maximal.begin(), maximal.end(), [&](int a, int b) {
        return span[static_cast<std::size_t>(a)] < span[static_cast<std::size_t>(b)];
    });

    for (int c : maximal) {
        auto comp = make_component(comp_clusters[static_cast<std::size_t>(c)],
                                   span[static_cast<std::size_t>(c)], names);
        for (std::size_t lid = 0; lid < comp.block_of_local.size(); ++lid) {
            const TaxonSet& block = comp.block_of_local[lid];
            if (block.count() < 2) continue;
            std::vector<TaxonSet> inner;
            for (const auto& d : clusters) {
                if (d.subset_of(block) && !(d == block)) inner.push_back(d);
                else if (d.intersects(block) && !block.subset_of(d) && !d.subset_of(block)) {
                    throw std::logic_error("cluster straddles an ST block");
                }
            }
            comp.child_scope_of_local[lid] = build_scope(plan, block, std::move(inner), names);
        }
        plan.scopes[static_cast<std::size_t>(scope_idx)].components.push_back(std::move(comp));
    }

    // clusters under no maximal span
    auto& sc = plan.scopes[static_cast<std::size_t>(scope_idx)];
    for (const auto& d : clusters) {
        bool inside = false;
        for (int c : maximal) {
            if (d.subset_of(span[static_cast<std::size_t>(c)]) && !(d == span[static_cast<std::size_t>(c)])) {
                inside = true;
            }
        }
        if (!inside) sc.out_clusters.push_back(d);
    }
    std::sort(sc.out_clusters.begin(), sc.out_clusters.end());
    sc.out_clusters.erase(std::unique(sc.out_clusters.begin(), sc.out_clusters.end()),
                          sc.out_clusters.end());
    return scope_idx;
}

} // namespace

std::vector<std::pair<int, int>> DecompositionPlan::tasks() const {
    std::vector<std::pair<int, int>> t;
    for (int s = 0; s < static_cast<int>(scopes.size()); ++s) {
        for (int c = 0; c < static_cast<int>(scopes[static_cast<std::size_t>(s)].components.size()); ++c) {
            t.emplace_back(s, c);
        }
    }
    return t;
}

DecompositionPlan build_decomposition_plan(const ClusterSet& cs) {
    DecompositionPlan plan;
    GlobalNames names{&cs.universe()};
    build_scope(plan, cs.universe().all(), cs.clusters(), names);
    return plan;
}

namespace {

Network assemble_scope(const DecompositionPlan& plan, int scope_idx,
                       const std::map<std::pair<int, int>, const Network*>& solved);

// Expand one component's local witness: local singleton taxa become global
// taxa, larger blocks become their recursively assembled subnetworks.
Network expand_component(const DecompositionPlan& plan, int scope_idx, int comp_idx,
                         const std::map<std::pair<int, int>, const Network*>& solved) {
    const auto& comp =
        plan.scopes[static_cast<std::size_t>(scope_idx)].components[static_cast<std::size_t>(comp_idx)];
    const Network* local = solved.at({scope_idx, comp_idx});
    // relabel: singleton block -> global id; bigger block -> graft tag
    std::vector<int> map(static_cast<std::size_t>(comp.separated.universe().size()), -1);
    for (std::size_t lid = 0; lid < comp.block_of_local.size(); ++lid) {
        const TaxonSet& block = comp.block_of_local[lid];
        map[lid] = block.count() == 1 ? block.lowest() : graft_tag_base + static_cast<int>(lid);
    }
    Network out = relabel_leaves(*local, map);
    for (std::size_t lid = 0; lid < comp.block_of_local.size(); ++lid) {
        if (comp.block_of_local[lid].count() < 2) continue;
        Network sub = assemble_scope(plan, comp.child_scope_of_local[lid], solved);
        out = replace_leaf(out, graft_tag_base + static_cast<int>(lid), sub);
    }
    return out;
}

Network assemble_scope(const DecompositionPlan& plan, int scope_idx,
                       const std::map<std::pair<int, int>, const Network*>& solved) {
    const auto& sc = plan.scopes[static_cast<std::size_t>(scope_idx)];
    if (sc.hierarchy_only) {
        return tree_from_hierarchy(sc.clusters, sc.taxa);
    }
    // single component spanning the whole scope: the expansion is the scope
    if (sc.components.size() == 1 && sc.components[0].span == sc.taxa) {
        return expand_component(plan, scope_idx, 0, solved);
    }
    // backbone: replace each component span by a placeholder leaf, build the
    // hierarchy over the rewritten out-clusters, then graft
    TaxonSet backbone_taxa = sc.taxa;
    for (std::size_t ci = 0; ci < sc.components.size(); ++ci) {
        backbone_taxa = backbone_taxa.minus(sc.components[ci].span);
        backbone_taxa.add(graft_tag_base + static_cast<int>(ci));
    }
    std::vector<TaxonSet> backbone_clusters;
    for (const auto& d : sc.out_clusters) {
        TaxonSet m = d;
        bool dropped = false;
        for (std::size_t ci = 0; ci < sc.components.size(); ++ci) {
            const TaxonSet& span = sc.components[ci].span;
            if (d.intersects(span)) {
                if (span.subset_of(d)) {
                    m = m.minus(span);
                    m.add(graft_tag_base + static_cast<int>(ci));
                } else if (d == span) {
                    dropped = true; // represented by the graft edge itself
                } else {
                    throw std::logic_error("out-cluster straddles a component span");
                }
            }
        }
        if (!dropped && !(m == backbone_taxa)) backbone_clusters.push_back(m);
    }
    Network backbone = tree_from_hierarchy(backbone_clusters, backbone_taxa);
    for (std::size_t ci = 0; ci < sc.components.size(); ++ci) {
        Network sub = expand_component(plan, scope_idx, static_cast<int>(ci), solved);
        backbone = replace_leaf(backbone, graft_tag_base + static_cast<int>(ci), sub);
    }
    return backbone;
}

} // namespace

Network merge_local_networks(const DecompositionPlan& plan, const std::vector<Network>& locals,
                             int max_reticulations_check) {
    auto tasks = plan.tasks();
    if (locals.size() != tasks.size()) {
        throw std::invalid_argument("merge_local_networks: one local network per component required");
    }
    std::map<std::pair<int, int>, const Network*> solved;
    for (std::size_t i = 0; i < tasks.size(); ++i) solved[tasks[i]] = &locals[i];
    Network merged = assemble_scope(plan, 0, solved);
    validate_network(merged, true);

    // each nontrivial incompatibility component corresponds to one
    // nontrivial biconnected component of the merged network
    int nontrivial_bicomps = 0;
    for (const auto& comp : biconnected_components(merged)) {
        if (comp.size() > 1) ++nontrivial_bicomps;
    }
    if (nontrivial_bicomps != plan.nontrivial_component_count) {
        throw std::logic_error("merged network tangle count does not match the decomposition");
    }

    // never assume representation: check whenever enumeration is feasible
    if (reticulation_number(merged) <= max_reticulations_check) {
        if (!represents(merged, plan.scopes[0].clusters, max_reticulations_check)) {
            throw std::logic_error("merged network fails to represent the input clusters");
        }
    }
    return merged;
}

bool prefilter(const ClusterSet& cs, int parameter, PrefilterMode mode) {
    const std::uint64_t m = static_cast<std::uint64_t>(cs.size());
    const std::uint64_t n1 = static_cast<std::uint64_t>(cs.universe().size() - 1);
    if (parameter < 0) return false;
    if (mode == PrefilterMode::Level) {
        if (parameter + 3 >= 62) return true;
        return m <= (std::uint64_t{1} << (parameter + 3)) * n1 * n1;
    }
    if (parameter + 1 >= 62) return true;
    return m <= (std::uint64_t{1} << (parameter + 1)) * n1;
}

namespace {

void finish_report(MinimizeReport& rep, const ClusterSet& cs, int check_cap) {
    if (!rep.witness) return;
    rep.witness_level = level(*rep.witness);
    rep.witness_reticulation = reticulation_number(*rep.witness);
    if (rep.witness_reticulation <= check_cap &&
        !represents(*rep.witness, cs.clusters(), check_cap)) {
        throw std::logic_error("minimization witness fails the representation check");
    }
}

} // namespace

MinimizeReport minimize_level(const ClusterSet& cs, const AssemblyConfig& cfg) {
    MinimizeReport rep;
    rep.parameter_limit = cfg.max_parameter;
    if (pairwise_compatible(cs.clusters())) {
        rep.status = SolveStatus::Found;
        rep.parameter = 0;
        rep.witness = tree_from_hierarchy(cs.clusters(), cs.universe().all());
        finish_report(rep, cs, cfg.solver.max_reticulations_check);
        return rep;
    }

    auto plan = build_decomposition_plan(cs);
    auto tasks = plan.tasks();
    std::vector<Network> locals;
    int overall = 0;
    for (auto [si, ci] : tasks) {
        const auto& comp =
            plan.scopes[static_cast<std::size_t>(si)].components[static_cast<std::size_t>(ci)];
        std::optional<Network> witness;
        for (int k = 1; k <= cfg.max_parameter; ++k) {
            if (!prefilter(comp.separated, k, PrefilterMode::SimpleReticulation)) {
                continue; // cluster count alone rules this k out, exhaustively
            }
            auto sub = solve_simple_level(comp.separated, k, cfg.solver);
            rep.stats.generators_tried += sub.stats.generators_tried;
            rep.stats.guesses_tried += sub.stats.guesses_tried;
            rep.stats.branches += sub.stats.branches;
            rep.stats.representation_checks += sub.stats.representation_checks;
            rep.stats.final_candidates += sub.stats.final_candidates;
            rep.stats.suffix_straddles += sub.stats.suffix_straddles;
            if (sub.found()) {
                witness = std::move(sub.witness);
                overall = std::max(overall, k);
                break;
            }
            if (sub.status == SolveStatus::Inconclusive) {
                rep.exhaustive = false;
                rep.stats.budget_exhausted = true;
            }
        }
        if (!witness) {
            rep.status = rep.stats.budget_exhausted ? SolveStatus::Inconclusive : SolveStatus::NoWitness;
            return rep;
        }
        locals.push_back(std::move(*witness));
    }
    rep.status = SolveStatus::Found;
    rep.parameter = overall;
    rep.witness = merge_local_networks(plan, locals, cfg.solver.max_reticulations_check);
    finish_report(rep, cs, cfg.solver.max_reticulations_check);
    if (rep.witness_level != overall) {
        throw std::logic_error("merged witness level differs from the component maximum");
    }
    return rep;
}

MinimizeReport minimize_reticulation(const ClusterSet& cs, const AssemblyConfig& cfg) {
    MinimizeReport rep;
    rep.parameter_limit = cfg.max_parameter;
    if (pairwise_compatible(cs.clusters())) {
        rep.status = SolveStatus::Found;
        rep.parameter = 0;
        rep.witness = tree_from_hierarchy(cs.clusters(), cs.universe().all());
        finish_report(rep, cs, cfg.solver.max_reticulations_check);
        return rep;
    }

    auto col = st_collapse(cs);
    for (int r = 1; r <= cfg.max_parameter; ++r) {
        if (!prefilter(col.collapsed, r, PrefilterMode::SimpleReticulation)) continue;
        auto sub = solve_simple_reticulation(col.collapsed, r, cfg.solver);
        rep.stats.generators_tried += sub.stats.generators_tried;
        rep.stats.guesses_tried += sub.stats.guesses_tried;
        rep.stats.branches += sub.stats.branches;
        rep.stats.representation_checks += sub.stats.representation_checks;
        rep.stats.final_candidates += sub.stats.final_candidates;
        rep.stats.suffix_straddles += sub.stats.suffix_straddles;
        if (sub.status == SolveStatus::Inconclusive) {
            rep.exhaustive = false;
            rep.stats.budget_exhausted = true;
            continue;
        }
        if (!sub.found()) continue;

        // expand each collapsed maximal ST-set into its hierarchy tree
        Network w = *sub.witness;
        const auto& cuni = col.collapsed.universe();
        std::vector<int> map(static_cast<std::size_t>(cuni.size()), -1);
        std::vector<std::pair<int, const MetaExpansion*>> grafts;
        for (int lid = 0; lid < cuni.size(); ++lid) {
            const MetaExpansion* exp = nullptr;
            for (const auto& e : col.expansions) {
                if (e.meta_name == cuni.name(lid)) exp = &e;
            }
            if (exp) {
                map[static_cast<std::size_t>(lid)] = graft_tag_base + lid;
                grafts.emplace_back(graft_tag_base + lid, exp);
            } else {
                map[static_cast<std::size_t>(lid)] = cs.universe().id_of(cuni.name(lid));
            }
        }
        w = relabel_leaves(w, map);
        for (auto [tag, exp] : grafts) {
            Network sub_tree = tree_from_hierarchy(exp->inner, exp->block);
            w = replace_leaf(w, tag, sub_tree);
        }
        validate_network(w, true);
        if (reticulation_number(w) != r) {
            throw std::logic_error("expansion changed the reticulation number");
        }
        rep.status = SolveStatus::Found;
        rep.parameter = r;
        rep.witness = std::move(w);
        finish_report(rep, cs, cfg.solver.max_reticulations_check);
        return rep;
    }
    rep.status = rep.stats.budget_exhausted ? SolveStatus::Inconclusive : SolveStatus::NoWitness;
    return rep;
}

} // namespace softnet
