#pragma once

#include <optional>
#include <vector>

#include "softnet/cluster_set.hpp"
#include "softnet/network.hpp"
#include "softnet/solver.hpp"

namespace softnet {

// Divide-and-conquer plan for level minimization: a tree of scopes. Each
// scope covers a taxon subset with the clusters strictly inside it; its
// maximal nontrivial incompatibility components are made separating, their
// ST blocks of size >= 2 recurse into child scopes.
struct DecompositionPlan {
    struct Component {
        TaxonSet span;              // global ids
        ClusterSet separated;       // local collapsed universe
        std::vector<TaxonSet> block_of_local; // local taxon id -> global taxa
        std::vector<int> child_scope_of_local; // local taxon id -> scope index or -1
    };
    struct Scope {
        TaxonSet taxa;                  // global ids
        std::vector<TaxonSet> clusters; // global ids
        bool hierarchy_only = false;    // pairwise compatible scope
        std::vector<Component> components; // maximal nontrivial components
        std::vector<TaxonSet> out_clusters; // clusters under no component span
    };
    std::vector<Scope> scopes; // [0] is the root
    int nontrivial_component_count = 0;

    // flattened solve tasks: (scope, component) pairs in deterministic order
    std::vector<std::pair<int, int>> tasks() const;
};

DecompositionPlan build_decomposition_plan(const ClusterSet& cs);

// Graft the solved local simple networks into the backbone hierarchy,
// expanding every collapsed block. `locals` is indexed like plan.tasks().
// The result is binary and is checked to represent every input cluster.
Network merge_local_networks(const DecompositionPlan& plan, const std::vector<Network>& locals,
                             int max_reticulations_check = 12);

enum class PrefilterMode { Level, SimpleReticulation };

// False iff the cluster count already exceeds what any witness with the
// queried parameter could represent.
bool prefilter(const ClusterSet& cs, int parameter, PrefilterMode mode);

struct AssemblyConfig {
    SolverConfig solver{};
    int max_parameter = 4;
};

struct MinimizeReport {
    SolveStatus status = SolveStatus::NoWitness; // NoWitness = refuted up to the limit
    int parameter = -1;
    std::optional<Network> witness; // original universe ids
    int witness_level = -1;
    int witness_reticulation = -1;
    bool exhaustive = true; // every refutation below `parameter` was exhaustive
    SolveStats stats;
    int parameter_limit = 0;
};

// Smallest k admitting a level-k network representing the clusters, with a
// witness; iterates k = 0, 1, ... up to the configured limit.
MinimizeReport minimize_level(const ClusterSet& cs, const AssemblyConfig& cfg = {});

// Smallest reticulation number, via the ST-collapsed instance and
// r-reticulation generators.
MinimizeReport minimize_reticulation(const ClusterSet& cs, const AssemblyConfig& cfg = {});

} // namespace softnet
