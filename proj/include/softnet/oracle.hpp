#pragma once

#include <functional>
#include <optional>

#include "softnet/cluster_set.hpp"
#include "softnet/generator.hpp"
#include "softnet/network.hpp"

namespace softnet {

// Brute-force ground truth: exhaustive completion enumeration, independent
// of the solver's pruning machinery.
struct OracleResult {
    std::optional<int> minimum;    // empty = no witness within the bound
    long long witnesses_found = 0; // 1 when a level was settled by first hit
    long long enumerated = 0;      // completions tested on exhausted levels
};

struct OracleConfig {
    int max_taxa_full = 6;    // whole-instance cap
    int max_taxa_simple = 9;  // per-component / collapsed cap
    int max_reticulations_check = 12;
    int jobs = 1;
    GeneratorLimits limits{};
};

// Exact minimum level by per-component exhaustive enumeration, k = 0..kmax.
OracleResult oracle_min_level(const ClusterSet& cs, int kmax, const OracleConfig& cfg = {});

// Exact minimum reticulation number over all completions of all
// r-reticulation generators on the ST-collapsed input, r = 0..rmax.
OracleResult oracle_min_reticulation(const ClusterSet& cs, int rmax, const OracleConfig& cfg = {});

// Every Def-1 completion of g on the given taxa (all side assignments, all
// orderings on each side, node sides filled, no empty parallel pair). The
// visitor returns true to stop early. Returns the number of completions
// yielded. Single-threaded and deterministic.
long long enumerate_completions(const Generator& g, const std::vector<int>& taxa,
                                const std::function<bool(const Network&)>& fn);

// Parallel existence scan: does any completion of g on `taxa` represent all
// `targets`? Deterministic outcome; `enumerated` is exact when the scan
// exhausts (no witness).
struct ScanOutcome {
    bool found = false;
    long long enumerated = 0;
};
ScanOutcome scan_completions(const Generator& g, const std::vector<int>& taxa,
                             const std::vector<TaxonSet>& targets, int jobs,
                             int max_reticulations_check);

} // namespace softnet
