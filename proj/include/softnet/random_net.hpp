#pragma once

#include <random>

#include "softnet/cluster_set.hpp"
#include "softnet/network.hpp"

namespace softnet {

struct RandomNetConfig {
    int n = 6;                  // number of taxa
    int max_level = 2;          // level bound for every tangle
    int max_total_reticulations = 10;
    double blob_probability = 0.6;
};

// Deterministic pseudo-random binary network of level <= max_level on taxa
// 0..n-1, built by grafting random generator completions into a random tree
// scaffold. Validated binary.
Network random_network(std::mt19937_64& rng, const RandomNetConfig& cfg);

// Universe with names a, b, ... (n <= 26) or t00, t01, ...
TaxonUniversePtr default_universe(int n);

// The instance a network induces: its softwired cluster set.
ClusterSet clusters_of_network(const Network& net, TaxonUniversePtr uni, int max_reticulations = 12);

} // namespace softnet
