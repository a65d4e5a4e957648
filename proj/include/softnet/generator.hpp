#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softnet/network.hpp"

namespace softnet {

enum class GeneratorKind { Level, Reticulation };

// Multigraph skeleton of a simple level-k network (Level kind) or of a
// general network with r reticulations plus a fake root (Reticulation kind).
// At most two parallel edges between any ordered node pair.
struct Generator {
    GeneratorKind kind = GeneratorKind::Level;
    int parameter = 0;           // k or r
    int nodes = 0;
    int root = 0;                // indegree-0 node (the fake root for Reticulation kind)
    std::vector<std::pair<int, int>> edges; // sorted; parallel edges appear twice

    int edge_count() const { return static_cast<int>(edges.size()); }
    std::vector<int> indegrees() const;
    std::vector<int> outdegrees() const;
};

struct Side {
    int id = 0;                  // index in sides(g); deterministic
    bool is_node = false;
    // edge side:
    int tail = -1, head = -1;
    int parallel_index = 0;      // 0 or 1 among parallel edges
    int edge_index = -1;         // index into Generator::edges
    // node side:
    int node = -1;
};

std::vector<Side> sides(const Generator& g);

// True iff a directed path runs from the head of s to the tail of t (for a
// node side, the node itself). Node sides reach nothing.
bool side_reachable(const Generator& g, const Side& s, const Side& t);

// reach[u][v]: directed path u -> v of length >= 0.
std::vector<std::vector<bool>> reachability(const Generator& g);

// Equal strings iff the generators are isomorphic (root fixed by indegree 0).
std::string canonical_form(const Generator& g);

struct GeneratorLimits {
    int max_parameter = 4;
};

// All level-k generators up to isomorphism in canonical-form order.
const std::vector<Generator>& enumerate_level_generators(int k, const GeneratorLimits& lim = {});

// All r-reticulation generators up to isomorphism in canonical-form order.
const std::vector<Generator>& enumerate_reticulation_generators(int r, const GeneratorLimits& lim = {});

// Structural validation used by tests and the enumerator itself.
bool valid_level_generator(const Generator& g);
bool valid_reticulation_generator(const Generator& g);

std::string generator_dot(const Generator& g);
std::string generators_json(const std::vector<Generator>& gs);
std::optional<std::vector<Generator>> generators_from_json(const std::string& text);

// Disk cache keyed by (kind, parameter); returns the enumeration, reading or
// writing <dir>/generators-<kind><param>.json when dir is nonempty.
std::vector<Generator> cached_generators(GeneratorKind kind, int param, const std::string& dir,
                                         const GeneratorLimits& lim = {});

// Def-1 completion: subdivide each edge side with its ordered taxa (tail to
// head), add one leaf per node-side taxon, and for Reticulation kind delete
// the fake root. `sequences` is indexed by side id; node sides hold at most
// one taxon. Partial states are allowed when `partial` (unfilled node sides
// are tidied away, both-empty parallel pairs collapse to one edge).
Network complete_generator(const Generator& g, const std::vector<Side>& sd,
                           const std::vector<std::vector<int>>& sequences, bool partial);

} // namespace softnet
