#pragma once

#include <vector>

#include "softnet/network.hpp"

namespace softnet::detail {

// Mutable scratch graph for building and tidying networks: supports node and
// edge deletion, suppression of (1,1) nodes, parallel-edge dropping and root
// trimming. Tracks, per surviving edge, the original edge ids it absorbed.
class MutGraph {
public:
    struct Edge {
        int tail = -1, head = -1;
        bool alive = false;
        std::vector<int> origin;
    };

    static MutGraph from_network(const Network& n);

    int add_node(int label = -1);
    int add_edge(int u, int v, std::vector<int> origin = {});
    void kill_edge(int e);
    void kill_node(int v); // with incident edges

    int node_label(int v) const { return label_[static_cast<std::size_t>(v)]; }
    void set_root(int r) { root_ = r; }
    int root() const { return root_; }

    int indeg(int v) const { return static_cast<int>(in_[static_cast<std::size_t>(v)].size()); }
    int outdeg(int v) const { return static_cast<int>(out_[static_cast<std::size_t>(v)].size()); }
    const std::vector<int>& out_edges(int v) const { return out_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& in_edges(int v) const { return in_[static_cast<std::size_t>(v)]; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    bool node_alive(int v) const { return alive_[static_cast<std::size_t>(v)]; }

    // Deletes unlabeled sinks, suppresses (1,1) nodes, trims a (0,1) root,
    // and (when drop_parallel) reduces double edges to single ones; repeats
    // to fixpoint.
    void tidy(bool drop_parallel);

    // Compact into a Network. When edge_origin is non-null it receives, per
    // output edge, the list of absorbed original edge ids.
    Network to_network(bool require_binary, std::vector<std::vector<int>>* edge_origin = nullptr) const;

private:
    void detach(int e);
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_, in_; // edge ids
    std::vector<int> label_;
    std::vector<bool> alive_;
    int root_ = -1;
};

} // namespace softnet::detail
