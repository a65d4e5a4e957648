#include "softnet/generator.hpp"
#include "softnet/detail/mutgraph.hpp"

#include <cassert>
#include <stdexcept>

namespace softnet {

Network complete_generator(const Generator& g, const std::vector<Side>& sd,
                           const std::vector<std::vector<int>>& sequences, bool partial) {
    assert(sequences.size() == sd.size());
    detail::MutGraph mg;
    for (int v = 0; v < g.nodes; ++v) mg.add_node(-1);
    mg.set_root(g.root);

    for (const auto& s : sd) {
        const auto& seq = sequences[static_cast<std::size_t>(s.id)];
        if (s.is_node) {
            if (seq.size() > 1) throw std::invalid_argument("node side holds more than one taxon");
            if (!seq.empty()) {
                int leaf = mg.add_node(seq[0]);
                mg.add_edge(s.node, leaf);
            } else if (!partial) {
                throw std::invalid_argument("node side left empty in a full completion");
            }
            continue;
        }
        int prev = s.tail;
        for (int taxon : seq) {
            int w = mg.add_node(-1);
            int leaf = mg.add_node(taxon);
            mg.add_edge(prev, w);
            mg.add_edge(w, leaf);
            prev = w;
        }
        mg.add_edge(prev, s.head);
    }

    if (g.kind == GeneratorKind::Reticulation) {
        // Def-4: delete the fake root and its incident edge. The node below
        // it becomes the root.
        assert(mg.outdeg(g.root) == 1);
        int child = mg.edge(mg.out_edges(g.root)[0]).head;
        mg.kill_node(g.root);
        mg.set_root(child);
    }

    if (partial) {
        mg.tidy(true);
        return mg.to_network(false);
    }
    return mg.to_network(true);
}

} // namespace softnet
