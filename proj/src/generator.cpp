#include "softnet/generator.hpp"
#include "softnet/detail/mutgraph.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <map>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace softnet {

std::vector<int> Generator::indegrees() const {
    std::vector<int> d(static_cast<std::size_t>(nodes), 0);
    for (auto [u, v] : edges) {
        (void)u;
        ++d[static_cast<std::size_t>(v)];
    }
    return d;
}

std::vector<int> Generator::outdegrees() const {
    std::vector<int> d(static_cast<std::size_t>(nodes), 0);
    for (auto [u, v] : edges) {
        (void)v;
        ++d[static_cast<std::size_t>(u)];
    }
    return d;
}

std::vector<Side> sides(const Generator& g) {
    std::vector<Side> out;
    std::map<std::pair<int, int>, int> seen;
    for (int e = 0; e < g.edge_count(); ++e) {
        Side s;
        s.id = static_cast<int>(out.size());
        s.is_node = false;
        s.tail = g.edges[static_cast<std::size_t>(e)].first;
        s.head = g.edges[static_cast<std::size_t>(e)].second;
        s.parallel_index = seen[g.edges[static_cast<std::size_t>(e)]]++;
        s.edge_index = e;
        out.push_back(s);
    }
    auto in = g.indegrees();
    auto od = g.outdegrees();
    for (int v = 0; v < g.nodes; ++v) {
        if (in[static_cast<std::size_t>(v)] == 2 && od[static_cast<std::size_t>(v)] == 0) {
            Side s;
            s.id = static_cast<int>(out.size());
            s.is_node = true;
            s.node = v;
            out.push_back(s);
        }
    }
    return out;
}

std::vector<std::vector<bool>> reachability(const Generator& g) {
    std::vector<std::vector<bool>> r(static_cast<std::size_t>(g.nodes),
                                     std::vector<bool>(static_cast<std::size_t>(g.nodes), false));
    for (int v = 0; v < g.nodes; ++v) r[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = true;
    for (auto [u, v] : g.edges) r[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    for (int m = 0; m < g.nodes; ++m) {
        for (int a = 0; a < g.nodes; ++a) {
            if (!r[static_cast<std::size_t>(a)][static_cast<std::size_t>(m)]) continue;
            for (int b = 0; b < g.nodes; ++b) {
                if (r[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)]) {
                    r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
                }
            }
        }
    }
    return r;
}

bool side_reachable(const Generator& g, const Side& s, const Side& t) {
    if (s.id == t.id) throw std::invalid_argument("side_reachable: s == t");
    if (s.is_node) return false; // node sides have no outgoing reachability
    auto r = reachability(g);
    int from = s.head;
    int to = t.is_node ? t.node : t.tail;
    return r[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
}

namespace {

// --- canonical form (individualization-refinement over <= 12-node multigraphs) ---

struct CanonCtx {
    int n = 0;
    // adjacency multiplicity matrix
    std::vector<std::vector<int>> mult;

    std::vector<int> refine(std::vector<int> color) const {
        while (true) {
            // signature per node: (color, sorted out-(mult,color), sorted in-(mult,color))
            std::vector<std::tuple<int, std::vector<std::pair<int, int>>, std::vector<std::pair<int, int>>, int>> sig;
            sig.reserve(static_cast<std::size_t>(n));
            for (int v = 0; v < n; ++v) {
                std::vector<std::pair<int, int>> os, is;
                for (int w = 0; w < n; ++w) {
                    if (mult[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) {
                        os.emplace_back(color[static_cast<std::size_t>(w)],
                                        mult[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]);
                    }
                    if (mult[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)]) {
                        is.emplace_back(color[static_cast<std::size_t>(w)],
                                        mult[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)]);
                    }
                }
                std::sort(os.begin(), os.end());
                std::sort(is.begin(), is.end());
                sig.emplace_back(color[static_cast<std::size_t>(v)], std::move(os), std::move(is), v);
            }
            auto sorted = sig;
            std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
                return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
                       std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
            });
            std::vector<int> next(static_cast<std::size_t>(n));
            int c = 0;
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                if (i > 0 && std::tie(std::get<0>(sorted[i - 1]), std::get<1>(sorted[i - 1]), std::get<2>(sorted[i - 1])) !=
                                 std::tie(std::get<0>(sorted[i]), std::get<1>(sorted[i]), std::get<2>(sorted[i]))) {
                    ++c;
                }
                next[static_cast<std::size_t>(std::get<3>(sorted[i]))] = c;
            }
            if (next == color) return color;
            color = std::move(next);
        }
    }

    // encode adjacency under the permutation implied by a discrete coloring
    std::string encode(const std::vector<int>& color) const {
        std::vector<int> pos(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) pos[static_cast<std::size_t>(color[static_cast<std::size_t>(v)])] = v;
        std::string s;
        s += static_cast<char>('0' + n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                int m = mult[static_cast<std::size_t>(pos[static_cast<std::size_t>(a)])]
                            [static_cast<std::size_t>(pos[static_cast<std::size_t>(b)])];
                if (m) {
                    s += static_cast<char>('a' + a);
                    s += static_cast<char>('a' + b);
                    s += static_cast<char>('0' + m);
                }
            }
        }
        return s;
    }

    void search(std::vector<int> color, std::string& best) const {
        color = refine(color);
        // find smallest non-singleton class
        std::vector<int> count(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) ++count[static_cast<std::size_t>(color[static_cast<std::size_t>(v)])];
        int target = -1;
        for (int c = 0; c < n; ++c) {
            if (count[static_cast<std::size_t>(c)] > 1) { target = c; break; }
        }
        if (target < 0) {
            std::string enc = encode(color);
            if (best.empty() || enc < best) best = enc;
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (color[static_cast<std::size_t>(v)] != target) continue;
            auto next = color;
            // individualize v: shift every class >= target+? give v its own color
            for (int w = 0; w < n; ++w) {
                if (next[static_cast<std::size_t>(w)] > target ||
                    (next[static_cast<std::size_t>(w)] == target && w != v)) {
                    ++next[static_cast<std::size_t>(w)];
                }
            }
            search(std::move(next), best);
        }
    }
};

} // namespace

std::string canonical_form(const Generator& g) {
    CanonCtx ctx;
    ctx.n = g.nodes;
    ctx.mult.assign(static_cast<std::size_t>(g.nodes),
                    std::vector<int>(static_cast<std::size_t>(g.nodes), 0));
    for (auto [u, v] : g.edges) {
        ++ctx.mult[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    }
    auto in = g.indegrees();
    auto od = g.outdegrees();
    std::vector<std::pair<std::pair<int, int>, int>> deg;
    for (int v = 0; v < g.nodes; ++v) {
        deg.push_back({{in[static_cast<std::size_t>(v)], od[static_cast<std::size_t>(v)]}, v});
    }
    auto sorted = deg;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> color(static_cast<std::size_t>(g.nodes));
    int c = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i - 1].first != sorted[i].first) ++c;
        color[static_cast<std::size_t>(sorted[i].second)] = c;
    }
    std::string best;
    ctx.search(std::move(color), best);
    std::string prefix = (g.kind == GeneratorKind::Level ? "L" : "R") + std::to_string(g.parameter) + ":";
    return prefix + best;
}

namespace {

// Articulation check on the undirected multigraph.
bool multigraph_biconnected(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n == 1) return true;
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        auto [u, v] = edges[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(u)].emplace_back(v, e);
        adj[static_cast<std::size_t>(v)].emplace_back(u, e);
    }
    std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    int timer = 0;
    bool ok = true;
    struct Frame { int v, pe; std::size_t i; int children = 0; };
    std::vector<Frame> st{{0, -1, 0, 0}};
    disc[0] = low[0] = timer++;
    while (!st.empty() && ok) {
        auto& f = st.back();
        if (f.i < adj[static_cast<std::size_t>(f.v)].size()) {
            auto [w, e] = adj[static_cast<std::size_t>(f.v)][f.i++];
            if (e == f.pe) continue;
            if (disc[static_cast<std::size_t>(w)] < 0) {
                ++f.children;
                disc[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = timer++;
                st.push_back({w, e, 0, 0});
            } else {
                low[static_cast<std::size_t>(f.v)] =
                    std::min(low[static_cast<std::size_t>(f.v)], disc[static_cast<std::size_t>(w)]);
            }
        } else {
            Frame done = f;
            st.pop_back();
            if (st.empty()) {
                if (done.children > 1) ok = false; // DFS root articulation
                break;
            }
            auto& par = st.back();
            low[static_cast<std::size_t>(par.v)] =
                std::min(low[static_cast<std::size_t>(par.v)], low[static_cast<std::size_t>(done.v)]);
            if (st.size() > 1 && low[static_cast<std::size_t>(done.v)] >= disc[static_cast<std::size_t>(par.v)]) {
                ok = false; // par.v is an articulation (non-root)
            }
        }
    }
    if (!ok) return false;
    for (int v = 0; v < n; ++v) {
        if (disc[static_cast<std::size_t>(v)] < 0) return false; // disconnected
    }
    return true;
}

bool check_degrees(const Generator& g, bool level_kind) {
    auto in = g.indegrees();
    auto od = g.outdegrees();
    int retics = 0;
    for (int v = 0; v < g.nodes; ++v) {
        int i = in[static_cast<std::size_t>(v)], o = od[static_cast<std::size_t>(v)];
        if (v == g.root) {
            if (i != 0) return false;
            if (level_kind ? o != 2 : o != 1) return false;
        } else if (i == 2) {
            if (o > 1) return false;
            ++retics;
        } else if (i == 1) {
            if (o != 2) return false;
        } else {
            return false;
        }
    }
    if (retics != g.parameter) return false;
    // at most two parallel edges per ordered pair, no self loops
    std::map<std::pair<int, int>, int> mult;
    for (auto e : g.edges) {
        if (e.first == e.second) return false;
        if (++mult[e] > 2) return false;
    }
    return true;
}

bool is_dag(const Generator& g) {
    std::vector<int> indeg = g.indegrees();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.nodes));
    for (auto [u, v] : g.edges) adj[static_cast<std::size_t>(u)].push_back(v);
    std::vector<int> q;
    for (int v = 0; v < g.nodes; ++v) {
        if (indeg[static_cast<std::size_t>(v)] == 0) q.push_back(v);
    }
    int seen = 0;
    while (!q.empty()) {
        int v = q.back();
        q.pop_back();
        ++seen;
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (--indeg[static_cast<std::size_t>(w)] == 0) q.push_back(w);
        }
    }
    return seen == g.nodes;
}

} // namespace

bool valid_level_generator(const Generator& g) {
    return g.kind == GeneratorKind::Level && check_degrees(g, true) && is_dag(g) &&
           multigraph_biconnected(g.nodes, g.edges);
}

bool valid_reticulation_generator(const Generator& g) {
    return g.kind == GeneratorKind::Reticulation && check_degrees(g, false) && is_dag(g);
}

namespace {

// Enumerate all multigraphs for one degree-type layout via lexicographic
// multiplicity backtracking over node pairs (i, j), i < j. Types fix the
// required in/out degree of each node; acyclicity is built in.
void enumerate_layout(GeneratorKind kind, int param, int nnodes, const std::vector<int>& need_in,
                      const std::vector<int>& need_out, std::map<std::string, Generator>& out) {
    std::vector<int> rin = need_in, rout = need_out;
    std::vector<std::pair<int, int>> edges;

    std::function<void(int, int)> rec = [&](int i, int j) {
        if (i == nnodes - 1) {
            // all pairs decided
            bool done = true;
            for (int v = 0; v < nnodes; ++v) {
                if (rin[static_cast<std::size_t>(v)] || rout[static_cast<std::size_t>(v)]) done = false;
            }
            if (!done) return;
            Generator g;
            g.kind = kind;
            g.parameter = param;
            g.nodes = nnodes;
            g.root = 0;
            g.edges = edges;
            std::sort(g.edges.begin(), g.edges.end());
            bool ok = (kind == GeneratorKind::Level) ? valid_level_generator(g)
                                                     : valid_reticulation_generator(g);
            if (ok) {
                std::string c = canonical_form(g);
                out.emplace(std::move(c), std::move(g));
            }
            return;
        }
        if (j == nnodes) {
            if (rout[static_cast<std::size_t>(i)] != 0) return; // row must be exhausted
            rec(i + 1, i + 2);
            return;
        }
        // remaining suppliers for j after this pair: i+1..j-1
        int max_future_supply = 2 * std::max(0, j - i - 1);
        int maxm = std::min({2, rout[static_cast<std::size_t>(i)], rin[static_cast<std::size_t>(j)]});
        for (int m = 0; m <= maxm; ++m) {
            if (rin[static_cast<std::size_t>(j)] - m > max_future_supply) continue;
            // row i must still be placeable among targets j+1..n-1
            if (rout[static_cast<std::size_t>(i)] - m > 2 * (nnodes - 1 - j)) continue;
            for (int c = 0; c < m; ++c) edges.emplace_back(i, j);
            rout[static_cast<std::size_t>(i)] -= m;
            rin[static_cast<std::size_t>(j)] -= m;
            rec(i, j + 1);
            rout[static_cast<std::size_t>(i)] += m;
            rin[static_cast<std::size_t>(j)] += m;
            for (int c = 0; c < m; ++c) edges.pop_back();
        }
    };
    if (nnodes >= 2) rec(0, 1);
}

std::vector<Generator> enumerate_generators(GeneratorKind kind, int param) {
    std::map<std::string, Generator> found;
    const bool level = (kind == GeneratorKind::Level);
    // node counts: level V = 2k-1+h0 (h0 sinks), retic V = 2r+h0.
    for (int h0 = (level ? 1 : 1); h0 <= param; ++h0) {
        int t = level ? (param - 2 + h0) : (param + h0 - 1);
        if (t < 0) continue;
        int nnodes = 1 + t + param;
        int h1 = param - h0;
        // positions: 0 = root; last h0 positions = indeg-2/outdeg-0 sinks;
        // middle positions get tree / indeg-2-outdeg-1 types in all ways.
        int middle = nnodes - 1 - h0;
        assert(middle == t + h1);
        std::vector<int> pick(static_cast<std::size_t>(middle), 0);
        std::fill(pick.begin(), pick.begin() + h1, 1); // 1 = reticulation with outdeg 1
        std::sort(pick.begin(), pick.end());
        do {
            std::vector<int> need_in(static_cast<std::size_t>(nnodes)), need_out(static_cast<std::size_t>(nnodes));
            need_in[0] = 0;
            need_out[0] = level ? 2 : 1;
            for (int m = 0; m < middle; ++m) {
                int v = 1 + m;
                if (pick[static_cast<std::size_t>(m)] == 1) {
                    need_in[static_cast<std::size_t>(v)] = 2;
                    need_out[static_cast<std::size_t>(v)] = 1;
                } else {
                    need_in[static_cast<std::size_t>(v)] = 1;
                    need_out[static_cast<std::size_t>(v)] = 2;
                }
            }
            for (int s = 0; s < h0; ++s) {
                int v = 1 + middle + s;
                need_in[static_cast<std::size_t>(v)] = 2;
                need_out[static_cast<std::size_t>(v)] = 0;
            }
            enumerate_layout(kind, param, nnodes, need_in, need_out, found);
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    std::vector<Generator> out;
    out.reserve(found.size());
    for (auto& [c, g] : found) {
        (void)c;
        out.push_back(std::move(g));
    }
    return out;
}

std::mutex cache_mutex;
std::map<std::pair<GeneratorKind, int>, std::vector<Generator>> memo;

} // namespace

const std::vector<Generator>& enumerate_level_generators(int k, const GeneratorLimits& lim) {
    if (k < 1 || k > lim.max_parameter) {
        throw std::invalid_argument("level generator parameter out of range [1," +
                                    std::to_string(lim.max_parameter) + "]");
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(GeneratorKind::Level, k);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, enumerate_generators(GeneratorKind::Level, k)).first;
    return it->second;
}

const std::vector<Generator>& enumerate_reticulation_generators(int r, const GeneratorLimits& lim) {
    if (r < 1 || r > lim.max_parameter) {
        throw std::invalid_argument("reticulation generator parameter out of range [1," +
                                    std::to_string(lim.max_parameter) + "]");
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(GeneratorKind::Reticulation, r);
    auto it = memo.find(key);
    if (it == memo.end()) {
        it = memo.emplace(key, enumerate_generators(GeneratorKind::Reticulation, r)).first;
    }
    return it->second;
}

std::string generator_dot(const Generator& g) {
    std::string out = "digraph generator {\n";
    auto in = g.indegrees();
    auto od = g.outdegrees();
    for (int v = 0; v < g.nodes; ++v) {
        out += "  n" + std::to_string(v);
        if (in[static_cast<std::size_t>(v)] >= 2 && od[static_cast<std::size_t>(v)] == 0) {
            out += " [shape=doublecircle, label=\"\", width=0.15]";
        } else if (v == g.root) {
            out += " [shape=square, label=\"\", width=0.12]";
        } else {
            out += " [shape=point]";
        }
        out += ";\n";
    }
    for (auto [u, v] : g.edges) {
        out += "  n" + std::to_string(u) + " -> n" + std::to_string(v) + ";\n";
    }
    out += "}\n";
    return out;
}

std::string generators_json(const std::vector<Generator>& gs) {
    nlohmann::json j;
    j["format"] = "softnet-generators";
    j["version"] = 1;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : gs) {
        nlohmann::json e;
        e["kind"] = g.kind == GeneratorKind::Level ? "level" : "reticulation";
        e["parameter"] = g.parameter;
        e["nodes"] = g.nodes;
        e["root"] = g.root;
        nlohmann::json edges = nlohmann::json::array();
        for (auto [u, v] : g.edges) edges.push_back({u, v});
        e["edges"] = std::move(edges);
        arr.push_back(std::move(e));
    }
    j["generators"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::optional<std::vector<Generator>> generators_from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        if (j.at("format") != "softnet-generators") return std::nullopt;
        std::vector<Generator> out;
        for (const auto& e : j.at("generators")) {
            Generator g;
            g.kind = e.at("kind") == "level" ? GeneratorKind::Level : GeneratorKind::Reticulation;
            g.parameter = e.at("parameter").get<int>();
            g.nodes = e.at("nodes").get<int>();
            g.root = e.at("root").get<int>();
            for (const auto& ed : e.at("edges")) {
                g.edges.emplace_back(ed.at(0).get<int>(), ed.at(1).get<int>());
            }
            out.push_back(std::move(g));
        }
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<Generator> cached_generators(GeneratorKind kind, int param, const std::string& dir,
                                         const GeneratorLimits& lim) {
    if (!dir.empty()) {
        std::string path = dir + "/generators-" + (kind == GeneratorKind::Level ? "level" : "retic") +
                           std::to_string(param) + ".json";
        std::ifstream f(path);
        if (f) {
            std::stringstream ss;
            ss << f.rdbuf();
            if (auto gs = generators_from_json(ss.str())) return *gs;
        }
        const auto& gs = kind == GeneratorKind::Level ? enumerate_level_generators(param, lim)
                                                      : enumerate_reticulation_generators(param, lim);
        std::ofstream o(path);
        if (o) o << generators_json(gs);
        return gs;
    }
    return kind == GeneratorKind::Level ? enumerate_level_generators(param, lim)
                                        : enumerate_reticulation_generators(param, lim);
}

} // namespace softnet
