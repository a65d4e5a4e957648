#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "softnet/oracle.hpp"
#include "softnet/random_net.hpp"
#include "softnet/solver.hpp"

using namespace softnet;
using namespace softnet::testing;
using namespace softnet::solver_detail;

namespace {

struct Fixture {
    ClusterSet cs;
    SolverConfig cfg;
    SolveStats stats;
    const Generator& gen;
    Search search;

    Fixture(ClusterSet c, const Generator& g)
        : cs(std::move(c)), gen(g), search(gen, cs.clusters(), cs.universe().all(), cfg, stats) {}
};

// side ids of the level-1 generator: two parallel edge sides then the node side
struct Level1Sides {
    int edge0, edge1, node;
};
Level1Sides level1_side_ids(const std::vector<Side>& sd) {
    Level1Sides ids{-1, -1, -1};
    for (const auto& s : sd) {
        if (s.is_node) ids.node = s.id;
        else if (s.parallel_index == 0) ids.edge0 = s.id;
        else ids.edge1 = s.id;
    }
    return ids;
}

} // namespace

TEST_CASE("guess buckets: ordering, node sides short, feasibility") {
    const auto& g = enumerate_level_generators(1)[0];
    auto sd = sides(g);
    // n = 3: the first nonempty bucket in (#long, #short) order is (0,3)
    bool earlier_bucket_nonempty = false;
    for (int L = 0; L <= 1 && !earlier_bucket_nonempty; ++L) {
        for (int S = 0; S <= 3; ++S) {
            auto b = guesses_in_bucket(sd, 3, L, S);
            if (!b.empty()) {
                CHECK(L == 0);
                CHECK(S == 3);
                earlier_bucket_nonempty = true;
                break;
            }
        }
    }
    CHECK(earlier_bucket_nonempty);

    long long total = 0;
    for (int L = 0; L <= 3; ++L) {
        for (int S = 0; S <= 3; ++S) {
            for (const auto& guess : guesses_in_bucket(sd, 9, L, S)) {
                ++total;
                for (const auto& s : sd) {
                    if (s.is_node) CHECK(guess[static_cast<std::size_t>(s.id)] == SideGuessKind::Short);
                }
                // never both sides of the parallel pair empty
                int empties = 0;
                for (const auto& s : sd) {
                    if (!s.is_node && guess[static_cast<std::size_t>(s.id)] == SideGuessKind::Empty) ++empties;
                }
                CHECK(empties <= 1);
            }
        }
    }
    CHECK(total <= 27); // 3^sides
    CHECK(total > 0);
}

TEST_CASE("hang_taxon implements the three placement cases") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);

    // empty long side: l becomes the whole sequence
    fx.search.hang_taxon(st, 0, ids.edge0);
    CHECK(st.placement[static_cast<std::size_t>(ids.edge0)] == std::vector<int>{0});
    // long side with a taxon: l prepended above it
    fx.search.hang_taxon(st, 1, ids.edge0);
    CHECK(st.placement[static_cast<std::size_t>(ids.edge0)] == std::vector<int>{1, 0});
    // node side: single taxon, side finished
    fx.search.hang_taxon(st, 2, ids.node);
    CHECK(st.placement[static_cast<std::size_t>(ids.node)] == std::vector<int>{2});
    CHECK(st.side_finished(ids.node));
    // excluded case: a short side that already has a taxon
    CHECK_THROWS_AS(fx.search.hang_taxon(st, 3, ids.node), std::logic_error);
}

TEST_CASE("add_on_side: L empty with U empty finishes the side") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    const auto& u = cs.universe();
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);
    fx.search.hang_taxon(st, u.id_of("c"), ids.node); // U becomes empty
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Active;
    st.active = ids.edge0;
    fx.search.hang_taxon(st, u.id_of("d"), ids.edge0);
    // nothing implies d, so L = L' = {} and the only move is to finish
    auto res = fx.search.add_on_side(st, ids.edge0);
    REQUIRE(res.size() == 1);
    CHECK(res[0].side_finished(ids.edge0));
    CHECK(res[0].placement[static_cast<std::size_t>(ids.edge0)] == std::vector<int>{u.id_of("d")});
}

TEST_CASE("add_on_side: |L'| >= 2 with U empty finishes the side") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "c"}, {"b", "c"}, {"c", "d"}});
    const auto& u = cs.universe();
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);
    fx.search.hang_taxon(st, u.id_of("d"), ids.node);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Active;
    st.active = ids.edge0;
    fx.search.hang_taxon(st, u.id_of("c"), ids.edge0);
    // a, b are both ->_C-minimal members of L = {a, b}
    auto res = fx.search.add_on_side(st, ids.edge0);
    REQUIRE(res.size() == 1);
    CHECK(res[0].side_finished(ids.edge0));
}

TEST_CASE("add_on_side: unique viable l goes just above x_i and the side stays active") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    const auto& u = cs.universe();
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);
    fx.search.hang_taxon(st, u.id_of("c"), ids.node);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Active;
    st.active = ids.edge0;
    fx.search.hang_taxon(st, u.id_of("b"), ids.edge0);
    // L = {a}, B(a) = empty, N(a,s) represents the restriction
    auto res = fx.search.add_on_side(st, ids.edge0);
    REQUIRE(res.size() == 1);
    CHECK_FALSE(res[0].side_finished(ids.edge0));
    CHECK(res[0].placement[static_cast<std::size_t>(ids.edge0)] ==
          std::vector<int>{u.id_of("a"), u.id_of("b")});
}

TEST_CASE("complete_side finishes the side in every member") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    const auto& u = cs.universe();
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Active;
    st.active = ids.edge0;
    fx.search.hang_taxon(st, u.id_of("b"), ids.edge0);
    auto res = fx.search.complete_side(st, ids.edge0);
    CHECK(!res.empty());
    for (const auto& m : res) CHECK(m.side_finished(ids.edge0));
}

TEST_CASE("collapse and de-collapse of a finished side") {
    auto cs = make_cluster_set({"w", "x", "y", "z"}, {{"x", "y", "z"}, {"y", "z"}, {"w"}});
    const auto& u = cs.universe();
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Active;
    st.active = ids.edge0;
    fx.search.hang_taxon(st, u.id_of("z"), ids.edge0);
    fx.search.hang_taxon(st, u.id_of("y"), ids.edge0);
    fx.search.hang_taxon(st, u.id_of("x"), ids.edge0);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Finished;
    auto before = st;
    fx.search.collapse_finished_side(st, ids.edge0);
    const int meta = meta_base + ids.edge0;
    CHECK(st.placement[static_cast<std::size_t>(ids.edge0)] == std::vector<int>{meta});
    // cluster {x,y,z} became the singleton {S}; {y,z} straddles as a suffix
    // and becomes {S} as well; universe cluster {S,w} would be dropped
    TaxonSet meta_single = TaxonSet::single(meta);
    CHECK(std::count(st.clusters.begin(), st.clusters.end(), meta_single) == 1);
    CHECK(st.universe.contains(meta));
    CHECK_FALSE(st.universe.contains(u.id_of("x")));
    CHECK(fx.stats.suffix_straddles >= 0);

    fx.search.de_collapse(st);
    CHECK(st.placement == before.placement);
    CHECK(st.universe == before.universe);
    CHECK(st.clusters == before.clusters);
}

TEST_CASE("collapse rewrites a straddling suffix cluster with outside taxa") {
    // side [x,y,z]; cluster {x,y,z,w} -> {S,w}... with a larger universe so
    // the rewrite is not the full set
    auto cs = make_cluster_set({"v", "w", "x", "y", "z"},
                               {{"x", "y", "z", "w"}, {"y", "z"}, {"v"}});
    const auto& u = cs.universe();
    Fixture fx(cs, enumerate_level_generators(1)[0]);
    auto ids = level1_side_ids(fx.search.sides_list());
    std::vector<SideGuessKind> guess(3, SideGuessKind::Short);
    guess[static_cast<std::size_t>(ids.edge0)] = SideGuessKind::Long;
    auto st = fx.search.initial(guess);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Active;
    st.active = ids.edge0;
    fx.search.hang_taxon(st, u.id_of("z"), ids.edge0);
    fx.search.hang_taxon(st, u.id_of("y"), ids.edge0);
    fx.search.hang_taxon(st, u.id_of("x"), ids.edge0);
    st.status[static_cast<std::size_t>(ids.edge0)] = SideStatus::Finished;
    fx.search.collapse_finished_side(st, ids.edge0);
    const int meta = meta_base + ids.edge0;
    TaxonSet expect = TaxonSet::single(meta);
    expect.add(u.id_of("w"));
    CHECK(std::count(st.clusters.begin(), st.clusters.end(), expect) == 1);
}

TEST_CASE("solve_simple_level finds the gall for {{a,b},{b,c}} at k=1") {
    auto cs = make_cluster_set({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    auto rep = solve_simple_level(cs, 1);
    REQUIRE(rep.found());
    const Network& w = *rep.witness;
    CHECK(is_simple(w));
    CHECK(level(w) == 1);
    CHECK(represents(w, cs.clusters()));
    // witness found in the minimal bucket (0 long sides, 3 short sides)
    CHECK(rep.witness_bucket == std::pair<int, int>{0, 3});
}

TEST_CASE("solve_simple_reticulation finds r=1 for {{a,b},{b,c}}") {
    auto cs = make_cluster_set({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    auto rep = solve_simple_reticulation(cs, 1);
    REQUIRE(rep.found());
    CHECK(reticulation_number(*rep.witness) == 1);
    CHECK(represents(*rep.witness, cs.clusters()));
}

TEST_CASE("solver preconditions are enforced") {
    auto not_sep = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
    CHECK_THROWS_AS(solve_simple_level(not_sep, 1), std::invalid_argument);
    // {d,e} is a nontrivial maximal ST-set, so this is not ST-collapsed
    auto not_stc = make_cluster_set({"a", "b", "c", "d", "e"}, {{"a", "b"}, {"b", "c"}, {"d", "e"}});
    CHECK_THROWS_AS(solve_simple_reticulation(not_stc, 1), std::invalid_argument);
}

TEST_CASE("cluster-count prefilter rejects instantly") {
    // all singletons plus all pairs on 6 taxa: 21 clusters, separating,
    // and 21 > 2^{1+1}(6-1) = 20
    std::vector<std::string> names;
    for (int i = 0; i < 6; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < 6; ++i) rows.push_back({names[static_cast<std::size_t>(i)]});
    for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
            rows.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
        }
    }
    auto big = make_cluster_set(names, rows);
    REQUIRE(big.size() == 21);
    REQUIRE(is_separating(big));
    auto rep = solve_simple_level(big, 1);
    CHECK(rep.status == SolveStatus::NoWitness);
    CHECK(rep.stats.guesses_tried == 0);
}

TEST_CASE("candidate_first_taxa covers every realizable first taxon (oracle cross-check)") {
    std::mt19937_64 rng(73);
    int scenarios = 0;
    for (int t = 0; t < 30 && scenarios < 8; ++t) {
        RandomNetConfig ncfg;
        ncfg.n = 4 + static_cast<int>(rng() % 2);
        ncfg.max_level = 1;
        ncfg.max_total_reticulations = 1;
        Network src = random_network(rng, ncfg);
        if (reticulation_number(src) != 1) continue;
        auto cs = clusters_of_network(src, default_universe(ncfg.n));
        if (!is_separating(cs)) continue;

        const auto& g = enumerate_level_generators(1)[0];
        SolverConfig cfg;
        SolveStats stats;
        Search search(g, cs.clusters(), cs.universe().all(), cfg, stats);
        const auto& sd = search.sides_list();
        for (int L = 1; L <= 2; ++L) {
            for (int S = 0; S <= ncfg.n; ++S) {
                for (const auto& guess : guesses_in_bucket(sd, ncfg.n, L, S)) {
                    auto st = search.initial(guess);
                    int s = search.lowest_side(st);
                    if (s < 0) continue;
                    TaxonSet cand = search.candidate_first_taxa(st, s);
                    // brute force: every completion respecting this guess
                    // that represents the clusters must have its bottom
                    // taxon on s among the candidates
                    std::vector<int> taxa;
                    for (int i = 0; i < ncfg.n; ++i) taxa.push_back(i);
                    long long found_first = 0;
                    std::vector<std::vector<int>> seq(sd.size());
                    std::function<bool(std::size_t)> rec = [&](std::size_t idx) -> bool {
                        if (idx == taxa.size()) {
                            for (const auto& sdd : sd) {
                                std::size_t len = seq[static_cast<std::size_t>(sdd.id)].size();
                                SideGuessKind k = guess[static_cast<std::size_t>(sdd.id)];
                                if (k == SideGuessKind::Empty && len != 0) return false;
                                if (k == SideGuessKind::Short && len != 1) return false;
                                if (k == SideGuessKind::Long && len < 2) return false;
                            }
                            Network n = complete_generator(g, sd, seq, false);
                            if (represents(n, cs.clusters())) {
                                int bottom = seq[static_cast<std::size_t>(s)].back();
                                CHECK(cand.contains(bottom));
                                ++found_first;
                            }
                            return false;
                        }
                        for (const auto& sdd : sd) {
                            auto& q = seq[static_cast<std::size_t>(sdd.id)];
                            if (sdd.is_node) {
                                if (!q.empty()) continue;
                                q.push_back(taxa[idx]);
                                rec(idx + 1);
                                q.pop_back();
                            } else {
                                for (std::size_t pos = 0; pos <= q.size(); ++pos) {
                                    q.insert(q.begin() + static_cast<std::ptrdiff_t>(pos), taxa[idx]);
                                    rec(idx + 1);
                                    q.erase(q.begin() + static_cast<std::ptrdiff_t>(pos));
                                }
                            }
                        }
                        return false;
                    };
                    rec(0);
                    if (found_first > 0) ++scenarios;
                }
            }
        }
    }
    CHECK(scenarios > 0);
}

TEST_CASE("solver agrees with the oracle on derived instances") {
    std::mt19937_64 rng(79);
    int done = 0;
    for (int t = 0; t < 30 && done < 10; ++t) {
        RandomNetConfig ncfg;
        ncfg.n = 4 + static_cast<int>(rng() % 3);
        ncfg.max_level = 1;
        ncfg.max_total_reticulations = 1;
        Network src = random_network(rng, ncfg);
        auto cs = clusters_of_network(src, default_universe(ncfg.n));
        if (!is_separating(cs)) continue;
        if (pairwise_compatible(cs.clusters())) continue;
        auto rep = solve_simple_level(cs, 1);
        auto orc = oracle_min_level(cs, 1);
        CHECK(rep.found() == (orc.minimum == 1));
        if (rep.found()) {
            CHECK(represents(*rep.witness, cs.clusters()));
        }
        ++done;
    }
    CHECK(done > 0);
}

TEST_CASE("found bucket is the minimal bucket with any representing completion") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    REQUIRE(is_separating(cs));
    auto rep = solve_simple_level(cs, 1);
    REQUIRE(rep.found());

    // brute force over all buckets: what is the minimal (#long, #short) with
    // a representing completion of the single level-1 generator?
    const auto& g = enumerate_level_generators(1)[0];
    auto sd = sides(g);
    std::vector<int> taxa{0, 1, 2, 3};
    std::optional<std::pair<int, int>> best;
    for (int L = 0; L <= 2 && !best; ++L) {
        for (int S = 0; S <= 4 && !best; ++S) {
            for (const auto& guess : guesses_in_bucket(sd, 4, L, S)) {
                bool any = false;
                std::vector<std::vector<int>> seq(sd.size());
                std::function<bool(std::size_t)> rec = [&](std::size_t idx) -> bool {
                    if (idx == taxa.size()) {
                        for (const auto& sdd : sd) {
                            std::size_t len = seq[static_cast<std::size_t>(sdd.id)].size();
                            SideGuessKind k = guess[static_cast<std::size_t>(sdd.id)];
                            if (k == SideGuessKind::Empty && len != 0) return false;
                            if (k == SideGuessKind::Short && len != 1) return false;
                            if (k == SideGuessKind::Long && len < 2) return false;
                        }
                        Network n = complete_generator(g, sd, seq, false);
                        if (represents(n, cs.clusters())) {
                            any = true;
                            return true;
                        }
                        return false;
                    }
                    for (const auto& sdd : sd) {
                        auto& q = seq[static_cast<std::size_t>(sdd.id)];
                        if (sdd.is_node) {
                            if (!q.empty()) continue;
                            q.push_back(taxa[idx]);
                            if (rec(idx + 1)) return true;
                            q.pop_back();
                        } else {
                            for (std::size_t pos = 0; pos <= q.size(); ++pos) {
                                q.insert(q.begin() + static_cast<std::ptrdiff_t>(pos), taxa[idx]);
                                if (rec(idx + 1)) return true;
                                q.erase(q.begin() + static_cast<std::ptrdiff_t>(pos));
                            }
                        }
                    }
                    return false;
                };
                rec(0);
                if (any) {
                    best = {L, S};
                    break;
                }
            }
        }
    }
    REQUIRE(best.has_value());
    CHECK(rep.witness_bucket == best);
}
