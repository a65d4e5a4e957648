#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "softnet/assembly.hpp"
#include "softnet/oracle.hpp"
#include "softnet/random_net.hpp"

using namespace softnet;
using namespace softnet::testing;

TEST_CASE("minimize_level: pairwise compatible input is a tree") {
    auto cs = make_cluster_set({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "b", "c"}, {"d"}});
    auto rep = minimize_level(cs);
    REQUIRE(rep.status == SolveStatus::Found);
    CHECK(rep.parameter == 0);
    CHECK(rep.witness_reticulation == 0);
    CHECK(represents(*rep.witness, cs.clusters()));
}

TEST_CASE("minimize_level and minimize_reticulation on the single gall instance") {
    auto cs = make_cluster_set({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    auto lev = minimize_level(cs);
    REQUIRE(lev.status == SolveStatus::Found);
    CHECK(lev.parameter == 1);
    CHECK(lev.witness_level == 1);
    auto ret = minimize_reticulation(cs);
    REQUIRE(ret.status == SolveStatus::Found);
    CHECK(ret.parameter == 1);
    CHECK(ret.witness_reticulation == 1);
}

TEST_CASE("nested incompatibility components assemble into one witness") {
    // two components; the span of {{a,b},{b,c}} sits inside an ST block of
    // the other component
    auto cs = make_cluster_set({"a", "b", "c", "d", "e"},
                               {{"a", "b"}, {"b", "c"}, {"a", "b", "c", "d"}, {"d", "e"}});
    auto plan = build_decomposition_plan(cs);
    CHECK(plan.nontrivial_component_count == 2);
    CHECK(plan.tasks().size() == 2);

    auto rep = minimize_level(cs);
    REQUIRE(rep.status == SolveStatus::Found);
    CHECK(rep.parameter == 1);
    CHECK(rep.witness_level == 1);
    CHECK(rep.witness_reticulation == 2); // one reticulation per tangle
    CHECK(represents(*rep.witness, cs.clusters()));

    auto orc = oracle_min_level(cs, 2);
    CHECK(orc.minimum == rep.parameter);

    auto ret = minimize_reticulation(cs);
    REQUIRE(ret.status == SolveStatus::Found);
    auto orc_r = oracle_min_reticulation(cs, 3);
    CHECK(orc_r.minimum == ret.parameter);
    CHECK(ret.parameter >= rep.parameter); // r(C) >= l(C)
}

TEST_CASE("two disjoint components graft under a common backbone") {
    auto cs = make_cluster_set({"a", "b", "c", "d", "e", "f"},
                               {{"a", "b"}, {"b", "c"}, {"d", "e"}, {"e", "f"}});
    auto rep = minimize_level(cs);
    REQUIRE(rep.status == SolveStatus::Found);
    CHECK(rep.parameter == 1);
    CHECK(rep.witness_reticulation == 2);
    CHECK(represents(*rep.witness, cs.clusters()));

    // merge invariant: one nontrivial tangle per nontrivial component
    int tangles = 0;
    for (const auto& c : biconnected_components(*rep.witness)) {
        if (c.size() > 1) ++tangles;
    }
    CHECK(tangles == 2);
}

TEST_CASE("single component spanning the whole universe") {
    auto cs = make_cluster_set({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    auto plan = build_decomposition_plan(cs);
    REQUIRE(plan.tasks().size() == 1);
    auto local = solve_simple_level(plan.scopes[0].components[0].separated, 1);
    REQUIRE(local.found());
    Network merged = merge_local_networks(plan, {*local.witness});
    CHECK(represents(merged, cs.clusters()));
    CHECK(is_simple(merged));
}

TEST_CASE("prefilter boundaries") {
    // simple-reticulation mode: 21 clusters on 6 taxa, bound 2^{1+1}*5 = 20
    std::vector<std::string> names;
    for (int i = 0; i < 6; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < 6; ++i) rows.push_back({names[static_cast<std::size_t>(i)]});
    for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
            rows.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
        }
    }
    auto at_boundary_plus_one = make_cluster_set(names, rows); // 21
    CHECK_FALSE(prefilter(at_boundary_plus_one, 1, PrefilterMode::SimpleReticulation));
    rows.pop_back();
    auto at_boundary = make_cluster_set(names, rows); // 20
    CHECK(prefilter(at_boundary, 1, PrefilterMode::SimpleReticulation));

    // level mode: 2^{0+3}(n-1)^2 on 10 taxa = 648
    std::vector<std::string> big;
    for (int i = 0; i < 10; ++i) big.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::vector<std::string>> subsets;
    for (unsigned m = 1; m < (1u << 10) - 1 && subsets.size() < 649; ++m) {
        std::vector<std::string> row;
        for (int i = 0; i < 10; ++i) {
            if (m & (1u << i)) row.push_back(big[static_cast<std::size_t>(i)]);
        }
        subsets.push_back(row);
    }
    REQUIRE(subsets.size() == 649);
    auto level_plus_one = make_cluster_set(big, subsets);
    CHECK_FALSE(prefilter(level_plus_one, 0, PrefilterMode::Level));
    subsets.pop_back();
    // keep coverage: low masks cover every taxon already
    auto level_at = make_cluster_set(big, subsets);
    CHECK(prefilter(level_at, 0, PrefilterMode::Level));
}

TEST_CASE("minimize agrees with the oracle on random instances (both modes)") {
    std::mt19937_64 rng(83);
    AssemblyConfig cfg;
    int done = 0;
    for (int t = 0; t < 60 && done < 12; ++t) {
        RandomNetConfig ncfg;
        ncfg.n = 4 + static_cast<int>(rng() % 3);
        ncfg.max_level = 2;
        ncfg.max_total_reticulations = 2;
        Network src = random_network(rng, ncfg);
        if (reticulation_number(src) > 2) continue;
        auto cs = clusters_of_network(src, default_universe(ncfg.n));

        auto lev = minimize_level(cs, cfg);
        auto olev = oracle_min_level(cs, cfg.max_parameter);
        REQUIRE(lev.status == SolveStatus::Found);
        REQUIRE(olev.minimum.has_value());
        CHECK(lev.parameter == *olev.minimum);
        CHECK(lev.parameter <= level(src));

        auto ret = minimize_reticulation(cs, cfg);
        auto oret = oracle_min_reticulation(cs, cfg.max_parameter);
        REQUIRE(ret.status == SolveStatus::Found);
        REQUIRE(oret.minimum.has_value());
        CHECK(ret.parameter == *oret.minimum);
        CHECK(ret.parameter <= reticulation_number(src));
        CHECK(ret.parameter >= lev.parameter);
        ++done;
    }
    CHECK(done > 0);
}

TEST_CASE("solver and oracle agree on arbitrary cluster sets, including refutations") {
    std::mt19937_64 rng(555);
    AssemblyConfig cfg;
    cfg.max_parameter = 2;
    int refutations = 0;
    for (int t = 0; t < 40; ++t) {
        int n = 4 + static_cast<int>(rng() % 3);
        auto cs = random_cluster_set(rng, n, 7);
        auto lev = minimize_level(cs, cfg);
        auto ol = oracle_min_level(cs, 2);
        if (lev.status == SolveStatus::Found) {
            REQUIRE(ol.minimum.has_value());
            CHECK(lev.parameter == *ol.minimum);
        } else {
            CHECK(lev.status == SolveStatus::NoWitness);
            CHECK_FALSE(ol.minimum.has_value());
            ++refutations;
        }
        auto ret = minimize_reticulation(cs, cfg);
        auto orr = oracle_min_reticulation(cs, 2);
        if (ret.status == SolveStatus::Found) {
            REQUIRE(orr.minimum.has_value());
            CHECK(ret.parameter == *orr.minimum);
        } else {
            CHECK(ret.status == SolveStatus::NoWitness);
            CHECK_FALSE(orr.minimum.has_value());
        }
    }
    CHECK(refutations > 0); // the corpus includes genuine "no" answers
}

TEST_CASE("level and reticulation minima genuinely differ on nested tangles") {
    auto cs = make_cluster_set({"a", "b", "c", "d", "e"},
                               {{"a", "b"}, {"b", "c"}, {"a", "b", "c", "d"}, {"d", "e"}});
    auto lev = minimize_level(cs);
    auto ret = minimize_reticulation(cs);
    REQUIRE(lev.status == SolveStatus::Found);
    REQUIRE(ret.status == SolveStatus::Found);
    CHECK(lev.parameter == 1);
    CHECK(ret.parameter == 2);
}

TEST_CASE("two-taxon universe yields the cherry") {
    auto cs = make_cluster_set({"a", "b"}, {{"a"}, {"b"}});
    auto rep = minimize_level(cs);
    REQUIRE(rep.status == SolveStatus::Found);
    CHECK(rep.parameter == 0);
    CHECK(rep.witness->leaf_count() == 2);
}

TEST_CASE("budget exhaustion reports inconclusive, never a false no") {
    auto cs = nine_taxon_instance();
    AssemblyConfig cfg;
    cfg.solver.branch_cap = 1; // absurdly small
    auto rep = minimize_level(cs, cfg);
    CHECK(rep.status == SolveStatus::Inconclusive);
}
