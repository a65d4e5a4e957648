#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "softnet/cluster_set.hpp"
#include "softnet/generator.hpp"
#include "softnet/network.hpp"

namespace softnet {

enum class SideGuessKind : std::uint8_t { Empty, Short, Long };

struct SolverConfig {
    int max_parameter = 4;
    long long branch_cap = 2'000'000; // search states; exceeding it is "inconclusive", never "no"
    int max_reticulations_check = 12;
    bool deterministic = true;
    GeneratorLimits limits{};
};

struct SolveStats {
    long long generators_tried = 0;
    long long guesses_tried = 0;
    long long branches = 0;
    long long representation_checks = 0;
    long long final_candidates = 0;
    long long suffix_straddles = 0; // clusters straddling a collapsed side's taxa
    bool budget_exhausted = false;
};

enum class SolveStatus { Found, NoWitness, Inconclusive };

struct SolveReport {
    int parameter_queried = 0;
    SolveStatus status = SolveStatus::NoWitness;
    std::optional<Network> witness; // labels are the instance universe's taxon ids
    std::optional<std::pair<int, int>> witness_bucket; // (#long, #short) of the found guess
    SolveStats stats;

    bool found() const { return status == SolveStatus::Found; }
};

// Does a binary simple level-k network representing the separating set exist?
// Returns the first witness in side-minimality order.
SolveReport solve_simple_level(const ClusterSet& cs, int k, const SolverConfig& cfg = {});

// Does a binary network with reticulation number exactly r representing the
// ST-collapsed set exist?
SolveReport solve_simple_reticulation(const ClusterSet& cs, int r, const SolverConfig& cfg = {});

// All valid guesses of one (#long, #short) bucket for the given sides, in
// lexicographic side order. Node sides are always short; a parallel pair is
// never both empty; the taxon count must be placeable.
std::vector<std::vector<SideGuessKind>> guesses_in_bucket(const std::vector<Side>& sd, int n_taxa,
                                                          int n_long, int n_short);

// ---- white-box surface for the per-operation tests ----
namespace solver_detail {

constexpr int meta_base = 64;  // collapsed side s gets meta-taxon id meta_base + s
constexpr int dummy_base = 96; // placeholder taxa for the N*(l,s) check

enum class SideStatus : std::uint8_t { EmptyFixed, Future, Active, Finished };

struct SearchState {
    std::vector<SideGuessKind> guess;
    std::vector<SideStatus> status;
    std::vector<std::vector<int>> placement; // per side, top (nearest tail) to bottom
    TaxonSet placed;
    TaxonSet universe;
    std::vector<TaxonSet> clusters;
    std::vector<std::pair<int, std::vector<int>>> collapsed; // (side, original sequence)
    int active = -1;

    bool side_finished(int s) const {
        return status[static_cast<std::size_t>(s)] == SideStatus::EmptyFixed ||
               status[static_cast<std::size_t>(s)] == SideStatus::Finished;
    }
};

class Search {
public:
    Search(const Generator& g, const std::vector<TaxonSet>& clusters, const TaxonSet& universe,
           const SolverConfig& cfg, SolveStats& stats);

    SearchState initial(const std::vector<SideGuessKind>& guess) const;

    // N(l,s): hang l on side s (short: its single taxon, finishing the side;
    // long: prepended above the current top taxon).
    void hang_taxon(SearchState& st, int taxon, int side) const;

    // Algorithm 1. Side s must be the active side and every long side
    // reachable from it finished.
    std::vector<SearchState> add_on_side(const SearchState& st, int side);

    // Algorithm 2: iterate add_on_side until s is finished in every member.
    std::vector<SearchState> complete_side(const SearchState& st, int side);

    // Lemma-5 candidate set for the first (bottom) taxon of a lowest side.
    TaxonSet candidate_first_taxa(const SearchState& st, int side) const;

    // Replace a finished long side's taxa by one meta-taxon, rewriting the
    // cluster set.
    void collapse_finished_side(SearchState& st, int side);

    // Restore every collapsed side and the original cluster set.
    void de_collapse(SearchState& st) const;

    // Unfinished long side with no other unfinished long side reachable
    // from it (smallest id), or -1.
    int lowest_side(const SearchState& st) const;

    // Unfinished sides != s reachable from s.
    std::vector<int> unfinished_reachable(const SearchState& st, int side) const;

    // Binary network for the current placements (collapsed view).
    Network materialize_partial(const SearchState& st) const;

    // Run the full search for one guess; returns a witness passing all
    // validation, or nothing.
    std::optional<Network> run_guess(const std::vector<SideGuessKind>& guess);

    bool budget_exceeded() const;

    const std::vector<Side>& sides_list() const { return sd_; }

private:
    bool partial_represents(const SearchState& st, const TaxonSet& support);
    std::optional<Network> finalize(SearchState st);

    const Generator& gen_;
    std::vector<Side> sd_;
    std::vector<TaxonSet> reachable_; // per side: bitset over side ids
    std::vector<TaxonSet> original_clusters_;
    TaxonSet original_universe_;
    const SolverConfig& cfg_;
    SolveStats& stats_;
};

} // namespace solver_detail

} // namespace softnet
