#include "softnet/solver.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

namespace softnet {

namespace solver_detail {

Search::Search(const Generator& g, const std::vector<TaxonSet>& clusters, const TaxonSet& universe,
               const SolverConfig& cfg, SolveStats& stats)
    : gen_(g), sd_(sides(g)), original_clusters_(clusters), original_universe_(universe),
      cfg_(cfg), stats_(stats) {
    auto reach = reachability(g);
    reachable_.assign(sd_.size(), TaxonSet{});
    for (const auto& s : sd_) {
        if (s.is_node) continue; // node sides reach nothing
        for (const auto& t : sd_) {
            if (t.id == s.id) continue;
            int to = t.is_node ? t.node : t.tail;
            if (reach[static_cast<std::size_t>(s.head)][static_cast<std::size_t>(to)]) {
                reachable_[static_cast<std::size_t>(s.id)].add(t.id);
            }
        }
    }
}

SearchState Search::initial(const std::vector<SideGuessKind>& guess) const {
    SearchState st;
    st.guess = guess;
    st.status.assign(sd_.size(), SideStatus::Future);
    for (const auto& s : sd_) {
        if (guess[static_cast<std::size_t>(s.id)] == SideGuessKind::Empty) {
            st.status[static_cast<std::size_t>(s.id)] = SideStatus::EmptyFixed;
        }
    }
    st.placement.assign(sd_.size(), {});
    st.universe = original_universe_;
    st.clusters = original_clusters_;
    return st;
}

void Search::hang_taxon(SearchState& st, int taxon, int side) const {
    auto& seq = st.placement[static_cast<std::size_t>(side)];
    SideGuessKind kind = st.guess[static_cast<std::size_t>(side)];
    if (kind == SideGuessKind::Empty) throw std::logic_error("hang_taxon on an empty-guessed side");
    if (kind == SideGuessKind::Short) {
        if (!seq.empty()) throw std::logic_error("hang_taxon on a filled short side");
        seq.push_back(taxon);
        st.status[static_cast<std::size_t>(side)] = SideStatus::Finished;
    } else {
        seq.insert(seq.begin(), taxon); // just above the current top taxon
    }
    st.placed.add(taxon);
}

std::vector<int> Search::unfinished_reachable(const SearchState& st, int side) const {
    std::vector<int> u;
    for (int t : reachable_[static_cast<std::size_t>(side)].members()) {
        if (!st.side_finished(t) && t != side &&
            st.status[static_cast<std::size_t>(t)] != SideStatus::Active) {
            u.push_back(t);
        }
    }
    return u;
}

int Search::lowest_side(const SearchState& st) const {
    for (const auto& s : sd_) {
        if (st.guess[static_cast<std::size_t>(s.id)] != SideGuessKind::Long) continue;
        if (st.side_finished(s.id)) continue;
        bool blocked = false;
        for (int t : reachable_[static_cast<std::size_t>(s.id)].members()) {
            if (st.guess[static_cast<std::size_t>(t)] == SideGuessKind::Long && !st.side_finished(t)) {
                blocked = true;
                break;
            }
        }
        if (!blocked) return s.id;
    }
    return -1;
}

Network Search::materialize_partial(const SearchState& st) const {
    return complete_generator(gen_, sd_, st.placement, true);
}

bool Search::partial_represents(const SearchState& st, const TaxonSet& support) {
    ++stats_.representation_checks;
    Network n = materialize_partial(st);
    auto targets = restrict_clusters(st.clusters, support);
    return represents(n, targets, cfg_.max_reticulations_check);
}

TaxonSet Search::candidate_first_taxa(const SearchState& st, int side) const {
    // A first taxon lies in some cluster not containing the taxon above it;
    // that cluster is confined to this side's bottom plus sides reachable
    // from here, each of which holds at most one (meta-)taxon.
    int bound = 1;
    for (int t : reachable_[static_cast<std::size_t>(side)].members()) {
        if (st.guess[static_cast<std::size_t>(t)] != SideGuessKind::Empty) ++bound;
    }
    TaxonSet unplaced = st.universe.minus(st.placed);
    TaxonSet out;
    for (const auto& c : st.clusters) {
        if (c.count() <= bound) out |= c;
    }
    return out & unplaced;
}

std::vector<SearchState> Search::add_on_side(const SearchState& st, int side) {
    assert(st.status[static_cast<std::size_t>(side)] == SideStatus::Active);
    const auto& seq = st.placement[static_cast<std::size_t>(side)];
    assert(!seq.empty());
    const int xi = seq.front(); // most recently inserted taxon

    const TaxonSet unplaced = st.universe.minus(st.placed);
    auto imp = implication_closure(st.clusters, st.universe);

    TaxonSet L;
    for (int l : unplaced.members()) {
        if (imp[static_cast<std::size_t>(l)].contains(xi)) L.add(l);
    }
    std::vector<int> Lmin; // ->_C-minimal elements of L
    for (int l : L.members()) {
        if ((imp[static_cast<std::size_t>(l)] & L).minus(TaxonSet::single(l)).empty()) {
            Lmin.push_back(l);
        }
    }
    std::vector<int> U = unfinished_reachable(st, side);

    auto B_of = [&](int l) {
        TaxonSet s_of_l;
        for (const auto& c : st.clusters) {
            if (c.contains(xi) && !c.contains(l)) s_of_l |= c;
        }
        return s_of_l & unplaced;
    };

    auto finished_copy = [&] {
        SearchState c = st;
        c.status[static_cast<std::size_t>(side)] = SideStatus::Finished;
        c.active = -1;
        return c;
    };
    auto with_l_on_s = [&](int l) {
        SearchState c = st;
        hang_taxon(c, l, side);
        return c;
    };

    std::vector<SearchState> out;
    auto emit = [&](SearchState&& c) {
        ++stats_.branches;
        out.push_back(std::move(c));
    };

    // All injective allocations of `taxa` (ascending) onto sides of U,
    // applied on top of `base`.
    auto allocate_all = [&](const SearchState& base, const std::vector<int>& taxa) {
        if (taxa.size() > U.size()) return;
        std::vector<int> idx(U.size());
        for (std::size_t i = 0; i < U.size(); ++i) idx[i] = static_cast<int>(i);
        // choose |taxa| positions out of U in every order: permutations of
        // index vector filtered to first |taxa| slots being strictly used
        std::vector<int> sel(taxa.size());
        std::function<void(std::size_t, TaxonSet)> rec = [&](std::size_t at, TaxonSet used) {
            if (at == taxa.size()) {
                SearchState c = base;
                for (std::size_t i = 0; i < taxa.size(); ++i) {
                    hang_taxon(c, taxa[i], U[static_cast<std::size_t>(sel[i])]);
                }
                emit(std::move(c));
                return;
            }
            for (std::size_t j = 0; j < U.size(); ++j) {
                if (used.contains(static_cast<int>(j))) continue;
                sel[at] = static_cast<int>(j);
                TaxonSet u2 = used;
                u2.add(static_cast<int>(j));
                rec(at + 1, u2);
            }
        };
        rec(0, TaxonSet{});
    };

    if (U.empty()) {
        if (Lmin.size() != 1) {
            emit(finished_copy());
            return out;
        }
        int l = Lmin.front();
        if (!B_of(l).empty()) {
            emit(finished_copy());
            return out;
        }
        SearchState c = with_l_on_s(l);
        TaxonSet support = st.placed | TaxonSet::single(l);
        if (!partial_represents(c, support)) {
            emit(finished_copy());
            return out;
        }
        emit(std::move(c));
        return out;
    }

    // U nonempty
    if (Lmin.empty()) {
        emit(finished_copy());
        return out;
    }
    if (Lmin.size() >= 2) {
        emit(finished_copy());
        if (Lmin.size() <= U.size()) allocate_all(st, Lmin);
        if (Lmin.size() - 1 <= U.size()) {
            for (int l : Lmin) {
                std::vector<int> rest;
                for (int m : Lmin) {
                    if (m != l) rest.push_back(m);
                }
                allocate_all(with_l_on_s(l), rest);
            }
        }
        return out;
    }

    // |L'| = 1
    int l = Lmin.front();
    TaxonSet bl = B_of(l);
    if (!bl.empty()) {
        emit(finished_copy());
        for (int u : U) {
            SearchState c = st;
            hang_taxon(c, l, u);
            emit(std::move(c));
        }
        if (bl.count() <= static_cast<int>(U.size())) {
            allocate_all(with_l_on_s(l), bl.members());
        }
        return out;
    }

    SearchState hung = with_l_on_s(l);
    TaxonSet support = st.placed | TaxonSet::single(l);
    if (!partial_represents(hung, support)) {
        emit(finished_copy());
        for (int u : U) {
            SearchState c = st;
            hang_taxon(c, l, u);
            emit(std::move(c));
        }
        return out;
    }

    // dummy-taxon probe: placeholders on every side of U
    {
        SearchState star = hung;
        int next_dummy = dummy_base;
        for (int u : U) hang_taxon(star, next_dummy++, u);
        std::vector<TaxonSet> cstar;
        for (const auto& c : st.clusters) {
            if (c.contains(xi) && !c.contains(l) && c.subset_of(st.placed)) cstar.push_back(c);
        }
        ++stats_.representation_checks;
        Network nstar = materialize_partial(star);
        if (!represents(nstar, cstar, cfg_.max_reticulations_check)) {
            emit(finished_copy());
            for (int u : U) {
                SearchState c = st;
                hang_taxon(c, l, u);
                emit(std::move(c));
            }
            return out;
        }
    }
    emit(std::move(hung));
    return out;
}

std::vector<SearchState> Search::complete_side(const SearchState& st, int side) {
    std::vector<SearchState> done;
    std::vector<SearchState> work{st};
    while (!work.empty()) {
        if (budget_exceeded()) break;
        SearchState cur = std::move(work.back());
        work.pop_back();
        if (cur.side_finished(side)) {
            done.push_back(std::move(cur));
            continue;
        }
        auto next = add_on_side(cur, side);
        // Lemma-4 accounting: a multi-member result either finishes s in the
        // member or strictly shrinks U.
        if (next.size() > 1) {
            std::size_t u_before = unfinished_reachable(cur, side).size();
            for (const auto& m : next) {
                if (!m.side_finished(side)) {
                    assert(unfinished_reachable(m, side).size() < u_before ||
                           m.placed.count() > cur.placed.count());
                }
            }
            (void)u_before;
        }
        for (auto& m : next) work.push_back(std::move(m));
    }
    return done;
}

void Search::collapse_finished_side(SearchState& st, int side) {
    auto& seq = st.placement[static_cast<std::size_t>(side)];
    if (seq.size() < 2) throw std::logic_error("collapse of a side with fewer than two taxa");
    const int meta = meta_base + side;
    TaxonSet side_set;
    for (int t : seq) side_set.add(t);

    std::vector<TaxonSet> rewritten;
    TaxonSet new_universe = st.universe.minus(side_set);
    new_universe.add(meta);
    for (const auto& c : st.clusters) {
        TaxonSet inside = c & side_set;
        if (inside.empty()) {
            rewritten.push_back(c);
            continue;
        }
        if (!(inside == side_set) && !c.subset_of(side_set)) {
            ++stats_.suffix_straddles;
            // The inside part must be a suffix of the side sequence (lower
            // taxa), otherwise the ->_C filtering was violated.
            int k = inside.count();
            TaxonSet suffix;
            for (std::size_t i = seq.size() - static_cast<std::size_t>(k); i < seq.size(); ++i) {
                suffix.add(seq[i]);
            }
            if (!(suffix == inside)) {
                throw std::logic_error("cluster straddles a finished side in non-suffix position");
            }
        }
        TaxonSet c2 = c.minus(side_set);
        c2.add(meta);
        if (c2 == new_universe) continue; // full set: trivially representable, drop
        rewritten.push_back(c2);
    }
    std::sort(rewritten.begin(), rewritten.end());
    rewritten.erase(std::unique(rewritten.begin(), rewritten.end()), rewritten.end());

    st.collapsed.emplace_back(side, seq);
    st.clusters = std::move(rewritten);
    st.universe = new_universe;
    st.placed = st.placed.minus(side_set);
    st.placed.add(meta);
    seq = {meta};
}

void Search::de_collapse(SearchState& st) const {
    for (auto it = st.collapsed.rbegin(); it != st.collapsed.rend(); ++it) {
        st.placement[static_cast<std::size_t>(it->first)] = it->second;
    }
    st.collapsed.clear();
    st.clusters = original_clusters_;
    st.universe = original_universe_;
    TaxonSet placed;
    for (const auto& seq : st.placement) {
        for (int t : seq) placed.add(t);
    }
    st.placed = placed;
}

bool Search::budget_exceeded() const {
    if (stats_.branches <= cfg_.branch_cap) return false;
    stats_.budget_exhausted = true;
    return true;
}

std::optional<Network> Search::finalize(SearchState st) {
    de_collapse(st);
    std::vector<int> remaining = original_universe_.minus(st.placed).members();
    std::vector<int> open_shorts;
    for (const auto& s : sd_) {
        if (st.guess[static_cast<std::size_t>(s.id)] == SideGuessKind::Short &&
            st.placement[static_cast<std::size_t>(s.id)].empty()) {
            open_shorts.push_back(s.id);
        }
    }
    if (remaining.size() != open_shorts.size()) return std::nullopt;

    std::vector<int> perm(remaining.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
        auto placement = st.placement;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            placement[static_cast<std::size_t>(open_shorts[static_cast<std::size_t>(perm[i])])] = {remaining[i]};
        }
        ++stats_.final_candidates;
        Network net = complete_generator(gen_, sd_, placement, false);
        ++stats_.representation_checks;
        if (represents(net, original_clusters_, cfg_.max_reticulations_check)) {
            // structural witness validation
            if (gen_.kind == GeneratorKind::Level) {
                if (!is_simple(net) || level(net) != gen_.parameter) {
                    throw std::logic_error("level witness failed structural validation");
                }
            } else if (reticulation_number(net) != gen_.parameter) {
                throw std::logic_error("reticulation witness failed structural validation");
            }
            return net;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

std::optional<Network> Search::run_guess(const std::vector<SideGuessKind>& guess) {
    std::vector<SearchState> stack{initial(guess)};
    ++stats_.branches;
    while (!stack.empty()) {
        if (budget_exceeded()) return std::nullopt;
        SearchState st = std::move(stack.back());
        stack.pop_back();
        int s = lowest_side(st);
        if (s < 0) {
            if (auto w = finalize(std::move(st))) return w;
            continue;
        }
        TaxonSet candidates = candidate_first_taxa(st, s);
        for (int c : candidates.members()) {
            SearchState child = st;
            child.status[static_cast<std::size_t>(s)] = SideStatus::Active;
            child.active = s;
            hang_taxon(child, c, s);
            ++stats_.branches;
            for (auto& m : complete_side(child, s)) {
                if (m.placement[static_cast<std::size_t>(s)].size() < 2) continue; // long side needs >= 2
                collapse_finished_side(m, s);
                m.active = -1;
                stack.push_back(std::move(m));
            }
        }
    }
    return std::nullopt;
}

} // namespace solver_detail

std::vector<std::vector<SideGuessKind>> guesses_in_bucket(const std::vector<Side>& sd, int n_taxa,
                                                          int n_long, int n_short) {
    std::vector<std::vector<SideGuessKind>> out;
    std::vector<int> edge_ids, node_ids;
    for (const auto& s : sd) {
        (s.is_node ? node_ids : edge_ids).push_back(s.id);
    }
    const int h0 = static_cast<int>(node_ids.size());
    if (n_short < h0) return out;                       // node sides are always short
    if (n_long > static_cast<int>(edge_ids.size())) return out;
    const int short_edges = n_short - h0;
    if (short_edges > static_cast<int>(edge_ids.size()) - n_long) return out;
    // taxa feasibility: shorts take one each, longs at least two
    if (n_short + 2 * n_long > n_taxa) return out;
    if (n_long == 0 && n_short != n_taxa) return out;

    // parallel pairs (side-id pairs)
    std::vector<std::pair<int, int>> pairs;
    for (const auto& s : sd) {
        if (!s.is_node && s.parallel_index == 1) {
            for (const auto& t : sd) {
                if (!t.is_node && t.parallel_index == 0 && t.tail == s.tail && t.head == s.head) {
                    pairs.emplace_back(t.id, s.id);
                }
            }
        }
    }

    const int ne = static_cast<int>(edge_ids.size());
    std::vector<SideGuessKind> assign(sd.size(), SideGuessKind::Empty);
    for (int id : node_ids) assign[static_cast<std::size_t>(id)] = SideGuessKind::Short;

    // choose long subset then short subset of the edge sides, lexicographic
    std::function<void(int, int)> pick_short;
    std::function<void(int, int)> pick_long = [&](int start, int chosen) {
        if (chosen == n_long) {
            pick_short(0, 0);
            return;
        }
        for (int i = start; i < ne; ++i) {
            assign[static_cast<std::size_t>(edge_ids[static_cast<std::size_t>(i)])] = SideGuessKind::Long;
            pick_long(i + 1, chosen + 1);
            assign[static_cast<std::size_t>(edge_ids[static_cast<std::size_t>(i)])] = SideGuessKind::Empty;
        }
    };
    pick_short = [&](int start, int chosen) {
        if (chosen == short_edges) {
            for (auto [a, b] : pairs) {
                if (assign[static_cast<std::size_t>(a)] == SideGuessKind::Empty &&
                    assign[static_cast<std::size_t>(b)] == SideGuessKind::Empty) {
                    return; // both halves of a parallel pair empty
                }
            }
            out.push_back(assign);
            return;
        }
        for (int i = start; i < ne; ++i) {
            int id = edge_ids[static_cast<std::size_t>(i)];
            if (assign[static_cast<std::size_t>(id)] != SideGuessKind::Empty) continue;
            assign[static_cast<std::size_t>(id)] = SideGuessKind::Short;
            pick_short(i + 1, chosen + 1);
            assign[static_cast<std::size_t>(id)] = SideGuessKind::Empty;
        }
    };
    pick_long(0, 0);
    return out;
}

namespace {

SolveReport solve_simple(GeneratorKind kind, const ClusterSet& cs, int param,
                         const SolverConfig& cfg) {
    SolveReport rep;
    rep.parameter_queried = param;
    if (param < 1) throw std::invalid_argument("parameter must be >= 1 (use the level-0 fast path)");
    const int n = cs.universe().size();

    // A network with r reticulations represents at most 2^{r+1}(n-1)
    // clusters; a simple level-k network likewise with r = k.
    if (param + 1 < 62 &&
        static_cast<std::uint64_t>(cs.size()) >
            (std::uint64_t{1} << (param + 1)) * static_cast<std::uint64_t>(n - 1)) {
        rep.status = SolveStatus::NoWitness;
        return rep;
    }

    const auto& gens = (kind == GeneratorKind::Level)
                           ? enumerate_level_generators(param, cfg.limits)
                           : enumerate_reticulation_generators(param, cfg.limits);
    // generator order: fewer sides first, canonical form as tie-break
    std::vector<const Generator*> ordered;
    for (const auto& g : gens) ordered.push_back(&g);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Generator* a, const Generator* b) {
        return sides(*a).size() < sides(*b).size();
    });

    int max_sides = 0;
    for (const auto* g : ordered) max_sides = std::max(max_sides, static_cast<int>(sides(*g).size()));

    std::vector<solver_detail::Search> searches;
    searches.reserve(ordered.size());
    for (const auto* g : ordered) {
        searches.emplace_back(*g, cs.clusters(), cs.universe().all(), cfg, rep.stats);
    }
    rep.stats.generators_tried = static_cast<long long>(ordered.size());

    const int max_long = std::min(max_sides, n / 2);
    for (int n_long = 0; n_long <= max_long; ++n_long) {
        for (int n_short = 0; n_short <= std::min(max_sides, n); ++n_short) {
            for (std::size_t gi = 0; gi < ordered.size(); ++gi) {
                auto buckets = guesses_in_bucket(searches[gi].sides_list(), n, n_long, n_short);
                for (const auto& guess : buckets) {
                    ++rep.stats.guesses_tried;
                    if (auto w = searches[gi].run_guess(guess)) {
                        rep.status = SolveStatus::Found;
                        rep.witness = std::move(*w);
                        rep.witness_bucket = {n_long, n_short};
                        return rep;
                    }
                    if (rep.stats.budget_exhausted) {
                        rep.status = SolveStatus::Inconclusive;
                        return rep;
                    }
                }
            }
        }
    }
    rep.status = SolveStatus::NoWitness;
    return rep;
}

} // namespace

SolveReport solve_simple_level(const ClusterSet& cs, int k, const SolverConfig& cfg) {
    if (!is_separating(cs)) {
        throw std::invalid_argument("solve_simple_level requires a separating cluster set");
    }
    return solve_simple(GeneratorKind::Level, cs, k, cfg);
}

SolveReport solve_simple_reticulation(const ClusterSet& cs, int r, const SolverConfig& cfg) {
    auto part = maximal_st_sets(cs);
    for (const auto& b : part.blocks) {
        if (b.count() > 1) {
            throw std::invalid_argument("solve_simple_reticulation requires an ST-collapsed cluster set");
        }
    }
    return solve_simple(GeneratorKind::Reticulation, cs, r, cfg);
}

} // namespace softnet
