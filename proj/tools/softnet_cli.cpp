// softnet: construct rooted binary phylogenetic networks that represent a
// set of clusters in the softwired sense, minimizing level or reticulation
// number. Includes an exhaustive oracle for desk-scale verification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "softnet/assembly.hpp"
#include "softnet/cluster_io.hpp"
#include "softnet/newick.hpp"
#include "softnet/oracle.hpp"
#include "softnet/random_net.hpp"

using namespace softnet;

namespace {

constexpr int exit_found = 0;
constexpr int exit_no_witness = 1;
constexpr int exit_inconclusive = 2;
constexpr int exit_input_error = 3;

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string render_network(const Network& n, const TaxonUniverse& uni, const std::string& format) {
    if (format == "enewick") return to_enewick(n, uni) + "\n";
    if (format == "dot") return to_dot(n, uni);
    if (format == "json") return to_network_json(n, uni);
    throw std::runtime_error("unknown format: " + format);
}

ParsedNetwork load_network(const std::string& path) {
    std::string text = slurp(path);
    auto nonspace = text.find_first_not_of(" \t\r\n");
    if (nonspace != std::string::npos && text[nonspace] == '{') return parse_network_json(text);
    return parse_enewick(text);
}

nlohmann::json stats_json(const SolveStats& s) {
    return {{"generators_tried", s.generators_tried},
            {"guesses_tried", s.guesses_tried},
            {"branches", s.branches},
            {"representation_checks", s.representation_checks},
            {"final_candidates", s.final_candidates},
            {"suffix_straddles", s.suffix_straddles},
            {"budget_exhausted", s.budget_exhausted}};
}

struct CommonOpts {
    int max_parameter = 4;
    long long branch_cap = 2'000'000;
    std::string format = "enewick";
    bool deterministic = true;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--max-parameter", o.max_parameter, "largest level/reticulation number tried")
        ->envname("SOFTNET_MAX_PARAMETER")
        ->check(CLI::Range(0, 4));
    cmd->add_option("--branch-cap", o.branch_cap, "search-state budget before giving up")
        ->envname("SOFTNET_BRANCH_CAP");
    cmd->add_option("--format", o.format, "network output format: enewick|dot|json")
        ->envname("SOFTNET_FORMAT")
        ->check(CLI::IsMember({"enewick", "dot", "json"}));
    cmd->add_flag("--deterministic,!--no-deterministic", o.deterministic,
                  "byte-stable reports (omit timings)")
        ->envname("SOFTNET_DETERMINISTIC");
    cmd->add_option("--jobs", o.jobs, "worker threads for the oracle scans")
        ->envname("SOFTNET_JOBS")
        ->check(CLI::Range(1, 64));
}

int cmd_solve(const std::string& input, bool level_mode, const CommonOpts& o,
              const std::string& out_network, const std::string& out_report) {
    ClusterSet cs = load_cluster_file(input);
    AssemblyConfig cfg;
    cfg.max_parameter = o.max_parameter;
    cfg.solver.branch_cap = o.branch_cap;
    cfg.solver.deterministic = o.deterministic;

    MinimizeReport rep = level_mode ? minimize_level(cs, cfg) : minimize_reticulation(cs, cfg);

    nlohmann::json j;
    j["schema_version"] = 1;
    j["mode"] = level_mode ? "level" : "reticulation";
    j["parameter_limit"] = cfg.max_parameter;
    j["stats"] = stats_json(rep.stats);
    switch (rep.status) {
        case SolveStatus::Found: {
            j["status"] = "found";
            j["parameter"] = rep.parameter;
            j["witness_level"] = rep.witness_level;
            j["witness_reticulation"] = rep.witness_reticulation;
            j["refutations_exhaustive"] = rep.exhaustive;
            j["witness"] = to_enewick(*rep.witness, cs.universe());
            break;
        }
        case SolveStatus::NoWitness:
            j["status"] = "refuted-up-to-limit";
            break;
        case SolveStatus::Inconclusive:
            j["status"] = "inconclusive";
            break;
    }
    write_file(out_report, j.dump(2) + "\n");
    if (rep.witness) {
        write_file(out_network, render_network(*rep.witness, cs.universe(), o.format));
        return exit_found;
    }
    return rep.status == SolveStatus::Inconclusive ? exit_inconclusive : exit_no_witness;
}

int cmd_check(const std::string& network_path, const std::string& clusters_path) {
    auto net = load_network(network_path);
    ClusterSet cs = load_cluster_file(clusters_path);
    // map cluster taxa onto the network's leaf universe
    std::vector<TaxonSet> targets;
    for (const auto& c : cs.clusters()) {
        TaxonSet t;
        for (int id : c.members()) {
            const std::string& name = cs.universe().name(id);
            if (!net.taxa->has(name)) {
                std::cerr << "cluster taxon '" << name << "' is not a leaf of the network\n";
                return exit_no_witness;
            }
            t.add(net.taxa->id_of(name));
        }
        targets.push_back(t);
    }
    auto missing = unrepresented_clusters(net.network, targets);
    if (missing.empty()) {
        std::cout << "represents: yes (" << cs.size() << " clusters)\n";
        return exit_found;
    }
    std::cout << "represents: no; missing " << missing.size() << " cluster(s):\n";
    for (const auto& m : missing) std::cout << "  " << net.taxa->render(m) << "\n";
    return exit_no_witness;
}

int cmd_clusters_from_trees(const std::string& input, const std::string& output) {
    auto trees = parse_enewick_list(slurp(input));
    const TaxonUniverse& uni = *trees[0].taxa;
    for (const auto& t : trees) {
        if (!(*t.taxa == uni)) {
            std::cerr << "trees must share one leaf set\n";
            return exit_input_error;
        }
        if (reticulation_number(t.network) != 0) {
            std::cerr << "inputs must be trees (no reticulations)\n";
            return exit_input_error;
        }
    }
    std::set<TaxonSet> acc;
    for (const auto& t : trees) {
        for (const auto& c : softwired_clusters(t.network)) acc.insert(c);
    }
    ClusterSet cs(trees[0].taxa, std::vector<TaxonSet>(acc.begin(), acc.end()));
    write_file(output, to_cluster_text(cs));
    return exit_found;
}

int cmd_random_instance(int n, int k, std::uint64_t seed, const std::string& out_net,
                        const std::string& out_clusters, const std::string& format) {
    if (n < 2 || n > 26) throw std::runtime_error("n must be in [2,26]");
    if (k < 0 || k > 4) throw std::runtime_error("level must be in [0,4]");
    std::mt19937_64 rng(seed);
    RandomNetConfig cfg;
    cfg.n = n;
    cfg.max_level = k;
    cfg.max_total_reticulations = std::min(10, 2 * k + 2);
    Network net = random_network(rng, cfg);
    auto uni = default_universe(n);
    write_file(out_net, render_network(net, *uni, format));
    write_file(out_clusters, to_cluster_text(clusters_of_network(net, uni)));
    return exit_found;
}

int cmd_enumerate_generators(const std::string& kind, int parameter, const std::string& format,
                             const std::string& output, const std::string& cache_dir) {
    GeneratorKind gk = kind == "level" ? GeneratorKind::Level : GeneratorKind::Reticulation;
    auto gens = cached_generators(gk, parameter, cache_dir);
    if (format == "dot") {
        std::string out;
        for (const auto& g : gens) out += generator_dot(g);
        write_file(output, out);
    } else {
        write_file(output, generators_json(gens));
    }
    std::cerr << gens.size() << " generator(s)\n";
    return exit_found;
}

int cmd_oracle(const std::string& input, bool level_mode, const CommonOpts& o,
               const std::string& out_report, bool pin_counts) {
    ClusterSet cs = load_cluster_file(input);
    OracleConfig cfg;
    cfg.jobs = o.jobs;
    auto res = level_mode ? oracle_min_level(cs, o.max_parameter, cfg)
                          : oracle_min_reticulation(cs, o.max_parameter, cfg);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["mode"] = level_mode ? "level" : "reticulation";
    j["parameter_limit"] = o.max_parameter;
    if (res.minimum) {
        j["status"] = "found";
        j["minimum"] = *res.minimum;
    } else {
        j["status"] = "refuted-up-to-limit";
    }
    j["witnesses_found"] = res.witnesses_found;
    j["enumerated_on_exhausted_levels"] = res.enumerated;
    if (pin_counts) {
        // regression constants: completion counts of the small generators
        nlohmann::json pins = nlohmann::json::array();
        for (int p = 1; p <= 2; ++p) {
            const auto& gens = level_mode ? enumerate_level_generators(p)
                                          : enumerate_reticulation_generators(p);
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                std::vector<int> taxa;
                for (int i = 0; i < std::min(cs.universe().size(), 4); ++i) taxa.push_back(i);
                long long c = enumerate_completions(gens[gi], taxa, [](const Network&) { return false; });
                pins.push_back({{"parameter", p}, {"generator", gi}, {"taxa", taxa.size()}, {"completions", c}});
            }
        }
        j["pinned_counts"] = std::move(pins);
    }
    write_file(out_report, j.dump(2) + "\n");
    return res.minimum ? exit_found : exit_no_witness;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"softwired cluster networks: exact level / reticulation minimization"};
    app.require_subcommand(1);

    CommonOpts opts;

    // solve
    std::string solve_input, solve_out_net = "-", solve_out_report = "solve-report.json";
    bool mode_level = false, mode_retic = false;
    auto* solve = app.add_subcommand("solve", "minimize level or reticulation number");
    solve->add_option("input", solve_input, "cluster file")->required();
    solve->add_flag("--level", mode_level, "minimize the network level");
    solve->add_flag("--reticulation", mode_retic, "minimize the reticulation number");
    solve->add_option("-o,--output", solve_out_net, "witness network output ('-' = stdout)");
    solve->add_option("--report", solve_out_report, "JSON report path");
    add_common(solve, opts);

    // check
    std::string check_net, check_clusters;
    auto* check = app.add_subcommand("check", "does a network represent a cluster set?");
    check->add_option("network", check_net, "network file (eNewick or JSON)")->required();
    check->add_option("clusters", check_clusters, "cluster file")->required();

    // clusters-from-trees
    std::string cft_input, cft_output = "-";
    auto* cft = app.add_subcommand("clusters-from-trees", "union of the clusters of rooted trees");
    cft->add_option("input", cft_input, "file of ';'-terminated Newick trees")->required();
    cft->add_option("-o,--output", cft_output, "cluster file output");

    // random-instance
    int ri_n = 6, ri_k = 2;
    std::uint64_t ri_seed = 1;
    std::string ri_net = "instance-network.nwk", ri_clusters = "instance-clusters.txt";
    auto* ri = app.add_subcommand("random-instance", "deterministic random network + its clusters");
    ri->add_option("--n", ri_n, "taxa")->required();
    ri->add_option("--level", ri_k, "level bound");
    ri->add_option("--seed", ri_seed, "RNG seed")->envname("SOFTNET_SEED");
    ri->add_option("--network-out", ri_net, "network file");
    ri->add_option("--clusters-out", ri_clusters, "cluster file");
    add_common(ri, opts);

    // enumerate-generators
    std::string eg_kind = "level", eg_out = "-", eg_cache;
    int eg_param = 1;
    auto* eg = app.add_subcommand("enumerate-generators", "emit level-k or r-reticulation generators");
    eg->add_option("--kind", eg_kind)->check(CLI::IsMember({"level", "reticulation"}));
    eg->add_option("-p,--parameter", eg_param)->required()->check(CLI::Range(1, 4));
    eg->add_option("-o,--output", eg_out, "output path");
    eg->add_option("--cache", eg_cache, "cache directory keyed by (kind, parameter)")
        ->envname("SOFTNET_CACHE");
    add_common(eg, opts);

    // oracle
    std::string or_input, or_report = "-";
    bool or_level = false, or_retic = false, or_pin = false;
    auto* orc = app.add_subcommand("oracle", "exhaustive brute-force minimum (desk scale)");
    orc->add_option("input", or_input, "cluster file")->required();
    orc->add_flag("--level", or_level);
    orc->add_flag("--reticulation", or_retic);
    orc->add_option("--report", or_report, "JSON report path");
    orc->add_flag("--pin-counts", or_pin, "emit completion-count regression constants");
    add_common(orc, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            if (mode_level == mode_retic) {
                std::cerr << "choose exactly one of --level / --reticulation\n";
                return exit_input_error;
            }
            return cmd_solve(solve_input, mode_level, opts, solve_out_net, solve_out_report);
        }
        if (check->parsed()) return cmd_check(check_net, check_clusters);
        if (cft->parsed()) return cmd_clusters_from_trees(cft_input, cft_output);
        if (ri->parsed()) {
            return cmd_random_instance(ri_n, ri_k, ri_seed, ri_net, ri_clusters, opts.format);
        }
        if (eg->parsed()) return cmd_enumerate_generators(eg_kind, eg_param, opts.format, eg_out, eg_cache);
        if (orc->parsed()) {
            if (or_level == or_retic) {
                std::cerr << "choose exactly one of --level / --reticulation\n";
                return exit_input_error;
            }
            return cmd_oracle(or_input, or_level, opts, or_report, or_pin);
        }
    } catch (const parse_exception& e) {
        std::cerr << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_input_error;
}
