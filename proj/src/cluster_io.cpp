#include "softnet/cluster_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "softnet/newick.hpp"

namespace softnet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ClusterSet parse_cluster_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_lines;
    std::vector<std::string> all_names;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::vector<std::string> names;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string tok = trim(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (tok.empty()) {
                throw parse_exception({lineno, 1, "empty taxon name in cluster line"});
            }
            names.push_back(tok);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
            throw parse_exception({lineno, 1, "taxon repeated within a cluster"});
        }
        rows.push_back(std::move(names));
        row_lines.push_back(lineno);
        for (const auto& nm : rows.back()) all_names.push_back(nm);
    }
    if (rows.empty()) throw parse_exception({lineno, 1, "no clusters in input"});

    TaxonUniversePtr uni;
    try {
        uni = std::make_shared<TaxonUniverse>(all_names);
    } catch (const std::exception& e) {
        throw parse_exception({1, 1, e.what()});
    }
    std::vector<TaxonSet> sets;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        TaxonSet s;
        for (const auto& nm : rows[i]) s.add(uni->id_of(nm));
        if (s == uni->all()) {
            throw parse_exception({row_lines[i], 1,
                                   "cluster equals the full taxon set (clusters must be proper subsets)"});
        }
        sets.push_back(s);
    }
    return ClusterSet(std::move(uni), std::move(sets));
}

ClusterSet load_cluster_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_cluster_text(ss.str());
}

std::string to_cluster_text(const ClusterSet& cs) {
    std::string out;
    for (const auto& c : cs.clusters()) {
        bool first = true;
        for (int t : c.members()) {
            if (!first) out += ",";
            first = false;
            out += cs.universe().name(t);
        }
        out += "\n";
    }
    return out;
}

} // namespace softnet
