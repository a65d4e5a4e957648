#include "softnet/taxa.hpp"

#include <algorithm>

namespace softnet {

TaxonUniverse::TaxonUniverse(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (const auto& l : labels) {
        if (l.empty()) throw std::invalid_argument("taxon label must be nonempty");
    }
    if (labels.empty()) throw std::invalid_argument("taxon universe must be nonempty");
    if (static_cast<int>(labels.size()) > max_taxa) {
        throw std::invalid_argument("too many taxa (limit " + std::to_string(max_taxa) + ")");
    }
    names_ = std::move(labels);
    for (int i = 0; i < size(); ++i) index_[names_[static_cast<std::size_t>(i)]] = i;
}

int TaxonUniverse::id_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown taxon: " + name);
    return it->second;
}

std::string TaxonUniverse::render(const TaxonSet& s) const {
    std::string out = "{";
    bool first = true;
    for (int id : s.members()) {
        if (!first) out += ",";
        first = false;
        out += name(id);
    }
    out += "}";
    return out;
}

} // namespace softnet
