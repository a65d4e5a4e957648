#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "softnet/taxon_set.hpp"

namespace softnet {

// The taxon universe X. Ids are 0..n-1 in label sort order.
class TaxonUniverse {
public:
    static constexpr int max_taxa = 64;

    TaxonUniverse() = default;

    // Labels are sorted and deduplicated; ids follow label order.
    explicit TaxonUniverse(std::vector<std::string> labels);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
    const std::vector<std::string>& names() const { return names_; }

    int id_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }

    TaxonSet all() const { return TaxonSet::full(size()); }

    std::string render(const TaxonSet& s) const;

    bool operator==(const TaxonUniverse& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

using TaxonUniversePtr = std::shared_ptr<const TaxonUniverse>;

} // namespace softnet
