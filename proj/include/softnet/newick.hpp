#pragma once

#include <string>
#include <vector>

#include "softnet/network.hpp"
#include "softnet/taxa.hpp"

namespace softnet {

struct ParseError {
    int line = 1, column = 1;
    std::string reason;
    std::string to_string() const;
};

class parse_exception : public std::runtime_error {
public:
    explicit parse_exception(ParseError e) : std::runtime_error(e.to_string()), error(std::move(e)) {}
    ParseError error;
};

// Extended Newick with reticulations tagged #H1, #H2, ...; tags are numbered
// in topological order and each reticulation's subtree is written at its
// first occurrence. No branch lengths are emitted; on input they are ignored.
std::string to_enewick(const Network& n, const TaxonUniverse& taxa);

struct ParsedNetwork {
    Network network;
    TaxonUniversePtr taxa;
};

// Throws parse_exception with line/column on malformed input.
ParsedNetwork parse_enewick(const std::string& text);

// Several ';'-terminated trees/networks from one file.
std::vector<ParsedNetwork> parse_enewick_list(const std::string& text);

std::string to_dot(const Network& n, const TaxonUniverse& taxa);

std::string to_network_json(const Network& n, const TaxonUniverse& taxa);
ParsedNetwork parse_network_json(const std::string& text);

} // namespace softnet
