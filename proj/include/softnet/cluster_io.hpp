#pragma once

#include <string>

#include "softnet/cluster_set.hpp"

namespace softnet {

// Canonical cluster text format: one cluster per line, taxa comma-separated,
// '#' starts a comment, blank lines ignored. The universe is the union of
// all mentioned taxa; a line listing the whole universe is rejected.
ClusterSet parse_cluster_text(const std::string& text);
ClusterSet load_cluster_file(const std::string& path);

std::string to_cluster_text(const ClusterSet& cs);

} // namespace softnet
