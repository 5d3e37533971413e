#pragma once

#include <vector>

#include "credal/model.hpp"

namespace credal {

/// Requisite subnetwork for a query, with the id maps needed to translate
/// results back to the original variable space.
struct RequisiteResult {
    CredalNetwork reduced;
    Query query;                  // target and evidence in reduced ids
    std::vector<int> var_map;     // original id -> reduced id, -1 if dropped
    std::vector<int> new_to_old;  // reduced id -> original id
    int dropped_evidence = 0;     // observed variables absorbed or disconnected
};

/// Collapses a credal set over d >= 2 states to the binary set over
/// (kept_state, everything else). The result is re-hulled, so mapped
/// vertices that became redundant disappear.
CredalSet merge_states(const CredalSet& set, int kept_state);

/// Query-specific preprocessing: iteratively drop barren leaves, cut the
/// arcs leaving observed variables by absorbing the observed state into the
/// child tables, binarize observed variables with three or more states, and
/// keep only the connected component of the target. Ids are then packed
/// densely in increasing original order.
RequisiteResult requisite_graph(const CredalNetwork& net, const Query& query);

}  // namespace credal
