#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "credal/geometry.hpp"
#include "credal/model.hpp"

namespace credal {

/// The variable-elimination working object: a convex set of potentials over
/// a scope, represented by its candidate tables. Each table is a flat
/// row-major array over the scope (last scope variable fastest).
struct CredalFactor {
    std::vector<int> scope;
    std::vector<int> cards;   // aligned with scope
    std::vector<Vec> tables;  // >= 1, all of length prod(cards)
};

/// How combination results are shrunk: exact convex-hull pruning, or
/// k-reduction to at most k tables under the chosen distance.
struct ReductionPolicy {
    enum class Mode { ExactHull, KReduce };
    Mode mode = Mode::ExactHull;
    int k = 0;  // required >= 1 in KReduce mode
    Metric metric = Metric::Euclidean;
};

inline ReductionPolicy exact_policy() { return {}; }
inline ReductionPolicy k_policy(int k, Metric metric = Metric::Euclidean) {
    ReductionPolicy p;
    p.mode = ReductionPolicy::Mode::KReduce;
    p.k = k;
    p.metric = metric;
    return p;
}

/// Conditioning on evidence whose mass is zero under every extension.
struct ZeroEvidenceError : std::runtime_error {
    ZeroEvidenceError() : std::runtime_error("conditioning on probability-zero evidence") {}
};

/// One candidate table per combination of vertex choices across the parent
/// configurations; scope is parents (declared order) then the child.
CredalFactor factor_from_table(const ConditionalCredalTable& t, const std::vector<int>& net_cards);

/// All pairwise products broadcast over the union scope, then reduction per
/// policy. Under k-reduce the pre-reduction count must be <= k^2 and the
/// result has <= k tables.
CredalFactor combine(const CredalFactor& f, const CredalFactor& g, const ReductionPolicy& policy);

/// Sums each table over v's axis; no reduction.
CredalFactor marginalize_out(const CredalFactor& f, int v);

/// Slices every table at v = state; v leaves the scope; tables may become
/// subnormalized.
CredalFactor restrict_evidence(const CredalFactor& f, int v, int state);

/// Greedy min-fill order over the moralized graph, covering every variable
/// except the target (ties: min-degree, then smallest id).
std::vector<int> elimination_order(const CredalNetwork& net, const Query& q);

/// Credal variable elimination. Exact with the hull policy; an inner
/// approximation of the exact interval under k-reduce. Conditional bounds
/// are vertex ratios; final tables with evidence mass <= kEpsZero are
/// dropped and counted, and a fully dropped result throws
/// ZeroEvidenceError.
IntervalResult credal_ve(const CredalNetwork& net, const Query& q, const ReductionPolicy& policy = {});

/// Exact reference: enumerates every global vertex selection (product over
/// all (variable, parent-config) pairs), evaluates the query on the full
/// joint per selection, and returns min/max. Throws std::runtime_error when
/// the selection space exceeds the cap.
IntervalResult brute_force_oracle(const CredalNetwork& net, const Query& q, std::int64_t cap = 1000000);

}  // namespace credal
