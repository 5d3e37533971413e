#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "credal/model.hpp"

namespace credal {

/// A finite set of points in R^dim, the working object of every convex-set
/// operation. Points need not lie on the probability simplex.
struct PointSet {
    int dim = 0;
    std::vector<Vec> points;
};

/// normal . x = offset
struct Hyperplane {
    Vec normal;
    double offset = 0.0;
};

/// coeffs . x <= bound
struct HRow {
    Vec coeffs;
    double bound = 0.0;
};

/// Affine chart of the subspace a point set spans: x = origin + basis^T c.
/// Basis rows are orthonormal.
struct Embedding {
    Vec origin;
    std::vector<Vec> basis;
};

/// Linear-constraint description of a credal set. The simplex constraints
/// (sum x = 1, x >= 0) are implicit and never stored as rows.
struct HPolytope {
    int dim = 0;
    std::vector<HRow> rows;
    std::optional<Embedding> embedding;
};

enum class Metric { Euclidean, SymKl };

/// Thrown by h_to_v when the constraint system has no point on the simplex.
/// `genuinely_empty` distinguishes an empty credal set from a system that
/// becomes feasible again once the tolerance is relaxed tenfold.
struct InfeasibleSystem : std::runtime_error {
    bool genuinely_empty;
    explicit InfeasibleSystem(bool empty)
        : std::runtime_error(empty ? "constraint system is infeasible: empty credal set"
                                   : "constraint system is infeasible at the working tolerance only (numerical failure)"),
          genuinely_empty(empty) {}
};

/// Euclidean or symmetrized-KL distance. The KL variant smooths each
/// coordinate by kEpsKl before the log ratio and accepts any nonnegative
/// vectors (VE hands it subnormalized tables).
double distance(Metric metric, const Vec& p, const Vec& q);

/// Extreme points of the convex hull: drops every point that is a convex
/// combination of the others (per-point feasibility LP, decided in the
/// full-rank embedded chart). Output is a subset of the input, sorted
/// lexicographically.
PointSet remove_redundant_vertices(const PointSet& ps, double tol = kEpsFeas);

/// Membership LP: x in CH(ps) within tol.
bool in_hull(const Vec& x, const PointSet& ps, double tol = kEpsFeas);

/// True iff x is not expressible as a convex combination of ps minus x
/// (points within kEpsDup of x are excluded from the combination).
bool certify_vertex(const Vec& x, const PointSet& ps, double tol = kEpsFeas);

/// Index pair (i, j), i < j, at minimum distance. Ties are broken towards
/// the pair appearing first in the lexicographic coordinate order of the
/// points, so the selected pair is permutation-invariant.
std::pair<int, int> pairwise_min_distance(const PointSet& ps, Metric metric);

struct MergeStep {
    Vec first, second, midpoint;
};

struct KReductionOptions {
    Metric metric = Metric::Euclidean;
    /// Restrict the merge-pair search to pairs spanning a hull edge instead
    /// of re-hulling after the loop (only relevant for non-Euclidean metrics;
    /// Euclidean midpoints of a closest pair are vertices already).
    bool edge_restricted = false;
    std::vector<MergeStep>* trace = nullptr;
};

/// Reduces ps to at most k points: take the extreme points, then repeatedly
/// merge the closest pair into its midpoint. Every output point lies in the
/// convex hull of the input.
PointSet k_reduction(const PointSet& ps, int k, const KReductionOptions& opt);
PointSet k_reduction(const PointSet& ps, int k, Metric metric = Metric::Euclidean);

struct FullRankEmbedding {
    Embedding chart;
    PointSet embedded;  // rank-dimensional coordinates, one point per input point
    int rank = 0;
};

/// Affine rank detection by modified Gram-Schmidt on difference vectors;
/// origin is the first point. Reconstruction origin + basis^T c reproduces
/// each input point within tol.
FullRankEmbedding full_rank_embedding(const PointSet& ps, double tol = kEpsFeas);

/// Facet enumeration in the full-rank chart, mapped back to ambient
/// coordinates, plus rows pinning the affine hull when the set is
/// rank-deficient. Input points must lie on the probability simplex.
HPolytope v_to_h(const PointSet& ps, double tol = kEpsFeas);

/// Vertex enumeration of {x : rows hold, sum x = 1, x >= 0}. Every returned
/// point is certified extreme and deduplicated. Throws InfeasibleSystem when
/// the system has no feasible point.
PointSet h_to_v(const HPolytope& hp, double tol = kEpsFeas);

bool satisfies(const HPolytope& hp, const Vec& x, double tol = kEpsFeas);

}  // namespace credal
