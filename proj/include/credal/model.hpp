#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace credal {

// Tolerances shared across the library.
inline constexpr double kEpsNorm = 1e-9;   // simplex normalization slack
inline constexpr double kEpsDup = 1e-9;    // max-norm threshold for duplicate vertices
inline constexpr double kEpsFeas = 1e-9;   // LP feasibility decisions
inline constexpr double kEpsKl = 1e-12;    // coordinate smoothing for KL ratios
inline constexpr double kEpsZero = 1e-12;  // evidence-mass cutoff for conditional tables

using Vec = std::vector<double>;

/// A finitely generated credal set over one variable: the list of extreme
/// mass functions (V-representation). Each vertex has length `dim`, entries
/// nonnegative and summing to 1 within kEpsNorm.
struct CredalSet {
    int dim = 0;
    std::vector<Vec> vertices;
};

/// Parent structure of the network graph. parents[i] lists the parents of
/// variable i in declared order; the declared order fixes table indexing.
struct Dag {
    std::vector<std::vector<int>> parents;

    int size() const { return static_cast<int>(parents.size()); }
    std::vector<std::vector<int>> children() const;
    /// Empty when the graph has a directed cycle.
    std::optional<std::vector<int>> topological_order() const;
};

/// One conditional credal table: a credal set per parent configuration,
/// stored row-major in the declared parent order, last parent fastest.
struct ConditionalCredalTable {
    int child = 0;
    std::vector<int> parents;
    std::vector<CredalSet> sets;
};

struct CredalNetwork {
    std::vector<int> cards;  // cardinality per variable id 0..n-1
    Dag dag;
    std::vector<ConditionalCredalTable> tables;  // tables[i].child == i

    int size() const { return static_cast<int>(cards.size()); }
};

/// A marginal (empty evidence) or conditional query on one target variable.
struct Query {
    int target = 0;
    std::map<int, int> evidence;  // variable id -> observed state
};

/// Per-state probability bounds plus run metadata.
struct IntervalResult {
    Vec lower, upper;  // indexed by target state
    std::string method;
    double time_ms = 0.0;
    int dropped_tables = 0;  // conditional tables skipped for near-zero evidence mass
};

/// Collects every invariant violation (acyclicity, table shape, vertex
/// normalization, duplicates) with its location. Empty result = valid.
std::vector<std::string> validate_network(const CredalNetwork& net);

/// Row-major joint-configuration index; the last scope variable varies
/// fastest. Throws std::out_of_range for a state outside its cardinality.
std::int64_t config_index(std::span<const int> states, std::span<const int> cards);
std::vector<int> config_unindex(std::int64_t index, std::span<const int> cards);
std::int64_t config_count(std::span<const int> cards);

}  // namespace credal
