#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "credal/model.hpp"

namespace credal {

// Deterministic random source with platform-independent draws.  Only the raw
// mt19937_64 stream is consumed; all transforms are explicit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }
    double uniform();      // [0, 1)
    double exponential();  // rate 1
    int below(int n);      // unbiased integer in [0, n)
    int range(int lo, int hi);  // inclusive

private:
    std::mt19937_64 eng_;
};

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

struct GenParams {
    int n_nodes = 5;
    int card_min = 2;
    int card_max = 3;
    int max_indegree = 3;
    int vert_min = 2;
    int vert_max = 3;
    std::uint64_t seed = 1;
};

// Uniform point on the probability simplex with d states.
Vec sample_simplex(int d, Rng& rng);

// Random credal set whose convex hull has exactly n_vertices vertices;
// resamples the whole draw until that holds or the retry budget runs out.
CredalSet sample_credal_set(int dim, int n_vertices, Rng& rng, int max_retries = 1000);

CredalNetwork random_network(const GenParams& params);

// Product of vertex counts over every (variable, parent configuration) pair,
// saturated at cap.
std::int64_t selection_product(const CredalNetwork& net, std::int64_t cap = (std::int64_t)1 << 60);

// Regenerates with derived seeds until the selection product fits the given
// window; throws if no attempt lands inside it.
CredalNetwork random_network_capped(const GenParams& params, std::int64_t max_product,
                                    int max_attempts = 200, std::int64_t min_product = 0);

struct TaskSelection {
    Query marginal;
    std::optional<Query> conditional;
};

// Picks the benchmark queries for a network: the marginal target with the
// largest requisite subnetwork, and a (root target, observed leaf) pair by
// the same measure.  Ties fall to the smallest ids.
TaskSelection select_tasks(const CredalNetwork& net);

}  // namespace credal
