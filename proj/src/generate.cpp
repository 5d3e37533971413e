#include "credal/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "credal/geometry.hpp"
#include "credal/preprocess.hpp"

namespace credal {

double Rng::uniform() { return (double)(raw() >> 11) * 0x1.0p-53; }

double Rng::exponential() { return -std::log1p(-uniform()); }

int Rng::below(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t un = (std::uint64_t)n;
    const std::uint64_t lim = (0 - un) % un;
    std::uint64_t r;
    do {
        r = raw();
    } while (r < lim);
    return (int)(r % un);
}

int Rng::range(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("Rng::range: empty range");
    return lo + below(hi - lo + 1);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Vec sample_simplex(int d, Rng& rng) {
    if (d < 2) throw std::invalid_argument("sample_simplex: dimension must be at least 2");
    Vec v(d);
    double sum = 0.0;
    do {
        sum = 0.0;
        for (int i = 0; i < d; ++i) {
            v[i] = rng.exponential();
            sum += v[i];
        }
    } while (sum <= 0.0);
    for (int i = 0; i < d; ++i) v[i] /= sum;
    return v;
}

CredalSet sample_credal_set(int dim, int n_vertices, Rng& rng, int max_retries) {
    if (dim < 2) throw std::invalid_argument("sample_credal_set: dimension must be at least 2");
    if (n_vertices < 1) throw std::invalid_argument("sample_credal_set: need at least one vertex");
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        PointSet ps;
        ps.dim = dim;
        ps.points.reserve(n_vertices);
        for (int j = 0; j < n_vertices; ++j) ps.points.push_back(sample_simplex(dim, rng));
        PointSet hull = remove_redundant_vertices(ps);
        if ((int)hull.points.size() == n_vertices) {
            CredalSet out;
            out.dim = dim;
            out.vertices = std::move(hull.points);
            return out;
        }
    }
    throw std::runtime_error("sample_credal_set: could not realize " + std::to_string(n_vertices) +
                             " vertices in dimension " + std::to_string(dim) + " within the retry budget");
}

CredalNetwork random_network(const GenParams& p) {
    if (p.n_nodes < 1 || p.n_nodes > 10)
        throw std::invalid_argument("random_network: n_nodes must be in [1, 10]");
    if (p.card_min < 2 || p.card_max > 3 || p.card_min > p.card_max)
        throw std::invalid_argument("random_network: cardinality range must sit inside [2, 3]");
    if (p.max_indegree < 1 || p.max_indegree > 6)
        throw std::invalid_argument("random_network: max_indegree must be in [1, 6]");
    if (p.vert_min < 1 || p.vert_max > 6 || p.vert_min > p.vert_max)
        throw std::invalid_argument("random_network: vertex range must sit inside [1, 6]");

    Rng rng(p.seed);
    const int n = p.n_nodes;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    CredalNetwork net;
    net.cards.resize(n);
    net.dag.parents.resize(n);
    for (int i = 0; i < n; ++i) {
        const int v = order[i];
        const int max_deg = std::min(p.max_indegree, i);
        const int deg = rng.below(max_deg + 1);
        std::vector<int> preds(order.begin(), order.begin() + i);
        for (int j = 0; j < deg; ++j) std::swap(preds[j], preds[j + rng.below(i - j)]);
        preds.resize(deg);
        std::sort(preds.begin(), preds.end());
        net.dag.parents[v] = std::move(preds);
    }

    for (int v = 0; v < n; ++v) net.cards[v] = rng.range(p.card_min, p.card_max);

    net.tables.resize(n);
    for (int v = 0; v < n; ++v) {
        ConditionalCredalTable& t = net.tables[v];
        t.child = v;
        t.parents = net.dag.parents[v];
        std::vector<int> pcards;
        for (int u : t.parents) pcards.push_back(net.cards[u]);
        const std::int64_t nconf = config_count(pcards);
        t.sets.resize(nconf);
        for (std::int64_t c = 0; c < nconf; ++c) {
            int want = rng.range(p.vert_min, p.vert_max);
            if (net.cards[v] == 2) want = std::min(want, 2);
            t.sets[c] = sample_credal_set(net.cards[v], want, rng);
        }
    }

    std::vector<std::string> violations = validate_network(net);
    if (!violations.empty())
        throw std::logic_error("random_network: generated an invalid model: " + violations.front());
    return net;
}

std::int64_t selection_product(const CredalNetwork& net, std::int64_t cap) {
    std::int64_t prod = 1;
    for (const ConditionalCredalTable& t : net.tables)
        for (const CredalSet& cs : t.sets) {
            prod *= (std::int64_t)cs.vertices.size();
            if (prod > cap || prod < 0) return cap;
        }
    return prod;
}

CredalNetwork random_network_capped(const GenParams& params, std::int64_t max_product, int max_attempts,
                                    std::int64_t min_product) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        GenParams p = params;
        p.seed = attempt == 0 ? params.seed : mix_seed(params.seed, (std::uint64_t)attempt);
        CredalNetwork net = random_network(p);
        const std::int64_t product = selection_product(net, max_product + 1);
        if (product <= max_product && product >= min_product) return net;
    }
    throw std::runtime_error("random_network_capped: no attempt fit the selection budget");
}

TaskSelection select_tasks(const CredalNetwork& net) {
    const int n = net.size();
    TaskSelection out;

    int best_size = -1;
    for (int t = 0; t < n; ++t) {
        Query q;
        q.target = t;
        const int size = requisite_graph(net, q).reduced.size();
        if (size > best_size) {
            best_size = size;
            out.marginal = q;
        }
    }

    std::vector<char> has_child(n, 0);
    for (int v = 0; v < n; ++v)
        for (int u : net.dag.parents[v]) has_child[u] = 1;

    int best_cond = -1;
    for (int r = 0; r < n; ++r) {
        if (!net.dag.parents[r].empty()) continue;
        for (int l = 0; l < n; ++l) {
            if (l == r || has_child[l]) continue;
            Query q;
            q.target = r;
            q.evidence = {{l, 0}};
            const int size = requisite_graph(net, q).reduced.size();
            if (size > best_cond) {
                best_cond = size;
                out.conditional = q;
            }
        }
    }
    return out;
}

}  // namespace credal
