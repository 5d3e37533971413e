#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "credal/generate.hpp"
#include "credal/model.hpp"

using namespace credal;

TEST_CASE("simplex samples are normalized and positive") {
    Rng rng(42);
    for (int i = 0; i < 50; ++i) {
        Vec v = sample_simplex(3, rng);
        REQUIRE(v.size() == 3);
        double sum = 0.0;
        for (double x : v) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sample_simplex(1, rng), std::invalid_argument);
}

TEST_CASE("credal set sampling hits the requested vertex count") {
    Rng rng(7);
    CredalSet s = sample_credal_set(2, 2, rng);
    CHECK(s.dim == 2);
    CHECK(s.vertices.size() == 2);

    CredalSet t = sample_credal_set(3, 5, rng);
    CHECK(t.dim == 3);
    CHECK(t.vertices.size() == 5);
}

TEST_CASE("unreachable vertex counts exhaust the retry budget") {
    Rng rng(3);
    // A segment holds at most two extreme points.
    CHECK_THROWS_AS(sample_credal_set(2, 3, rng, 50), std::runtime_error);
}

TEST_CASE("random networks satisfy the declared class bounds") {
    GenParams p;
    p.n_nodes = 8;
    p.card_min = 2;
    p.card_max = 3;
    p.max_indegree = 3;
    p.vert_min = 2;
    p.vert_max = 3;
    p.seed = 11;

    CredalNetwork net = random_network(p);
    CHECK(net.size() == 8);
    CHECK(validate_network(net).empty());
    CHECK(net.dag.topological_order().has_value());
    for (int v = 0; v < net.size(); ++v) {
        CHECK(net.cards[v] >= 2);
        CHECK(net.cards[v] <= 3);
        CHECK((int)net.dag.parents[v].size() <= 3);
        for (const CredalSet& cs : net.tables[v].sets) {
            CHECK((int)cs.vertices.size() >= (net.cards[v] == 2 ? 1 : 2));
            CHECK((int)cs.vertices.size() <= 3);
        }
    }
}

TEST_CASE("binary children clip the vertex budget instead of failing") {
    GenParams p;
    p.n_nodes = 4;
    p.card_min = 2;
    p.card_max = 2;
    p.vert_min = 3;
    p.vert_max = 3;
    p.seed = 5;

    CredalNetwork net = random_network(p);
    CHECK(validate_network(net).empty());
    for (const auto& t : net.tables)
        for (const CredalSet& cs : t.sets) CHECK(cs.vertices.size() == 2);
}

TEST_CASE("generation is reproducible from the seed") {
    GenParams p;
    p.n_nodes = 6;
    p.seed = 123;

    CredalNetwork a = random_network(p);
    CredalNetwork b = random_network(p);
    REQUIRE(a.size() == b.size());
    CHECK(a.cards == b.cards);
    for (int v = 0; v < a.size(); ++v) {
        CHECK(a.dag.parents[v] == b.dag.parents[v]);
        REQUIRE(a.tables[v].sets.size() == b.tables[v].sets.size());
        for (std::size_t c = 0; c < a.tables[v].sets.size(); ++c)
            CHECK(a.tables[v].sets[c].vertices == b.tables[v].sets[c].vertices);
    }

    p.seed = 124;
    CredalNetwork c = random_network(p);
    bool same = a.cards == c.cards;
    if (same)
        for (int v = 0; v < a.size(); ++v)
            if (a.dag.parents[v] != c.dag.parents[v]) same = false;
    if (same) {
        bool all_equal = true;
        for (int v = 0; v < a.size() && all_equal; ++v)
            for (std::size_t cc = 0; cc < a.tables[v].sets.size() && all_equal; ++cc)
                if (a.tables[v].sets[cc].vertices != c.tables[v].sets[cc].vertices) all_equal = false;
        same = all_equal;
    }
    CHECK_FALSE(same);
}

TEST_CASE("parameter validation rejects out-of-class requests") {
    GenParams p;
    p.n_nodes = 11;
    CHECK_THROWS_AS(random_network(p), std::invalid_argument);
    p.n_nodes = 5;
    p.card_max = 4;
    CHECK_THROWS_AS(random_network(p), std::invalid_argument);
    p.card_max = 3;
    p.max_indegree = 7;
    CHECK_THROWS_AS(random_network(p), std::invalid_argument);
    p.max_indegree = 3;
    p.vert_max = 7;
    CHECK_THROWS_AS(random_network(p), std::invalid_argument);
}

TEST_CASE("selection product multiplies vertex counts across all sets") {
    GenParams p;
    p.n_nodes = 3;
    p.seed = 9;
    CredalNetwork net = random_network(p);

    std::int64_t expect = 1;
    for (const auto& t : net.tables)
        for (const CredalSet& cs : t.sets) expect *= (std::int64_t)cs.vertices.size();
    CHECK(selection_product(net) == expect);
    CHECK(selection_product(net, 2) == 2);

    CredalNetwork capped = random_network_capped(p, 64);
    CHECK(selection_product(capped) <= 64);
}

TEST_CASE("task selection prefers the largest requisite subnetwork") {
    // Chain 0 -> 1 -> 2: the tail marginal needs the whole chain, and the
    // root/leaf conditional pair is (0, 2).
    CredalNetwork chain;
    chain.cards = {2, 2, 2};
    chain.dag.parents = {{}, {0}, {1}};
    chain.tables.resize(3);
    chain.tables[0].child = 0;
    chain.tables[0].sets = {{2, {{0.7, 0.3}, {0.4, 0.6}}}};
    chain.tables[1].child = 1;
    chain.tables[1].parents = {0};
    chain.tables[1].sets = {{2, {{0.9, 0.1}}}, {2, {{0.5, 0.5}}}};
    chain.tables[2].child = 2;
    chain.tables[2].parents = {1};
    chain.tables[2].sets = {{2, {{0.8, 0.2}}}, {2, {{0.3, 0.7}}}};
    REQUIRE(validate_network(chain).empty());

    TaskSelection tasks = select_tasks(chain);
    CHECK(tasks.marginal.target == 2);
    CHECK(tasks.marginal.evidence.empty());
    REQUIRE(tasks.conditional.has_value());
    CHECK(tasks.conditional->target == 0);
    REQUIRE(tasks.conditional->evidence.size() == 1);
    CHECK(tasks.conditional->evidence.at(2) == 0);
}

TEST_CASE("single-node networks only get a marginal task") {
    CredalNetwork net;
    net.cards = {2};
    net.dag.parents = {{}};
    net.tables.resize(1);
    net.tables[0].child = 0;
    net.tables[0].sets = {{2, {{0.6, 0.4}, {0.2, 0.8}}}};
    REQUIRE(validate_network(net).empty());

    TaskSelection tasks = select_tasks(net);
    CHECK(tasks.marginal.target == 0);
    CHECK_FALSE(tasks.conditional.has_value());
}

TEST_CASE("seed mixing separates derived streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t salt = 0; salt < 100; ++salt) seen.insert(mix_seed(77, salt));
    CHECK(seen.size() == 100);
}
