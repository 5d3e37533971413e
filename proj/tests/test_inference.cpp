#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "credal/geometry.hpp"
#include "credal/inference.hpp"
#include "credal/model.hpp"

using namespace credal;

namespace {

CredalSet point_set(std::vector<Vec> vertices) {
    CredalSet s;
    s.dim = static_cast<int>(vertices.front().size());
    s.vertices = std::move(vertices);
    return s;
}

// Two binary variables A -> B with interval-style credal sets.  Enumerating
// the eight vertex selections puts P(B = 1) in [0.22, 0.44] and
// P(A = 0 | B = 1) in [0.1, 14/29].
CredalNetwork two_node_example() {
    CredalNetwork net;
    net.cards = {2, 2};
    net.dag.parents = {{}, {0}};

    ConditionalCredalTable ta;
    ta.child = 0;
    ta.sets = {point_set({{0.7, 0.3}, {0.4, 0.6}})};

    ConditionalCredalTable tb;
    tb.child = 1;
    tb.parents = {0};
    tb.sets = {point_set({{0.9, 0.1}, {0.8, 0.2}}),
               point_set({{0.5, 0.5}, {0.4, 0.6}})};

    net.tables = {ta, tb};
    REQUIRE(validate_network(net).empty());
    return net;
}

CredalFactor square_factor() {
    CredalFactor f;
    f.scope = {0, 1};
    f.cards = {2, 2};
    f.tables = {{0.1, 0.2, 0.3, 0.4}};
    return f;
}

}  // namespace

TEST_CASE("factor_from_table expands every vertex selection") {
    CredalNetwork net = two_node_example();

    CredalFactor fa = factor_from_table(net.tables[0], net.cards);
    CHECK(fa.scope == std::vector<int>{0});
    CHECK(fa.cards == std::vector<int>{2});
    REQUIRE(fa.tables.size() == 2);

    CredalFactor fb = factor_from_table(net.tables[1], net.cards);
    CHECK(fb.scope == std::vector<int>{0, 1});
    CHECK(fb.cards == std::vector<int>{2, 2});
    REQUIRE(fb.tables.size() == 4);
    // Each table concatenates one vertex per parent state, child fastest.
    bool found = false;
    for (const Vec& t : fb.tables) {
        if (std::abs(t[0] - 0.9) < 1e-12 && std::abs(t[1] - 0.1) < 1e-12 &&
            std::abs(t[2] - 0.5) < 1e-12 && std::abs(t[3] - 0.5) < 1e-12)
            found = true;
    }
    CHECK(found);
}

TEST_CASE("combine multiplies tables over the shared scope") {
    CredalFactor f;
    f.scope = {0};
    f.cards = {2};
    f.tables = {{0.7, 0.3}};

    CredalFactor g;
    g.scope = {0, 1};
    g.cards = {2, 2};
    g.tables = {{0.9, 0.1, 0.5, 0.5}};

    CredalFactor h = combine(f, g, exact_policy());
    CHECK(h.scope == std::vector<int>{0, 1});
    REQUIRE(h.tables.size() == 1);
    CHECK(h.tables[0][0] == doctest::Approx(0.63).epsilon(1e-12));
    CHECK(h.tables[0][1] == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(h.tables[0][2] == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(h.tables[0][3] == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("combine under a k policy stays inside the product hull") {
    CredalNetwork net = two_node_example();
    CredalFactor fa = factor_from_table(net.tables[0], net.cards);
    CredalFactor fb = factor_from_table(net.tables[1], net.cards);

    CredalFactor exact = combine(fa, fb, exact_policy());
    PointSet products;
    products.dim = 4;
    for (const Vec& a : fa.tables)
        for (const Vec& b : fb.tables) {
            Vec t(4);
            for (int x0 = 0; x0 < 2; ++x0)
                for (int x1 = 0; x1 < 2; ++x1)
                    t[x0 * 2 + x1] = a[x0] * b[x0 * 2 + x1];
            products.points.push_back(t);
        }

    for (const Vec& t : exact.tables) CHECK(in_hull(t, products));

    CredalFactor reduced = combine(fa, fb, k_policy(3));
    CHECK(reduced.tables.size() <= 3);
    for (const Vec& t : reduced.tables) CHECK(in_hull(t, products));
}

TEST_CASE("marginalize_out sums the trailing variable") {
    CredalFactor f = square_factor();
    CredalFactor m = marginalize_out(f, 1);
    CHECK(m.scope == std::vector<int>{0});
    REQUIRE(m.tables.size() == 1);
    CHECK(m.tables[0][0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(m.tables[0][1] == doctest::Approx(0.7).epsilon(1e-12));

    CredalFactor m0 = marginalize_out(f, 0);
    CHECK(m0.scope == std::vector<int>{1});
    CHECK(m0.tables[0][0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(m0.tables[0][1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("restrict_evidence slices one state") {
    CredalFactor f = square_factor();
    CredalFactor r1 = restrict_evidence(f, 1, 0);
    CHECK(r1.scope == std::vector<int>{0});
    CHECK(r1.tables[0][0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r1.tables[0][1] == doctest::Approx(0.3).epsilon(1e-12));

    CredalFactor r0 = restrict_evidence(f, 0, 1);
    CHECK(r0.scope == std::vector<int>{1});
    CHECK(r0.tables[0][0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r0.tables[0][1] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("elimination order uses min-fill with min-degree ties") {
    // Chain 0 -> 1 -> 2, query on the tail.
    CredalNetwork chain;
    chain.cards = {2, 2, 2};
    chain.dag.parents = {{}, {0}, {1}};
    chain.tables.resize(3);
    chain.tables[0].child = 0;
    chain.tables[1].child = 1;
    chain.tables[1].parents = {0};
    chain.tables[2].child = 2;
    chain.tables[2].parents = {1};

    Query qc;
    qc.target = 2;
    CHECK(elimination_order(chain, qc) == std::vector<int>{0, 1});

    // Star with hub 0: leaves go first, the hub last.
    CredalNetwork star;
    star.cards = {2, 2, 2, 2};
    star.dag.parents = {{}, {0}, {0}, {0}};
    star.tables.resize(4);
    for (int v = 0; v < 4; ++v) star.tables[v].child = v;
    for (int v = 1; v < 4; ++v) star.tables[v].parents = {0};

    Query qs;
    qs.target = 1;
    CHECK(elimination_order(star, qs) == std::vector<int>{2, 3, 0});
}

TEST_CASE("exact inference matches the enumeration oracle on the pair network") {
    CredalNetwork net = two_node_example();

    Query q;
    q.target = 1;
    IntervalResult ve1 = credal_ve(net, q);
    CHECK(ve1.method == "exact");
    REQUIRE(ve1.lower.size() == 2);
    CHECK(ve1.lower[1] == doctest::Approx(0.22).epsilon(1e-9));
    CHECK(ve1.upper[1] == doctest::Approx(0.44).epsilon(1e-9));
    CHECK(ve1.lower[0] == doctest::Approx(0.56).epsilon(1e-9));
    CHECK(ve1.upper[0] == doctest::Approx(0.78).epsilon(1e-9));

    IntervalResult oracle = brute_force_oracle(net, q);
    CHECK(oracle.method == "oracle");
    for (int s = 0; s < 2; ++s) {
        CHECK(ve1.lower[s] == doctest::Approx(oracle.lower[s]).epsilon(1e-9));
        CHECK(ve1.upper[s] == doctest::Approx(oracle.upper[s]).epsilon(1e-9));
    }
}

TEST_CASE("conditional bounds are vertex ratio extrema") {
    CredalNetwork net = two_node_example();

    Query q;
    q.target = 0;
    q.evidence = {{1, 1}};
    IntervalResult ve = credal_ve(net, q);
    IntervalResult oracle = brute_force_oracle(net, q);

    CHECK(ve.lower[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(ve.upper[0] == doctest::Approx(14.0 / 29.0).epsilon(1e-9));
    for (int s = 0; s < 2; ++s) {
        CHECK(ve.lower[s] == doctest::Approx(oracle.lower[s]).epsilon(1e-9));
        CHECK(ve.upper[s] == doctest::Approx(oracle.upper[s]).epsilon(1e-9));
    }
}

TEST_CASE("k-reduction gives a nested inner approximation") {
    CredalNetwork net = two_node_example();
    Query q;
    q.target = 1;

    IntervalResult exact = credal_ve(net, q);
    IntervalResult k2 = credal_ve(net, q, k_policy(2));
    CHECK(k2.method == "k2");
    for (int s = 0; s < 2; ++s) {
        CHECK(k2.lower[s] >= exact.lower[s] - 1e-9);
        CHECK(k2.upper[s] <= exact.upper[s] + 1e-9);
        CHECK(k2.lower[s] <= k2.upper[s] + 1e-12);
    }

    // A generous budget changes nothing.
    IntervalResult k8 = credal_ve(net, q, k_policy(8));
    for (int s = 0; s < 2; ++s) {
        CHECK(k8.lower[s] == doctest::Approx(exact.lower[s]).epsilon(1e-9));
        CHECK(k8.upper[s] == doctest::Approx(exact.upper[s]).epsilon(1e-9));
    }

    IntervalResult ksym = credal_ve(net, q, k_policy(2, Metric::SymKl));
    for (int s = 0; s < 2; ++s) {
        CHECK(ksym.lower[s] >= exact.lower[s] - 1e-9);
        CHECK(ksym.upper[s] <= exact.upper[s] + 1e-9);
    }
}

TEST_CASE("point-mass networks collapse to Bayesian marginals") {
    CredalNetwork net;
    net.cards = {2, 2};
    net.dag.parents = {{}, {0}};
    net.tables.resize(2);
    net.tables[0].child = 0;
    net.tables[0].sets = {point_set({{0.3, 0.7}})};
    net.tables[1].child = 1;
    net.tables[1].parents = {0};
    net.tables[1].sets = {point_set({{0.9, 0.1}}), point_set({{0.5, 0.5}})};
    REQUIRE(validate_network(net).empty());

    Query q;
    q.target = 1;
    IntervalResult r = credal_ve(net, q);
    CHECK(r.lower[1] == doctest::Approx(0.38).epsilon(1e-9));
    CHECK(r.upper[1] == doctest::Approx(0.38).epsilon(1e-9));
    CHECK(r.lower[0] == doctest::Approx(0.62).epsilon(1e-9));
    CHECK(r.upper[0] == doctest::Approx(0.62).epsilon(1e-9));
}

TEST_CASE("impossible evidence raises a dedicated error") {
    CredalNetwork net;
    net.cards = {2, 2};
    net.dag.parents = {{}, {0}};
    net.tables.resize(2);
    net.tables[0].child = 0;
    net.tables[0].sets = {point_set({{1.0, 0.0}})};
    net.tables[1].child = 1;
    net.tables[1].parents = {0};
    net.tables[1].sets = {point_set({{0.9, 0.1}}), point_set({{0.5, 0.5}})};
    REQUIRE(validate_network(net).empty());

    Query q;
    q.target = 1;
    q.evidence = {{0, 1}};
    CHECK_THROWS_AS(credal_ve(net, q), ZeroEvidenceError);
    CHECK_THROWS_AS(brute_force_oracle(net, q), ZeroEvidenceError);
}

TEST_CASE("zero-mass selections are dropped but counted") {
    CredalNetwork net;
    net.cards = {2, 2};
    net.dag.parents = {{}, {0}};
    net.tables.resize(2);
    net.tables[0].child = 0;
    net.tables[0].sets = {point_set({{1.0, 0.0}, {0.5, 0.5}})};
    net.tables[1].child = 1;
    net.tables[1].parents = {0};
    net.tables[1].sets = {point_set({{0.9, 0.1}}), point_set({{0.6, 0.4}, {0.3, 0.7}})};
    REQUIRE(validate_network(net).empty());

    Query q;
    q.target = 1;
    q.evidence = {{0, 1}};
    IntervalResult r = credal_ve(net, q);
    CHECK(r.dropped_tables > 0);
    CHECK(r.lower[1] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(r.upper[1] == doctest::Approx(0.7).epsilon(1e-9));

    IntervalResult oracle = brute_force_oracle(net, q);
    CHECK(oracle.dropped_tables > 0);
    for (int s = 0; s < 2; ++s) {
        CHECK(r.lower[s] == doctest::Approx(oracle.lower[s]).epsilon(1e-9));
        CHECK(r.upper[s] == doctest::Approx(oracle.upper[s]).epsilon(1e-9));
    }
}

TEST_CASE("queries are validated before running") {
    CredalNetwork net = two_node_example();

    Query bad;
    bad.target = 9;
    CHECK_THROWS_AS(credal_ve(net, bad), std::invalid_argument);

    Query observed;
    observed.target = 0;
    observed.evidence = {{0, 0}};
    CHECK_THROWS_AS(credal_ve(net, observed), std::invalid_argument);

    Query bad_policy_query;
    bad_policy_query.target = 0;
    ReductionPolicy p = k_policy(0);
    CHECK_THROWS_AS(credal_ve(net, bad_policy_query, p), std::invalid_argument);
}
