#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "credal/model.hpp"
#include "credal/preprocess.hpp"

using namespace credal;

namespace {

CredalSet point_set(std::vector<Vec> vertices) {
    CredalSet s;
    s.dim = static_cast<int>(vertices.front().size());
    s.vertices = std::move(vertices);
    return s;
}

// A -> B -> C with a ternary tail variable.
CredalNetwork three_chain() {
    CredalNetwork net;
    net.cards = {2, 2, 3};
    net.dag.parents = {{}, {0}, {1}};

    ConditionalCredalTable ta;
    ta.child = 0;
    ta.sets = {point_set({{0.7, 0.3}, {0.4, 0.6}})};

    ConditionalCredalTable tb;
    tb.child = 1;
    tb.parents = {0};
    tb.sets = {point_set({{0.9, 0.1}, {0.8, 0.2}}),
               point_set({{0.5, 0.5}, {0.4, 0.6}})};

    ConditionalCredalTable tc;
    tc.child = 2;
    tc.parents = {1};
    tc.sets = {point_set({{0.2, 0.3, 0.5}, {0.1, 0.4, 0.5}}),
               point_set({{0.6, 0.2, 0.2}, {0.5, 0.3, 0.2}})};

    net.tables = {ta, tb, tc};
    REQUIRE(validate_network(net).empty());
    return net;
}

}  // namespace

TEST_CASE("merge_states collapses a ternary set to a binary one") {
    CredalSet s = point_set({{0.1, 0.6, 0.3}, {0.2, 0.5, 0.3}});
    CredalSet m = merge_states(s, 0);
    REQUIRE(m.dim == 2);
    REQUIRE(m.vertices.size() == 2);
    CHECK(m.vertices[0][0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.vertices[0][1] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(m.vertices[1][0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(m.vertices[1][1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("merge_states keeps binary sets intact up to state order") {
    CredalSet s = point_set({{0.7, 0.3}, {0.4, 0.6}});
    CredalSet kept0 = merge_states(s, 0);
    REQUIRE(kept0.vertices.size() == 2);
    CHECK(kept0.vertices[0][0] == doctest::Approx(0.4));
    CHECK(kept0.vertices[1][0] == doctest::Approx(0.7));

    CredalSet kept1 = merge_states(s, 1);
    REQUIRE(kept1.vertices.size() == 2);
    CHECK(kept1.vertices[0][0] == doctest::Approx(0.3));
    CHECK(kept1.vertices[1][0] == doctest::Approx(0.6));
}

TEST_CASE("merge_states drops vertices that become redundant") {
    // Three vertices whose first coordinates are 0.1, 0.2, 0.3; the middle
    // image lies between the other two after the merge.
    CredalSet s = point_set({{0.1, 0.6, 0.3}, {0.2, 0.1, 0.7}, {0.3, 0.4, 0.3}});
    CredalSet m = merge_states(s, 0);
    REQUIRE(m.vertices.size() == 2);
    CHECK(m.vertices[0][0] == doctest::Approx(0.1));
    CHECK(m.vertices[1][0] == doctest::Approx(0.3));
}

TEST_CASE("barren variables are removed for marginal queries") {
    CredalNetwork net = three_chain();
    Query q;
    q.target = 0;

    RequisiteResult r = requisite_graph(net, q);
    CHECK(r.reduced.size() == 1);
    CHECK(r.query.target == 0);
    CHECK(r.query.evidence.empty());
    CHECK(r.var_map == std::vector<int>{0, -1, -1});
    CHECK(r.new_to_old == std::vector<int>{0});
    CHECK(r.dropped_evidence == 0);
    CHECK(validate_network(r.reduced).empty());
}

TEST_CASE("observed coarse variables are binarized") {
    CredalNetwork net = three_chain();
    Query q;
    q.target = 0;
    q.evidence = {{2, 1}};

    RequisiteResult r = requisite_graph(net, q);
    REQUIRE(r.reduced.size() == 3);
    CHECK(r.reduced.cards == std::vector<int>{2, 2, 2});
    REQUIRE(r.query.evidence.size() == 1);
    CHECK(r.query.evidence.at(2) == 0);
    CHECK(r.dropped_evidence == 0);
    CHECK(validate_network(r.reduced).empty());

    // State 1 of the old tail variable becomes state 0; the remaining mass is
    // pooled into state 1.
    const CredalSet& c0 = r.reduced.tables[2].sets[0];
    bool saw_03 = false;
    bool saw_04 = false;
    for (const Vec& v : c0.vertices) {
        if (std::abs(v[0] - 0.3) < 1e-12 && std::abs(v[1] - 0.7) < 1e-12) saw_03 = true;
        if (std::abs(v[0] - 0.4) < 1e-12 && std::abs(v[1] - 0.6) < 1e-12) saw_04 = true;
    }
    CHECK(saw_03);
    CHECK(saw_04);
}

TEST_CASE("evidence behind a cut arc is absorbed into the child table") {
    // X -> E -> Y, querying Y with E observed: the arc E -> Y is cut, the
    // E = 0 slice is folded into Y's table, and X drops out of the component.
    CredalNetwork net;
    net.cards = {2, 2, 2};
    net.dag.parents = {{}, {0}, {1}};

    ConditionalCredalTable tx;
    tx.child = 0;
    tx.sets = {point_set({{0.5, 0.5}})};

    ConditionalCredalTable te;
    te.child = 1;
    te.parents = {0};
    te.sets = {point_set({{0.9, 0.1}}), point_set({{0.2, 0.8}})};

    ConditionalCredalTable ty;
    ty.child = 2;
    ty.parents = {1};
    ty.sets = {point_set({{0.7, 0.3}, {0.6, 0.4}}),
               point_set({{0.1, 0.9}})};

    net.tables = {tx, te, ty};
    REQUIRE(validate_network(net).empty());

    Query q;
    q.target = 2;
    q.evidence = {{1, 0}};

    RequisiteResult r = requisite_graph(net, q);
    CHECK(r.reduced.size() == 1);
    CHECK(r.new_to_old == std::vector<int>{2});
    CHECK(r.dropped_evidence == 1);
    CHECK(r.query.target == 0);
    CHECK(r.query.evidence.empty());

    const ConditionalCredalTable& t = r.reduced.tables[0];
    REQUIRE(t.parents.empty());
    REQUIRE(t.sets.size() == 1);
    REQUIRE(t.sets[0].vertices.size() == 2);
    bool saw_06 = false;
    bool saw_07 = false;
    for (const Vec& v : t.sets[0].vertices) {
        if (std::abs(v[0] - 0.6) < 1e-12) saw_06 = true;
        if (std::abs(v[0] - 0.7) < 1e-12) saw_07 = true;
    }
    CHECK(saw_06);
    CHECK(saw_07);
}

TEST_CASE("requisite extraction rejects malformed queries") {
    CredalNetwork net = three_chain();

    Query bad_target;
    bad_target.target = 7;
    CHECK_THROWS_AS(requisite_graph(net, bad_target), std::invalid_argument);

    Query observed_target;
    observed_target.target = 1;
    observed_target.evidence = {{1, 0}};
    CHECK_THROWS_AS(requisite_graph(net, observed_target), std::invalid_argument);

    Query bad_state;
    bad_state.target = 0;
    bad_state.evidence = {{2, 5}};
    CHECK_THROWS_AS(requisite_graph(net, bad_state), std::invalid_argument);
}
