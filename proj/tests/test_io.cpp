#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "credal/generate.hpp"
#include "credal/inference.hpp"
#include "credal/io.hpp"
#include "credal/model.hpp"

using namespace credal;

namespace {

const char* kTinyModel = R"(# two binary variables
V-CREDAL
2
2 2
2
1 0
2 0 1
2
0.7 0.3
0.4 0.6
2
0.9 0.1
0.8 0.2
2
0.5 0.5
0.4 0.6
)";

bool networks_identical(const CredalNetwork& a, const CredalNetwork& b) {
    if (a.cards != b.cards) return false;
    if (a.dag.parents != b.dag.parents) return false;
    for (int v = 0; v < a.size(); ++v) {
        if (a.tables[v].child != b.tables[v].child) return false;
        if (a.tables[v].parents != b.tables[v].parents) return false;
        if (a.tables[v].sets.size() != b.tables[v].sets.size()) return false;
        for (std::size_t c = 0; c < a.tables[v].sets.size(); ++c)
            if (a.tables[v].sets[c].vertices != b.tables[v].sets[c].vertices) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("vertex models parse with comments and loose whitespace") {
    LoadedNetwork loaded = parse_v_network(kTinyModel);
    CHECK(loaded.duplicate_vertices == 0);
    const CredalNetwork& net = loaded.net;
    REQUIRE(net.size() == 2);
    CHECK(net.cards == std::vector<int>{2, 2});
    CHECK(net.dag.parents[1] == std::vector<int>{0});
    CHECK(validate_network(net).empty());
    REQUIRE(net.tables[1].sets.size() == 2);
    CHECK(net.tables[1].sets[1].vertices[1][1] == doctest::Approx(0.6));
}

TEST_CASE("serialization round-trips bit-for-bit") {
    GenParams p;
    p.n_nodes = 6;
    p.seed = 2024;
    CredalNetwork net = random_network(p);

    const std::string text = serialize_v_network(net);
    LoadedNetwork back = parse_v_network(text);
    CHECK(back.duplicate_vertices == 0);
    CHECK(networks_identical(net, back.net));

    // A second spin through the writer is stable too.
    CHECK(serialize_v_network(back.net) == text);
}

TEST_CASE("duplicate vertices are dropped while loading") {
    std::string text = kTinyModel;
    const std::string needle = "2\n0.7 0.3\n0.4 0.6\n";
    const std::size_t at = text.find(needle);
    REQUIRE(at != std::string::npos);
    text.replace(at, needle.size(), "3\n0.7 0.3\n0.4 0.6\n0.7 0.3\n");

    LoadedNetwork loaded = parse_v_network(text);
    CHECK(loaded.duplicate_vertices == 1);
    CHECK(loaded.net.tables[0].sets[0].vertices.size() == 2);
    CHECK(validate_network(loaded.net).empty());
}

TEST_CASE("parse errors carry the offending position") {
    try {
        parse_v_network("V-CREDAL\n2\n2 x\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column == 3);
        CHECK(std::string(e.what()).find("cardinality") != std::string::npos);
    }

    try {
        parse_v_network("V-CREDAL\n1\n2\n1\n1 0\n1\n0.5\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line >= 6);
        CHECK(std::string(e.what()).find("probability value") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_v_network(""), ParseError);
    CHECK_THROWS_AS(parse_v_network("B-CREDAL\n"), ParseError);
    CHECK_THROWS_AS(parse_v_network(std::string(kTinyModel) + "\n0.3"), ParseError);
    CHECK_THROWS_AS(parse_v_network("V-CREDAL\n2\n2 2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse_v_network("V-CREDAL\n2\n2 2\n2\n2 0 0\n1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_v_network("V-CREDAL\n2\n2 2\n2\n1 0\n1 0\n"), ParseError);
}

TEST_CASE("format detection reads the leading header") {
    CHECK(detect_format("  # c\n V-CREDAL junk") == ModelFormat::V);
    CHECK(detect_format("H-CREDAL") == ModelFormat::H);
    CHECK_THROWS_AS(detect_format("neither"), ParseError);
}

TEST_CASE("constraint models round-trip through text") {
    HNetwork h;
    h.cards = {2};
    h.dag.parents = {{}};
    h.tables.resize(1);
    h.tables[0].child = 0;
    HPolytope poly;
    poly.dim = 2;
    poly.rows = {{{1.0, 0.0}, 0.7}, {{-1.0, 0.0}, -0.4}};
    h.tables[0].sets = {poly};

    const std::string text = serialize_h_network(h);
    HNetwork back = parse_h_network(text);
    REQUIRE(back.size() == 1);
    REQUIRE(back.tables[0].sets.size() == 1);
    REQUIRE(back.tables[0].sets[0].rows.size() == 2);
    CHECK(back.tables[0].sets[0].rows[0].coeffs[0] == doctest::Approx(1.0));
    CHECK(back.tables[0].sets[0].rows[1].bound == doctest::Approx(-0.4));

    LoadedNetwork as_v = h_to_network(back);
    REQUIRE(as_v.net.tables[0].sets.size() == 1);
    const CredalSet& cs = as_v.net.tables[0].sets[0];
    REQUIRE(cs.vertices.size() == 2);
    CHECK(cs.vertices[0][0] == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(cs.vertices[1][0] == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("vertex to constraint conversion preserves the credal set") {
    LoadedNetwork loaded = parse_v_network(kTinyModel);
    HNetwork h = network_to_h(loaded.net);
    LoadedNetwork round = h_to_network(h);

    REQUIRE(round.net.size() == loaded.net.size());
    Query q;
    q.target = 1;
    IntervalResult a = credal_ve(loaded.net, q);
    IntervalResult b = credal_ve(round.net, q);
    for (int s = 0; s < 2; ++s) {
        CHECK(a.lower[s] == doctest::Approx(b.lower[s]).epsilon(1e-8));
        CHECK(a.upper[s] == doctest::Approx(b.upper[s]).epsilon(1e-8));
    }
}

TEST_CASE("model loading dispatches on the format") {
    LoadedNetwork direct = load_model_text(kTinyModel);
    CHECK(direct.net.size() == 2);

    HNetwork h = network_to_h(direct.net);
    LoadedNetwork via_h = load_model_text(serialize_h_network(h));
    CHECK(via_h.net.size() == 2);
    CHECK(validate_network(via_h.net).empty());
}

TEST_CASE("evidence strings round-trip") {
    std::map<int, int> ev = {{2, 1}, {5, 0}};
    CHECK(encode_evidence(ev) == "2=1;5=0");
    CHECK(decode_evidence("2=1;5=0") == ev);
    CHECK(decode_evidence("").empty());
    CHECK_THROWS_AS(decode_evidence("2"), std::invalid_argument);
    CHECK_THROWS_AS(decode_evidence("a=1"), std::invalid_argument);
    CHECK_THROWS_AS(decode_evidence("2=1;2=0"), std::invalid_argument);
}

TEST_CASE("benchmark rows survive a csv round-trip") {
    std::vector<BenchmarkRecord> recs(2);
    recs[0].model_id = "model_000";
    recs[0].task = "marginal";
    recs[0].target = 3;
    recs[0].method = "exact";
    recs[0].state = 1;
    recs[0].lower = 0.25;
    recs[0].upper = 0.75;
    recs[0].time_ms = 1.5;
    recs[1].model_id = "model_001";
    recs[1].task = "conditional";
    recs[1].target = 0;
    recs[1].evidence = {{4, 2}};
    recs[1].method = "approx-lp";
    recs[1].state = 0;
    recs[1].lower = 0.1;
    recs[1].upper = 0.2;
    recs[1].time_ms = 250.0;

    const std::string text = serialize_benchmark_csv(recs);
    std::vector<BenchmarkRecord> back = parse_benchmark_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0].model_id == "model_000");
    CHECK(back[0].lower == doctest::Approx(0.25));
    CHECK(back[1].method == "approx-lp");
    CHECK(back[1].evidence == std::map<int, int>{{4, 2}});
    CHECK(back[1].time_ms == doctest::Approx(250.0));
}

TEST_CASE("csv errors name the offending row") {
    CHECK_THROWS_AS(parse_benchmark_csv(""), ParseError);
    CHECK_THROWS_AS(parse_benchmark_csv("wrong,header\n"), ParseError);

    const std::string header = "model_id,task,target,evidence,method,state,lower,upper,time_ms\n";
    try {
        parse_benchmark_csv(header + "m,marginal,0,,exact,0,0.1,0.2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("9 fields") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_benchmark_csv(header + "m,marginal,x,,exact,0,0.1,0.2,1\n"), ParseError);
    CHECK_THROWS_AS(parse_benchmark_csv(header + "m,marginal,0,,exact,0,0.1,nan,1\n"), ParseError);
}

TEST_CASE("truncated models always fail with a position, never crash") {
    const std::string text = kTinyModel;
    int failures = 0;
    for (std::size_t cut = 0; cut < text.size(); cut += 3) {
        try {
            parse_v_network(text.substr(0, cut));
        } catch (const ParseError& e) {
            CHECK(e.line >= 1);
            CHECK(e.column >= 1);
            ++failures;
        }
    }
    CHECK(failures > 0);
}
