#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "navalg/graph.hpp"
#include "support.hpp"

using namespace navalg;

TEST_CASE("active domain is derived from edges") {
    Graph g = Graph::from_edges({{{"R", "a", "b"}}});
    CHECK(g.adom_size() == 2);

    Graph empty = Graph::from_edges({}, {"R"});
    CHECK(empty.adom_size() == 0);
    CHECK(empty.adom().empty());

    Graph two = Graph::from_edges({{{"R", "a", "b"}}, {{"S", "c", "b"}}});
    CHECK(two.adom_size() == 3);
}

TEST_CASE("load_graph parses the edge-list format") {
    Graph g = load_graph("R a b\nR b c\n");
    CHECK(g.edges("R").size() == 2);
    CHECK(g.adom_size() == 3);

    Graph loop = load_graph("R a a");
    CHECK(loop.edges("R").count({loop.node_id("a"), loop.node_id("a")}) == 1);

    Graph two_label = load_graph("R a b\nS c b");
    CHECK(two_label.labels().size() == 2);
    CHECK(two_label.adom_size() == 3);

    SECTION("duplicates are idempotent") {
        Graph dup = load_graph("R a b\nR a b\n");
        CHECK(dup.edges("R").size() == 1);
    }
    SECTION("comments and blank lines are ignored") {
        Graph g2 = load_graph("# header\n\nR a b\n  # indented comment\n");
        CHECK(g2.edge_count() == 1);
    }
    SECTION("malformed lines report the line number") {
        try {
            load_graph("R a b\nR a\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position() == 2);
        }
    }
    SECTION("a file without edges has no vocabulary") {
        CHECK_THROWS_AS(load_graph("# nothing\n"), SchemaError);
    }
}

TEST_CASE("converse_graph reverses every edge") {
    Graph g = load_graph("R a b");
    Graph c = converse_graph(g);
    CHECK(c.edges("R").count({c.node_id("b"), c.node_id("a")}) == 1);
    CHECK(c.edges("R").size() == 1);

    SECTION("a symmetric graph equals its converse") {
        Graph cyc = load_graph("R a b\nR b a");
        CHECK(same_graph(cyc, converse_graph(cyc)));
    }
    SECTION("active domain is preserved") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 50; ++i) {
            Graph r = testsupport::random_graph(rng, 6, {"R", "S"});
            CHECK(converse_graph(r).adom_size() == r.adom_size());
        }
    }
}

TEST_CASE("render/load round-trips up to node renaming") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        Graph g = testsupport::random_graph(rng, 6, {"R", "S"});
        Graph back = load_graph(render_graph(g));
        CHECK(same_graph(g, back));
    }
}

TEST_CASE("bit-matrix and pair-set views of a relation agree") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        int n = 1 + static_cast<int>(rng() % 9);
        std::set<std::pair<NodeId, NodeId>> pairs, other;
        for (int k = 0; k < n; ++k) {
            pairs.insert({static_cast<int>(rng() % n), static_cast<int>(rng() % n)});
            other.insert({static_cast<int>(rng() % n), static_cast<int>(rng() % n)});
        }
        BinaryRelation r = BinaryRelation::from_pairs(
            n, {pairs.begin(), pairs.end()});
        BinaryRelation s = BinaryRelation::from_pairs(
            n, {other.begin(), other.end()});

        auto round = r.pairs();
        CHECK(std::set<std::pair<NodeId, NodeId>>(round.begin(), round.end()) == pairs);
        CHECK(r.count() == pairs.size());

        // set operations agree with std::set arithmetic
        std::set<std::pair<NodeId, NodeId>> uni = pairs, inter, diff;
        uni.insert(other.begin(), other.end());
        for (auto p : pairs) {
            if (other.count(p)) inter.insert(p);
            else diff.insert(p);
        }
        auto as_set = [](const BinaryRelation& x) {
            auto v = x.pairs();
            return std::set<std::pair<NodeId, NodeId>>(v.begin(), v.end());
        };
        CHECK(as_set(set_union(r, s)) == uni);
        CHECK(as_set(set_intersect(r, s)) == inter);
        CHECK(as_set(set_difference(r, s)) == diff);

        // converse flips every pair
        std::set<std::pair<NodeId, NodeId>> conv;
        for (auto [a, b] : pairs) conv.insert({b, a});
        CHECK(as_set(converse(r)) == conv);
    }
}

TEST_CASE("marked graphs demand in-domain nodes") {
    Graph g = load_graph("R a b");
    CHECK_NOTHROW(MarkedGraph(g, 0, 1));
    CHECK_THROWS_AS(MarkedGraph(g, 0, 5), SchemaError);
}
