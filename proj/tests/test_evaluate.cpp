#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "navalg/evaluate.hpp"
#include "navalg/graph.hpp"
#include "navalg/reference_eval.hpp"
#include "support.hpp"

using namespace navalg;

namespace {

Graph two_self_loops() { return load_graph("R x x\nR y y"); }
Graph one_self_loop() { return load_graph("R z z"); }

Graph reflexive_clique(const std::vector<std::string>& nodes) {
    std::vector<std::array<std::string, 3>> t;
    for (const auto& a : nodes)
        for (const auto& b : nodes) t.push_back({"R", a, b});
    return Graph::from_edges(t);
}

Graph bowtie() {
    std::vector<std::array<std::string, 3>> t;
    for (const auto& a : {"1", "2", "3"})
        for (const auto& b : {"1", "2", "3"}) t.push_back({"R", a, b});
    for (const auto& a : {"3", "4", "5"})
        for (const auto& b : {"3", "4", "5"}) t.push_back({"R", a, b});
    return Graph::from_edges(t);
}

Graph cycle(int n) {
    std::vector<std::array<std::string, 3>> t;
    for (int i = 0; i < n; ++i)
        t.push_back({"R", std::to_string(i), std::to_string((i + 1) % n)});
    return Graph::from_edges(t);
}

} // namespace

TEST_CASE("diversity distinguishes two self-loops from one") {
    CHECK(!evaluate(mk_di(), two_self_loops()).is_empty());
    CHECK(evaluate(mk_di(), one_self_loop()).is_empty());
}

TEST_CASE("id ranges over the active domain") {
    Graph g = load_graph("R a b");
    BinaryRelation r = evaluate(mk_id(), g);
    CHECK(r.count() == 2);
    CHECK(r.test(g.node_id("a"), g.node_id("a")));
    CHECK(r.test(g.node_id("b"), g.node_id("b")));
}

TEST_CASE("projection sandwich separates the acyclic pair") {
    Graph g1 = load_graph("R x y\nR x p\nR p q\nR s t\nR t y");
    Graph g2 = load_graph("R u v\nR x p\nR p q\nR s t\nR t y");
    ExprPtr e = parse_expr("pi1(R^2) . R . pi2(R^2)");
    CHECK(boolean_query(e, g1));
    CHECK_FALSE(boolean_query(e, g2));
}

TEST_CASE("boolean queries from the separation proofs") {
    ExprPtr diff_query = parse_expr("R^2 - R");
    CHECK_FALSE(boolean_query(diff_query, reflexive_clique({"1", "2", "3"})));
    CHECK(boolean_query(diff_query, bowtie()));

    CHECK_FALSE(boolean_query(mk_empty(), two_self_loops()));

    ExprPtr cap_query = parse_expr("R^2 & id");
    CHECK(boolean_query(cap_query, cycle(2)));
    CHECK_FALSE(boolean_query(cap_query, cycle(3)));
}

TEST_CASE("evaluate agrees with the reference oracle") {
    std::mt19937_64 rng(23);
    testsupport::ExprGenConfig cfg;
    cfg.labels = {"R", "S"};
    cfg.max_size = 12;
    for (int i = 0; i < 400; ++i) {
        Graph g = testsupport::random_graph(rng, 8, cfg.labels);
        ExprPtr e = testsupport::random_expr(rng, cfg);
        CHECK(evaluate(e, g) == reference_evaluate(e, g));
    }
}

TEST_CASE("algebraic laws hold on random graphs") {
    std::mt19937_64 rng(29);
    testsupport::ExprGenConfig cfg;
    cfg.max_size = 7;
    for (int i = 0; i < 150; ++i) {
        Graph g = testsupport::random_graph(rng, 6, {"R"});
        ExprPtr a = testsupport::random_expr(rng, cfg);
        ExprPtr b = testsupport::random_expr(rng, cfg);
        ExprPtr c = testsupport::random_expr(rng, cfg);

        // composition associativity
        CHECK(evaluate(mk_compose(a, mk_compose(b, c)), g) ==
              evaluate(mk_compose(mk_compose(a, b), c), g));
        // union laws
        CHECK(evaluate(mk_union(a, b), g) == evaluate(mk_union(b, a), g));
        CHECK(evaluate(mk_union(a, a), g) == evaluate(a, g));
        // identity and annihilation
        CHECK(evaluate(mk_compose(a, mk_id()), g) == evaluate(a, g));
        CHECK(evaluate(mk_compose(mk_id(), a), g) == evaluate(a, g));
        CHECK(evaluate(mk_compose(a, mk_empty()), g).is_empty());
        // distributivity
        CHECK(evaluate(mk_compose(mk_union(a, b), c), g) ==
              evaluate(mk_union(mk_compose(a, c), mk_compose(b, c)), g));
    }
}

TEST_CASE("interdependency identities hold pointwise") {
    std::mt19937_64 rng(31);
    testsupport::ExprGenConfig cfg;
    cfg.max_size = 8;
    cfg.labels = {"R", "S"};
    for (int i = 0; i < 200; ++i) {
        Graph g = testsupport::random_graph(rng, 7, {"R", "S"});
        ExprPtr e = testsupport::random_expr(rng, cfg);
        ExprPtr f = testsupport::random_expr(rng, cfg);

        BinaryRelation pi1_e = evaluate(mk_proj1(e), g);
        CHECK(pi1_e == evaluate(mk_intersect(mk_compose(e, mk_converse(e)), mk_id()), g));
        CHECK(pi1_e == evaluate(mk_intersect(mk_compose(e, mk_union(mk_id(), mk_di())),
                                             mk_id()),
                                g));
        CHECK(pi1_e == evaluate(mk_coproj1(mk_coproj1(e)), g));

        BinaryRelation pi2_e = evaluate(mk_proj2(e), g);
        CHECK(pi2_e == evaluate(mk_intersect(mk_compose(mk_converse(e), e), mk_id()), g));
        CHECK(pi2_e == evaluate(mk_intersect(mk_compose(mk_union(mk_id(), mk_di()), e),
                                             mk_id()),
                                g));
        CHECK(pi2_e == evaluate(mk_coproj2(mk_coproj2(e)), g));

        CHECK(evaluate(mk_coproj1(e), g) ==
              evaluate(mk_diff(mk_id(), mk_proj1(e)), g));
        CHECK(evaluate(mk_coproj2(e), g) ==
              evaluate(mk_diff(mk_id(), mk_proj2(e)), g));
        CHECK(evaluate(mk_intersect(e, f), g) ==
              evaluate(mk_diff(e, mk_diff(e, f)), g));
    }
}

TEST_CASE("monotone fragment is monotone under edge growth") {
    std::mt19937_64 rng(37);
    testsupport::ExprGenConfig cfg;
    cfg.profile.diff = false;
    cfg.profile.copi1 = cfg.profile.copi2 = false;
    cfg.max_size = 9;
    for (int i = 0; i < 150; ++i) {
        Graph small = testsupport::random_graph(rng, 5, {"R"}, 0.25);
        std::vector<std::array<std::string, 3>> t;
        for (auto [a, b] : small.edges("R"))
            t.push_back({"R", small.node_name(a), small.node_name(b)});
        int n = small.adom_size();
        for (int k = 0; k < 3; ++k)
            t.push_back({"R", small.node_name(static_cast<int>(rng() % n)),
                         small.node_name(static_cast<int>(rng() % n))});
        Graph big = Graph::from_edges(t);

        ExprPtr e = testsupport::random_expr(rng, cfg);
        // compare through node tokens; index assignments may differ
        BinaryRelation rs = evaluate(e, small);
        BinaryRelation rb = evaluate(e, big);
        for (auto [a, b] : rs.pairs())
            CHECK(rb.test(big.node_id(small.node_name(a)),
                          big.node_id(small.node_name(b))));
    }
}

TEST_CASE("results stay within the active domain square") {
    std::mt19937_64 rng(41);
    testsupport::ExprGenConfig cfg;
    for (int i = 0; i < 100; ++i) {
        Graph g = testsupport::random_graph(rng, 6, {"R"});
        ExprPtr e = testsupport::random_expr(rng, cfg);
        BinaryRelation r = evaluate(e, g);
        CHECK(r.size() == g.adom_size());
        CHECK(subset(r, BinaryRelation::full(g.adom_size())));
    }
}

TEST_CASE("path equality desugarings agree with the projection form") {
    std::mt19937_64 rng(43);
    testsupport::ExprGenConfig cfg;
    cfg.max_size = 7;
    cfg.labels = {"R", "S"};
    for (int i = 0; i < 200; ++i) {
        Graph g = testsupport::random_graph(rng, 6, {"R", "S"});
        ExprPtr e1 = testsupport::random_expr(rng, cfg);
        ExprPtr e2 = testsupport::random_expr(rng, cfg);
        BinaryRelation lhs = evaluate(mk_proj1(mk_intersect(e1, e2)), g);
        BinaryRelation rhs = evaluate(
            mk_intersect(mk_compose(e1, mk_converse(e2)), mk_id()), g);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("vocabulary and profile violations are rejected before evaluation") {
    Graph g = load_graph("R a b");
    CHECK_THROWS_AS(evaluate(parse_expr("S"), g), EvalError);

    EvalConfig cfg;
    cfg.profile = OperatorProfile{};
    CHECK_THROWS_AS(evaluate(parse_expr("conv(R)"), g, cfg), EvalError);
    CHECK_THROWS_AS(evaluate(parse_expr("di"), g, cfg), EvalError);
    CHECK_THROWS_AS(evaluate(parse_expr("R & R"), g, cfg), EvalError);
    CHECK_NOTHROW(evaluate(parse_expr("R . R | id"), g, cfg));

    SECTION("one-sided profiles evaluate one-sided operators") {
        EvalConfig one;
        one.profile = OperatorProfile{};
        one.profile.pi1 = true;
        CHECK_NOTHROW(evaluate(parse_expr("pi1(R)"), g, one));
        CHECK_THROWS_AS(evaluate(parse_expr("pi2(R)"), g, one), EvalError);
    }
}

TEST_CASE("empty active domain yields empty relations everywhere") {
    Graph g = Graph::from_edges({}, {"R"});
    CHECK(evaluate(mk_id(), g).is_empty());
    CHECK(evaluate(mk_di(), g).is_empty());
    CHECK(evaluate(parse_expr("copi1(R)"), g).is_empty());
}

TEST_CASE("repeated subtrees are shared through the evaluation DAG") {
    // blow-up-style family: logical size grows exponentially, but the
    // shared structure keeps the DAG linear, so this evaluates instantly
    ExprPtr e = mk_label("T");
    for (int i = 0; i < 24; ++i)
        e = mk_union(mk_proj1(mk_compose(mk_label("R"), e)),
                     mk_proj1(mk_compose(mk_label("T"), e)));
    Graph g = load_graph("R a b\nT b c");
    CHECK_NOTHROW(evaluate(e, g));
}
