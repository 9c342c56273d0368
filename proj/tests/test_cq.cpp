#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "navalg/cq.hpp"
#include "navalg/evaluate.hpp"
#include "support.hpp"

using namespace navalg;

namespace {

CQ body_of(const std::string& text) { return parse_body(text); }

} // namespace

TEST_CASE("match_cq evaluates conjunctive queries with nonequalities") {
    Graph g = load_graph("R a b\nR b c");

    CQ q = body_of("head x y\nR x y");
    auto res = match_cq(q, g);
    CHECK(res.size() == 2);

    CQ boolean_q = body_of("R x y");
    CHECK(match_cq_boolean(boolean_q, g));
    CHECK(match_cq(boolean_q, g).count({}) == 1); // {()} encodes true

    Graph empty_r = Graph::from_edges({}, {"R"});
    CHECK_FALSE(match_cq_boolean(boolean_q, empty_r));

    CQ neq = body_of("head x y\nR x y\nneq x y");
    CHECK(match_cq(neq, load_graph("R a a")).empty());
    CHECK(match_cq(neq, load_graph("R a b")).size() == 1);
}

TEST_CASE("unconstrained variables range over the active domain") {
    // the id translation: head (x,x) with no atoms
    CQ q;
    int x = q.add_var("x");
    q.head = {x, x};
    Graph g = load_graph("R a b\nR b c");
    CHECK(match_cq(q, g).size() == 3);
}

TEST_CASE("homomorphism search is sound and none is definitive") {
    CQ bzzz = build_bzzz();
    CQ single = body_of("R x y");
    auto hom = find_homomorphism(single, bzzz);
    REQUIRE(hom);
    // soundness: the image of the atom is an edge of the target body
    Graph bg = body_to_graph(bzzz);
    CHECK(bg.edges("R").count({bg.node_id(bzzz.var_names[(*hom)[0]]),
                               bg.node_id(bzzz.var_names[(*hom)[1]])}) == 1);

    // a 3-out-degree star maps into a union of chains only by collapsing
    // targets: chain nodes have out-degree at most two
    CQ star = body_of("R s a\nR s b\nR s c");
    CQ chains = body_of("R x1 x2\nR x2 x3\nR y1 y2");
    auto collapse = find_homomorphism(star, chains);
    REQUIRE(collapse.has_value());
    std::set<int> images{(*collapse)[1], (*collapse)[2], (*collapse)[3]};
    CHECK(images.size() < 3);

    // identity into itself
    CQ self = body_of("R x y\nR y z");
    auto endo = find_homomorphism(self, self);
    CHECK(endo.has_value());
}

TEST_CASE("homomorphism search agrees with exhaustive enumeration") {
    std::mt19937_64 rng(109);
    for (int round = 0; round < 120; ++round) {
        // random small bodies
        auto random_body = [&](int vars, int atoms) {
            CQ q;
            for (int v = 0; v < vars; ++v) q.add_var("v" + std::to_string(v));
            for (int a = 0; a < atoms; ++a)
                q.atoms.push_back({"R", static_cast<int>(rng() % vars),
                                   static_cast<int>(rng() % vars)});
            return q;
        };
        CQ from = random_body(2 + rng() % 3, 1 + rng() % 3);
        CQ to = random_body(2 + rng() % 4, 1 + rng() % 4);

        bool exhaustive_found = false;
        int n_from = from.var_count(), n_to = to.var_count();
        std::vector<int> map(n_from, 0);
        std::set<std::pair<int, int>> to_edges;
        for (const auto& a : to.atoms) to_edges.insert({a.x, a.y});
        for (long long code = 0; code < static_cast<long long>(std::pow(n_to, n_from));
             ++code) {
            long long c = code;
            for (int v = 0; v < n_from; ++v) {
                map[v] = static_cast<int>(c % n_to);
                c /= n_to;
            }
            bool ok = true;
            for (const auto& a : from.atoms)
                if (!to_edges.count({map[a.x], map[a.y]})) { ok = false; break; }
            if (ok) { exhaustive_found = true; break; }
        }
        CHECK(find_homomorphism(from, to).has_value() == exhaustive_found);
    }
}

TEST_CASE("homomorphisms compose") {
    std::mt19937_64 rng(113);
    CQ bzzz = build_bzzz();
    CQ mid = body_of("R x y\nR y z\nR w z");
    auto h1 = find_homomorphism(mid, bzzz);
    REQUIRE(h1);
    CQ single = body_of("R p q");
    auto h2 = find_homomorphism(single, mid);
    REQUIRE(h2);
    // composed map preserves the atom
    Graph bg = body_to_graph(bzzz);
    int img_p = (*h1)[(*h2)[0]];
    int img_q = (*h1)[(*h2)[1]];
    CHECK(bg.edges("R").count({bg.node_id(bzzz.var_names[img_p]),
                               bg.node_id(bzzz.var_names[img_q])}) == 1);
}

TEST_CASE("endomorphism enumeration") {
    CHECK(enumerate_endomorphisms(body_of("R x y")).size() == 1);

    auto two_cycle = enumerate_endomorphisms(body_of("R x y\nR y x"));
    CHECK(two_cycle.size() == 2); // identity and the swap

    SECTION("the triple zigzag is rigid") {
        CQ bzzz = build_bzzz();
        auto endos = enumerate_endomorphisms(bzzz);
        REQUIRE(endos.size() == 1);
        CHECK(is_identity_endomorphism(endos[0]));
    }
}

TEST_CASE("chain recognition") {
    // the example chain: forward 1->2, 2->3, 4->5; backward 4->3, 6->5, 7->6
    CQ fig = body_of("R n1 n2\nR n2 n3\nR n4 n3\nR n4 n5\nR n6 n5\nR n7 n6");
    CHECK(is_chain(fig));

    CHECK_FALSE(is_chain(body_of("R x y\nR y z\nR z x"))); // cycle
    CHECK_FALSE(is_chain(body_of("R x x")));               // loop
    CHECK_FALSE(is_chain(body_of("R x y\nR y x")));        // 2-cycle
    CHECK_FALSE(is_chain(body_of("R a b\nR c d")));        // disconnected
    CHECK(is_disjoint_union_of_chains(body_of("R a b\nR c d")));
    CHECK_FALSE(is_disjoint_union_of_chains(body_of("R a b\nR x y\nR y z\nR z x")));
    CHECK_THROWS_AS(is_chain(body_of("R x y\nS y z")), PreconditionError);
}

TEST_CASE("expr_to_cq translates the listed examples") {
    CQ conv = expr_to_cq(parse_expr("conv(R)"));
    REQUIRE(conv.atoms.size() == 1);
    CHECK(conv.atoms[0].x == conv.head[1]);
    CHECK(conv.atoms[0].y == conv.head[0]);

    CQ rr = expr_to_cq(parse_expr("R . R"));
    CHECK(rr.atoms.size() == 2);
    CHECK(rr.neqs.empty());
    CHECK(is_chain(rr));

    CQ rdir = expr_to_cq(parse_expr("R . di . R"));
    CHECK(rdir.atoms.size() == 2);
    REQUIRE(rdir.neqs.size() == 1);
    CHECK(is_disjoint_union_of_chains(rdir));
    CHECK_FALSE(is_chain(rdir));

    CHECK_THROWS_AS(expr_to_cq(parse_expr("R | S")), PreconditionError);
    CHECK_THROWS_AS(expr_to_cq(parse_expr("pi1(R)")), PreconditionError);
}

TEST_CASE("expr_to_cq is equivalent to evaluation") {
    auto check_equivalence = [](const ExprPtr& e, const Graph& g) {
        CQ q = expr_to_cq(e);
        auto matches = match_cq(q, g);
        BinaryRelation want = evaluate(e, g);
        BinaryRelation got(g.adom_size());
        for (const auto& tuple : matches) got.set(tuple[0], tuple[1]);
        return got == want;
    };

    SECTION("exhaustive over all single-label graphs with <= 4 nodes") {
        std::vector<ExprPtr> exprs = {
            parse_expr("R . di . R"), parse_expr("conv(R) . R"),
            parse_expr("R . id . conv(R)"), parse_expr("di . di"),
            parse_expr("R . R . di")};
        for (const auto& e : exprs) {
            for (int mask = 1; mask < (1 << 9); ++mask) { // 3-node graphs, exhaustive
                std::vector<std::array<std::string, 3>> t;
                for (int c = 0; c < 9; ++c)
                    if (mask & (1 << c))
                        t.push_back({"R", "n" + std::to_string(c / 3),
                                     "n" + std::to_string(c % 3)});
                Graph g = Graph::from_edges(t);
                if (!check_equivalence(e, g)) {
                    CAPTURE(render_expr(e), render_graph(g));
                    FAIL("translation mismatch");
                }
            }
        }
    }

    SECTION("random union-free expressions on random graphs") {
        std::mt19937_64 rng(127);
        for (int i = 0; i < 150; ++i) {
            // random chain over {R, conv(R), id, di}
            int len = 1 + static_cast<int>(rng() % 5);
            ExprPtr e;
            for (int k = 0; k < len; ++k) {
                ExprPtr atom;
                switch (rng() % 4) {
                    case 0: atom = mk_label("R"); break;
                    case 1: atom = mk_converse(mk_label("R")); break;
                    case 2: atom = mk_id(); break;
                    default: atom = mk_di(); break;
                }
                e = e ? mk_compose(e, atom) : atom;
            }
            CQ q = expr_to_cq(e);
            CHECK(is_disjoint_union_of_chains(q));
            Graph g = testsupport::random_graph(rng, 5, {"R"});
            if (!check_equivalence(e, g)) {
                CAPTURE(render_expr(e), render_graph(g));
                FAIL("translation mismatch");
            }
        }
    }
}

TEST_CASE("body files round-trip") {
    std::string text = "head x y\nR x y\nR y z\nneq x z\n";
    CQ q = parse_body(text);
    CHECK(render_body(q) == text);
    CHECK_THROWS_AS(parse_body("R x\n"), ParseError);
    CHECK_THROWS_AS(parse_body("neq x x\n"), SchemaError);
}

TEST_CASE("verify_zzz confirms every ingredient at a small bound") {
    ZzzReport rep = verify_zzz(4);
    CHECK(rep.q_true_via_eval);
    CHECK(rep.q_true_via_pi_form);
    CHECK(rep.q_true_via_match);
    CHECK(rep.rigid);
    CHECK(rep.endomorphism_count == 1);
    CHECK(rep.chains_ok);
    CHECK(rep.no_bounded_expression);
    CHECK(rep.failures.empty());
    CHECK(rep.ok());
}

TEST_CASE("zigzag query forms agree on random graphs") {
    std::mt19937_64 rng(131);
    ExprPtr conv_form = zzz_conv_expr();
    ExprPtr pi_form = zzz_pi_expr();
    for (int i = 0; i < 300; ++i) {
        Graph g = testsupport::random_graph(rng, 7, {"R"});
        CHECK(evaluate(conv_form, g) == evaluate(pi_form, g));
    }
}
