#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "navalg/expr.hpp"
#include "support.hpp"

using namespace navalg;

TEST_CASE("parser builds the expected shapes") {
    ExprPtr e = parse_expr("R . R");
    REQUIRE(e->op == Op::Compose);
    CHECK(e->lhs->op == Op::Label);
    CHECK(e->rhs->op == Op::Label);

    ExprPtr zig = parse_expr("pi1(R.R.R.R . conv(R) . R.R.R.R)");
    REQUIRE(zig->op == Op::Proj1);
    CHECK(expr_size(zig) == 19); // 9 labels, 8 compositions, conv, pi1

    ExprPtr cap = parse_expr("R & id");
    REQUIRE(cap->op == Op::Intersect);
    CHECK(cap->rhs->op == Op::Id);
}

TEST_CASE("precedence: composition, intersection, difference, union") {
    // R.R & id | di - R  parses as  ((R.R) & id) | (di - R)
    ExprPtr e = parse_expr("R.R & id | di - R");
    REQUIRE(e->op == Op::Union);
    CHECK(e->lhs->op == Op::Intersect);
    CHECK(e->lhs->lhs->op == Op::Compose);
    CHECK(e->rhs->op == Op::Diff);
}

TEST_CASE("power shorthand expands to left-folded composition") {
    CHECK(expr_equal(parse_expr("R^3"), parse_expr("(R . R) . R")));
    CHECK(expr_equal(parse_expr("R^1"), parse_expr("R")));
    CHECK(expr_equal(parse_expr("(R|id)^2"), parse_expr("(R|id) . (R|id)")));
    CHECK_THROWS_AS(parse_expr("R^0"), ParseError);
}

TEST_CASE("parser rejects bad input with a position") {
    CHECK_THROWS_AS(parse_expr("R . . R"), ParseError);
    CHECK_THROWS_AS(parse_expr("pi1 . R"), ParseError); // reserved word as label
    CHECK_THROWS_AS(parse_expr("conv"), ParseError);
    CHECK_THROWS_AS(parse_expr("(R"), ParseError);
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    try {
        parse_expr("R ? R");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 2);
    }
}

TEST_CASE("render produces canonical text") {
    CHECK(render_expr(mk_id()) == "id");
    CHECK(render_expr(mk_diff(mk_di(), mk_label("R"))) == "(di - R)");
    CHECK(render_expr(mk_coproj2(mk_compose(mk_label("R"), mk_label("S")))) ==
          "copi2((R . S))");
}

TEST_CASE("parse after render is the identity") {
    std::mt19937_64 rng(17);
    testsupport::ExprGenConfig cfg;
    cfg.labels = {"R", "S", "edge_2"};
    cfg.max_size = 20;
    for (int i = 0; i < 300; ++i) {
        ExprPtr e = testsupport::random_expr(rng, cfg);
        CHECK(expr_equal(parse_expr(render_expr(e)), e));
    }
}

TEST_CASE("features_used reports the paired feature for one-sided operators") {
    CHECK(features_used(parse_expr("R . R")).mask == 0);
    CHECK(features_used(parse_expr("(R^2 . conv(R) . R) & R")) ==
          FeatureSet(kConv | kCap));
    CHECK(features_used(parse_expr("id - pi1(R)")) == FeatureSet(kDiff | kPi));
    CHECK(features_used(parse_expr("copi2(R)")) == FeatureSet(kCopi));
}

TEST_CASE("degree counts nesting of composition and (co)projections only") {
    CHECK(expr_degree(parse_expr("R . R")) == 1);
    CHECK(expr_degree(parse_expr("pi1(R . R)")) == 2);
    CHECK(expr_degree(parse_expr("R | R")) == 0);
    CHECK(expr_degree(parse_expr("R . (R . R)")) == 2);
    CHECK(expr_degree(parse_expr("conv(R . R)")) == 1);
    CHECK(expr_degree(parse_expr("copi1(R) - di")) == 1);
}

TEST_CASE("size counts AST nodes") {
    CHECK(expr_size(parse_expr("R")) == 1);
    CHECK(expr_size(parse_expr("R . R")) == 3);

    // The family T, pi1((R|T) . e_n) grows by 5 nodes per step.
    ExprPtr e = mk_label("T");
    for (int n = 1; n <= 6; ++n) {
        ExprPtr next = mk_proj1(mk_compose(mk_union(mk_label("R"), mk_label("T")), e));
        CHECK(expr_size(next) == expr_size(e) + 5);
        e = next;
    }
}

TEST_CASE("degree never exceeds size") {
    std::mt19937_64 rng(19);
    testsupport::ExprGenConfig cfg;
    for (int i = 0; i < 300; ++i) {
        ExprPtr e = testsupport::random_expr(rng, cfg);
        CHECK(expr_degree(e) <= expr_size(e));
    }
}

TEST_CASE("feature parsing round-trips") {
    CHECK(parse_features("di,conv,cap") == FeatureSet(kDi | kConv | kCap));
    CHECK(parse_features("") == FeatureSet());
    CHECK(to_string(FeatureSet(kPi | kDiff)) == "pi,diff");
    CHECK_THROWS_AS(parse_features("bogus"), SchemaError);

    OperatorProfile p = parse_profile("pi1,di");
    CHECK(p.pi1);
    CHECK_FALSE(p.pi2);
    CHECK(p.di);
}
