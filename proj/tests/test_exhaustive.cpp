#include <doctest.h>

#include "qlayout/exhaustive.hpp"
#include "support.hpp"

using namespace qlayout;

TEST_SUITE("exhaustive") {

TEST_CASE("triangle on a line needs three steps and no explicit SWAP") {
    auto r = internal_exhaustive(qlt::triangle(), build_line(3), true, 5);
    REQUIRE(r.has_value());
    CHECK(r->depth == 3);
    CHECK(r->swaps == 0);
    CHECK(verify(qlt::triangle(), build_line(3), r->witness).ok());
}

TEST_CASE("triangle without absorption pays one SWAP and a step") {
    auto r = internal_exhaustive(qlt::triangle(), build_line(3), false, 5);
    REQUIRE(r.has_value());
    CHECK(r->depth == 4);
    CHECK(r->swaps == 1);
    VerifyReport v = verify(qlt::triangle(), build_line(3), r->witness);
    REQUIRE(v.ok());
    CHECK(v.metrics->absorbed_count == 0);
}

TEST_CASE("single gate") {
    auto r = internal_exhaustive(qlt::one_gate(), build_line(2), true, 3);
    REQUIRE(r.has_value());
    CHECK(r->depth == 1);
    CHECK(r->swaps == 0);
}

TEST_CASE("fixed initial mapping forces a SWAP") {
    SearchConstraints c;
    c.absorption = false;
    c.initial_mapping = std::vector<int>{0, 2, 1};
    Program p = qlt::make_program(3, {{0, 1}}, false);
    auto r = internal_exhaustive(p, build_line(3), false, 4, c);
    REQUIRE(r.has_value());
    CHECK(r->depth == 2);
    CHECK(r->swaps == 1);
    CHECK(r->witness.mapping[0] == std::vector<int>{0, 2, 1});
}

TEST_CASE("horizon too small gives nothing") {
    CHECK_FALSE(internal_exhaustive(qlt::triangle(), build_line(3), true, 2).has_value());
}

TEST_CASE("budgets prune") {
    SearchConstraints c;
    c.swap_budget = 0;
    CHECK_FALSE(internal_exhaustive(qlt::triangle(), build_line(3), false, 6, c).has_value());
    c.swap_budget.reset();
    c.absorbed_budget = 0;
    auto r = internal_exhaustive(qlt::triangle(), build_line(3), true, 6, c);
    REQUIRE(r.has_value());
    CHECK(r->swaps == 1);
}

TEST_CASE("more steps never need more SWAPs") {
    Program p = qlt::make_program(3, {{0, 2}, {0, 1}, {0, 2}}, false);
    ExhaustiveSearch s(p, build_line(3), {.absorption = false});
    auto tight = s.min_depth(6);
    REQUIRE(tight.has_value());
    auto loose = s.min_swaps(tight->depth + 2);
    REQUIRE(loose.has_value());
    CHECK(loose->swaps <= tight->swaps);
}

TEST_CASE("size limits") {
    Program p = qlt::make_program(5, {{0, 1}}, false);
    CHECK_THROWS_AS(internal_exhaustive(p, build_line(5), true, 3), std::invalid_argument);
    CHECK_THROWS_AS(internal_exhaustive(qlt::one_gate(), build_line(2), true, 9), std::invalid_argument);
}

TEST_CASE("model_from_solution satisfies the clauses") {
    auto r = internal_exhaustive(qlt::triangle(), build_line(3), true, 5);
    REQUIRE(r.has_value());
    for (int T : {3, 4}) {
        ConstraintSystem cs = build(qlt::triangle(), build_line(3), {T});
        Assignment m = model_from_solution(r->witness, cs);
        CHECK(cs.violated_clauses(m).empty());
        CHECK(decode(m, cs) == r->witness);
    }
}

}
