#include <doctest.h>

#include <algorithm>

#include "qlayout/program.hpp"
#include "support.hpp"

using namespace qlayout;

TEST_SUITE("program") {

TEST_CASE("parse the five-qubit all-pairs fixture") {
    Program p = load_program(qlt::fixture("all_pairs5.json"));
    CHECK(p.qubit_count() == 5);
    CHECK(p.gate_count() == 10);
    REQUIRE(p.commuting_groups().size() == 1);
    CHECK(p.commuting_groups()[0].size() == 10);
}

TEST_CASE("missing groups default to singletons") {
    Program p = parse_program(R"({"qubits":3,"gates":[{"q":[0,1]},{"q":[1,2]}]})");
    CHECK(p.commuting_groups() == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(p.group_of(1) == 1);
}

TEST_CASE("malformed programs are rejected with a named cause") {
    CHECK_THROWS_WITH_AS(parse_program(R"({"qubits":2,"gates":[{"q":[0]}]})"),
                         doctest::Contains("single-qubit"), std::invalid_argument);
    CHECK_THROWS_AS(parse_program(R"({"qubits":2,"gates":[{"q":[0,0]}]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_program(R"({"qubits":2,"gates":[{"q":[0,2]}]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_program(R"({"qubits":2,"gates":[]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_program(R"({"qubits":1,"gates":[{"q":[0,1]}]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_program(R"({"gates":[{"q":[0,1]}]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_program("not json"), std::invalid_argument);
    // groups must be contiguous runs in list order
    CHECK_THROWS_AS(parse_program(R"({"qubits":3,"gates":[{"q":[0,1]},{"q":[1,2]},{"q":[0,2]}],
                                      "commuting_groups":[[0,2],[1]]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_program(R"({"qubits":3,"gates":[{"q":[0,1]},{"q":[1,2]}],"commuting_groups":[[0]]})"),
                    std::invalid_argument);
}

TEST_CASE("json round trip") {
    Program p = qlt::triangle();
    Program q = parse_program(program_to_json(p));
    CHECK(q.gate_count() == 3);
    CHECK(q.commuting_groups() == p.commuting_groups());
    for (int g = 0; g < 3; ++g) CHECK(q.gate(g).qubits == p.gate(g).qubits);
}

TEST_CASE("sequential gates on a shared qubit get precedence") {
    Program p = qlt::make_program(3, {{0, 1}, {1, 2}, {0, 2}}, false);
    DependencyGraph d = dependencies(p);
    CHECK(d.precedence == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(d.distinct_time.empty());
    CHECK(depth_lower_bound(d, p) == 3);
}

TEST_CASE("commuting gates only need distinct times") {
    DependencyGraph d = dependencies(qlt::triangle());
    CHECK(d.precedence.empty());
    CHECK(d.distinct_time.size() == 3);
    CHECK(depth_lower_bound(d, qlt::triangle()) == 2);
}

TEST_CASE("disjoint gates are unconstrained") {
    Program p = qlt::make_program(4, {{0, 1}, {2, 3}}, false);
    DependencyGraph d = dependencies(p);
    CHECK(d.precedence.empty());
    CHECK(d.distinct_time.empty());
}

TEST_CASE("groups order against earlier groups") {
    // group {0,1} then group {2}: gate 2 shares q1 with both
    Program p(3, {Gate{0, {0, 1}, "", {}}, Gate{1, {1, 2}, "", {}}, Gate{2, {1, 0}, "", {}}}, {{0, 1}, {2}});
    DependencyGraph d = dependencies(p);
    CHECK(std::count(d.precedence.begin(), d.precedence.end(), std::pair(0, 2)) == 1);
    CHECK(std::count(d.precedence.begin(), d.precedence.end(), std::pair(1, 2)) == 1);
    CHECK(d.distinct_time == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("all-pairs program lower bound is the per-qubit load") {
    Program p = load_program(qlt::fixture("all_pairs5.json"));
    CHECK(depth_lower_bound(dependencies(p), p) == 4);
}

TEST_CASE("reversal mirrors gates and groups") {
    Program p(3, {Gate{0, {0, 1}, "a", {}}, Gate{1, {1, 2}, "b", {}}, Gate{2, {0, 2}, "c", {}}}, {{0}, {1, 2}});
    Program r = p.reversed();
    CHECK(r.gate(0).label == "c");
    CHECK(r.gate(2).label == "a");
    CHECK(r.commuting_groups() == std::vector<std::vector<int>>{{0, 1}, {2}});
    CHECK(r.reversed().gate(0).label == "a");
}

}
