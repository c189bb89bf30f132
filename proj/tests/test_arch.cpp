#include <doctest.h>

#include <stdexcept>

#include "qlayout/arch.hpp"

using namespace qlayout;

TEST_SUITE("arch") {

TEST_CASE("line edges follow the path") {
    CouplingGraph g = build_line(5);
    CHECK(g.kind() == ArchKind::line);
    CHECK(g.edge_count() == 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(g.edge(k).a == k);
        CHECK(g.edge(k).b == k + 1);
    }
    CHECK(g.edge_between(3, 2) == 2);
    CHECK_FALSE(g.edge_between(0, 2).has_value());
    CHECK_THROWS_AS(build_line(1), std::invalid_argument);
}

TEST_CASE("grid and sycamore-like shapes") {
    CouplingGraph grid = build_grid(2, 3);
    CHECK(grid.qubit_count() == 6);
    CHECK(grid.edge_count() == 7);
    CHECK(grid.max_degree() == 3);
    CouplingGraph syc = build_sycamore_like(3, 4);
    CHECK(syc.qubit_count() == 12);
    CHECK(syc.edge_count() == 14);
    CHECK(syc.max_degree() <= 4);
}

TEST_CASE("invalid graphs are rejected") {
    CHECK_THROWS_AS(CouplingGraph(3, {{0, 1}}), std::invalid_argument);          // disconnected
    CHECK_THROWS_AS(CouplingGraph(2, {{0, 1}, {1, 0}}), std::invalid_argument);  // duplicate
    CHECK_THROWS_AS(CouplingGraph(2, {{0, 0}, {0, 1}}), std::invalid_argument);  // self loop
    CHECK_THROWS_AS(CouplingGraph(2, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("paths given as edge lists become lines") {
    CouplingGraph g = from_edge_list(4, {{2, 0}, {1, 3}, {0, 1}});
    REQUIRE(g.kind() == ArchKind::line);
    CHECK(g.line_order() == std::vector<int>{2, 0, 1, 3});
    for (int k = 0; k < 3; ++k) {
        const Edge& e = g.edge(k);
        const int a = g.line_order()[static_cast<std::size_t>(k)];
        const int b = g.line_order()[static_cast<std::size_t>(k + 1)];
        CHECK(((e.a == a && e.b == b) || (e.a == b && e.b == a)));
    }
    CHECK(from_edge_list(3, {{0, 1}, {1, 2}, {0, 2}}).kind() == ArchKind::custom);
}

TEST_CASE("spec strings and json") {
    CHECK(arch_from_spec("line:3").edge_count() == 2);
    CHECK(arch_from_spec("grid:2x2").edge_count() == 4);
    CHECK(arch_from_spec("sycamore:2x2").qubit_count() == 4);
    CHECK_THROWS_AS(arch_from_spec("ring:4"), std::invalid_argument);
    CHECK_THROWS_AS(arch_from_spec("line"), std::invalid_argument);
    CouplingGraph g = parse_arch(arch_to_json(build_grid(2, 2)));
    CHECK(g.edge_count() == 4);
    CHECK(parse_arch(arch_to_json(build_line(4))).kind() == ArchKind::line);
}

TEST_CASE("matchings") {
    CouplingGraph g = build_line(5);
    const std::vector<int> even{0, 2}, adjacent{0, 1}, repeat{1, 1}, bad{9};
    CHECK(is_matching(g, even));
    CHECK_FALSE(is_matching(g, adjacent));
    CHECK(is_matching(g, repeat));
    CHECK_THROWS_AS(is_matching(g, bad), std::invalid_argument);
}

TEST_CASE("parity classes") {
    ParityClasses pc = line_parity_classes(build_line(5));
    CHECK(pc.even == std::vector<int>{0, 2});
    CHECK(pc.odd == std::vector<int>{1, 3});
    CHECK_THROWS_AS(line_parity_classes(build_grid(2, 2)), std::invalid_argument);
}

}
