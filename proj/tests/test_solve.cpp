#include <doctest.h>

#include "qlayout/solve.hpp"
#include "support.hpp"

using namespace qlayout;

TEST_SUITE("solve") {

TEST_CASE("option parsing") {
    CHECK(parse_objective("swap") == Objective::swaps);
    CHECK(parse_objective("fidelity") == Objective::fidelity);
    CHECK_THROWS_AS(parse_objective("speed"), std::invalid_argument);
    CHECK(parse_alternating("auto") == AlternatingMode::both);
    CHECK(parse_alternating("1") == AlternatingMode::phase1);
    CHECK_THROWS_AS(parse_alternating("2"), std::invalid_argument);
    CHECK(parse_swap_search("binary") == SwapSearch::binary);
}

TEST_CASE("depth objective on the internal backend") {
    SolveResult r = minimize_depth(qlt::triangle(), build_line(3), {}, Backend::internal());
    CHECK(r.metrics.depth == 3);
    CHECK(r.metrics.swap_count == 0);
    CHECK(r.metrics.absorbed_count == 1);
    CHECK(verify(qlt::triangle(), build_line(3), r.solution).ok());
    CHECK(check_theorem1(r.solution, build_line(3)).empty());
}

TEST_CASE("swap objective without absorption") {
    SolveOptions o;
    o.absorption = false;
    SolveResult r = minimize_swaps(qlt::triangle(), build_line(3), o, Backend::internal());
    CHECK(r.metrics.swap_count == 1);
    CHECK(r.metrics.absorbed_count == 0);
    o.swap_search = SwapSearch::binary;
    CHECK(minimize_swaps(qlt::triangle(), build_line(3), o, Backend::internal()).metrics.swap_count == 1);
}

TEST_CASE("fidelity objective") {
    SolveResult r = maximize_fidelity(qlt::triangle(), build_line(3), {}, Backend::internal());
    REQUIRE(r.metrics.fidelity.has_value());
    CHECK(*r.metrics.fidelity == doctest::Approx(fidelity(3, 3, 3, 0, 50, 0.99)));
}

TEST_CASE("alternating restriction needs a line") {
    SolveOptions o;
    o.alternating = AlternatingMode::both;
    CHECK_THROWS_AS(minimize_depth(qlt::one_gate(), build_grid(1, 2), o, Backend::internal()),
                    std::invalid_argument);
    o.reduce_best_effort = true;
    CHECK(minimize_depth(qlt::one_gate(), build_grid(1, 2), o, Backend::internal()).metrics.depth == 1);
}

TEST_CASE("alternating solutions follow the pattern") {
    Program p = qlt::make_program(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, true);
    SolveOptions o;
    o.alternating = AlternatingMode::both;
    SolveResult r = minimize_depth(p, build_line(4), o, Backend::internal());
    CHECK(verify(p, build_line(4), r.solution).ok());
    CHECK(alternating_pattern_holds(r.solution, build_line(4)));
    CHECK(r.phase != AlternatingPhase::off);
}

TEST_CASE("no solution within the cap") {
    SolveOptions o;
    o.absorption = false;
    o.swap_budget = 0;
    o.horizon_cap = 4;
    CHECK_THROWS_AS(minimize_depth(qlt::triangle(), build_line(3), o, Backend::internal()), NoSolution);
}

TEST_CASE("timeouts propagate") {
    Backend b = Backend::external("sleep 30", 0.2);
    CHECK_THROWS_AS(minimize_depth(qlt::triangle(), build_line(3), {}, b), SolverTimeout);
}

TEST_CASE("certificate") {
    SolveOptions o;
    o.alternating = AlternatingMode::both;
    CertifyResult c = certify_depth(qlt::triangle(), build_line(3), o, Backend::internal());
    REQUIRE(c.certificate.has_value());
    CHECK(c.certificate->certified_floor == 3);
    CHECK(c.certificate->horizon_checked == 2);
    CHECK(c.reduction_optimal);
    CHECK(c.certificate->instance_id.size() == 16);
    CHECK(certificate_to_json(c).find("\"certified_floor\": 3") != std::string::npos);

    CertifyResult single = certify_depth(qlt::one_gate(), build_line(2), {}, Backend::internal());
    REQUIRE(single.certificate.has_value());
    CHECK(single.certificate->horizon_checked == 0);
}

TEST_CASE("initial mapping candidates") {
    std::string warning;
    auto full = initial_mapping_candidates(qlt::make_program(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, true), build_line(4), &warning);
    CHECK(full.size() == 1);

    Program layered = qlt::make_program(4, {{0, 1}, {2, 3}, {1, 2}}, false);
    auto cands = initial_mapping_candidates(layered, build_line(4), &warning);
    CHECK(warning.empty());
    CHECK(cands.size() == 4);  // 2 placements x 2^2 orientations / reflection
    for (const auto& m : cands) CHECK(is_injective_mapping(m, 4));

    warning.clear();
    auto fallback = initial_mapping_candidates(layered, build_grid(2, 2), &warning);
    CHECK(fallback.size() == 1);
    CHECK_FALSE(warning.empty());
}

TEST_CASE("portfolio keeps the best candidate") {
    Program layered = qlt::make_program(4, {{0, 1}, {2, 3}, {1, 2}}, false);
    auto cands = initial_mapping_candidates(layered, build_line(4));
    SolveOptions o;
    o.absorption = false;
    SolveResult r = portfolio_solve(layered, build_line(4), o, Backend::internal(), cands, Objective::depth, 2);
    CHECK(r.metrics.depth == 2);
    CHECK(r.metrics.swap_count == 0);
}

TEST_CASE("fnv1a") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("external solver matches the internal one" * doctest::skip(!qlt::have_smt_solver())) {
    for (const auto& inst : qlt::tiny_instances()) {
        if (inst.name.find("q3-line3-comm") == std::string::npos) continue;
        SolveResult a = minimize_depth(inst.program, inst.graph, {}, Backend::external());
        SolveResult b = minimize_depth(inst.program, inst.graph, {}, Backend::internal());
        CAPTURE(inst.name);
        CHECK(a.metrics.depth == b.metrics.depth);
        CHECK(a.metrics.swap_count == b.metrics.swap_count);
        CHECK(a.metrics.absorbed_count == b.metrics.absorbed_count);
    }
}

}
