#include <doctest.h>

#include <regex>

#include "qlayout/encode.hpp"
#include "support.hpp"

using namespace qlayout;

namespace {

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("encode") {

TEST_CASE("variable count is |Q|T + 2|G| + 2|E|T") {
    Program p = load_program(qlt::fixture("all_pairs5.json"));
    for (int T : {1, 3, 5}) {
        ConstraintSystem cs = build(p, build_line(5), {T});
        CHECK(cs.vars().size() == 5 * T + 2 * 10 + 2 * 4 * T);
    }
    ConstraintSystem one = build(qlt::one_gate(), build_line(2), {1});
    CHECK(one.vars().size() == 6);
    CHECK(count(emit_smtlib(one), "(declare-const ") == 6);
}

TEST_CASE("names follow the fixed scheme and round trip") {
    ConstraintSystem cs = build(qlt::triangle(), build_line(3), {2});
    const VarTable& v = cs.vars();
    CHECK(v.info(v.mapping(2, 1)).name == "pi_q2_t1");
    CHECK(v.info(v.gate_time(1)).name == "tg_1");
    CHECK(v.info(v.gate_edge(2)).name == "xg_2");
    CHECK(v.info(v.absorbed(1, 0)).name == "a_e1_t0");
    CHECK(v.info(v.explicit_swap(0, 1)).name == "s_e0_t1");
    for (int k = 0; k < v.size(); ++k) CHECK(v.find(v.info(k).name) == k);
    CHECK_FALSE(v.find("pi_q9_t0").has_value());
    CHECK_FALSE(v.find("bogus").has_value());
    CHECK(v.info(v.absorbed(0, 0)).is_bool);
    CHECK_FALSE(v.info(v.gate_time(0)).is_bool);
}

TEST_CASE("emission is deterministic and well formed") {
    ConstraintSystem cs = build(qlt::triangle(), build_line(3), {3, true, AlternatingPhase::off, std::nullopt, 1});
    const std::string a = emit_smtlib(cs);
    const std::string b = emit_smtlib(build(qlt::triangle(), build_line(3), {3, true, AlternatingPhase::off, std::nullopt, 1}));
    CHECK(a == b);
    CHECK(a.rfind("(set-option :produce-models true)\n(set-logic QF_LIA)\n", 0) == 0);
    CHECK(a.ends_with("(check-sat)\n(get-model)\n"));
    CHECK(count(a, "(") == count(a, ")"));
    CHECK(count(a, "(assert ") == static_cast<int>(cs.clauses().size()));
    CHECK(a.find("(<= (+ (ite s_e0_t0 1 0)") != std::string::npos);
}

TEST_CASE("absorption off pins every alpha to false") {
    ConstraintSystem cs = build(qlt::one_gate(), build_line(2), {2, false});
    const std::string text = emit_smtlib(cs);
    CHECK(text.find("(assert (not a_e0_t0))") != std::string::npos);
    CHECK(text.find("(assert (not a_e0_t1))") != std::string::npos);
}

TEST_CASE("evaluator agrees with a hand-made assignment") {
    ConstraintSystem cs = build(qlt::one_gate(), build_line(2), {1});
    const VarTable& v = cs.vars();
    Assignment m(static_cast<std::size_t>(v.size()), 0);
    m[static_cast<std::size_t>(v.mapping(0, 0))] = 0;
    m[static_cast<std::size_t>(v.mapping(1, 0))] = 1;
    CHECK(cs.violated_clauses(m).empty());
    m[static_cast<std::size_t>(v.mapping(1, 0))] = 0;  // not injective
    CHECK_FALSE(cs.violated_clauses(m).empty());
    m[static_cast<std::size_t>(v.mapping(1, 0))] = 1;
    m[static_cast<std::size_t>(v.explicit_swap(0, 0))] = 1;  // SWAP on the gate's edge
    CHECK_FALSE(cs.violated_clauses(m).empty());
}

TEST_CASE("at_most counts true arguments") {
    ConstraintSystem cs = build(qlt::one_gate(), build_line(2), {3});
    const VarTable& v = cs.vars();
    ExprId lim = cs.at_most(1, {cs.var(v.explicit_swap(0, 0)), cs.var(v.explicit_swap(0, 1)), cs.var(v.explicit_swap(0, 2))});
    Assignment m(static_cast<std::size_t>(v.size()), 0);
    CHECK(cs.evaluate(lim, m) == 1);
    m[static_cast<std::size_t>(v.explicit_swap(0, 0))] = 1;
    CHECK(cs.evaluate(lim, m) == 1);
    m[static_cast<std::size_t>(v.explicit_swap(0, 2))] = 1;
    CHECK(cs.evaluate(lim, m) == 0);
}

TEST_CASE("reductions") {
    ConstraintSystem base = build(qlt::triangle(), build_line(3), {3});
    const std::size_t n = base.clauses().size();

    ConstraintSystem alt = add_alternating_matchings(base, AlternatingPhase::phase0);
    CHECK(alt.clauses().size() > n);
    CHECK(alt.options().alternating == AlternatingPhase::phase0);
    CHECK_THROWS_AS(add_alternating_matchings(build(qlt::triangle(), build_grid(2, 2), {3}), AlternatingPhase::phase0),
                    std::invalid_argument);

    ConstraintSystem fixed = add_initial_mapping(base, {2, 1, 0});
    CHECK(fixed.clauses().size() == n + 3);
    CHECK(fixed.options().initial_mapping == std::vector<int>{2, 1, 0});
    CHECK_THROWS_AS(add_initial_mapping(base, {0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(add_initial_mapping(base, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(add_initial_mapping(base, {0, 1, 3}), std::invalid_argument);

    ConstraintSystem budget = add_swap_budget(add_swap_budget(base, 3), 1);
    CHECK(budget.options().swap_budget == 1);
    CHECK_THROWS_AS(add_swap_budget(base, -1), std::invalid_argument);

    CHECK(build(qlt::triangle(), build_line(3), {3, true, AlternatingPhase::phase1}).options().alternating ==
          AlternatingPhase::phase1);
}

TEST_CASE("alternating phase forbids the other parity") {
    ConstraintSystem cs = build(qlt::one_gate(), build_line(3), {2, true, AlternatingPhase::phase0});
    const std::string text = emit_smtlib(cs);
    // phase 0: edge 1 is off at t=0, edge 0 is off at t=1
    CHECK(text.find("(assert (not s_e1_t0))") != std::string::npos);
    CHECK(text.find("(assert (not s_e0_t1))") != std::string::npos);
    CHECK(text.find("(assert (not s_e0_t0))") == std::string::npos);
}

TEST_CASE("bad inputs") {
    CHECK_THROWS_AS(build(qlt::one_gate(), build_line(2), {0}), std::invalid_argument);
    CHECK_THROWS_AS(build(qlt::triangle(), build_line(2), {3}), std::invalid_argument);
}

TEST_CASE("injective mapping helper") {
    CHECK(is_injective_mapping({0, 2, 1}, 3));
    CHECK_FALSE(is_injective_mapping({0, 0}, 3));
    CHECK_FALSE(is_injective_mapping({0, 3}, 3));
    CHECK_FALSE(is_injective_mapping({-1, 0}, 3));
}

TEST_CASE("either phase admits exactly the union of the two phases") {
    const Program p = qlt::make_program(2, {{0, 1}}, false);
    for (int t = 0; t < 2; ++t)
        for (int k = 0; k < 2; ++k) {
            EncodingOptions o{2};
            ConstraintSystem cs = build(p, build_line(3), o);
            const VarTable& v = cs.vars();
            Assignment m(static_cast<std::size_t>(v.size()), 0);
            for (int q = 0; q < 2; ++q)
                for (int s = 0; s < 2; ++s) m[static_cast<std::size_t>(v.mapping(q, s))] = k + q;
            m[static_cast<std::size_t>(v.gate_time(0))] = t;
            m[static_cast<std::size_t>(v.gate_edge(0))] = k;
            REQUIRE(cs.violated_clauses(m).empty());
            auto ok = [&](AlternatingPhase ph) { return add_alternating_matchings(cs, ph).violated_clauses(m).empty(); };
            const bool even = (t - k) % 2 == 0;
            CHECK(ok(AlternatingPhase::phase0) == even);
            CHECK(ok(AlternatingPhase::phase1) == !even);
            CHECK(ok(AlternatingPhase::either));
            CHECK(schedule_phase({{t, k}}) == (even ? AlternatingPhase::phase0 : AlternatingPhase::phase1));
        }
    CHECK(schedule_phase({{0, 0}, {0, 1}}) == AlternatingPhase::off);
    CHECK(emit_smtlib(build(p, build_line(3), {2, true, AlternatingPhase::either})).find("(or (and") !=
          std::string::npos);
}

}
