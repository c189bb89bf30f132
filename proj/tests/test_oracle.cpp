#include <doctest.h>

#include <functional>

#include "qlayout/backend.hpp"
#include "qlayout/exhaustive.hpp"
#include "qlayout/solve.hpp"
#include "support.hpp"

using namespace qlayout;

namespace {

/// Every assignment of the variable domains satisfying all clauses.
std::vector<Assignment> brute_force_models(const ConstraintSystem& cs) {
    const VarTable& v = cs.vars();
    std::vector<Assignment> out;
    Assignment m(static_cast<std::size_t>(v.size()), 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == v.size()) {
            if (cs.violated_clauses(m).empty()) out.push_back(m);
            return;
        }
        const int upper = v.info(i).is_bool ? 2 : v.info(i).upper;
        for (int x = 0; x < upper; ++x) {
            m[static_cast<std::size_t>(i)] = x;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

/// Counts models with the external solver, blocking each one found.
int count_models_smt(const ConstraintSystem& cs) {
    std::string script = emit_smtlib(cs);
    script = script.substr(0, script.rfind("(check-sat)"));
    int n = 0;
    for (;;) {
        ProcessResult r = run_process(default_solver_command(), script + "(check-sat)\n(get-model)\n", 60);
        REQUIRE_FALSE(r.timed_out);
        if (r.output.rfind("unsat", 0) == 0) return n;
        REQUIRE(r.output.rfind("sat", 0) == 0);
        Assignment m = parse_model(r.output.substr(3), cs.vars());
        CHECK(cs.violated_clauses(m).empty());
        std::string block = "(assert (not (and";
        for (int i = 0; i < cs.vars().size(); ++i) {
            const VarInfo& info = cs.vars().info(i);
            std::string val = info.is_bool ? (m[static_cast<std::size_t>(i)] ? "true" : "false")
                                           : std::to_string(m[static_cast<std::size_t>(i)]);
            block += " (= " + info.name + " " + val + ")";
        }
        script += block + ")))\n";
        ++n;
        REQUIRE(n < 500);
    }
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("every model decodes to a valid solution") {
    struct Case {
        Program p;
        CouplingGraph g;
        EncodingOptions o;
    };
    EncodingOptions off{2};
    off.absorption_enabled = false;
    std::vector<Case> cases{{qlt::one_gate(), build_line(2), {1}},
                            {qlt::one_gate(), build_line(2), {2}},
                            {qlt::one_gate(), build_line(3), {1}},
                            {qlt::make_program(2, {{0, 1}, {0, 1}}, false), build_line(2), off}};
    for (const Case& c : cases) {
        ConstraintSystem cs = build(c.p, c.g, c.o);
        auto models = brute_force_models(cs);
        CHECK_FALSE(models.empty());
        for (const Assignment& m : models) CHECK(verify(c.p, c.g, decode(m, cs)).ok());
        if (qlt::have_smt_solver()) CHECK(count_models_smt(cs) == static_cast<int>(models.size()));
    }
}

TEST_CASE("tiny instances: internal search agrees with the solver loop" * doctest::skip(!qlt::have_smt_solver())) {
    int compared = 0;
    for (const auto& inst : qlt::tiny_instances()) {
        if (inst.program.gates().size() < 3 && compared % 3 != 0) {
            ++compared;
            continue;
        }
        for (bool absorb : {true, false}) {
            auto ref = internal_exhaustive(inst.program, inst.graph, absorb, 6);
            REQUIRE(ref.has_value());
            SolveOptions o;
            o.absorption = absorb;
            SolveResult r = minimize_depth(inst.program, inst.graph, o, Backend::external());
            CAPTURE(inst.name);
            CAPTURE(absorb);
            CHECK(r.metrics.depth == ref->depth);
            CHECK(r.metrics.swap_count == ref->swaps);
            CHECK(verify(inst.program, inst.graph, r.solution).ok());
            // Consecutive gates on one pair cannot share a step, so only
            // programs with distinct pairs are expected to pass.
            if (r.metrics.swap_count == 0 && !check_theorem1(r.solution, inst.graph).empty())
                CHECK_FALSE(qlt::distinct_pairs(inst.program));
        }
        ++compared;
    }
    CHECK(compared >= 20);
}

}
