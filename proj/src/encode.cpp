#include "qlayout/encode.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qlayout {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("encode: " + what);
}

std::string idx(int v) { return std::to_string(v); }

}  // namespace

bool is_injective_mapping(const std::vector<int>& mapping, int physical_count) {
    std::vector<char> used(static_cast<std::size_t>(std::max(physical_count, 0)), 0);
    for (int p : mapping) {
        if (p < 0 || p >= physical_count || used[static_cast<std::size_t>(p)]) return false;
        used[static_cast<std::size_t>(p)] = 1;
    }
    return true;
}

// ---------------------------------------------------------------- VarTable

VarTable::VarTable(int qubits, int physical, int horizon, int gates, int edges)
    : qubits_(qubits), physical_(physical), horizon_(horizon), gates_(gates), edges_(edges) {
    vars_.reserve(static_cast<std::size_t>(qubits * horizon + 2 * gates + 2 * edges * horizon));
    for (int q = 0; q < qubits; ++q)
        for (int t = 0; t < horizon; ++t)
            vars_.push_back({"pi_q" + idx(q) + "_t" + idx(t), VarKind::mapping, false, physical});
    for (int g = 0; g < gates; ++g) vars_.push_back({"tg_" + idx(g), VarKind::gate_time, false, horizon});
    for (int g = 0; g < gates; ++g) vars_.push_back({"xg_" + idx(g), VarKind::gate_edge, false, edges});
    for (int e = 0; e < edges; ++e)
        for (int t = 0; t < horizon; ++t)
            vars_.push_back({"a_e" + idx(e) + "_t" + idx(t), VarKind::absorbed, true, 2});
    for (int e = 0; e < edges; ++e)
        for (int t = 0; t < horizon; ++t)
            vars_.push_back({"s_e" + idx(e) + "_t" + idx(t), VarKind::explicit_swap, true, 2});
}

std::optional<int> VarTable::find(const std::string& name) const {
    // Names are structured, so parse instead of searching.
    auto number_after = [&](std::size_t pos, std::size_t& end) -> int {
        end = pos;
        while (end < name.size() && std::isdigit(static_cast<unsigned char>(name[end]))) ++end;
        if (end == pos) return -1;
        return std::stoi(name.substr(pos, end - pos));
    };
    std::size_t end = 0;
    std::optional<int> index;
    if (name.rfind("pi_q", 0) == 0) {
        int q = number_after(4, end);
        if (q < 0 || name.compare(end, 2, "_t") != 0) return std::nullopt;
        int t = number_after(end + 2, end);
        if (t >= 0 && q < qubits_ && t < horizon_) index = mapping(q, t);
    } else if (name.rfind("tg_", 0) == 0 || name.rfind("xg_", 0) == 0) {
        int g = number_after(3, end);
        if (g >= 0 && g < gates_) index = name[0] == 't' ? gate_time(g) : gate_edge(g);
    } else if (name.rfind("a_e", 0) == 0 || name.rfind("s_e", 0) == 0) {
        int e = number_after(3, end);
        if (e < 0 || name.compare(end, 2, "_t") != 0) return std::nullopt;
        int t = number_after(end + 2, end);
        if (t >= 0 && e < edges_ && t < horizon_) index = name[0] == 'a' ? absorbed(e, t) : explicit_swap(e, t);
    }
    if (!index || end != name.size() || info(*index).name != name) return std::nullopt;
    return index;
}

// -------------------------------------------------------- ConstraintSystem

ConstraintSystem::ConstraintSystem(Program program, CouplingGraph graph, EncodingOptions options)
    : program_(std::move(program)),
      graph_(std::move(graph)),
      options_(std::move(options)),
      vars_(program_.qubit_count(), graph_.qubit_count(), options_.horizon, program_.gate_count(),
            graph_.edge_count()) {
    var_nodes_.assign(static_cast<std::size_t>(vars_.size()), -1);
}

ExprId ConstraintSystem::make(Op op, std::vector<ExprId> args, std::int64_t value) {
    nodes_.push_back(ExprNode{op, value, std::move(args)});
    return static_cast<ExprId>(nodes_.size() - 1);
}

ExprId ConstraintSystem::var(int index) {
    ExprId& cached = var_nodes_.at(static_cast<std::size_t>(index));
    if (cached < 0) cached = make(Op::var, {}, index);
    return cached;
}

ExprId ConstraintSystem::constant(std::int64_t value) { return make(Op::constant, {}, value); }

ExprId ConstraintSystem::at_most(std::int64_t bound, std::vector<ExprId> args) {
    return make(Op::at_most, std::move(args), bound);
}

std::vector<int> ConstraintSystem::depth_objective() const {
    std::vector<int> out;
    for (int g = 0; g < vars_.gates(); ++g) out.push_back(vars_.gate_time(g));
    return out;
}

std::vector<int> ConstraintSystem::swap_objective() const {
    std::vector<int> out;
    for (int e = 0; e < vars_.edges(); ++e)
        for (int t = 0; t < vars_.horizon(); ++t) out.push_back(vars_.explicit_swap(e, t));
    return out;
}

std::int64_t ConstraintSystem::evaluate(ExprId id, const Assignment& model) const {
    const ExprNode& n = node(id);
    auto arg = [&](std::size_t k) { return evaluate(n.args[k], model); };
    switch (n.op) {
        case Op::var: return model.at(static_cast<std::size_t>(n.value));
        case Op::constant: return n.value;
        case Op::eq: return arg(0) == arg(1);
        case Op::ne: return arg(0) != arg(1);
        case Op::lt: return arg(0) < arg(1);
        case Op::le: return arg(0) <= arg(1);
        case Op::logic_and:
            for (std::size_t k = 0; k < n.args.size(); ++k)
                if (!arg(k)) return 0;
            return 1;
        case Op::logic_or:
            for (std::size_t k = 0; k < n.args.size(); ++k)
                if (arg(k)) return 1;
            return 0;
        case Op::logic_not: return !arg(0);
        case Op::implies: return !arg(0) || arg(1);
        case Op::distinct: {
            std::vector<std::int64_t> values;
            for (std::size_t k = 0; k < n.args.size(); ++k) values.push_back(arg(k));
            std::sort(values.begin(), values.end());
            return std::adjacent_find(values.begin(), values.end()) == values.end();
        }
        case Op::at_most: {
            std::int64_t count = 0;
            for (std::size_t k = 0; k < n.args.size(); ++k) count += arg(k) ? 1 : 0;
            return count <= n.value;
        }
    }
    return 0;
}

std::vector<int> ConstraintSystem::violated_clauses(const Assignment& model) const {
    if (static_cast<int>(model.size()) != vars_.size()) fail("assignment size does not match variable table");
    std::vector<int> out;
    for (std::size_t k = 0; k < clauses_.size(); ++k)
        if (!evaluate(clauses_[k], model)) out.push_back(static_cast<int>(k));
    return out;
}

// ------------------------------------------------------------------ build

ConstraintSystem build(const Program& program, const CouplingGraph& graph, const EncodingOptions& options) {
    if (options.horizon < 1) fail("horizon must be at least 1, got " + std::to_string(options.horizon));
    if (program.qubit_count() > graph.qubit_count())
        fail("program needs " + std::to_string(program.qubit_count()) + " qubits but the architecture has " +
             std::to_string(graph.qubit_count()));

    EncodingOptions base = options;
    base.alternating = AlternatingPhase::off;
    base.initial_mapping.reset();
    base.swap_budget.reset();
    base.absorbed_budget.reset();
    ConstraintSystem cs(program, graph, base);

    const VarTable& v = cs.vars();
    const int T = v.horizon();
    const int Q = v.qubits();
    const int P = v.physical();
    const int G = v.gates();
    const int E = v.edges();
    auto c = [&](std::int64_t value) { return cs.constant(value); };
    auto pi = [&](int q, int t) { return cs.var(v.mapping(q, t)); };
    auto tg = [&](int g) { return cs.var(v.gate_time(g)); };
    auto xg = [&](int g) { return cs.var(v.gate_edge(g)); };
    auto alpha = [&](int e, int t) { return cs.var(v.absorbed(e, t)); };
    auto sigma = [&](int e, int t) { return cs.var(v.explicit_swap(e, t)); };
    auto at = [&](int g, int t, int e) { return cs.all_of({cs.eq(tg(g), c(t)), cs.eq(xg(g), c(e))}); };

    // Variable domains.
    for (int q = 0; q < Q; ++q)
        for (int t = 0; t < T; ++t) {
            cs.add_clause(cs.le(c(0), pi(q, t)));
            cs.add_clause(cs.lt(pi(q, t), c(P)));
        }
    for (int g = 0; g < G; ++g) {
        cs.add_clause(cs.le(c(0), tg(g)));
        cs.add_clause(cs.lt(tg(g), c(T)));
        cs.add_clause(cs.le(c(0), xg(g)));
        cs.add_clause(cs.lt(xg(g), c(E)));
    }

    // Dependencies.
    const DependencyGraph deps = dependencies(program);
    for (auto [a, b] : deps.precedence) cs.add_clause(cs.lt(tg(a), tg(b)));
    for (auto [a, b] : deps.distinct_time) cs.add_clause(cs.ne(tg(a), tg(b)));

    // Mapping implied by spacetime coordinates.
    for (const Gate& gate : program.gates()) {
        const int q0 = gate.qubits[0];
        const int q1 = gate.qubits[1];
        for (int t = 0; t < T; ++t)
            for (const Edge& e : graph.edges()) {
                ExprId forward = cs.all_of({cs.eq(pi(q0, t), c(e.a)), cs.eq(pi(q1, t), c(e.b))});
                ExprId backward = cs.all_of({cs.eq(pi(q0, t), c(e.b)), cs.eq(pi(q1, t), c(e.a))});
                cs.add_clause(cs.implies(at(gate.id, t, e.id), cs.any_of({forward, backward})));
            }
    }

    // No overlaps. An edge counts as incident to itself.
    for (int t = 0; t < T; ++t)
        for (const Edge& e : graph.edges()) {
            for (int f : graph.neighbors(e.id))
                if (f > e.id) cs.add_clause(cs.any_of({cs.negate(sigma(e.id, t)), cs.negate(sigma(f, t))}));
            for (int g = 0; g < G; ++g) {
                std::vector<ExprId> blocked{cs.negate(sigma(e.id, t))};
                for (int f : graph.neighbors(e.id)) blocked.push_back(cs.negate(sigma(f, t)));
                cs.add_clause(cs.implies(at(g, t, e.id), cs.all_of(std::move(blocked))));
            }
        }

    // SWAP absorption needs a gate at the same spacetime point.
    for (int t = 0; t < T; ++t)
        for (int e = 0; e < E; ++e) {
            if (!options.absorption_enabled) {
                cs.add_clause(cs.negate(alpha(e, t)));
                continue;
            }
            std::vector<ExprId> hosts;
            for (int g = 0; g < G; ++g) hosts.push_back(at(g, t, e));
            cs.add_clause(cs.implies(alpha(e, t), cs.any_of(std::move(hosts))));
        }

    // Mapping transformation.
    for (int q = 0; q < Q; ++q)
        for (int t = 0; t + 1 < T; ++t) {
            for (const Edge& e : graph.edges()) {
                ExprId swapped = cs.any_of({sigma(e.id, t), alpha(e.id, t)});
                cs.add_clause(cs.implies(cs.all_of({cs.eq(pi(q, t), c(e.a)), swapped}),
                                         cs.eq(pi(q, t + 1), c(e.b))));
                cs.add_clause(cs.implies(cs.all_of({cs.eq(pi(q, t), c(e.b)), swapped}),
                                         cs.eq(pi(q, t + 1), c(e.a))));
            }
            for (int p = 0; p < P; ++p) {
                std::vector<ExprId> idle{cs.eq(pi(q, t), c(p))};
                for (int e : graph.edges_at(p)) {
                    idle.push_back(cs.negate(sigma(e, t)));
                    idle.push_back(cs.negate(alpha(e, t)));
                }
                cs.add_clause(cs.implies(cs.all_of(std::move(idle)), cs.eq(pi(q, t + 1), c(p))));
            }
        }

    // Injectivity at every step.
    if (Q > 1)
        for (int t = 0; t < T; ++t) {
            std::vector<ExprId> row;
            for (int q = 0; q < Q; ++q) row.push_back(pi(q, t));
            cs.add_clause(cs.distinct(std::move(row)));
        }

    if (options.alternating != AlternatingPhase::off)
        cs = add_alternating_matchings(std::move(cs), options.alternating);
    if (options.initial_mapping) cs = add_initial_mapping(std::move(cs), *options.initial_mapping);
    if (options.swap_budget) cs = add_swap_budget(std::move(cs), *options.swap_budget);
    if (options.absorbed_budget) cs = add_absorbed_budget(std::move(cs), *options.absorbed_budget);
    return cs;
}

namespace {

std::vector<ExprId> phase_clauses(ConstraintSystem& cs, int forbidden_parity) {
    const VarTable& v = cs.vars();
    std::vector<ExprId> out;
    for (int t = 0; t < v.horizon(); ++t)
        for (int k = 0; k < v.edges(); ++k) {
            if (((t - k) % 2 + 2) % 2 != forbidden_parity) continue;
            out.push_back(cs.negate(cs.var(v.explicit_swap(k, t))));
            for (int g = 0; g < v.gates(); ++g)
                out.push_back(cs.implies(cs.eq(cs.var(v.gate_time(g)), cs.constant(t)),
                                         cs.ne(cs.var(v.gate_edge(g)), cs.constant(k))));
        }
    return out;
}

}  // namespace

ConstraintSystem add_alternating_matchings(ConstraintSystem cs, AlternatingPhase phase) {
    if (cs.graph().kind() != ArchKind::line) fail("alternating matchings need a line architecture");
    if (phase == AlternatingPhase::off) return cs;
    if (phase == AlternatingPhase::either) {
        ExprId even = cs.all_of(phase_clauses(cs, 1));
        ExprId odd = cs.all_of(phase_clauses(cs, 0));
        cs.add_clause(cs.any_of({even, odd}));
    } else {
        for (ExprId c : phase_clauses(cs, phase == AlternatingPhase::phase0 ? 1 : 0)) cs.add_clause(c);
    }
    cs.mutable_options().alternating = phase;
    return cs;
}

AlternatingPhase schedule_phase(const std::vector<std::pair<int, int>>& time_edge_sites) {
    bool even = true, odd = true;
    for (auto [t, k] : time_edge_sites) {
        const bool parity = ((t - k) % 2 + 2) % 2 == 1;
        (parity ? even : odd) = false;
    }
    if (time_edge_sites.empty() || even == odd) return AlternatingPhase::off;
    return even ? AlternatingPhase::phase0 : AlternatingPhase::phase1;
}

ConstraintSystem add_initial_mapping(ConstraintSystem cs, const std::vector<int>& mapping) {
    const VarTable& v = cs.vars();
    if (static_cast<int>(mapping.size()) != v.qubits())
        fail("initial mapping must assign all " + std::to_string(v.qubits()) + " program qubits");
    if (!is_injective_mapping(mapping, v.physical())) fail("initial mapping is not injective");
    for (int q = 0; q < v.qubits(); ++q)
        cs.add_clause(cs.eq(cs.var(v.mapping(q, 0)), cs.constant(mapping[static_cast<std::size_t>(q)])));
    cs.mutable_options().initial_mapping = mapping;
    return cs;
}

ConstraintSystem add_swap_budget(ConstraintSystem cs, int max_swaps) {
    if (max_swaps < 0) fail("swap budget must be non-negative");
    std::vector<ExprId> swaps;
    for (int var : cs.swap_objective()) swaps.push_back(cs.var(var));
    cs.add_clause(cs.at_most(max_swaps, std::move(swaps)));
    auto& budget = cs.mutable_options().swap_budget;
    budget = budget ? std::min(*budget, max_swaps) : max_swaps;
    return cs;
}

ConstraintSystem add_absorbed_budget(ConstraintSystem cs, int max_absorbed) {
    if (max_absorbed < 0) fail("absorbed budget must be non-negative");
    const VarTable& v = cs.vars();
    std::vector<ExprId> absorbed;
    for (int e = 0; e < v.edges(); ++e)
        for (int t = 0; t < v.horizon(); ++t) absorbed.push_back(cs.var(v.absorbed(e, t)));
    cs.add_clause(cs.at_most(max_absorbed, std::move(absorbed)));
    auto& budget = cs.mutable_options().absorbed_budget;
    budget = budget ? std::min(*budget, max_absorbed) : max_absorbed;
    return cs;
}

// ----------------------------------------------------------------- SMT-LIB

namespace {

void print_int(std::ostream& out, std::int64_t value) {
    if (value < 0)
        out << "(- " << -value << ')';
    else
        out << value;
}

void print_expr(std::ostream& out, const ConstraintSystem& cs, ExprId id) {
    const ExprNode& n = cs.node(id);
    auto args = [&](const char* head) {
        out << '(' << head;
        for (ExprId a : n.args) {
            out << ' ';
            print_expr(out, cs, a);
        }
        out << ')';
    };
    switch (n.op) {
        case Op::var: out << cs.vars().info(static_cast<int>(n.value)).name; return;
        case Op::constant: print_int(out, n.value); return;
        case Op::eq: args("="); return;
        case Op::ne:
            out << "(not ";
            args("=");
            out << ')';
            return;
        case Op::lt: args("<"); return;
        case Op::le: args("<="); return;
        case Op::logic_and:
            if (n.args.empty()) out << "true";
            else if (n.args.size() == 1) print_expr(out, cs, n.args[0]);
            else args("and");
            return;
        case Op::logic_or:
            if (n.args.empty()) out << "false";
            else if (n.args.size() == 1) print_expr(out, cs, n.args[0]);
            else args("or");
            return;
        case Op::logic_not: args("not"); return;
        case Op::implies: args("=>"); return;
        case Op::distinct:
            if (n.args.size() < 2) out << "true";
            else args("distinct");
            return;
        case Op::at_most: {
            out << "(<= ";
            if (n.args.empty()) {
                out << '0';
            } else {
                if (n.args.size() > 1) out << "(+";
                for (ExprId a : n.args) {
                    out << (n.args.size() > 1 ? " (ite " : "(ite ");
                    print_expr(out, cs, a);
                    out << " 1 0)";
                }
                if (n.args.size() > 1) out << ')';
            }
            out << ' ';
            print_int(out, n.value);
            out << ')';
            return;
        }
    }
}

}  // namespace

std::string emit_smtlib(const ConstraintSystem& cs) {
    std::ostringstream out;
    const VarTable& v = cs.vars();
    out << "(set-option :produce-models true)\n(set-logic QF_LIA)\n";
    for (int k = 0; k < v.size(); ++k) {
        const VarInfo& info = v.info(k);
        out << "(declare-const " << info.name << (info.is_bool ? " Bool" : " Int") << ")\n";
    }
    for (ExprId clause : cs.clauses()) {
        out << "(assert ";
        print_expr(out, cs, clause);
        out << ")\n";
    }
    out << "(check-sat)\n(get-model)\n";
    return out.str();
}

}  // namespace qlayout
