#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlayout/arch.hpp"
#include "qlayout/program.hpp"

namespace qlayout {

enum class VarKind { mapping, gate_time, gate_edge, absorbed, explicit_swap };

struct VarInfo {
    std::string name;
    VarKind kind;
    bool is_bool;
    int upper;  ///< exclusive upper bound for integer variables
};

/**
 * Flat table of every solver variable.
 *
 * Layout is fixed: mapping pi[q][t], then t_g, then x_g, then alpha[e][t],
 * then sigma[e][t]. Names follow the stable SMT-LIB scheme (pi_q0_t0, tg_0,
 * xg_0, a_e0_t0, s_e0_t0) that the model decoder relies on.
 */
class VarTable {
public:
    VarTable(int qubits, int physical, int horizon, int gates, int edges);

    int qubits() const { return qubits_; }
    int physical() const { return physical_; }
    int horizon() const { return horizon_; }
    int gates() const { return gates_; }
    int edges() const { return edges_; }

    int size() const { return static_cast<int>(vars_.size()); }
    const VarInfo& info(int var) const { return vars_.at(static_cast<std::size_t>(var)); }
    std::optional<int> find(const std::string& name) const;

    int mapping(int q, int t) const { return q * horizon_ + t; }
    int gate_time(int g) const { return qubits_ * horizon_ + g; }
    int gate_edge(int g) const { return qubits_ * horizon_ + gates_ + g; }
    int absorbed(int e, int t) const { return qubits_ * horizon_ + 2 * gates_ + e * horizon_ + t; }
    int explicit_swap(int e, int t) const {
        return qubits_ * horizon_ + 2 * gates_ + edges_ * horizon_ + e * horizon_ + t;
    }

private:
    int qubits_, physical_, horizon_, gates_, edges_;
    std::vector<VarInfo> vars_;
};

/// Alternating-matchings restriction on a line: phase 0 allows edge k at
/// time t iff (t - k) is even, phase 1 iff it is odd. `either` asks for a
/// schedule that follows one of the two phases throughout.
enum class AlternatingPhase { off, phase0, phase1, either };

/// Phase that every (time, edge) site follows; `off` if neither or none.
AlternatingPhase schedule_phase(const std::vector<std::pair<int, int>>& time_edge_sites);

struct EncodingOptions {
    int horizon = 1;
    bool absorption_enabled = true;
    AlternatingPhase alternating = AlternatingPhase::off;
    std::optional<std::vector<int>> initial_mapping;
    std::optional<int> swap_budget;
    /// Upper bound on absorbed SWAPs; only used to break ties.
    std::optional<int> absorbed_budget;
};

using ExprId = int;

enum class Op {
    var,
    constant,
    eq,
    ne,
    lt,
    le,
    logic_and,
    logic_or,
    logic_not,
    implies,
    distinct,
    at_most,  ///< at_most(k, b_1..b_n): number of true b_i <= k
};

struct ExprNode {
    Op op;
    std::int64_t value = 0;  ///< variable index, constant, or at_most bound
    std::vector<ExprId> args;
};

/// Variable assignment indexed like VarTable; booleans are 0/1.
using Assignment = std::vector<std::int64_t>;

/**
 * Backend-neutral constraint system for one fixed horizon.
 *
 * Clauses are boolean expressions over the VarTable. The program, graph and
 * effective options are kept alongside so that non-clausal backends (the
 * exhaustive search) see exactly the same problem.
 */
class ConstraintSystem {
public:
    ConstraintSystem(Program program, CouplingGraph graph, EncodingOptions options);

    const VarTable& vars() const { return vars_; }
    const Program& program() const { return program_; }
    const CouplingGraph& graph() const { return graph_; }
    const EncodingOptions& options() const { return options_; }
    const std::vector<ExprId>& clauses() const { return clauses_; }
    const ExprNode& node(ExprId id) const { return nodes_.at(static_cast<std::size_t>(id)); }

    /// Depth objective: T = 1 + max over these gate-time variables.
    std::vector<int> depth_objective() const;
    /// SWAP objective: S = number of these explicit-SWAP variables set.
    std::vector<int> swap_objective() const;

    // Expression construction.
    ExprId var(int index);
    ExprId constant(std::int64_t value);
    ExprId eq(ExprId a, ExprId b) { return make(Op::eq, {a, b}); }
    ExprId ne(ExprId a, ExprId b) { return make(Op::ne, {a, b}); }
    ExprId lt(ExprId a, ExprId b) { return make(Op::lt, {a, b}); }
    ExprId le(ExprId a, ExprId b) { return make(Op::le, {a, b}); }
    ExprId all_of(std::vector<ExprId> args) { return make(Op::logic_and, std::move(args)); }
    ExprId any_of(std::vector<ExprId> args) { return make(Op::logic_or, std::move(args)); }
    ExprId negate(ExprId a) { return make(Op::logic_not, {a}); }
    ExprId implies(ExprId a, ExprId b) { return make(Op::implies, {a, b}); }
    ExprId distinct(std::vector<ExprId> args) { return make(Op::distinct, std::move(args)); }
    ExprId at_most(std::int64_t bound, std::vector<ExprId> args);

    void add_clause(ExprId clause) { clauses_.push_back(clause); }

    /// Evaluates an expression; booleans come back as 0/1.
    std::int64_t evaluate(ExprId id, const Assignment& model) const;
    /// Indices into clauses() that the assignment violates.
    std::vector<int> violated_clauses(const Assignment& model) const;

    EncodingOptions& mutable_options() { return options_; }

private:
    ExprId make(Op op, std::vector<ExprId> args, std::int64_t value = 0);

    Program program_;
    CouplingGraph graph_;
    EncodingOptions options_;
    VarTable vars_;
    std::vector<ExprNode> nodes_;
    std::vector<ExprId> clauses_;
    std::vector<ExprId> var_nodes_;
};

/// Builds every constraint family for the given horizon, then appends the
/// reductions requested in `options`.
ConstraintSystem build(const Program& program, const CouplingGraph& graph,
                       const EncodingOptions& options);

ConstraintSystem add_alternating_matchings(ConstraintSystem cs, AlternatingPhase phase);
ConstraintSystem add_initial_mapping(ConstraintSystem cs, const std::vector<int>& mapping);
ConstraintSystem add_swap_budget(ConstraintSystem cs, int max_swaps);
ConstraintSystem add_absorbed_budget(ConstraintSystem cs, int max_absorbed);

/// Deterministic SMT-LIB 2.6 script ending in (check-sat) (get-model).
std::string emit_smtlib(const ConstraintSystem& cs);

/// True iff `mapping` assigns distinct in-range physical qubits.
bool is_injective_mapping(const std::vector<int>& mapping, int physical_count);

}  // namespace qlayout
