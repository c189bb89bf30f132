#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlayout/backend.hpp"
#include "qlayout/solution.hpp"

namespace qlayout {

enum class Objective { depth, swaps, fidelity };
/// `both` runs phase 0 and phase 1 and keeps the better result.
enum class AlternatingMode { off, phase0, phase1, both };
enum class SwapSearch { linear, binary };

Objective parse_objective(const std::string& text);
AlternatingMode parse_alternating(const std::string& text);
SwapSearch parse_swap_search(const std::string& text);
std::string to_string(Objective objective);

struct SolveOptions {
    bool absorption = true;
    AlternatingMode alternating = AlternatingMode::off;
    /// Drop the alternating restriction on non-line graphs instead of failing.
    bool reduce_best_effort = false;
    std::optional<std::vector<int>> initial_mapping;
    /// Upper bound on explicit SWAPs for every check.
    std::optional<int> swap_budget;
    /// Last horizon tried by the deepening loop; default max(2|Q|, 2 * lower bound).
    std::optional<int> horizon_cap;
    /// SWAP minimization horizon = optimal depth + slack, unless `horizon` is set.
    int horizon_slack = 0;
    std::optional<int> horizon;
    SwapSearch swap_search = SwapSearch::linear;
    /// After the depth optimum is found, also minimize SWAPs at that depth.
    bool tie_break_swaps = true;
    /// Last tie-break: fewest absorbed SWAPs at the chosen depth and SWAP count.
    bool minimize_absorbed = true;
    HardwareModel hardware;
    /// Fidelity sweep covers depths optimum .. optimum + this.
    int fidelity_horizon_extra = 3;
};

struct SolveResult {
    MappingSolution solution;
    Metrics metrics;
    int solver_calls = 0;
    double solver_time = 0.0;  ///< summed wall time of all checks, seconds
    /// Phase that produced the solution when alternating matchings were used.
    AlternatingPhase phase = AlternatingPhase::off;
};

/// A check exceeded the backend timeout. `certified_floor` is the largest d
/// for which no solution of depth < d was proved before giving up.
class SolverTimeout : public std::runtime_error {
public:
    SolverTimeout(const std::string& what, int certified_floor)
        : std::runtime_error(what), certified_floor(certified_floor) {}
    int certified_floor;
};

/// Every horizon up to the cap is unsat.
class NoSolution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SolveResult minimize_depth(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                           const Backend& backend);
SolveResult minimize_swaps(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                           const Backend& backend);
SolveResult maximize_fidelity(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                              const Backend& backend);
SolveResult solve(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                  const Backend& backend, Objective objective);

struct DepthCertificate {
    int certified_floor = 1;  ///< no schedule of depth < certified_floor exists
    int horizon_checked = 0;  ///< exact instance proved unsat at this horizon (0: vacuous)
    std::string instance_id;  ///< FNV-1a of the exact SMT-LIB script checked
};

struct CertifyResult {
    SolveResult result;
    std::optional<DepthCertificate> certificate;
    /// False when the exact instance beat the reduced depth; `result` is then
    /// the exact optimum.
    bool reduction_optimal = true;
    int reduced_depth = 0;
};

/// Solves with the reductions in `reduced`, then proves the exact instance
/// (no alternating restriction, no fixed mapping, no budget) unsat at one
/// step less.
CertifyResult certify_depth(const Program& program, const CouplingGraph& graph, const SolveOptions& reduced,
                            const Backend& backend);

std::string certificate_to_json(const CertifyResult& result);

/**
 * Initial mappings worth trying for layered programs on a line.
 *
 * The first layer (gates without predecessors) must be a maximal matching of
 * program qubits: every placement of those gates on disjoint line edges, with
 * both orientations per gate and leftover qubits on leftover positions, up to
 * reflection of the line. Fully symmetric programs (every pair of qubits
 * interacts equally in one commuting group) yield one mapping. Otherwise a
 * single identity mapping is returned and `warning` is filled in.
 */
std::vector<std::vector<int>> initial_mapping_candidates(const Program& program, const CouplingGraph& graph,
                                                         std::string* warning = nullptr);

/// Solves one instance per candidate on `workers` threads and returns the
/// best by objective; ties go to the lowest candidate index.
SolveResult portfolio_solve(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                            const Backend& backend, const std::vector<std::vector<int>>& candidates,
                            Objective objective, int workers);

std::string fnv1a_hex(const std::string& text);

}  // namespace qlayout
