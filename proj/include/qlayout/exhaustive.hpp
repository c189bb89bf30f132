#pragma once

#include <optional>
#include <vector>

#include "qlayout/arch.hpp"
#include "qlayout/encode.hpp"
#include "qlayout/program.hpp"
#include "qlayout/solution.hpp"

namespace qlayout {

struct SearchLimits {
    int max_qubits = 4;
    int max_physical = 8;
    int max_horizon = 6;
};

/// Extra restrictions mirroring the encoder's reductions.
struct SearchConstraints {
    bool absorption = true;
    AlternatingPhase alternating = AlternatingPhase::off;
    std::optional<std::vector<int>> initial_mapping;
    std::optional<int> swap_budget;
    std::optional<int> absorbed_budget;
};

struct ExhaustiveResult {
    int depth = 0;
    int swaps = 0;
    MappingSolution witness;
};

/**
 * Step-by-step state-space search over (mapping, executed gates).
 *
 * Each step picks a matching of executable gates, which of them absorb a
 * SWAP, and a matching of explicit SWAPs on untouched edges, exactly as the
 * clause encoding allows. Keeps the minimum explicit-SWAP count per state, so
 * results are exact. Throws std::invalid_argument above the size limits.
 */
class ExhaustiveSearch {
public:
    ExhaustiveSearch(const Program& program, const CouplingGraph& graph, SearchConstraints constraints = {},
                     SearchLimits limits = {});

    /// Smallest depth within max_horizon, with the fewest SWAPs at that depth.
    std::optional<ExhaustiveResult> min_depth(int max_horizon) const;
    /// Fewest SWAPs over all schedules of depth <= horizon.
    std::optional<ExhaustiveResult> min_swaps(int horizon) const;

private:
    Program program_;
    CouplingGraph graph_;
    SearchConstraints constraints_;
    SearchLimits limits_;

    std::optional<ExhaustiveResult> run(int horizon, bool stop_at_first_depth) const;
};

/// Optimal (depth, swaps at that depth) plus a witness, or nullopt when no
/// schedule fits in max_horizon.
std::optional<ExhaustiveResult> internal_exhaustive(const Program& program, const CouplingGraph& graph,
                                                    bool absorption, int max_horizon,
                                                    const SearchConstraints& extra = {},
                                                    const SearchLimits& limits = {});

/// Full assignment for `cs` describing `solution`, padded to the horizon.
Assignment model_from_solution(const MappingSolution& solution, const ConstraintSystem& cs);

}  // namespace qlayout
