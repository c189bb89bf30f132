#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlayout/arch.hpp"
#include "qlayout/encode.hpp"
#include "qlayout/program.hpp"

namespace qlayout {

struct Placement {
    int time = 0;
    int edge = 0;
    auto operator<=>(const Placement&) const = default;
};

/// A SWAP on `edge` during step `time`; it takes effect between `time` and
/// `time + 1`.
struct SwapSite {
    int edge = 0;
    int time = 0;
    auto operator<=>(const SwapSite&) const = default;
};

/**
 * Scheduled and routed program.
 *
 * mapping[t][q] is the physical qubit holding program qubit q while step t
 * executes. placements[g] is gate g's (time, edge). An absorbed SWAP rides on
 * the gate at the same (edge, time) and acts after it; explicit SWAPs occupy
 * their edge for the whole step.
 */
struct MappingSolution {
    int horizon = 0;
    std::vector<std::vector<int>> mapping;
    std::vector<Placement> placements;
    std::vector<SwapSite> absorbed;
    std::vector<SwapSite> explicit_swaps;

    bool operator==(const MappingSolution&) const = default;
};

struct HardwareModel {
    double coherence_steps = 50.0;  ///< T0: coherence time in U(4) durations
    double gate_fidelity = 0.99;    ///< f_U
};

struct Metrics {
    int depth = 0;
    int swap_count = 0;
    int absorbed_count = 0;
    int gate_count = 0;
    /// Absent when the schedule has fewer qubit slots than gate operands.
    std::optional<double> fidelity;
};

struct Violation {
    std::string family;
    std::string detail;
};

struct VerifyReport {
    std::vector<Violation> violations;
    std::optional<Metrics> metrics;
    bool ok() const { return violations.empty(); }
};

/// Transcribes a full model. Trailing steps without gates are trimmed, which
/// also drops explicit SWAPs scheduled after the last gate.
MappingSolution decode(const Assignment& model, const ConstraintSystem& cs);

/// Re-executes the schedule forward and checks every rule independently of
/// the clause encoding.
VerifyReport verify(const Program& program, const CouplingGraph& graph, const MappingSolution& solution,
                    const HardwareModel& hardware = {});

/// f = exp(-(|Q|T - 2(|G|+S)) / (|Q| T0)) * fU^(|G|+S).
double fidelity(int qubits, int depth, int gates, int swaps, double coherence_steps, double gate_fidelity);
double multi_iteration_fidelity(double single, int iterations);

/// Mapping after the final step's SWAPs have acted.
std::vector<int> final_mapping(const MappingSolution& solution, const CouplingGraph& graph);

/// Recomputes mapping[1..] from mapping[0] and the SWAP sets.
void propagate_mapping(MappingSolution& solution, const CouplingGraph& graph);

/// Removes SWAPs in the final step; they cannot affect any gate.
MappingSolution drop_final_step_swaps(MappingSolution solution);

/// Un-absorbs every absorbed SWAP whose removal still leaves a valid
/// schedule, latest first. Depth and explicit SWAPs are untouched.
MappingSolution drop_redundant_absorbed(MappingSolution solution, const Program& program, const CouplingGraph& graph);

/// Converts explicit SWAPs adjacent to a gate on the same edge into absorbed
/// ones, then pulls gates earlier and deletes empty steps. Greedy; never
/// increases depth or SWAP count.
MappingSolution postprocess_absorb(const MappingSolution& solution, const Program& program,
                                   const CouplingGraph& graph);

/// Steps t where the gate edges of t and t+1 together still form a matching.
std::vector<int> check_theorem1(const MappingSolution& solution, const CouplingGraph& graph);

/// True iff some phase makes every gate and explicit SWAP at step t sit on an
/// edge whose index parity equals (t + phase) mod 2.
bool alternating_pattern_holds(const MappingSolution& solution, const CouplingGraph& graph);

std::string solution_to_json(const MappingSolution& solution, const std::optional<Metrics>& metrics = {});
MappingSolution parse_solution(std::string_view text);
MappingSolution load_solution(const std::string& path);

}  // namespace qlayout
