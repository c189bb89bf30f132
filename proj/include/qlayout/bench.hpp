#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlayout/solve.hpp"

namespace qlayout {

/// Undirected simple graph on vertices 0..n-1, edges with a < b, sorted.
struct SimpleGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Random connected degree-regular simple graph from the pairing model,
/// retrying until the pairing is simple and connected. Deterministic per seed.
SimpleGraph gen_regular_graph(int n, int degree, std::uint64_t seed);

/// One gate per graph edge, all in a single commuting group.
Program qaoa_phase_program(const SimpleGraph& graph);
/// One gate per unordered qubit pair, single commuting group.
Program all_to_all_program(int n);
/// `layers` sequential layers, each a seeded random pairing of floor(n/2)
/// disjoint qubit pairs.
Program qv_like_program(int n, int layers, std::uint64_t seed);

/// Schedule of an iteration run backwards: valid for program.reversed(),
/// starting where `solution` ends and ending where it starts.
MappingSolution mirror_solution(const MappingSolution& solution, const CouplingGraph& graph);

struct IterationPlan {
    /// iterations[i] is the schedule of iteration i + 1; even-numbered
    /// iterations are mirrored.
    std::vector<MappingSolution> iterations;
    std::vector<int> initial_mapping;
    std::vector<int> final_mapping;
    int depth_per_iteration = 0;
    int swaps_per_iteration = 0;
    std::optional<double> single_fidelity;
    std::optional<double> total_fidelity;
};

/// Throws std::invalid_argument when `solution` does not verify.
IterationPlan extend_iterations(const MappingSolution& solution, const Program& program, const CouplingGraph& graph,
                                int iterations, const HardwareModel& hardware = {});

enum class BenchMode { exact, alternating, initial, absorb_off };

std::string to_string(BenchMode mode);
BenchMode parse_bench_mode(const std::string& text);

struct BenchInstance {
    std::string name;
    std::string family;  ///< qaoa-3reg | all-to-all | qv-like
    int n = 0;
    std::uint64_t seed = 0;
    Program program;
    CouplingGraph graph;
};

/// Builds the family's program and its default architecture: sycamore-like
/// for qaoa-3reg, line(n) otherwise. `layers` only applies to qv-like.
BenchInstance make_instance(const std::string& family, int n, std::uint64_t seed, int layers = 1);

struct BenchRow {
    std::string family;
    int n = 0;
    std::uint64_t seed = 0;
    std::string mode;
    std::string objective;
    std::string status;  ///< ok | timeout | no-solution | not-applicable
    int depth = 0;
    int swaps = 0;
    int absorbed = 0;
    std::optional<double> fidelity;
    std::vector<double> iteration_fidelity;  ///< p = 1..P
    double wall_time = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

struct SuiteOptions {
    Objective objective = Objective::swaps;
    int iterations = 1;
    HardwareModel hardware;
    SolveOptions base;
    int jobs = 1;  ///< portfolio width for the initial-mapping mode
};

/// Solves every instance in every mode. Each row is re-verified and must
/// match the solver's metrics exactly; timeouts are recorded and skipped.
BenchReport run_suite(const std::vector<BenchInstance>& instances, const std::vector<BenchMode>& modes,
                      const SuiteOptions& options, const Backend& backend);

std::string report_to_csv(const BenchReport& report);
std::string report_to_json(const BenchReport& report);

}  // namespace qlayout
