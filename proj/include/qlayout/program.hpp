#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qlayout {

/// A two-qubit gate of the input program. Single-qubit gates never reach the
/// mapper.
struct Gate {
    int id = 0;
    std::array<int, 2> qubits{0, 1};
    std::string label;
    std::vector<double> params;

    bool touches(int q) const { return qubits[0] == q || qubits[1] == q; }
    bool shares_qubit(const Gate& other) const {
        return touches(other.qubits[0]) || touches(other.qubits[1]);
    }
};

/**
 * Ordered list of two-qubit gates over program qubits 0..qubit_count-1.
 *
 * Gates are partitioned into commuting groups: contiguous runs of the gate
 * list whose members mutually commute. A group of size one exploits no
 * commutation. The constructor validates every invariant and throws
 * std::invalid_argument on violation.
 */
class Program {
public:
    Program(int qubit_count, std::vector<Gate> gates,
            std::vector<std::vector<int>> commuting_groups = {});

    int qubit_count() const { return qubit_count_; }
    int gate_count() const { return static_cast<int>(gates_.size()); }
    const std::vector<Gate>& gates() const { return gates_; }
    const Gate& gate(int g) const { return gates_.at(static_cast<std::size_t>(g)); }
    const std::vector<std::vector<int>>& commuting_groups() const { return groups_; }
    int group_of(int g) const { return group_of_.at(static_cast<std::size_t>(g)); }

    /// Same gates in reverse order, with the group partition mirrored.
    Program reversed() const;

private:
    int qubit_count_;
    std::vector<Gate> gates_;
    std::vector<std::vector<int>> groups_;
    std::vector<int> group_of_;
};

/// Ordering requirements between gates. `precedence` pairs (g, h) demand
/// t_g < t_h; `distinct_time` pairs only demand t_g != t_h.
struct DependencyGraph {
    std::vector<std::pair<int, int>> precedence;
    std::vector<std::pair<int, int>> distinct_time;
};

/// Parses the JSON program format. Throws std::invalid_argument with a
/// message naming the offending field.
Program parse_program(std::string_view text);
Program load_program(const std::string& path);
std::string program_to_json(const Program& program);

DependencyGraph dependencies(const Program& program);

/// max(longest precedence chain, busiest qubit's gate count); never exceeds
/// the optimal depth.
int depth_lower_bound(const DependencyGraph& deps, const Program& program);

}  // namespace qlayout
