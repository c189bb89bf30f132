#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qlayout {

enum class ArchKind { line, grid, sycamore_like, custom };

std::string to_string(ArchKind kind);

struct Edge {
    int id = 0;
    int a = 0;
    int b = 1;

    bool touches(int p) const { return a == p || b == p; }
    bool adjacent_to(const Edge& other) const { return touches(other.a) || touches(other.b); }
    int other(int p) const { return p == a ? b : a; }
};

/**
 * Undirected, simple, connected coupling graph over physical qubits
 * 0..qubit_count-1.
 *
 * For kind() == ArchKind::line, edge k always joins the k-th and (k+1)-th
 * qubit along the path, so edge parity is well defined. build_line() also
 * makes the path order the identity, i.e. e_k = (p_k, p_k+1).
 */
class CouplingGraph {
public:
    CouplingGraph(int qubit_count, std::vector<std::pair<int, int>> edges,
                  ArchKind kind = ArchKind::custom);

    int qubit_count() const { return qubit_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    ArchKind kind() const { return kind_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int k) const { return edges_.at(static_cast<std::size_t>(k)); }

    std::optional<int> edge_between(int p, int q) const;
    /// Edge ids touching physical qubit p.
    const std::vector<int>& edges_at(int p) const { return at_qubit_.at(static_cast<std::size_t>(p)); }
    /// Edge ids sharing an endpoint with edge k, excluding k itself.
    const std::vector<int>& neighbors(int k) const { return neighbors_.at(static_cast<std::size_t>(k)); }
    int max_degree() const;
    /// Vertices in path order; empty unless kind() == ArchKind::line.
    const std::vector<int>& line_order() const { return line_order_; }

private:
    int qubit_count_;
    ArchKind kind_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> at_qubit_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<int> line_order_;
};

CouplingGraph build_line(int n);
CouplingGraph build_grid(int rows, int cols);
/// Diagonal-grid approximation of a Sycamore patch: vertex (r, c) has id
/// r * cols + c; every vertex has degree at most 4.
CouplingGraph build_sycamore_like(int rows, int cols);

/// Builds a graph from an explicit edge list. Edges of a path graph are
/// re-indexed to follow the path (kind line), starting from the
/// lower-numbered end; physical ids are kept.
CouplingGraph from_edge_list(int qubit_count, const std::vector<std::pair<int, int>>& edges);

CouplingGraph parse_arch(std::string_view json_text);
CouplingGraph load_arch(const std::string& path);
std::string arch_to_json(const CouplingGraph& graph);

/// Resolves `line:N`, `grid:RxC`, `sycamore:RxC` or `file:PATH`.
CouplingGraph arch_from_spec(std::string_view spec);

/// True iff no two listed edges share an endpoint. Repeated ids count once.
bool is_matching(const CouplingGraph& graph, std::span<const int> edge_ids);

struct ParityClasses {
    std::vector<int> even;
    std::vector<int> odd;
};
ParityClasses line_parity_classes(const CouplingGraph& graph);

}  // namespace qlayout
