#include "qlayout/arch.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qlayout {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("arch: " + what);
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

int parse_int(std::string_view s, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail("bad " + std::string(what) + " '" + std::string(s) + "'");
    return value;
}

std::pair<int, int> parse_dims(std::string_view s) {
    auto x = s.find('x');
    if (x == std::string_view::npos) fail("expected RxC dimensions, got '" + std::string(s) + "'");
    return {parse_int(s.substr(0, x), "rows"), parse_int(s.substr(x + 1), "cols")};
}

}  // namespace

std::string to_string(ArchKind kind) {
    switch (kind) {
        case ArchKind::line: return "line";
        case ArchKind::grid: return "grid";
        case ArchKind::sycamore_like: return "sycamore-like";
        case ArchKind::custom: return "custom";
    }
    return "custom";
}

CouplingGraph::CouplingGraph(int qubit_count, std::vector<std::pair<int, int>> edges, ArchKind kind)
    : qubit_count_(qubit_count), kind_(kind) {
    if (qubit_count_ < 2) fail("at least 2 physical qubits required");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= qubit_count_ || b >= qubit_count_)
            fail("edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
        if (a == b) fail("self-loop on p" + std::to_string(a));
        if (!seen.emplace(std::min(a, b), std::max(a, b)).second)
            fail("duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    if (!connected(qubit_count_, edges)) fail("coupling graph is not connected");

    at_qubit_.resize(static_cast<std::size_t>(qubit_count_));
    for (std::size_t k = 0; k < edges.size(); ++k) {
        Edge e{static_cast<int>(k), edges[k].first, edges[k].second};
        edges_.push_back(e);
        at_qubit_[static_cast<std::size_t>(e.a)].push_back(e.id);
        at_qubit_[static_cast<std::size_t>(e.b)].push_back(e.id);
    }
    neighbors_.resize(edges_.size());
    for (const Edge& e : edges_)
        for (const Edge& f : edges_)
            if (e.id != f.id && e.adjacent_to(f)) neighbors_[static_cast<std::size_t>(e.id)].push_back(f.id);

    if (kind_ == ArchKind::line) {
        // Edges must be listed in path order: e_k joins the k-th and (k+1)-th
        // vertex of the path.
        if (edge_count() != qubit_count_ - 1) fail("line graphs need exactly n-1 edges");
        int start = -1;
        for (int p = 0; p < qubit_count_ && start < 0; ++p)
            if (edges_at(p).size() == 1 && edges_.front().touches(p)) start = p;
        if (start < 0) fail("line graph edge 0 must sit at an end of the path");
        line_order_.push_back(start);
        for (const Edge& e : edges_) {
            if (!e.touches(line_order_.back())) fail("line graph edges are not in path order");
            line_order_.push_back(e.other(line_order_.back()));
        }
    }
}

std::optional<int> CouplingGraph::edge_between(int p, int q) const {
    for (int k : edges_at(p))
        if (edges_[static_cast<std::size_t>(k)].touches(q)) return k;
    return std::nullopt;
}

int CouplingGraph::max_degree() const {
    std::size_t best = 0;
    for (const auto& incident : at_qubit_) best = std::max(best, incident.size());
    return static_cast<int>(best);
}

CouplingGraph build_line(int n) {
    if (n < 2) fail("line needs at least 2 qubits, got " + std::to_string(n));
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k + 1 < n; ++k) edges.emplace_back(k, k + 1);
    return CouplingGraph(n, std::move(edges), ArchKind::line);
}

CouplingGraph build_grid(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        fail("grid needs at least 2 qubits, got " + std::to_string(rows) + "x" + std::to_string(cols));
    std::vector<std::pair<int, int>> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    return CouplingGraph(rows * cols, std::move(edges), ArchKind::grid);
}

CouplingGraph build_sycamore_like(int rows, int cols) {
    if (rows < 2 || cols < 1)
        fail("sycamore-like needs rows >= 2 and cols >= 1, got " + std::to_string(rows) + "x" +
             std::to_string(cols));
    std::vector<std::pair<int, int>> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            edges.emplace_back(id(r, c), id(r + 1, c));
            if (r % 2 == 0 && c + 1 < cols) edges.emplace_back(id(r, c), id(r + 1, c + 1));
            if (r % 2 == 1 && c >= 1) edges.emplace_back(id(r, c), id(r + 1, c - 1));
        }
    return CouplingGraph(rows * cols, std::move(edges), ArchKind::sycamore_like);
}

CouplingGraph from_edge_list(int qubit_count, const std::vector<std::pair<int, int>>& edges) {
    // Validate first so path detection only sees simple connected graphs.
    CouplingGraph graph(qubit_count, edges, ArchKind::custom);
    if (graph.edge_count() != qubit_count - 1 || graph.max_degree() > 2) return graph;

    int start = -1;
    for (int p = 0; p < qubit_count; ++p)
        if (graph.edges_at(p).size() == 1) {
            start = p;
            break;
        }
    std::vector<std::pair<int, int>> path_edges;
    int prev = -1;
    int cur = start;
    while (static_cast<int>(path_edges.size()) < qubit_count - 1) {
        for (int k : graph.edges_at(cur)) {
            int next = graph.edge(k).other(cur);
            if (next != prev) {
                path_edges.emplace_back(cur, next);
                prev = cur;
                cur = next;
                break;
            }
        }
    }
    return CouplingGraph(qubit_count, std::move(path_edges), ArchKind::line);
}

CouplingGraph parse_arch(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("qubits") || !doc["qubits"].is_number_integer())
        fail("missing integer field 'qubits'");
    if (!doc.contains("edges") || !doc["edges"].is_array()) fail("missing array field 'edges'");
    std::vector<std::pair<int, int>> edges;
    for (const json& je : doc["edges"]) {
        if (!je.is_array() || je.size() != 2) fail("edges must be [a, b] pairs");
        edges.emplace_back(je[0].get<int>(), je[1].get<int>());
    }
    return from_edge_list(doc["qubits"].get<int>(), edges);
}

CouplingGraph load_arch(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_arch(buf.str());
}

std::string arch_to_json(const CouplingGraph& graph) {
    json doc;
    doc["qubits"] = graph.qubit_count();
    json edges = json::array();
    for (const Edge& e : graph.edges()) edges.push_back({e.a, e.b});
    doc["edges"] = std::move(edges);
    return doc.dump();
}

CouplingGraph arch_from_spec(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) fail("architecture spec '" + std::string(spec) + "' lacks ':'");
    std::string_view kind = spec.substr(0, colon);
    std::string_view arg = spec.substr(colon + 1);
    if (kind == "line") return build_line(parse_int(arg, "line length"));
    if (kind == "grid") {
        auto [r, c] = parse_dims(arg);
        return build_grid(r, c);
    }
    if (kind == "sycamore") {
        auto [r, c] = parse_dims(arg);
        return build_sycamore_like(r, c);
    }
    if (kind == "file") return load_arch(std::string(arg));
    fail("unknown architecture kind '" + std::string(kind) + "'");
}

bool is_matching(const CouplingGraph& graph, std::span<const int> edge_ids) {
    std::set<int> unique;
    for (int k : edge_ids) {
        if (k < 0 || k >= graph.edge_count()) fail("unknown edge id " + std::to_string(k));
        unique.insert(k);
    }
    std::vector<char> used(static_cast<std::size_t>(graph.qubit_count()), 0);
    for (int k : unique) {
        const Edge& e = graph.edge(k);
        if (used[static_cast<std::size_t>(e.a)] || used[static_cast<std::size_t>(e.b)]) return false;
        used[static_cast<std::size_t>(e.a)] = used[static_cast<std::size_t>(e.b)] = 1;
    }
    return true;
}

ParityClasses line_parity_classes(const CouplingGraph& graph) {
    if (graph.kind() != ArchKind::line) fail("parity classes are only defined for line architectures");
    ParityClasses classes;
    for (const Edge& e : graph.edges()) (e.id % 2 == 0 ? classes.even : classes.odd).push_back(e.id);
    return classes;
}

}  // namespace qlayout
