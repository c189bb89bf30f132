#include "qlayout/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qlayout {

namespace {

// Portable uniform draw in [0, bound); the standard distributions are not
// specified bit-for-bit across library implementations.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(draw(rng, i))]);
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    int components = n;
    for (auto [a, b] : edges) {
        const int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[static_cast<std::size_t>(ra)] = rb;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

SimpleGraph gen_regular_graph(int n, int degree, std::uint64_t seed) {
    if (degree < 1) throw std::invalid_argument("regular graph: degree must be at least 1");
    if (n <= degree) throw std::invalid_argument("regular graph: need more vertices than the degree");
    if ((n * degree) % 2 != 0) throw std::invalid_argument("regular graph: n * degree must be even");

    std::mt19937_64 rng(seed);
    std::vector<int> points;
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < degree; ++k) points.push_back(v);

    for (int attempt = 0; attempt < 100000; ++attempt) {
        shuffle(points, rng);
        std::set<std::pair<int, int>> edges;
        bool simple = true;
        for (std::size_t i = 0; i + 1 < points.size() && simple; i += 2) {
            const int a = std::min(points[i], points[i + 1]);
            const int b = std::max(points[i], points[i + 1]);
            simple = a != b && edges.insert({a, b}).second;
        }
        if (!simple) continue;
        SimpleGraph g{n, {edges.begin(), edges.end()}};
        if (connected(n, g.edges)) return g;
    }
    throw std::runtime_error("regular graph: pairing model failed to produce a simple connected graph");
}

Program qaoa_phase_program(const SimpleGraph& graph) {
    if (graph.edges.empty()) throw std::invalid_argument("qaoa: graph has no edges");
    std::vector<Gate> gates;
    std::vector<int> group;
    for (auto [a, b] : graph.edges) {
        Gate g;
        g.id = static_cast<int>(gates.size());
        g.qubits = {a, b};
        g.label = "zz";
        group.push_back(g.id);
        gates.push_back(g);
    }
    return Program(graph.n, std::move(gates), {group});
}

Program all_to_all_program(int n) {
    if (n < 2) throw std::invalid_argument("all-to-all: need at least 2 qubits");
    SimpleGraph complete{n, {}};
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) complete.edges.push_back({a, b});
    return qaoa_phase_program(complete);
}

Program qv_like_program(int n, int layers, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("qv-like: need at least 2 qubits");
    if (layers < 1) throw std::invalid_argument("qv-like: need at least one layer");
    std::mt19937_64 rng(seed);
    std::vector<Gate> gates;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n; ++q) order[static_cast<std::size_t>(q)] = q;
        shuffle(order, rng);
        for (int k = 0; k + 1 < n; k += 2) {
            Gate g;
            g.id = static_cast<int>(gates.size());
            g.qubits = {order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k + 1)]};
            g.label = "su4";
            gates.push_back(g);
        }
    }
    return Program(n, std::move(gates));
}

MappingSolution mirror_solution(const MappingSolution& solution, const CouplingGraph& graph) {
    const int T = solution.horizon;
    const int G = static_cast<int>(solution.placements.size());
    MappingSolution m;
    m.horizon = T;
    // Step t of the mirror starts with the mapping the original reaches after
    // step T-1-t; a SWAP sharing the gate's edge keeps the operands on it.
    MappingSolution full = solution;
    full.mapping.push_back(final_mapping(solution, graph));
    for (int t = 0; t < T; ++t) m.mapping.push_back(full.mapping[static_cast<std::size_t>(T - t)]);
    m.placements.resize(static_cast<std::size_t>(G));
    for (int g = 0; g < G; ++g) {
        const Placement& p = solution.placements[static_cast<std::size_t>(g)];
        m.placements[static_cast<std::size_t>(G - 1 - g)] = {T - 1 - p.time, p.edge};
    }
    for (const SwapSite& x : solution.absorbed) m.absorbed.push_back({x.edge, T - 1 - x.time});
    for (const SwapSite& x : solution.explicit_swaps) m.explicit_swaps.push_back({x.edge, T - 1 - x.time});
    std::sort(m.absorbed.begin(), m.absorbed.end());
    std::sort(m.explicit_swaps.begin(), m.explicit_swaps.end());
    return m;
}

IterationPlan extend_iterations(const MappingSolution& solution, const Program& program, const CouplingGraph& graph,
                                int iterations, const HardwareModel& hardware) {
    if (iterations < 1) throw std::invalid_argument("extend_iterations: need at least one iteration");
    const VerifyReport report = verify(program, graph, solution, hardware);
    if (!report.ok()) throw std::invalid_argument("extend_iterations: solution does not verify");
    IterationPlan plan;
    const MappingSolution mirrored = mirror_solution(solution, graph);
    for (int i = 0; i < iterations; ++i) plan.iterations.push_back(i % 2 == 0 ? solution : mirrored);
    plan.initial_mapping = solution.mapping.empty() ? std::vector<int>{} : solution.mapping.front();
    plan.final_mapping = final_mapping(plan.iterations.back(), graph);
    plan.depth_per_iteration = report.metrics->depth;
    plan.swaps_per_iteration = report.metrics->swap_count;
    plan.single_fidelity = report.metrics->fidelity;
    if (plan.single_fidelity) plan.total_fidelity = multi_iteration_fidelity(*plan.single_fidelity, iterations);
    return plan;
}

std::string to_string(BenchMode mode) {
    switch (mode) {
        case BenchMode::exact: return "exact";
        case BenchMode::alternating: return "alternating";
        case BenchMode::initial: return "initial";
        case BenchMode::absorb_off: return "absorb-off";
    }
    return "?";
}

BenchMode parse_bench_mode(const std::string& text) {
    if (text == "exact" || text == "absorb-on") return BenchMode::exact;
    if (text == "alternating") return BenchMode::alternating;
    if (text == "initial") return BenchMode::initial;
    if (text == "absorb-off") return BenchMode::absorb_off;
    throw std::invalid_argument("unknown bench mode '" + text + "' (expected exact, alternating, initial, absorb-off)");
}

BenchInstance make_instance(const std::string& family, int n, std::uint64_t seed, int layers) {
    if (family == "qaoa-3reg") {
        const int slots = (3 * n + 1) / 2;
        const int cols = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(slots)))));
        const int rows = std::max(2, (slots + cols - 1) / cols);
        return {"qaoa-3reg-n" + std::to_string(n) + "-s" + std::to_string(seed), family, n, seed,
                qaoa_phase_program(gen_regular_graph(n, 3, seed)), build_sycamore_like(rows, cols)};
    }
    if (family == "all-to-all")
        return {"all-to-all-n" + std::to_string(n), family, n, seed, all_to_all_program(n), build_line(n)};
    if (family == "qv-like")
        return {"qv-like-n" + std::to_string(n) + "-s" + std::to_string(seed), family, n, seed,
                qv_like_program(n, layers, seed), build_line(n)};
    throw std::invalid_argument("unknown benchmark family '" + family + "' (expected qaoa-3reg, all-to-all, qv-like)");
}

BenchReport run_suite(const std::vector<BenchInstance>& instances, const std::vector<BenchMode>& modes,
                      const SuiteOptions& options, const Backend& backend) {
    BenchReport report;
    for (const BenchInstance& inst : instances) {
        for (BenchMode mode : modes) {
            BenchRow row;
            row.family = inst.family;
            row.n = inst.n;
            row.seed = inst.seed;
            row.mode = to_string(mode);
            row.objective = to_string(options.objective);

            SolveOptions so = options.base;
            so.hardware = options.hardware;
            so.absorption = mode != BenchMode::absorb_off;
            so.alternating = mode == BenchMode::alternating ? AlternatingMode::both : AlternatingMode::off;
            if (mode == BenchMode::alternating && inst.graph.kind() != ArchKind::line) {
                row.status = "not-applicable";
                report.rows.push_back(row);
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            try {
                SolveResult r;
                if (mode == BenchMode::initial) {
                    const auto candidates = initial_mapping_candidates(inst.program, inst.graph);
                    r = portfolio_solve(inst.program, inst.graph, so, backend, candidates, options.objective,
                                        options.jobs);
                } else {
                    r = solve(inst.program, inst.graph, so, backend, options.objective);
                }
                const VerifyReport check_again = verify(inst.program, inst.graph, r.solution, options.hardware);
                if (!check_again.ok() || check_again.metrics->depth != r.metrics.depth ||
                    check_again.metrics->swap_count != r.metrics.swap_count)
                    throw std::logic_error("bench: reported metrics disagree with re-verification for " + inst.name);
                row.status = "ok";
                row.depth = r.metrics.depth;
                row.swaps = r.metrics.swap_count;
                row.absorbed = r.metrics.absorbed_count;
                row.fidelity = r.metrics.fidelity;
                if (row.fidelity)
                    for (int p = 1; p <= options.iterations; ++p)
                        row.iteration_fidelity.push_back(multi_iteration_fidelity(*row.fidelity, p));
            } catch (const SolverTimeout&) {
                row.status = "timeout";
            } catch (const NoSolution&) {
                row.status = "no-solution";
            }
            row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            report.rows.push_back(row);
        }
    }
    return report;
}

std::string report_to_csv(const BenchReport& report) {
    std::size_t p_max = 0;
    for (const BenchRow& r : report.rows) p_max = std::max(p_max, r.iteration_fidelity.size());
    std::ostringstream out;
    out << "family,n,seed,mode,objective,status,depth,swaps,absorbed,fidelity";
    for (std::size_t p = 1; p <= p_max; ++p) out << ",fidelity_p" << p;
    out << ",wall_time\n";
    out.precision(6);
    out << std::fixed;
    for (const BenchRow& r : report.rows) {
        out << r.family << ',' << r.n << ',' << r.seed << ',' << r.mode << ',' << r.objective << ',' << r.status << ','
            << r.depth << ',' << r.swaps << ',' << r.absorbed << ',';
        if (r.fidelity) out << *r.fidelity;
        for (std::size_t p = 0; p < p_max; ++p) {
            out << ',';
            if (p < r.iteration_fidelity.size()) out << r.iteration_fidelity[p];
        }
        out << ',' << r.wall_time << '\n';
    }
    return out.str();
}

std::string report_to_json(const BenchReport& report) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const BenchRow& r : report.rows) {
        nlohmann::ordered_json j;
        j["family"] = r.family;
        j["n"] = r.n;
        j["seed"] = r.seed;
        j["mode"] = r.mode;
        j["objective"] = r.objective;
        j["status"] = r.status;
        j["depth"] = r.depth;
        j["swaps"] = r.swaps;
        j["absorbed"] = r.absorbed;
        j["fidelity"] = r.fidelity ? nlohmann::ordered_json(*r.fidelity) : nlohmann::ordered_json(nullptr);
        j["iteration_fidelity"] = r.iteration_fidelity;
        j["wall_time"] = r.wall_time;
        rows.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

}  // namespace qlayout
