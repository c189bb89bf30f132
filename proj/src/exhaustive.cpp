#include "qlayout/exhaustive.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace qlayout {

namespace {

constexpr int kMaxPackedQubits = 8;
constexpr int kMaxPackedPhysical = 16;
constexpr int kMaxPackedGates = 32;
constexpr int kMaxPackedEdges = 64;

using Key = std::uint64_t;

Key pack(const std::vector<int>& mapping, std::uint32_t done) {
    Key key = done;
    for (std::size_t q = 0; q < mapping.size(); ++q) key |= static_cast<Key>(mapping[q]) << (32 + 4 * q);
    return key;
}

void unpack(Key key, int qubits, std::vector<int>& mapping, std::uint32_t& done) {
    done = static_cast<std::uint32_t>(key & 0xffffffffu);
    mapping.resize(static_cast<std::size_t>(qubits));
    for (int q = 0; q < qubits; ++q) mapping[static_cast<std::size_t>(q)] = static_cast<int>((key >> (32 + 4 * q)) & 0xfu);
}

struct Entry {
    Key key;
    int swaps;
    int absorbed_total;  ///< part of the state identity only under an absorbed budget
    int parent;
    std::uint64_t absorbed;  ///< edge mask of absorbed SWAPs on the step into this state
    std::uint64_t explicit_swaps;
};

struct StateHash {
    std::size_t operator()(const std::pair<Key, int>& s) const {
        return std::hash<Key>{}(s.first ^ (static_cast<Key>(s.second) * 0x9e3779b97f4a7c15ull));
    }
};

struct Level {
    std::vector<Entry> entries;
    std::unordered_map<std::pair<Key, int>, int, StateHash> index;

    void offer(const Entry& e) {
        auto [it, inserted] = index.try_emplace({e.key, e.absorbed_total}, static_cast<int>(entries.size()));
        if (inserted)
            entries.push_back(e);
        else if (e.swaps < entries[static_cast<std::size_t>(it->second)].swaps)
            entries[static_cast<std::size_t>(it->second)] = e;
    }
};

bool edge_allowed(AlternatingPhase phase, int t, int k) {
    if (phase == AlternatingPhase::off) return true;
    const int parity = ((t - k) % 2 + 2) % 2;
    return phase == AlternatingPhase::phase0 ? parity == 0 : parity == 1;
}

void all_injections(int qubits, int physical, std::vector<int>& current, std::vector<char>& used,
                    std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == qubits) {
        out.push_back(current);
        return;
    }
    for (int p = 0; p < physical; ++p) {
        if (used[static_cast<std::size_t>(p)]) continue;
        used[static_cast<std::size_t>(p)] = 1;
        current.push_back(p);
        all_injections(qubits, physical, current, used, out);
        current.pop_back();
        used[static_cast<std::size_t>(p)] = 0;
    }
}

}  // namespace

ExhaustiveSearch::ExhaustiveSearch(const Program& program, const CouplingGraph& graph,
                                   SearchConstraints constraints, SearchLimits limits)
    : program_(program), graph_(graph), constraints_(std::move(constraints)), limits_(limits) {
    const int Q = program_.qubit_count();
    const int P = graph_.qubit_count();
    if (Q > limits_.max_qubits || Q > kMaxPackedQubits)
        throw std::invalid_argument("exhaustive: " + std::to_string(Q) + " program qubits exceed the cap of " +
                                    std::to_string(std::min(limits_.max_qubits, kMaxPackedQubits)));
    if (P > limits_.max_physical || P > kMaxPackedPhysical)
        throw std::invalid_argument("exhaustive: " + std::to_string(P) + " physical qubits exceed the cap of " +
                                    std::to_string(std::min(limits_.max_physical, kMaxPackedPhysical)));
    if (program_.gate_count() > kMaxPackedGates) throw std::invalid_argument("exhaustive: too many gates");
    if (graph_.edge_count() > kMaxPackedEdges) throw std::invalid_argument("exhaustive: too many edges");
    if (Q > P) throw std::invalid_argument("exhaustive: architecture too small for the program");
    if (constraints_.alternating == AlternatingPhase::either)
        throw std::invalid_argument("exhaustive: search one alternating phase at a time");
    if (constraints_.alternating != AlternatingPhase::off && graph_.kind() != ArchKind::line)
        throw std::invalid_argument("exhaustive: alternating matchings need a line architecture");
    if (constraints_.initial_mapping && (static_cast<int>(constraints_.initial_mapping->size()) != Q ||
                                         !is_injective_mapping(*constraints_.initial_mapping, P)))
        throw std::invalid_argument("exhaustive: initial mapping is not an injection");
}

std::optional<ExhaustiveResult> ExhaustiveSearch::min_depth(int max_horizon) const { return run(max_horizon, true); }

std::optional<ExhaustiveResult> ExhaustiveSearch::min_swaps(int horizon) const { return run(horizon, false); }

std::optional<ExhaustiveResult> ExhaustiveSearch::run(int horizon, bool stop_at_first_depth) const {
    if (horizon > limits_.max_horizon)
        throw std::invalid_argument("exhaustive: horizon " + std::to_string(horizon) + " exceeds the cap of " +
                                    std::to_string(limits_.max_horizon));
    if (horizon < 1) return std::nullopt;

    const int Q = program_.qubit_count();
    const int P = graph_.qubit_count();
    const int G = program_.gate_count();
    const std::uint32_t full = G == 32 ? 0xffffffffu : ((1u << G) - 1u);
    const int budget = constraints_.swap_budget.value_or(std::numeric_limits<int>::max());
    const bool track_absorbed = constraints_.absorbed_budget.has_value();
    const int absorbed_budget = constraints_.absorbed_budget.value_or(0);

    std::vector<std::uint32_t> preds(static_cast<std::size_t>(G), 0);
    for (auto [a, b] : dependencies(program_).precedence) preds[static_cast<std::size_t>(b)] |= 1u << a;

    std::vector<Level> levels(1);
    {
        std::vector<std::vector<int>> starts;
        if (constraints_.initial_mapping) {
            starts.push_back(*constraints_.initial_mapping);
        } else {
            std::vector<int> current;
            std::vector<char> used(static_cast<std::size_t>(P), 0);
            all_injections(Q, P, current, used, starts);
        }
        for (const auto& m : starts) levels[0].offer({pack(m, 0), 0, 0, -1, 0, 0});
    }

    struct Ready {
        int gate;
        int edge;
    };
    std::vector<int> mapping;
    std::vector<int> occupant(static_cast<std::size_t>(P));
    std::vector<Ready> ready;
    std::vector<int> chosen_edges;
    std::vector<int> swap_candidates;

    auto endpoints = [&](int k) {
        const Edge& e = graph_.edge(k);
        return (1u << e.a) | (1u << e.b);
    };

    auto best_complete = [&](const Level& level) -> int {
        int best = -1;
        for (std::size_t i = 0; i < level.entries.size(); ++i) {
            const Entry& e = level.entries[i];
            if ((e.key & 0xffffffffu) != full) continue;
            if (best < 0 || e.swaps < level.entries[static_cast<std::size_t>(best)].swaps) best = static_cast<int>(i);
        }
        return best;
    };

    auto reconstruct = [&](int last_level, int entry) {
        std::vector<const Entry*> chain(static_cast<std::size_t>(last_level + 1));
        for (int l = last_level; l >= 0; --l) {
            chain[static_cast<std::size_t>(l)] = &levels[static_cast<std::size_t>(l)].entries[static_cast<std::size_t>(entry)];
            entry = chain[static_cast<std::size_t>(l)]->parent;
        }
        MappingSolution s;
        s.placements.assign(static_cast<std::size_t>(G), {});
        int depth = 0;
        for (int t = 0; t < last_level; ++t) {
            std::uint32_t done_before = 0, done_after = 0;
            std::vector<int> before, after;
            unpack(chain[static_cast<std::size_t>(t)]->key, Q, before, done_before);
            unpack(chain[static_cast<std::size_t>(t + 1)]->key, Q, after, done_after);
            s.mapping.push_back(before);
            const std::uint32_t executed = done_after & ~done_before;
            for (int g = 0; g < G; ++g) {
                if (!(executed & (1u << g))) continue;
                const Gate& gate = program_.gate(g);
                const int edge = *graph_.edge_between(before[static_cast<std::size_t>(gate.qubits[0])],
                                                      before[static_cast<std::size_t>(gate.qubits[1])]);
                s.placements[static_cast<std::size_t>(g)] = {t, edge};
                depth = std::max(depth, t + 1);
            }
            const Entry& step = *chain[static_cast<std::size_t>(t + 1)];
            for (int k = 0; k < graph_.edge_count(); ++k) {
                if (step.absorbed & (1ull << k)) s.absorbed.push_back({k, t});
                if (step.explicit_swaps & (1ull << k)) s.explicit_swaps.push_back({k, t});
            }
        }
        s.horizon = depth;
        s.mapping.resize(static_cast<std::size_t>(depth));
        std::erase_if(s.explicit_swaps, [depth](const SwapSite& x) { return x.time >= depth; });
        std::erase_if(s.absorbed, [depth](const SwapSite& x) { return x.time >= depth; });
        std::sort(s.absorbed.begin(), s.absorbed.end());
        std::sort(s.explicit_swaps.begin(), s.explicit_swaps.end());
        ExhaustiveResult r;
        r.depth = depth;
        r.swaps = static_cast<int>(s.explicit_swaps.size());
        r.witness = std::move(s);
        return r;
    };

    for (int t = 0; t < horizon; ++t) {
        const Level& current = levels[static_cast<std::size_t>(t)];
        Level next;
        for (std::size_t idx = 0; idx < current.entries.size(); ++idx) {
            const Entry& entry = current.entries[idx];
            std::uint32_t done = 0;
            unpack(entry.key, Q, mapping, done);
            std::fill(occupant.begin(), occupant.end(), -1);
            for (int q = 0; q < Q; ++q) occupant[static_cast<std::size_t>(mapping[static_cast<std::size_t>(q)])] = q;

            ready.clear();
            for (int g = 0; g < G; ++g) {
                if (done & (1u << g)) continue;
                if ((preds[static_cast<std::size_t>(g)] & done) != preds[static_cast<std::size_t>(g)]) continue;
                const Gate& gate = program_.gate(g);
                auto edge = graph_.edge_between(mapping[static_cast<std::size_t>(gate.qubits[0])],
                                                mapping[static_cast<std::size_t>(gate.qubits[1])]);
                if (!edge || !edge_allowed(constraints_.alternating, t, *edge)) continue;
                ready.push_back({g, *edge});
            }

            auto emit = [&](std::uint32_t gate_mask, std::uint64_t absorbed, std::uint64_t explicit_mask, int cost) {
                std::vector<int> moved = mapping;
                std::vector<int> occ = occupant;
                const std::uint64_t swapped = absorbed | explicit_mask;
                for (int k = 0; k < graph_.edge_count(); ++k) {
                    if (!(swapped & (1ull << k))) continue;
                    const Edge& e = graph_.edge(k);
                    std::swap(occ[static_cast<std::size_t>(e.a)], occ[static_cast<std::size_t>(e.b)]);
                }
                for (int p = 0; p < P; ++p)
                    if (occ[static_cast<std::size_t>(p)] >= 0) moved[static_cast<std::size_t>(occ[static_cast<std::size_t>(p)])] = p;
                int absorbed_total = 0;
                if (track_absorbed) {
                    absorbed_total = entry.absorbed_total + std::popcount(absorbed);
                    if (absorbed_total > absorbed_budget) return;
                }
                next.offer({pack(moved, done | gate_mask), entry.swaps + cost, absorbed_total, static_cast<int>(idx),
                            absorbed, explicit_mask});
            };

            // Recursion over gate subsets, then explicit SWAP matchings, then
            // absorbed subsets.
            auto choose_swaps = [&](auto&& self, std::size_t from, std::uint32_t used, std::uint64_t explicit_mask,
                                    int count, std::uint32_t gate_mask) -> void {
                if (from == swap_candidates.size()) {
                    const std::size_t n = constraints_.absorption ? chosen_edges.size() : 0;
                    for (std::uint32_t sub = 0; sub < (1u << n); ++sub) {
                        std::uint64_t absorbed = 0;
                        for (std::size_t i = 0; i < n; ++i)
                            if (sub & (1u << i)) absorbed |= 1ull << chosen_edges[i];
                        emit(gate_mask, absorbed, explicit_mask, count);
                    }
                    return;
                }
                self(self, from + 1, used, explicit_mask, count, gate_mask);
                const int k = swap_candidates[from];
                if (!(used & endpoints(k)) && entry.swaps + count + 1 <= budget)
                    self(self, from + 1, used | endpoints(k), explicit_mask | (1ull << k), count + 1, gate_mask);
            };

            auto choose_gates = [&](auto&& self, std::size_t from, std::uint32_t used, std::uint32_t gate_mask) -> void {
                if (from == ready.size()) {
                    swap_candidates.clear();
                    for (const Edge& e : graph_.edges()) {
                        if (used & endpoints(e.id)) continue;
                        if (!edge_allowed(constraints_.alternating, t, e.id)) continue;
                        // A SWAP between two empty qubits changes nothing.
                        if (occupant[static_cast<std::size_t>(e.a)] < 0 && occupant[static_cast<std::size_t>(e.b)] < 0) continue;
                        swap_candidates.push_back(e.id);
                    }
                    choose_swaps(choose_swaps, 0, used, 0, 0, gate_mask);
                    return;
                }
                self(self, from + 1, used, gate_mask);
                const Ready& r = ready[from];
                if (!(used & endpoints(r.edge))) {
                    chosen_edges.push_back(r.edge);
                    self(self, from + 1, used | endpoints(r.edge), gate_mask | (1u << r.gate));
                    chosen_edges.pop_back();
                }
            };
            choose_gates(choose_gates, 0, 0, 0);
        }
        levels.push_back(std::move(next));

        if (stop_at_first_depth) {
            const int best = best_complete(levels.back());
            if (best >= 0) return reconstruct(t + 1, best);
        }
    }
    if (stop_at_first_depth) return std::nullopt;
    const int best = best_complete(levels.back());
    if (best < 0) return std::nullopt;
    return reconstruct(horizon, best);
}

std::optional<ExhaustiveResult> internal_exhaustive(const Program& program, const CouplingGraph& graph, bool absorption,
                                                    int max_horizon, const SearchConstraints& extra,
                                                    const SearchLimits& limits) {
    SearchConstraints constraints = extra;
    constraints.absorption = absorption;
    return ExhaustiveSearch(program, graph, constraints, limits).min_depth(max_horizon);
}

Assignment model_from_solution(const MappingSolution& solution, const ConstraintSystem& cs) {
    const VarTable& v = cs.vars();
    if (solution.horizon > v.horizon()) throw std::invalid_argument("model_from_solution: solution exceeds the horizon");
    Assignment model(static_cast<std::size_t>(v.size()), 0);
    const std::vector<int> tail = final_mapping(solution, cs.graph());
    for (int t = 0; t < v.horizon(); ++t) {
        const auto& row = t < solution.horizon ? solution.mapping[static_cast<std::size_t>(t)] : tail;
        for (int q = 0; q < v.qubits(); ++q) model[static_cast<std::size_t>(v.mapping(q, t))] = row[static_cast<std::size_t>(q)];
    }
    for (int g = 0; g < v.gates(); ++g) {
        model[static_cast<std::size_t>(v.gate_time(g))] = solution.placements[static_cast<std::size_t>(g)].time;
        model[static_cast<std::size_t>(v.gate_edge(g))] = solution.placements[static_cast<std::size_t>(g)].edge;
    }
    for (const SwapSite& x : solution.absorbed) model[static_cast<std::size_t>(v.absorbed(x.edge, x.time))] = 1;
    for (const SwapSite& x : solution.explicit_swaps) model[static_cast<std::size_t>(v.explicit_swap(x.edge, x.time))] = 1;
    return model;
}

}  // namespace qlayout
