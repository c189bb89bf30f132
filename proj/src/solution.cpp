#include "qlayout/solution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qlayout {

using nlohmann::json;

namespace {

std::string site(int e, int t) { return "(e" + std::to_string(e) + ", t" + std::to_string(t) + ")"; }

/// Applies SWAPs on the given edges to a q -> p mapping.
std::vector<int> apply_swaps(const std::vector<int>& mapping, const std::vector<int>& edges,
                             const CouplingGraph& graph) {
    std::vector<int> occupant(static_cast<std::size_t>(graph.qubit_count()), -1);
    for (std::size_t q = 0; q < mapping.size(); ++q)
        if (mapping[q] >= 0 && mapping[q] < graph.qubit_count()) occupant[static_cast<std::size_t>(mapping[q])] = static_cast<int>(q);
    for (int k : edges) {
        const Edge& e = graph.edge(k);
        std::swap(occupant[static_cast<std::size_t>(e.a)], occupant[static_cast<std::size_t>(e.b)]);
    }
    std::vector<int> next(mapping.size(), -1);
    for (int p = 0; p < graph.qubit_count(); ++p)
        if (occupant[static_cast<std::size_t>(p)] >= 0) next[static_cast<std::size_t>(occupant[static_cast<std::size_t>(p)])] = p;
    return next;
}

std::vector<int> swaps_at(const MappingSolution& s, int t) {
    std::vector<int> edges;
    for (const SwapSite& x : s.absorbed)
        if (x.time == t) edges.push_back(x.edge);
    for (const SwapSite& x : s.explicit_swaps)
        if (x.time == t) edges.push_back(x.edge);
    return edges;
}

int activity_depth(const MappingSolution& s) {
    int last = -1;
    for (const Placement& p : s.placements) last = std::max(last, p.time);
    for (const SwapSite& x : s.explicit_swaps) last = std::max(last, x.time);
    return last + 1;
}

void normalize(MappingSolution& s) {
    std::sort(s.absorbed.begin(), s.absorbed.end());
    std::sort(s.explicit_swaps.begin(), s.explicit_swaps.end());
}

}  // namespace

MappingSolution decode(const Assignment& model, const ConstraintSystem& cs) {
    const VarTable& v = cs.vars();
    if (static_cast<int>(model.size()) != v.size())
        throw std::invalid_argument("decode: model assigns " + std::to_string(model.size()) + " of " +
                                    std::to_string(v.size()) + " variables");
    for (int k = 0; k < v.size(); ++k) {
        const VarInfo& info = v.info(k);
        const auto value = model[static_cast<std::size_t>(k)];
        if (value < 0 || value >= info.upper)
            throw std::invalid_argument("decode: value " + std::to_string(value) + " out of range for " + info.name);
    }

    MappingSolution s;
    int depth = 0;
    for (int g = 0; g < v.gates(); ++g) {
        Placement p{static_cast<int>(model[static_cast<std::size_t>(v.gate_time(g))]),
                    static_cast<int>(model[static_cast<std::size_t>(v.gate_edge(g))])};
        depth = std::max(depth, p.time + 1);
        s.placements.push_back(p);
    }
    s.horizon = depth;
    for (int t = 0; t < depth; ++t) {
        std::vector<int> row;
        for (int q = 0; q < v.qubits(); ++q) row.push_back(static_cast<int>(model[static_cast<std::size_t>(v.mapping(q, t))]));
        s.mapping.push_back(std::move(row));
    }
    for (int e = 0; e < v.edges(); ++e)
        for (int t = 0; t < v.horizon(); ++t) {
            if (model[static_cast<std::size_t>(v.absorbed(e, t))]) {
                bool hosted = std::any_of(s.placements.begin(), s.placements.end(),
                                          [&](const Placement& p) { return p.time == t && p.edge == e; });
                if (!hosted)
                    throw std::invalid_argument("decode: absorbed SWAP at " + site(e, t) + " has no gate to absorb it");
                s.absorbed.push_back({e, t});
            }
            if (model[static_cast<std::size_t>(v.explicit_swap(e, t))] && t < depth) s.explicit_swaps.push_back({e, t});
        }
    normalize(s);
    return s;
}

VerifyReport verify(const Program& program, const CouplingGraph& graph, const MappingSolution& s,
                    const HardwareModel& hardware) {
    VerifyReport report;
    auto add = [&](std::string family, std::string detail) {
        report.violations.push_back({std::move(family), std::move(detail)});
    };
    const int Q = program.qubit_count();
    const int P = graph.qubit_count();
    const int E = graph.edge_count();
    const int G = program.gate_count();

    // Shape problems make the remaining checks meaningless.
    if (s.horizon < 1) add("shape", "horizon must be at least 1");
    if (static_cast<int>(s.mapping.size()) != s.horizon) add("shape", "mapping has " + std::to_string(s.mapping.size()) + " rows for horizon " + std::to_string(s.horizon));
    for (std::size_t t = 0; t < s.mapping.size(); ++t) {
        if (static_cast<int>(s.mapping[t].size()) != Q) add("shape", "mapping row " + std::to_string(t) + " has wrong width");
        for (int p : s.mapping[t])
            if (p < 0 || p >= P) add("shape", "mapping row " + std::to_string(t) + " names unknown qubit p" + std::to_string(p));
    }
    if (static_cast<int>(s.placements.size()) != G) add("shape", "expected " + std::to_string(G) + " placements");
    for (std::size_t g = 0; g < s.placements.size(); ++g) {
        const Placement& pl = s.placements[g];
        if (pl.time < 0 || pl.time >= s.horizon || pl.edge < 0 || pl.edge >= E)
            add("shape", "gate " + std::to_string(g) + " placed outside the horizon or graph");
    }
    for (const auto* sites : {&s.absorbed, &s.explicit_swaps})
        for (const SwapSite& x : *sites)
            if (x.time < 0 || x.time >= s.horizon || x.edge < 0 || x.edge >= E)
                add("shape", "SWAP at " + site(x.edge, x.time) + " outside the horizon or graph");
    if (!report.ok()) return report;

    for (int t = 0; t < s.horizon; ++t)
        if (!is_injective_mapping(s.mapping[static_cast<std::size_t>(t)], P))
            add("injectivity", "two program qubits share a physical qubit at t" + std::to_string(t));

    for (const Gate& g : program.gates()) {
        const Placement& pl = s.placements[static_cast<std::size_t>(g.id)];
        const Edge& e = graph.edge(pl.edge);
        const auto& row = s.mapping[static_cast<std::size_t>(pl.time)];
        const int p0 = row[static_cast<std::size_t>(g.qubits[0])];
        const int p1 = row[static_cast<std::size_t>(g.qubits[1])];
        if (!((p0 == e.a && p1 == e.b) || (p0 == e.b && p1 == e.a)))
            add("mapping implied by spacetime coordinates",
                "gate " + std::to_string(g.id) + " at " + site(pl.edge, pl.time) + " but operands sit on p" +
                    std::to_string(p0) + ", p" + std::to_string(p1));
    }

    const DependencyGraph deps = dependencies(program);
    for (auto [a, b] : deps.precedence)
        if (s.placements[static_cast<std::size_t>(a)].time >= s.placements[static_cast<std::size_t>(b)].time)
            add("dependencies", "gate " + std::to_string(b) + " must follow gate " + std::to_string(a));
    for (auto [a, b] : deps.distinct_time)
        if (s.placements[static_cast<std::size_t>(a)].time == s.placements[static_cast<std::size_t>(b)].time)
            add("dependencies", "gates " + std::to_string(a) + " and " + std::to_string(b) + " share a time step");

    auto overlapping = [&](int e, int f) { return e == f || graph.edge(e).adjacent_to(graph.edge(f)); };
    for (int a = 0; a < G; ++a)
        for (int b = a + 1; b < G; ++b) {
            const Placement& pa = s.placements[static_cast<std::size_t>(a)];
            const Placement& pb = s.placements[static_cast<std::size_t>(b)];
            if (pa.time == pb.time && overlapping(pa.edge, pb.edge))
                add("no overlaps", "gates " + std::to_string(a) + " and " + std::to_string(b) + " overlap at t" + std::to_string(pa.time));
        }
    for (std::size_t i = 0; i < s.explicit_swaps.size(); ++i) {
        const SwapSite& x = s.explicit_swaps[i];
        for (std::size_t j = i + 1; j < s.explicit_swaps.size(); ++j) {
            const SwapSite& y = s.explicit_swaps[j];
            if (x.time == y.time && overlapping(x.edge, y.edge))
                add("no overlaps", "explicit SWAPs at " + site(x.edge, x.time) + " and " + site(y.edge, y.time) + " overlap");
        }
        for (std::size_t g = 0; g < s.placements.size(); ++g) {
            const Placement& pl = s.placements[g];
            if (pl.time == x.time && overlapping(pl.edge, x.edge))
                add("no overlaps", "explicit SWAP at " + site(x.edge, x.time) + " overlaps gate " + std::to_string(g));
        }
    }

    std::set<SwapSite> seen_absorbed;
    for (const SwapSite& x : s.absorbed) {
        if (!seen_absorbed.insert(x).second) add("SWAP absorption", "duplicate absorbed SWAP at " + site(x.edge, x.time));
        bool hosted = std::any_of(s.placements.begin(), s.placements.end(),
                                  [&](const Placement& p) { return p.time == x.time && p.edge == x.edge; });
        if (!hosted) add("SWAP absorption", "absorbed SWAP at " + site(x.edge, x.time) + " has no gate at that point");
    }

    for (int t = 0; t + 1 < s.horizon; ++t) {
        const auto expected = apply_swaps(s.mapping[static_cast<std::size_t>(t)], swaps_at(s, t), graph);
        if (expected != s.mapping[static_cast<std::size_t>(t + 1)])
            add("mapping transformation", "mapping at t" + std::to_string(t + 1) + " does not follow from t" + std::to_string(t));
    }

    if (!report.ok()) return report;

    Metrics m;
    m.depth = activity_depth(s);
    m.swap_count = static_cast<int>(s.explicit_swaps.size());
    m.absorbed_count = static_cast<int>(s.absorbed.size());
    m.gate_count = G;
    if (Q * m.depth >= 2 * (G + m.swap_count))
        m.fidelity = fidelity(Q, m.depth, G, m.swap_count, hardware.coherence_steps, hardware.gate_fidelity);
    report.metrics = m;
    return report;
}

double fidelity(int qubits, int depth, int gates, int swaps, double coherence_steps, double gate_fidelity) {
    if (qubits < 1 || depth < 0 || gates < 0 || swaps < 0) throw std::invalid_argument("fidelity: negative count");
    if (!(coherence_steps > 0.0)) throw std::invalid_argument("fidelity: T0 must be positive");
    if (!(gate_fidelity > 0.0 && gate_fidelity <= 1.0)) throw std::invalid_argument("fidelity: fU must lie in (0, 1]");
    const long long slots = static_cast<long long>(qubits) * depth;
    const long long busy = 2LL * (gates + swaps);
    if (slots < busy)
        throw std::invalid_argument("fidelity: " + std::to_string(busy) + " busy qubit slots exceed the " +
                                    std::to_string(slots) + " available");
    const double idle = static_cast<double>(slots - busy);
    return std::exp(-idle / (qubits * coherence_steps)) * std::pow(gate_fidelity, gates + swaps);
}

double multi_iteration_fidelity(double single, int iterations) {
    if (!(single > 0.0 && single <= 1.0)) throw std::invalid_argument("multi_iteration_fidelity: f must lie in (0, 1]");
    if (iterations < 1) throw std::invalid_argument("multi_iteration_fidelity: need at least one iteration");
    return std::pow(single, iterations);
}

std::vector<int> final_mapping(const MappingSolution& s, const CouplingGraph& graph) {
    if (s.mapping.empty()) throw std::invalid_argument("final_mapping: empty solution");
    return apply_swaps(s.mapping.back(), swaps_at(s, s.horizon - 1), graph);
}

void propagate_mapping(MappingSolution& s, const CouplingGraph& graph) {
    for (int t = 0; t + 1 < s.horizon; ++t)
        s.mapping[static_cast<std::size_t>(t + 1)] = apply_swaps(s.mapping[static_cast<std::size_t>(t)], swaps_at(s, t), graph);
}

MappingSolution drop_final_step_swaps(MappingSolution s) {
    const int last = s.horizon - 1;
    auto at_last = [last](const SwapSite& x) { return x.time >= last; };
    std::erase_if(s.absorbed, at_last);
    std::erase_if(s.explicit_swaps, at_last);
    return s;
}

MappingSolution drop_redundant_absorbed(MappingSolution s, const Program& program, const CouplingGraph& graph) {
    std::vector<SwapSite> order = s.absorbed;
    std::sort(order.begin(), order.end(),
              [](const SwapSite& a, const SwapSite& b) { return std::pair(a.time, a.edge) > std::pair(b.time, b.edge); });
    for (const SwapSite& x : order) {
        MappingSolution trial = s;
        std::erase(trial.absorbed, x);
        propagate_mapping(trial, graph);
        if (verify(program, graph, trial).ok()) s = std::move(trial);
    }
    return s;
}

// ------------------------------------------------------------ post-process

namespace {

void toggle(std::vector<SwapSite>& sites, SwapSite x) {
    auto it = std::find(sites.begin(), sites.end(), x);
    if (it != sites.end())
        sites.erase(it);
    else
        sites.push_back(x);
}

bool step_is_empty(const MappingSolution& s, int t) {
    return std::none_of(s.placements.begin(), s.placements.end(), [t](const Placement& p) { return p.time == t; }) &&
           std::none_of(s.explicit_swaps.begin(), s.explicit_swaps.end(), [t](const SwapSite& x) { return x.time == t; });
}

void delete_step(MappingSolution& s, int t) {
    s.mapping.erase(s.mapping.begin() + t);
    --s.horizon;
    for (Placement& p : s.placements)
        if (p.time > t) --p.time;
    for (auto* sites : {&s.absorbed, &s.explicit_swaps})
        for (SwapSite& x : *sites)
            if (x.time > t) --x.time;
}

}  // namespace

MappingSolution postprocess_absorb(const MappingSolution& input, const Program& program, const CouplingGraph& graph) {
    VerifyReport initial = verify(program, graph, input);
    if (!initial.ok())
        throw std::invalid_argument("postprocess_absorb: input fails verification (" + initial.violations.front().family + ")");

    MappingSolution s = input;
    auto accept = [&](MappingSolution& candidate) {
        propagate_mapping(candidate, graph);
        if (!verify(program, graph, candidate).ok()) return false;
        normalize(candidate);
        s = std::move(candidate);
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;

        // Fold explicit SWAPs into a gate on the same edge one step away.
        for (const SwapSite x : s.explicit_swaps) {
            for (int host_time : {x.time - 1, x.time + 1}) {
                bool hosted = std::any_of(s.placements.begin(), s.placements.end(), [&](const Placement& p) {
                    return p.time == host_time && p.edge == x.edge;
                });
                if (!hosted) continue;
                MappingSolution candidate = s;
                std::erase(candidate.explicit_swaps, x);
                toggle(candidate.absorbed, {x.edge, host_time});
                if (accept(candidate)) {
                    changed = true;
                    break;
                }
            }
            if (changed) break;
        }
        if (changed) continue;

        // Pull gates (with their absorbed SWAP) one step earlier.
        for (std::size_t g = 0; g < s.placements.size() && !changed; ++g) {
            const Placement pl = s.placements[g];
            if (pl.time == 0) continue;
            MappingSolution candidate = s;
            candidate.placements[g].time = pl.time - 1;
            for (SwapSite& a : candidate.absorbed)
                if (a.edge == pl.edge && a.time == pl.time) a.time = pl.time - 1;
            changed = accept(candidate);
        }
        if (changed) continue;

        for (int t = 0; t < s.horizon && s.horizon > 1; ++t)
            if (step_is_empty(s, t)) {
                MappingSolution candidate = s;
                delete_step(candidate, t);
                if (accept(candidate)) {
                    changed = true;
                    break;
                }
            }
    }
    return s;
}

std::vector<int> check_theorem1(const MappingSolution& s, const CouplingGraph& graph) {
    std::vector<std::vector<int>> layers(static_cast<std::size_t>(std::max(s.horizon, 0)));
    for (const Placement& p : s.placements)
        if (p.time >= 0 && p.time < s.horizon) layers[static_cast<std::size_t>(p.time)].push_back(p.edge);
    std::vector<int> offending;
    for (int t = 0; t + 1 < s.horizon; ++t) {
        const auto& now = layers[static_cast<std::size_t>(t)];
        const auto& next = layers[static_cast<std::size_t>(t + 1)];
        if (now.empty() || next.empty()) continue;
        std::vector<int> both = now;
        both.insert(both.end(), next.begin(), next.end());
        if (is_matching(graph, both)) offending.push_back(t);
    }
    return offending;
}

bool alternating_pattern_holds(const MappingSolution& s, const CouplingGraph& graph) {
    if (graph.kind() != ArchKind::line)
        throw std::invalid_argument("alternating_pattern_holds: line architecture required");
    std::vector<std::pair<int, int>> activity;  // (time, edge)
    for (const Placement& p : s.placements) activity.emplace_back(p.time, p.edge);
    for (const SwapSite& x : s.explicit_swaps) activity.emplace_back(x.time, x.edge);
    for (int phase : {0, 1}) {
        bool holds = std::all_of(activity.begin(), activity.end(),
                                 [phase](auto te) { return te.second % 2 == (te.first + phase) % 2; });
        if (holds) return true;
    }
    return false;
}

// ------------------------------------------------------------------- JSON

std::string solution_to_json(const MappingSolution& s, const std::optional<Metrics>& metrics) {
    json doc;
    doc["horizon"] = s.horizon;
    doc["mapping"] = s.mapping;
    json placements = json::array();
    for (std::size_t g = 0; g < s.placements.size(); ++g)
        placements.push_back({{"gate", g}, {"t", s.placements[g].time}, {"edge", s.placements[g].edge}});
    doc["placements"] = std::move(placements);
    auto sites = [](std::vector<SwapSite> v) {
        std::sort(v.begin(), v.end());
        json out = json::array();
        for (const SwapSite& x : v) out.push_back({x.edge, x.time});
        return out;
    };
    doc["absorbed"] = sites(s.absorbed);
    doc["explicit"] = sites(s.explicit_swaps);
    if (metrics) {
        json m = {{"depth", metrics->depth},
                  {"swaps", metrics->swap_count},
                  {"absorbed", metrics->absorbed_count},
                  {"gates", metrics->gate_count}};
        m["fidelity"] = metrics->fidelity ? json(*metrics->fidelity) : json(nullptr);
        doc["metrics"] = std::move(m);
    }
    return doc.dump(2) + "\n";
}

MappingSolution parse_solution(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("solution: malformed JSON: ") + e.what());
    }
    try {
        MappingSolution s;
        s.horizon = doc.at("horizon").get<int>();
        s.mapping = doc.at("mapping").get<std::vector<std::vector<int>>>();
        const json& placements = doc.at("placements");
        s.placements.resize(placements.size());
        for (std::size_t k = 0; k < placements.size(); ++k) {
            const json& jp = placements[k];
            const std::size_t g = jp.value("gate", k);
            if (g >= s.placements.size()) throw std::invalid_argument("solution: placement names unknown gate");
            s.placements[g] = {jp.at("t").get<int>(), jp.at("edge").get<int>()};
        }
        for (const json& jx : doc.at("absorbed")) s.absorbed.push_back({jx.at(0).get<int>(), jx.at(1).get<int>()});
        for (const json& jx : doc.at("explicit")) s.explicit_swaps.push_back({jx.at(0).get<int>(), jx.at(1).get<int>()});
        return s;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("solution: ") + e.what());
    }
}

MappingSolution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("solution: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_solution(buf.str());
}

}  // namespace qlayout
