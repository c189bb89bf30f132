#include "qlayout/solve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

namespace qlayout {

Objective parse_objective(const std::string& text) {
    if (text == "depth") return Objective::depth;
    if (text == "swap" || text == "swaps") return Objective::swaps;
    if (text == "fidelity") return Objective::fidelity;
    throw std::invalid_argument("unknown objective '" + text + "' (expected depth, swap or fidelity)");
}

AlternatingMode parse_alternating(const std::string& text) {
    if (text == "off") return AlternatingMode::off;
    if (text == "0" || text == "phase0") return AlternatingMode::phase0;
    if (text == "1" || text == "phase1") return AlternatingMode::phase1;
    if (text == "auto" || text == "both" || text == "on") return AlternatingMode::both;
    throw std::invalid_argument("unknown alternating mode '" + text + "' (expected off, auto, 0 or 1)");
}

SwapSearch parse_swap_search(const std::string& text) {
    if (text == "linear") return SwapSearch::linear;
    if (text == "binary") return SwapSearch::binary;
    throw std::invalid_argument("unknown swap search '" + text + "' (expected linear or binary)");
}

std::string to_string(Objective objective) {
    switch (objective) {
        case Objective::depth: return "depth";
        case Objective::swaps: return "swap";
        case Objective::fidelity: return "fidelity";
    }
    return "?";
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

/// Runs checks for one fixed alternating phase and keeps the bookkeeping.
class Runner {
public:
    Runner(const Program& program, const CouplingGraph& graph, const SolveOptions& options, const Backend& backend,
           AlternatingPhase phase)
        : program_(program), graph_(graph), options_(options), backend_(backend), phase_(phase) {
        const DependencyGraph deps = dependencies(program_);
        lower_bound_ = depth_lower_bound(deps, program_);
        cap_ = options_.horizon_cap.value_or(std::max(2 * program_.qubit_count(), 2 * lower_bound_));
    }

    int lower_bound() const { return lower_bound_; }
    int cap() const { return cap_; }
    int floor() const { return floor_; }

    ConstraintSystem system(int horizon, std::optional<int> budget, std::optional<int> absorbed = std::nullopt) const {
        EncodingOptions eo;
        eo.horizon = horizon;
        eo.absorption_enabled = options_.absorption;
        eo.alternating = phase_;
        eo.initial_mapping = options_.initial_mapping;
        eo.swap_budget = budget;
        if (options_.swap_budget) eo.swap_budget = std::min(budget.value_or(*options_.swap_budget), *options_.swap_budget);
        eo.absorbed_budget = absorbed;
        return build(program_, graph_, eo);
    }

    /// Decoded solution, or nullopt on unsat. Throws SolverTimeout.
    std::optional<MappingSolution> attempt(int horizon, std::optional<int> budget,
                                           std::optional<int> absorbed = std::nullopt) {
        const ConstraintSystem cs = system(horizon, budget, absorbed);
        const SolveOutcome out = check(cs, backend_);
        ++calls_;
        time_ += out.wall_time;
        if (out.status == SatStatus::timeout)
            throw SolverTimeout("solver timed out at horizon " + std::to_string(horizon) +
                                    (budget ? " with SWAP budget " + std::to_string(*budget) : std::string{}),
                                floor_);
        if (out.status == SatStatus::unsat) return std::nullopt;
        MappingSolution s = drop_redundant_absorbed(drop_final_step_swaps(decode(*out.model, cs)), program_, graph_);
        const VerifyReport report = verify(program_, graph_, s, options_.hardware);
        if (!report.ok())
            throw SolverError("decoded solution fails verification: " + report.violations.front().family + ": " +
                              report.violations.front().detail);
        return s;
    }

    /// Iterative deepening from the lower bound.
    MappingSolution deepen() {
        floor_ = std::max(floor_, 1);
        for (int t = lower_bound_; t <= cap_; ++t) {
            auto s = attempt(t, std::nullopt);
            if (s) return *s;
            floor_ = t + 1;
        }
        throw NoSolution("no schedule within horizon cap " + std::to_string(cap_));
    }

    /// Fewest SWAPs at `horizon`, starting from a known feasible solution.
    MappingSolution reduce_swaps(int horizon, MappingSolution best) {
        if (options_.swap_search == SwapSearch::linear) {
            while (!best.explicit_swaps.empty()) {
                auto s = attempt(horizon, static_cast<int>(best.explicit_swaps.size()) - 1);
                if (!s) break;
                best = std::move(*s);
            }
            return best;
        }
        int lo = 0;
        int hi = static_cast<int>(best.explicit_swaps.size());
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            auto s = attempt(horizon, mid);
            if (s) {
                best = std::move(*s);
                hi = static_cast<int>(best.explicit_swaps.size());
            } else {
                lo = mid + 1;
            }
        }
        return best;
    }

    /// Fewest absorbed SWAPs at the solution's own depth and SWAP count.
    MappingSolution polish(MappingSolution best) {
        if (!options_.minimize_absorbed) return best;
        const int horizon = best.horizon;
        const int swaps = static_cast<int>(best.explicit_swaps.size());
        while (!best.absorbed.empty()) {
            auto s = attempt(horizon, swaps, static_cast<int>(best.absorbed.size()) - 1);
            if (!s) break;
            best = std::move(*s);
        }
        return best;
    }

    SolveResult finish(MappingSolution s) {
        s = polish(std::move(s));
        SolveResult r;
        const VerifyReport report = verify(program_, graph_, s, options_.hardware);
        r.metrics = *report.metrics;
        r.solution = std::move(s);
        r.solver_calls = calls_;
        r.solver_time = time_;
        r.phase = phase_;
        if (phase_ == AlternatingPhase::either) {
            std::vector<std::pair<int, int>> sites;
            for (const Placement& p : r.solution.placements) sites.push_back({p.time, p.edge});
            for (const SwapSite& w : r.solution.explicit_swaps) sites.push_back({w.time, w.edge});
            r.phase = schedule_phase(sites);
        }
        return r;
    }

    SolveResult run_depth() {
        MappingSolution s = deepen();
        const int depth = s.horizon;
        if (options_.tie_break_swaps) s = reduce_swaps(depth, std::move(s));
        return finish(std::move(s));
    }

    SolveResult run_swaps() {
        if (options_.horizon) {
            auto s = attempt(*options_.horizon, std::nullopt);
            if (!s) throw NoSolution("no schedule within horizon " + std::to_string(*options_.horizon));
            return finish(reduce_swaps(*options_.horizon, std::move(*s)));
        }
        MappingSolution s = deepen();
        const int horizon = s.horizon + options_.horizon_slack;
        if (options_.horizon_slack > 0) {
            auto wide = attempt(horizon, static_cast<int>(s.explicit_swaps.size()));
            if (wide) s = std::move(*wide);
        }
        return finish(reduce_swaps(horizon, std::move(s)));
    }

    SolveResult run_fidelity() {
        const HardwareModel& hw = options_.hardware;
        MappingSolution s = deepen();
        const int optimum = s.horizon;
        s = reduce_swaps(optimum, std::move(s));
        std::optional<MappingSolution> best;
        double best_f = -1.0;
        auto consider = [&](const MappingSolution& candidate) {
            const VerifyReport report = verify(program_, graph_, candidate, hw);
            const double f = report.metrics->fidelity.value_or(0.0);
            if (f > best_f) {
                best_f = f;
                best = candidate;
            }
        };
        consider(s);
        const int last = std::min(cap_, optimum + std::max(0, options_.fidelity_horizon_extra));
        for (int t = optimum + 1; t <= last && !s.explicit_swaps.empty(); ++t) {
            auto fewer = attempt(t, static_cast<int>(s.explicit_swaps.size()) - 1);
            if (!fewer) continue;
            s = reduce_swaps(t, std::move(*fewer));
            consider(s);
        }
        return finish(std::move(*best));
    }

private:
    const Program& program_;
    const CouplingGraph& graph_;
    const SolveOptions& options_;
    const Backend& backend_;
    AlternatingPhase phase_;
    int lower_bound_ = 1;
    int cap_ = 1;
    int floor_ = 1;
    int calls_ = 0;
    double time_ = 0.0;
};

std::vector<AlternatingPhase> phases_for(const CouplingGraph& graph, const SolveOptions& options) {
    if (options.alternating == AlternatingMode::off) return {AlternatingPhase::off};
    if (graph.kind() != ArchKind::line) {
        if (options.reduce_best_effort) return {AlternatingPhase::off};
        throw std::invalid_argument("alternating matchings need a line architecture (use best-effort reduction to skip)");
    }
    switch (options.alternating) {
        case AlternatingMode::phase0: return {AlternatingPhase::phase0};
        case AlternatingMode::phase1: return {AlternatingPhase::phase1};
        default: return {AlternatingPhase::either};
    }
}

/// Strictly better under the objective; equal results keep the incumbent.
bool better(const SolveResult& a, const SolveResult& b, Objective objective) {
    const Metrics& x = a.metrics;
    const Metrics& y = b.metrics;
    switch (objective) {
        case Objective::depth:
            return std::pair(x.depth, x.swap_count) < std::pair(y.depth, y.swap_count);
        case Objective::swaps:
            return std::pair(x.swap_count, x.depth) < std::pair(y.swap_count, y.depth);
        case Objective::fidelity:
            return x.fidelity.value_or(0.0) > y.fidelity.value_or(0.0);
    }
    return false;
}

SolveResult run_phases(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                       const Backend& backend, Objective objective) {
    std::optional<SolveResult> best;
    std::optional<SolverTimeout> timeout;
    int calls = 0;
    double time = 0.0;
    const auto phases = phases_for(graph, options);
    for (AlternatingPhase phase : phases) {
        Runner runner(program, graph, options, backend, phase);
        try {
            SolveResult r;
            switch (objective) {
                case Objective::depth: r = runner.run_depth(); break;
                case Objective::swaps: r = runner.run_swaps(); break;
                case Objective::fidelity: r = runner.run_fidelity(); break;
            }
            calls += r.solver_calls;
            time += r.solver_time;
            if (!best || better(r, *best, objective)) best = std::move(r);
        } catch (const SolverTimeout& e) {
            if (phases.size() == 1) throw;
            timeout = e;
        } catch (const NoSolution&) {
            if (phases.size() == 1) throw;
        }
    }
    if (!best) {
        if (timeout) throw *timeout;
        throw NoSolution("no schedule within the horizon cap under either alternating phase");
    }
    best->solver_calls = calls;
    best->solver_time = time;
    return *best;
}

}  // namespace

SolveResult minimize_depth(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                           const Backend& backend) {
    return run_phases(program, graph, options, backend, Objective::depth);
}

SolveResult minimize_swaps(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                           const Backend& backend) {
    return run_phases(program, graph, options, backend, Objective::swaps);
}

SolveResult maximize_fidelity(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                              const Backend& backend) {
    const HardwareModel& hw = options.hardware;
    if (!(hw.coherence_steps > 0)) throw std::invalid_argument("coherence time T0 must be positive");
    if (!(hw.gate_fidelity > 0 && hw.gate_fidelity <= 1)) throw std::invalid_argument("gate fidelity must be in (0, 1]");
    return run_phases(program, graph, options, backend, Objective::fidelity);
}

SolveResult solve(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                  const Backend& backend, Objective objective) {
    switch (objective) {
        case Objective::depth: return minimize_depth(program, graph, options, backend);
        case Objective::swaps: return minimize_swaps(program, graph, options, backend);
        case Objective::fidelity: return maximize_fidelity(program, graph, options, backend);
    }
    throw std::invalid_argument("unknown objective");
}

CertifyResult certify_depth(const Program& program, const CouplingGraph& graph, const SolveOptions& reduced,
                            const Backend& backend) {
    CertifyResult out;
    out.result = minimize_depth(program, graph, reduced, backend);
    const int d = out.result.metrics.depth;
    out.reduced_depth = d;

    SolveOptions exact = reduced;
    exact.alternating = AlternatingMode::off;
    exact.initial_mapping.reset();
    exact.swap_budget.reset();

    if (d - 1 < 1) {
        out.certificate = DepthCertificate{1, 0, ""};
        return out;
    }
    Runner runner(program, graph, exact, backend, AlternatingPhase::off);
    const ConstraintSystem cs = runner.system(d - 1, std::nullopt);
    const std::string id = fnv1a_hex(emit_smtlib(cs));
    const SolveOutcome check_out = check(cs, backend);
    out.result.solver_calls += 1;
    out.result.solver_time += check_out.wall_time;
    if (check_out.status == SatStatus::timeout) return out;
    if (check_out.status == SatStatus::unsat) {
        out.certificate = DepthCertificate{d, d - 1, id};
        return out;
    }
    // The reduction lost optimality; fall back to the exact optimum.
    out.reduction_optimal = false;
    SolveOptions bounded = exact;
    bounded.horizon_cap = d - 1;
    try {
        SolveResult r = minimize_depth(program, graph, bounded, backend);
        r.solver_calls += out.result.solver_calls;
        r.solver_time += out.result.solver_time;
        out.result = std::move(r);
    } catch (const SolverTimeout&) {
        MappingSolution s = drop_final_step_swaps(decode(*check_out.model, cs));
        out.result.metrics = *verify(program, graph, s, reduced.hardware).metrics;
        out.result.solution = std::move(s);
    }
    return out;
}

std::string certificate_to_json(const CertifyResult& result) {
    nlohmann::ordered_json j;
    j["reduced_depth"] = result.reduced_depth;
    j["reduction_optimal"] = result.reduction_optimal;
    j["depth"] = result.result.metrics.depth;
    if (result.certificate) {
        j["certified_floor"] = result.certificate->certified_floor;
        j["horizon_checked"] = result.certificate->horizon_checked;
        j["instance_id"] = result.certificate->instance_id;
    } else {
        j["certified_floor"] = nullptr;
    }
    return j.dump(2) + "\n";
}

namespace {

bool fully_symmetric(const Program& program) {
    if (program.commuting_groups().size() != 1) return false;
    const int q = program.qubit_count();
    std::vector<int> count(static_cast<std::size_t>(q * q), 0);
    for (const Gate& g : program.gates()) {
        const int a = std::min(g.qubits[0], g.qubits[1]);
        const int b = std::max(g.qubits[0], g.qubits[1]);
        ++count[static_cast<std::size_t>(a * q + b)];
    }
    const int first = count[1];
    if (first == 0) return false;
    for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b)
            if (count[static_cast<std::size_t>(a * q + b)] != first) return false;
    return true;
}

std::vector<int> identity_mapping(int qubits) {
    std::vector<int> m(static_cast<std::size_t>(qubits));
    for (int q = 0; q < qubits; ++q) m[static_cast<std::size_t>(q)] = q;
    return m;
}

}  // namespace

std::vector<std::vector<int>> initial_mapping_candidates(const Program& program, const CouplingGraph& graph,
                                                         std::string* warning) {
    const int Q = program.qubit_count();
    const int P = graph.qubit_count();
    auto fallback = [&](const std::string& why) {
        if (warning) *warning = why;
        return std::vector<std::vector<int>>{identity_mapping(Q)};
    };
    if (Q > P) throw std::invalid_argument("architecture too small for the program");
    if (fully_symmetric(program)) return {identity_mapping(Q)};
    if (graph.kind() != ArchKind::line) return fallback("initial mapping enumeration needs a line architecture");

    std::vector<char> has_pred(static_cast<std::size_t>(program.gate_count()), 0);
    for (auto [a, b] : dependencies(program).precedence) has_pred[static_cast<std::size_t>(b)] = 1;
    std::vector<int> layer;
    std::vector<char> busy(static_cast<std::size_t>(Q), 0);
    for (int g = 0; g < program.gate_count(); ++g) {
        if (has_pred[static_cast<std::size_t>(g)]) continue;
        const Gate& gate = program.gate(g);
        if (busy[static_cast<std::size_t>(gate.qubits[0])] || busy[static_cast<std::size_t>(gate.qubits[1])])
            return fallback("first layer is not a matching of program qubits");
        busy[static_cast<std::size_t>(gate.qubits[0])] = busy[static_cast<std::size_t>(gate.qubits[1])] = 1;
        layer.push_back(g);
    }
    if (static_cast<int>(layer.size()) != Q / 2) return fallback("first layer is not a maximal matching");

    // Work in line positions; position i holds vertex line_order()[i].
    const std::vector<int>& order = graph.line_order();
    std::vector<int> pos(static_cast<std::size_t>(Q), -1);
    std::vector<char> taken(static_cast<std::size_t>(P), 0);
    std::set<std::vector<int>> unique;

    auto record = [&] {
        std::vector<int> mirrored(pos.size());
        for (std::size_t q = 0; q < pos.size(); ++q) mirrored[q] = P - 1 - pos[q];
        unique.insert(std::min(pos, mirrored));
    };
    std::vector<int> leftover;
    for (int q = 0; q < Q; ++q)
        if (!busy[static_cast<std::size_t>(q)]) leftover.push_back(q);

    auto place_leftover = [&](auto&& self, std::size_t i) -> void {
        if (i == leftover.size()) {
            record();
            return;
        }
        for (int p = 0; p < P; ++p) {
            if (taken[static_cast<std::size_t>(p)]) continue;
            taken[static_cast<std::size_t>(p)] = 1;
            pos[static_cast<std::size_t>(leftover[i])] = p;
            self(self, i + 1);
            taken[static_cast<std::size_t>(p)] = 0;
        }
        pos[static_cast<std::size_t>(leftover[i])] = -1;
    };
    auto place_gate = [&](auto&& self, std::size_t i) -> void {
        if (i == layer.size()) {
            place_leftover(place_leftover, 0);
            return;
        }
        const Gate& gate = program.gate(layer[i]);
        for (int k = 0; k + 1 < P; ++k) {
            if (taken[static_cast<std::size_t>(k)] || taken[static_cast<std::size_t>(k + 1)]) continue;
            taken[static_cast<std::size_t>(k)] = taken[static_cast<std::size_t>(k + 1)] = 1;
            for (int flip = 0; flip < 2; ++flip) {
                pos[static_cast<std::size_t>(gate.qubits[0])] = k + flip;
                pos[static_cast<std::size_t>(gate.qubits[1])] = k + 1 - flip;
                self(self, i + 1);
            }
            taken[static_cast<std::size_t>(k)] = taken[static_cast<std::size_t>(k + 1)] = 0;
        }
    };
    place_gate(place_gate, 0);

    std::vector<std::vector<int>> out;
    out.reserve(unique.size());
    for (const auto& positions : unique) {
        std::vector<int> m(positions.size());
        for (std::size_t q = 0; q < positions.size(); ++q) m[q] = order[static_cast<std::size_t>(positions[q])];
        out.push_back(std::move(m));
    }
    return out;
}

SolveResult portfolio_solve(const Program& program, const CouplingGraph& graph, const SolveOptions& options,
                            const Backend& backend, const std::vector<std::vector<int>>& candidates,
                            Objective objective, int workers) {
    if (candidates.empty()) throw std::invalid_argument("portfolio needs at least one candidate mapping");
    const std::size_t n = candidates.size();
    std::vector<std::optional<SolveResult>> results(n);
    std::vector<std::string> failures(n);
    std::vector<char> timed_out(n, 0);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            SolveOptions local = options;
            local.initial_mapping = candidates[i];
            try {
                results[i] = solve(program, graph, local, backend, objective);
            } catch (const SolverTimeout& e) {
                timed_out[i] = 1;
                failures[i] = e.what();
            } catch (const NoSolution& e) {
                failures[i] = e.what();
            }
        }
    };
    const int pool = std::clamp(workers, 1, static_cast<int>(n));
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_lock;
    for (int w = 0; w < pool; ++w)
        threads.emplace_back([&] {
            try {
                work();
            } catch (...) {
                std::lock_guard lock(error_lock);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);

    std::optional<SolveResult> best;
    int calls = 0;
    double time = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!results[i]) continue;
        calls += results[i]->solver_calls;
        time += results[i]->solver_time;
        if (!best || better(*results[i], *best, objective)) best = results[i];
    }
    if (!best) {
        std::string report = "every portfolio instance failed:";
        for (std::size_t i = 0; i < n; ++i) report += "\n  candidate " + std::to_string(i) + ": " + failures[i];
        if (std::any_of(timed_out.begin(), timed_out.end(), [](char c) { return c != 0; })) throw SolverTimeout(report, 1);
        throw NoSolution(report);
    }
    best->solver_calls = calls;
    best->solver_time = time;
    return *best;
}

}  // namespace qlayout
