#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlayout/arch.hpp"
#include "qlayout/backend.hpp"
#include "qlayout/program.hpp"

namespace qlt {

inline std::string fixture(const std::string& name) { return std::string(QLAYOUT_FIXTURES) + "/" + name; }

/// True when the default external solver command answers a trivial query.
inline bool have_smt_solver() {
    static const bool ok = [] {
        try {
            auto r = qlayout::run_process(qlayout::default_solver_command(), "(check-sat)\n", 20.0);
            return !r.timed_out && r.output.find("sat") != std::string::npos;
        } catch (...) {
            return false;
        }
    }();
    return ok;
}

inline qlayout::Program make_program(int qubits, const std::vector<std::pair<int, int>>& pairs, bool commuting) {
    std::vector<qlayout::Gate> gates;
    std::vector<int> group;
    for (auto [a, b] : pairs) {
        qlayout::Gate g;
        g.id = static_cast<int>(gates.size());
        g.qubits = {a, b};
        group.push_back(g.id);
        gates.push_back(g);
    }
    if (commuting) return qlayout::Program(qubits, std::move(gates), {group});
    return qlayout::Program(qubits, std::move(gates));
}

/// True when no two gates act on the same unordered qubit pair.
inline bool distinct_pairs(const qlayout::Program& p) {
    std::vector<std::pair<int, int>> seen;
    for (const auto& g : p.gates()) {
        std::pair<int, int> key = std::minmax(g.qubits[0], g.qubits[1]);
        for (auto k : seen)
            if (k == key) return false;
        seen.push_back(key);
    }
    return true;
}

inline qlayout::Program triangle() { return make_program(3, {{0, 1}, {1, 2}, {0, 2}}, true); }
inline qlayout::Program one_gate() { return make_program(2, {{0, 1}}, false); }

struct TinyInstance {
    std::string name;
    qlayout::Program program;
    qlayout::CouplingGraph graph;
};

/// Every gate sequence of length 1..3 over the qubit pairs of 2 or 3 qubits,
/// as a fully commuting group and as a plain sequence, on line(2) and line(3).
inline std::vector<TinyInstance> tiny_instances() {
    std::vector<TinyInstance> out;
    for (int q = 2; q <= 3; ++q) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < q; ++a)
            for (int b = a + 1; b < q; ++b) pairs.push_back({a, b});
        std::vector<std::vector<std::pair<int, int>>> seqs;
        std::vector<std::pair<int, int>> cur;
        auto rec = [&](auto&& self) -> void {
            if (!cur.empty()) seqs.push_back(cur);
            if (cur.size() == 3) return;
            for (auto p : pairs) {
                cur.push_back(p);
                self(self);
                cur.pop_back();
            }
        };
        rec(rec);
        for (int n = q; n <= 3; ++n)
            for (const auto& s : seqs)
                for (bool commuting : {false, true}) {
                    if (commuting && s.size() == 1) continue;
                    std::string name = "q" + std::to_string(q) + "-line" + std::to_string(n) + (commuting ? "-comm" : "-seq");
                    for (auto [a, b] : s) name += "-" + std::to_string(a) + std::to_string(b);
                    out.push_back({name, make_program(q, s, commuting), qlayout::build_line(n)});
                }
    }
    return out;
}

}  // namespace qlt
