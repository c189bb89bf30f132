#include "qlayout/program.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qlayout {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("program: " + what);
}

}  // namespace

Program::Program(int qubit_count, std::vector<Gate> gates,
                 std::vector<std::vector<int>> commuting_groups)
    : qubit_count_(qubit_count), gates_(std::move(gates)), groups_(std::move(commuting_groups)) {
    if (qubit_count_ < 2) fail("at least 2 qubits required, got " + std::to_string(qubit_count_));
    if (gates_.empty()) fail("program has no two-qubit gates");

    for (std::size_t i = 0; i < gates_.size(); ++i) {
        Gate& g = gates_[i];
        if (g.id != static_cast<int>(i))
            fail("gate ids must be dense and in list order; gate at position " + std::to_string(i) +
                 " has id " + std::to_string(g.id));
        for (int q : g.qubits)
            if (q < 0 || q >= qubit_count_)
                fail("gate " + std::to_string(g.id) + " operand q" + std::to_string(q) +
                     " out of range");
        if (g.qubits[0] == g.qubits[1])
            fail("gate " + std::to_string(g.id) + " has duplicate operands");
    }

    if (groups_.empty()) {
        for (const Gate& g : gates_) groups_.push_back({g.id});
    }

    // Concatenated groups must reproduce 0..|G|-1 in order.
    group_of_.assign(gates_.size(), -1);
    int expected = 0;
    for (std::size_t k = 0; k < groups_.size(); ++k) {
        if (groups_[k].empty()) fail("commuting group " + std::to_string(k) + " is empty");
        for (int g : groups_[k]) {
            if (g != expected)
                fail("commuting groups must partition the gate list into contiguous runs; "
                     "expected gate " + std::to_string(expected) + ", found " + std::to_string(g));
            group_of_[static_cast<std::size_t>(g)] = static_cast<int>(k);
            ++expected;
        }
    }
    if (expected != gate_count()) fail("commuting groups do not cover every gate");
}

Program Program::reversed() const {
    const int n = gate_count();
    std::vector<Gate> gates;
    gates.reserve(gates_.size());
    for (int i = n - 1; i >= 0; --i) {
        Gate g = gates_[static_cast<std::size_t>(i)];
        g.id = n - 1 - i;
        gates.push_back(std::move(g));
    }
    std::vector<std::vector<int>> groups;
    for (auto it = groups_.rbegin(); it != groups_.rend(); ++it) {
        std::vector<int> group;
        for (auto jt = it->rbegin(); jt != it->rend(); ++jt) group.push_back(n - 1 - *jt);
        groups.push_back(std::move(group));
    }
    return Program(qubit_count_, std::move(gates), std::move(groups));
}

Program parse_program(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top level must be an object");
    if (!doc.contains("qubits") || !doc["qubits"].is_number_integer())
        fail("missing integer field 'qubits'");
    if (!doc.contains("gates") || !doc["gates"].is_array()) fail("missing array field 'gates'");

    const int qubits = doc["qubits"].get<int>();
    std::vector<Gate> gates;
    int position = 0;
    for (const json& jg : doc["gates"]) {
        if (!jg.is_object()) fail("gate entries must be objects");
        Gate g;
        g.id = jg.value("id", position);
        if (!jg.contains("q") || !jg["q"].is_array())
            fail("gate " + std::to_string(g.id) + " lacks operand array 'q'");
        const json& ops = jg["q"];
        if (ops.size() == 1)
            fail("gate " + std::to_string(g.id) +
                 " is a single-qubit gate; only two-qubit gates are mapped");
        if (ops.size() != 2) fail("gate " + std::to_string(g.id) + " must have exactly 2 operands");
        for (std::size_t k = 0; k < 2; ++k) {
            if (!ops[k].is_number_integer())
                fail("gate " + std::to_string(g.id) + " operands must be integers");
            g.qubits[k] = ops[k].get<int>();
        }
        if (jg.contains("label")) g.label = jg["label"].get<std::string>();
        if (jg.contains("params")) g.params = jg["params"].get<std::vector<double>>();
        gates.push_back(std::move(g));
        ++position;
    }

    std::vector<std::vector<int>> groups;
    if (doc.contains("commuting_groups")) {
        if (!doc["commuting_groups"].is_array()) fail("'commuting_groups' must be an array");
        for (const json& jgroup : doc["commuting_groups"])
            groups.push_back(jgroup.get<std::vector<int>>());
    }
    return Program(qubits, std::move(gates), std::move(groups));
}

Program load_program(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("program: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_program(buf.str());
}

std::string program_to_json(const Program& program) {
    json doc;
    doc["qubits"] = program.qubit_count();
    json gates = json::array();
    for (const Gate& g : program.gates()) {
        json jg = {{"id", g.id}, {"q", {g.qubits[0], g.qubits[1]}}};
        if (!g.label.empty()) jg["label"] = g.label;
        if (!g.params.empty()) jg["params"] = g.params;
        gates.push_back(std::move(jg));
    }
    doc["gates"] = std::move(gates);
    doc["commuting_groups"] = program.commuting_groups();
    return doc.dump(2);
}

DependencyGraph dependencies(const Program& program) {
    // Per qubit, remember the gates of the group that last touched it and of
    // the group before that.
    struct QubitHistory {
        int group = -1;
        std::vector<int> current;
        std::vector<int> previous;
    };
    std::vector<QubitHistory> history(static_cast<std::size_t>(program.qubit_count()));
    std::set<std::pair<int, int>> precedence;
    std::set<std::pair<int, int>> distinct;

    for (const Gate& g : program.gates()) {
        const int group = program.group_of(g.id);
        for (int q : g.qubits) {
            QubitHistory& h = history[static_cast<std::size_t>(q)];
            if (h.group != group) {
                h.previous = std::move(h.current);
                h.current.clear();
                h.group = group;
            }
            for (int prior : h.previous) precedence.emplace(prior, g.id);
            for (int peer : h.current) distinct.emplace(std::min(peer, g.id), std::max(peer, g.id));
            h.current.push_back(g.id);
        }
    }

    DependencyGraph deps;
    deps.precedence.assign(precedence.begin(), precedence.end());
    for (const auto& pair : distinct)
        if (!precedence.contains(pair)) deps.distinct_time.push_back(pair);
    return deps;
}

int depth_lower_bound(const DependencyGraph& deps, const Program& program) {
    // Precedence pairs always point forward in program order, so list order is
    // a topological order.
    std::vector<int> chain(static_cast<std::size_t>(program.gate_count()), 1);
    std::vector<std::vector<int>> preds(chain.size());
    for (const auto& [from, to] : deps.precedence) preds[static_cast<std::size_t>(to)].push_back(from);
    int longest = 1;
    for (std::size_t g = 0; g < chain.size(); ++g) {
        for (int p : preds[g]) chain[g] = std::max(chain[g], chain[static_cast<std::size_t>(p)] + 1);
        longest = std::max(longest, chain[g]);
    }

    std::vector<int> per_qubit(static_cast<std::size_t>(program.qubit_count()), 0);
    for (const Gate& g : program.gates())
        for (int q : g.qubits) ++per_qubit[static_cast<std::size_t>(q)];
    const int busiest = *std::max_element(per_qubit.begin(), per_qubit.end());
    return std::max(longest, busiest);
}

}  // namespace qlayout
