#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlayout/bench.hpp"
#include "qlayout/solve.hpp"

namespace qlayout {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    std::string program_path;
    std::string arch_spec;
    std::string absorb = "on";
    std::string alternating = "off";
    bool best_effort = false;
    std::string initial_mapping;
    std::string solver;
    double timeout = 0;
    std::uint64_t seed = 0;
    double t0 = 50.0;
    double fu = 0.99;
    int jobs = 1;
};

void add_instance_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--program", c.program_path, "program JSON file")->required();
    cmd->add_option("--arch", c.arch_spec, "line:N, grid:RxC, sycamore:RxC, file:PATH or a .json path")->required();
}

void add_solver_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--absorb", c.absorb, "SWAP absorption")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--alternating", c.alternating, "alternating matchings: off, auto, 0 or 1");
    cmd->add_flag("--reduce-best-effort", c.best_effort, "ignore reductions that do not apply to the architecture");
    cmd->add_option("--initial-mapping", c.initial_mapping,
                    "JSON file with a fixed initial mapping, or 'portfolio' to try enumerated candidates");
    cmd->add_option("--solver", c.solver, "'internal' or an SMT-LIB2 solver command (default $QLAYOUT_SMT_SOLVER or z3)");
    cmd->add_option("--timeout", c.timeout, "per-check timeout in seconds (0 = none)");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--T0", c.t0, "coherence time in gate durations");
    cmd->add_option("--fU", c.fu, "two-qubit gate fidelity");
    cmd->add_option("--jobs", c.jobs, "worker threads for the initial-mapping portfolio")->check(CLI::PositiveNumber);
}

CouplingGraph load_graph(const std::string& spec) {
    if (spec.size() > 5 && spec.ends_with(".json")) return load_arch(spec);
    return arch_from_spec(spec);
}

std::vector<int> load_mapping(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open initial mapping file " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("initial mapping file " + path + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("mapping")) doc = doc["mapping"];
    if (!doc.is_array()) throw UsageError("initial mapping must be an array of physical qubits");
    return doc.get<std::vector<int>>();
}

SolveOptions solve_options(const Common& c, const CouplingGraph& graph) {
    SolveOptions o;
    o.absorption = c.absorb == "on";
    try {
        o.alternating = parse_alternating(c.alternating);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.alternating != AlternatingMode::off && graph.kind() != ArchKind::line && !c.best_effort)
        throw UsageError("--alternating needs a line architecture (add --reduce-best-effort to ignore it)");
    o.reduce_best_effort = c.best_effort;
    if (!c.initial_mapping.empty() && c.initial_mapping != "portfolio") o.initial_mapping = load_mapping(c.initial_mapping);
    o.hardware = {c.t0, c.fu};
    return o;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

std::string summary(const Metrics& m) {
    std::ostringstream s;
    s << "depth=" << m.depth << " swaps=" << m.swap_count << " absorbed=" << m.absorbed_count;
    if (m.fidelity) s << " fidelity=" << std::fixed << std::setprecision(6) << *m.fidelity;
    return s.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal qubit layout synthesis with SWAP absorption"};
    app.require_subcommand(1);

    Common c;
    std::string objective = "depth";
    std::string swap_search = "linear";
    std::string out_path;
    std::string cert_out;
    std::string solution_path;
    int horizon_slack = 0;
    std::optional<int> horizon;
    std::optional<int> budget;

    auto* solve_cmd = app.add_subcommand("solve", "find an optimal mapping");
    add_instance_options(solve_cmd, c);
    add_solver_options(solve_cmd, c);
    solve_cmd->add_option("--objective", objective, "depth, swap or fidelity")
        ->check(CLI::IsMember({"depth", "swap", "swaps", "fidelity"}));
    solve_cmd->add_option("--horizon-slack", horizon_slack, "extra steps beyond the optimal depth for SWAP minimization")
        ->check(CLI::NonNegativeNumber);
    solve_cmd->add_option("--horizon", horizon, "fixed horizon for SWAP minimization")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--swap-search", swap_search, "linear or binary")->check(CLI::IsMember({"linear", "binary"}));
    solve_cmd->add_option("--out", out_path, "solution JSON output");

    auto* certify_cmd = app.add_subcommand("certify", "solve with reductions, then prove the depth optimal");
    add_instance_options(certify_cmd, c);
    add_solver_options(certify_cmd, c);
    certify_cmd->add_option("--out", out_path, "solution JSON output");
    certify_cmd->add_option("--certificate", cert_out, "certificate JSON output");

    auto* verify_cmd = app.add_subcommand("verify", "check a solution file");
    add_instance_options(verify_cmd, c);
    verify_cmd->add_option("--solution", solution_path, "solution JSON file")->required();
    verify_cmd->add_option("--T0", c.t0, "coherence time in gate durations");
    verify_cmd->add_option("--fU", c.fu, "two-qubit gate fidelity");

    auto* emit_cmd = app.add_subcommand("emit-smt", "write the SMT-LIB2 instance for one horizon");
    add_instance_options(emit_cmd, c);
    emit_cmd->add_option("--horizon", horizon, "number of time steps")->required()->check(CLI::PositiveNumber);
    emit_cmd->add_option("--absorb", c.absorb, "SWAP absorption")->check(CLI::IsMember({"on", "off"}));
    emit_cmd->add_option("--alternating", c.alternating, "off, 0, 1 or auto (either phase)");
    emit_cmd->add_option("--initial-mapping", c.initial_mapping, "JSON file with a fixed initial mapping");
    emit_cmd->add_option("--budget", budget, "explicit SWAP budget")->check(CLI::NonNegativeNumber);
    emit_cmd->add_option("--out", out_path, "output file (default standard output)");

    std::string family = "qaoa-3reg";
    std::vector<int> sizes;
    std::string modes = "exact,absorb-off";
    int iterations = 1;
    int layers = 1;
    std::string bench_objective = "swap";
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark family");
    bench_cmd->add_option("--family", family, "qaoa-3reg, all-to-all or qv-like")
        ->check(CLI::IsMember({"qaoa-3reg", "all-to-all", "qv-like"}));
    bench_cmd->add_option("--n", sizes, "instance sizes")->required()->delimiter(',');
    bench_cmd->add_option("--modes", modes, "comma list of exact, alternating, initial, absorb-off");
    bench_cmd->add_option("--iterations", iterations, "QAOA iterations for the fidelity projection")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--layers", layers, "qv-like layers")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--objective", bench_objective, "depth, swap or fidelity")
        ->check(CLI::IsMember({"depth", "swap", "swaps", "fidelity"}));
    bench_cmd->add_option("--out", out_path, "report path prefix; writes PREFIX.csv and PREFIX.json");
    bench_cmd->add_option("--solver", c.solver, "'internal' or an SMT-LIB2 solver command");
    bench_cmd->add_option("--timeout", c.timeout, "per-check timeout in seconds (0 = none)");
    bench_cmd->add_option("--seed", c.seed, "generator seed");
    bench_cmd->add_option("--T0", c.t0, "coherence time in gate durations");
    bench_cmd->add_option("--fU", c.fu, "two-qubit gate fidelity");
    bench_cmd->add_option("--jobs", c.jobs, "portfolio worker threads")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (bench_cmd->parsed()) {
            std::vector<BenchMode> mode_list;
            for (const auto& m : split(modes, ',')) mode_list.push_back(parse_bench_mode(m));
            std::vector<BenchInstance> instances;
            for (int n : sizes) instances.push_back(make_instance(family, n, c.seed, layers));
            SuiteOptions so;
            so.objective = parse_objective(bench_objective);
            so.iterations = iterations;
            so.hardware = {c.t0, c.fu};
            so.jobs = c.jobs;
            const BenchReport report = run_suite(instances, mode_list, so, Backend::from_spec(c.solver, c.timeout));
            const std::string csv = report_to_csv(report);
            if (!out_path.empty()) {
                write_file(out_path + ".csv", csv);
                write_file(out_path + ".json", report_to_json(report));
            }
            out << csv;
            const bool timed_out = std::any_of(report.rows.begin(), report.rows.end(),
                                               [](const BenchRow& r) { return r.status == "timeout"; });
            return timed_out ? exit_timeout : exit_ok;
        }

        const Program program = load_program(c.program_path);
        const CouplingGraph graph = load_graph(c.arch_spec);

        if (verify_cmd->parsed()) {
            const MappingSolution s = load_solution(solution_path);
            const VerifyReport report = verify(program, graph, s, {c.t0, c.fu});
            if (!report.ok()) {
                out << "INVALID: " << report.violations.size() << " violation(s)\n";
                for (const Violation& v : report.violations) out << "  " << v.family << ": " << v.detail << "\n";
                return exit_verify_failed;
            }
            out << "OK " << summary(*report.metrics) << "\n";
            return exit_ok;
        }

        if (emit_cmd->parsed()) {
            EncodingOptions eo;
            eo.horizon = *horizon;
            eo.absorption_enabled = c.absorb == "on";
            const AlternatingMode alt = parse_alternating(c.alternating);
            eo.alternating = alt == AlternatingMode::phase0   ? AlternatingPhase::phase0
                             : alt == AlternatingMode::phase1 ? AlternatingPhase::phase1
                             : alt == AlternatingMode::both   ? AlternatingPhase::either
                                                              : AlternatingPhase::off;
            if (!c.initial_mapping.empty()) eo.initial_mapping = load_mapping(c.initial_mapping);
            eo.swap_budget = budget;
            const std::string text = emit_smtlib(build(program, graph, eo));
            if (out_path.empty())
                out << text;
            else
                write_file(out_path, text);
            return exit_ok;
        }

        SolveOptions so = solve_options(c, graph);
        const Backend backend = Backend::from_spec(c.solver, c.timeout);

        if (certify_cmd->parsed()) {
            const CertifyResult cr = certify_depth(program, graph, so, backend);
            if (!out_path.empty()) write_file(out_path, solution_to_json(cr.result.solution, cr.result.metrics));
            if (!cert_out.empty()) write_file(cert_out, certificate_to_json(cr));
            out << summary(cr.result.metrics) << "\n";
            if (cr.certificate)
                out << "certified depth floor " << cr.certificate->certified_floor << " (horizon "
                    << cr.certificate->horizon_checked << " unsat)\n";
            else
                out << "no certificate: exact check timed out\n";
            if (!cr.reduction_optimal)
                out << "reduction lost optimality: reduced depth " << cr.reduced_depth << ", exact depth "
                    << cr.result.metrics.depth << "\n";
            return cr.certificate ? exit_ok : exit_timeout;
        }

        so.horizon_slack = horizon_slack;
        so.horizon = horizon;
        so.swap_search = parse_swap_search(swap_search);
        const Objective obj = parse_objective(objective);
        SolveResult r;
        if (c.initial_mapping == "portfolio") {
            std::string warning;
            const auto candidates = initial_mapping_candidates(program, graph, &warning);
            if (!warning.empty()) err << "warning: " << warning << "; using the identity mapping\n";
            r = portfolio_solve(program, graph, so, backend, candidates, obj, c.jobs);
        } else {
            r = solve(program, graph, so, backend, obj);
        }
        if (!out_path.empty()) write_file(out_path, solution_to_json(r.solution, r.metrics));
        out << summary(r.metrics) << "\n";
        return exit_ok;
    } catch (const SolverTimeout& e) {
        err << "timeout: " << e.what() << " (certified depth floor " << e.certified_floor << ")\n";
        return exit_timeout;
    } catch (const NoSolution& e) {
        err << "no solution: " << e.what() << "\n";
        return exit_verify_failed;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_verify_failed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_verify_failed;
    }
}

}  // namespace qlayout
