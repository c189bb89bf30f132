#include "qlayout/backend.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace qlayout {

std::string to_string(SatStatus status) {
    switch (status) {
        case SatStatus::sat: return "sat";
        case SatStatus::unsat: return "unsat";
        case SatStatus::timeout: return "timeout";
    }
    return "?";
}

Backend Backend::external(std::string command, double timeout_seconds) {
    Backend b;
    b.kind = BackendKind::external;
    b.command = command.empty() ? default_solver_command() : std::move(command);
    b.timeout_seconds = timeout_seconds;
    return b;
}

Backend Backend::internal(SearchLimits limits) {
    Backend b;
    b.kind = BackendKind::internal;
    b.limits = limits;
    return b;
}

Backend Backend::from_spec(const std::string& spec, double timeout_seconds) {
    if (spec == "internal") {
        Backend b = internal();
        b.timeout_seconds = timeout_seconds;
        return b;
    }
    if (spec.empty() || spec == "external") return external({}, timeout_seconds);
    if (spec == "z3") return external("z3 -in", timeout_seconds);
    return external(spec, timeout_seconds);
}

std::string default_solver_command() {
    const char* env = std::getenv("QLAYOUT_SMT_SOLVER");
    if (env && *env) return env;
    return "z3 -in";
}

ProcessResult run_process(const std::string& command, const std::string& input, double timeout_seconds) {
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { std::signal(SIGPIPE, SIG_IGN); });

    int to_child[2], from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) throw SolverError(std::string("pipe: ") + std::strerror(errno));
    if (pipe2(from_child, O_CLOEXEC) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        throw SolverError(std::string("pipe: ") + std::strerror(errno));
    }

    const pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) close(fd);
        throw SolverError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        setpgid(0, 0);
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);
    close(to_child[0]);
    close(from_child[1]);
    int in_fd = to_child[1];
    const int out_fd = from_child[0];
    fcntl(in_fd, F_SETFL, fcntl(in_fd, F_GETFL) | O_NONBLOCK);

    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration<double>(timeout_seconds);
    ProcessResult result;
    std::size_t written = 0;
    char buffer[65536];
    bool out_open = true;

    while (out_open) {
        int wait_ms = -1;
        if (timeout_seconds > 0) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
            if (left <= 0) {
                result.timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(std::min<long long>(left, 1000));
        }
        pollfd fds[2];
        nfds_t n = 0;
        fds[n++] = {out_fd, POLLIN, 0};
        if (in_fd >= 0) fds[n++] = {in_fd, POLLOUT, 0};
        const int ready = poll(fds, n, wait_ms);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (in_fd >= 0 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t w = write(in_fd, input.data() + written, input.size() - written);
            if (w > 0) written += static_cast<std::size_t>(w);
            if (w < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
            if (written >= input.size()) {
                close(in_fd);
                in_fd = -1;
            }
        }
        if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
            const ssize_t r = read(out_fd, buffer, sizeof buffer);
            if (r > 0)
                result.output.append(buffer, static_cast<std::size_t>(r));
            else if (r == 0 || (errno != EAGAIN && errno != EINTR))
                out_open = false;
        }
    }

    if (in_fd >= 0) close(in_fd);
    close(out_fd);
    if (result.timed_out) kill(-pid, SIGKILL);
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

namespace {

struct SExpr {
    std::string atom;
    std::vector<SExpr> list;
    bool is_atom = true;
};

class SExprReader {
public:
    explicit SExprReader(const std::string& text) : text_(text) {}

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    SExpr read() {
        skip();
        if (pos_ >= text_.size()) throw SolverError("solver output ended unexpectedly");
        SExpr e;
        if (text_[pos_] == '(') {
            ++pos_;
            e.is_atom = false;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) throw SolverError("unbalanced parentheses in solver output");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return e;
                }
                e.list.push_back(read());
            }
        }
        if (text_[pos_] == ')') throw SolverError("unexpected ')' in solver output");
        if (text_[pos_] == '"') {
            const std::size_t start = pos_++;
            while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
            ++pos_;
            e.atom = text_.substr(start, pos_ - start);
            return e;
        }
        if (text_[pos_] == '|') {
            const std::size_t start = ++pos_;
            while (pos_ < text_.size() && text_[pos_] != '|') ++pos_;
            e.atom = text_.substr(start, pos_ - start);
            ++pos_;
            return e;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')')
            ++pos_;
        e.atom = text_.substr(start, pos_ - start);
        return e;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

std::int64_t value_of(const SExpr& e) {
    if (e.is_atom) {
        if (e.atom == "true") return 1;
        if (e.atom == "false") return 0;
        try {
            std::size_t used = 0;
            const long long v = std::stoll(e.atom, &used);
            if (used == e.atom.size()) return v;
        } catch (const std::exception&) {
        }
        throw SolverError("unsupported model value '" + e.atom + "'");
    }
    if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "-") return -value_of(e.list[1]);
    throw SolverError("unsupported model value expression");
}

}  // namespace

Assignment parse_model(const std::string& text, const VarTable& vars) {
    SExprReader reader(text);
    SExpr root = reader.read();
    // Some solvers prefix the definitions with the keyword `model`.
    std::vector<SExpr>& defs = root.list;
    if (root.is_atom) throw SolverError("expected a model, got '" + root.atom + "'");
    std::vector<char> seen(static_cast<std::size_t>(vars.size()), 0);
    Assignment model(static_cast<std::size_t>(vars.size()), 0);
    for (const SExpr& def : defs) {
        if (def.is_atom) continue;
        if (def.list.size() != 5 || !def.list[0].is_atom || def.list[0].atom != "define-fun") continue;
        auto index = vars.find(def.list[1].atom);
        if (!index) continue;
        model[static_cast<std::size_t>(*index)] = value_of(def.list[4]);
        seen[static_cast<std::size_t>(*index)] = 1;
    }
    for (int i = 0; i < vars.size(); ++i)
        if (!seen[static_cast<std::size_t>(i)]) throw SolverError("model is missing variable " + vars.info(i).name);
    return model;
}

namespace {

SolveOutcome check_external(const ConstraintSystem& cs, const Backend& backend) {
    const std::string script = emit_smtlib(cs);
    ProcessResult run = run_process(backend.command, script, backend.timeout_seconds);
    SolveOutcome out;
    if (run.timed_out) return out;
    if (run.exit_status == 127) throw SolverError("could not launch solver command '" + backend.command + "'");

    SExprReader reader(run.output);
    if (reader.at_end()) throw SolverError("solver produced no output (exit status " + std::to_string(run.exit_status) + ")");
    SExpr head = reader.read();
    if (!head.is_atom) {
        if (!head.list.empty() && head.list[0].is_atom && head.list[0].atom == "error")
            throw SolverError("solver error: " + (head.list.size() > 1 ? head.list[1].atom : std::string{}));
        throw SolverError("unexpected solver output");
    }
    if (head.atom == "unsat") {
        out.status = SatStatus::unsat;
        return out;
    }
    if (head.atom == "unknown" || head.atom == "timeout") return out;
    if (head.atom != "sat") throw SolverError("unexpected solver answer '" + head.atom + "'");

    const std::size_t start = run.output.find('(');
    if (start == std::string::npos) throw SolverError("solver answered sat without a model");
    out.model = parse_model(run.output.substr(start), cs.vars());
    out.status = SatStatus::sat;
    return out;
}

SolveOutcome check_internal(const ConstraintSystem& cs, const Backend& backend) {
    const EncodingOptions& o = cs.options();
    SearchConstraints constraints;
    constraints.absorption = o.absorption_enabled;
    constraints.alternating = o.alternating;
    constraints.initial_mapping = o.initial_mapping;
    constraints.swap_budget = o.swap_budget;
    constraints.absorbed_budget = o.absorbed_budget;
    std::vector<AlternatingPhase> phases{o.alternating};
    if (o.alternating == AlternatingPhase::either) phases = {AlternatingPhase::phase0, AlternatingPhase::phase1};
    std::optional<ExhaustiveResult> found;
    for (AlternatingPhase phase : phases) {
        constraints.alternating = phase;
        auto r = ExhaustiveSearch(cs.program(), cs.graph(), constraints, backend.limits).min_swaps(cs.vars().horizon());
        if (r && (!found || r->swaps < found->swaps)) found = std::move(r);
    }
    SolveOutcome out;
    if (!found) {
        out.status = SatStatus::unsat;
        return out;
    }
    out.status = SatStatus::sat;
    out.model = model_from_solution(found->witness, cs);
    return out;
}

}  // namespace

SolveOutcome check(const ConstraintSystem& cs, const Backend& backend) {
    const auto start = std::chrono::steady_clock::now();
    SolveOutcome out = backend.kind == BackendKind::internal ? check_internal(cs, backend) : check_external(cs, backend);
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.model) {
        auto bad = cs.violated_clauses(*out.model);
        if (!bad.empty())
            throw SolverError("solver model violates " + std::to_string(bad.size()) + " clause(s), first is #" +
                              std::to_string(bad.front()));
    }
    return out;
}

}  // namespace qlayout
